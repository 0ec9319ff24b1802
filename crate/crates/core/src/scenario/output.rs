//! Deterministic serialization: compact JSON with every float written to 17
//! significant digits, and flat CSV rows.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::Result;
use crate::scenario::run::{ReportBundle, SweepTable};

/// Writes `f64` as `d.dddddddddddddddde±x`; NaN and infinities as `null`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SigFigFormatter;

impl Formatter for SigFigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{}", sig17(value))
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// 17 significant digits in scientific notation.
pub fn sig17(value: f64) -> String {
    format!("{value:.16e}")
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// One line per reported value.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CsvRow {
    pub state: String,
    pub diagnostic: String,
    pub probe: String,
    pub axis: String,
    pub window: String,
    pub value: String,
    pub verdict: String,
}

impl ReportBundle {
    pub fn csv_rows(&self) -> Vec<CsvRow> {
        let mut rows = Vec::new();
        for e in &self.reports {
            let r = &e.report;
            for (w, v) in r.windows.iter().zip(&r.values) {
                rows.push(CsvRow {
                    state: e.state.clone(),
                    diagnostic: r.diagnostic.clone(),
                    probe: r.probe.clone(),
                    axis: r.axis.clone(),
                    window: w.to_string(),
                    value: sig17(*v),
                    verdict: r.verdict.to_string(),
                });
            }
        }
        for s in &self.scalars {
            rows.push(CsvRow {
                state: s.state.clone(),
                diagnostic: s.name.clone(),
                probe: String::new(),
                axis: String::new(),
                window: String::new(),
                value: sig17(s.value),
                verdict: String::new(),
            });
        }
        for i in &self.irreversibility {
            let r = &i.report;
            for (name, v) in
                [("joint_strong_defect", r.joint_strong_defect), ("extension_full_chain", r.extension_full_chain)]
            {
                rows.push(CsvRow {
                    state: i.state.clone(),
                    diagnostic: name.into(),
                    probe: i.probe.clone(),
                    axis: String::new(),
                    window: String::new(),
                    value: sig17(v),
                    verdict: String::new(),
                });
            }
            for rep in [&r.coherence, &r.extension] {
                for (w, v) in rep.windows.iter().zip(&rep.values) {
                    rows.push(CsvRow {
                        state: i.state.clone(),
                        diagnostic: format!("irreversibility/{}", rep.diagnostic),
                        probe: i.probe.clone(),
                        axis: rep.axis.clone(),
                        window: w.to_string(),
                        value: sig17(*v),
                        verdict: rep.verdict.to_string(),
                    });
                }
            }
        }
        rows
    }
}

/// Sweep rows with the value at 17 significant digits.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SweepCsvRow {
    pub size: usize,
    pub state: String,
    pub diagnostic: String,
    pub probe: String,
    pub value: String,
}

impl SweepTable {
    pub fn csv_rows(&self) -> Vec<SweepCsvRow> {
        self.rows
            .iter()
            .map(|r| SweepCsvRow {
                size: r.size,
                state: r.state.clone(),
                diagnostic: r.diagnostic.clone(),
                probe: r.probe.clone(),
                value: sig17(r.value),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_get_seventeen_digits() {
        let s = to_json_string(&serde_json::json!({"a": 0.1, "b": [1.0, f64::NAN], "c": 3})).unwrap();
        assert_eq!(s, "{\"a\":1.0000000000000001e-1,\"b\":[1.0000000000000000e0,null],\"c\":3}\n");
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }
}
