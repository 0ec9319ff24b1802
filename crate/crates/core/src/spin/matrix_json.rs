//! JSON encoding of complex matrices: row-major arrays of `[re, im]` pairs,
//! either nested by row or flat.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum DenseMatrix {
    Rows(Vec<Vec<[f64; 2]>>),
    Flat(Vec<[f64; 2]>),
}

impl DenseMatrix {
    pub fn from_matrix(m: &CMatrix) -> Self {
        DenseMatrix::Rows(
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect(),
        )
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        match self {
            DenseMatrix::Rows(rows) => {
                let n = rows.len();
                let m = rows.first().map_or(0, |r| r.len());
                if rows.iter().any(|r| r.len() != m) {
                    return Err(Error::Parse("ragged matrix rows".into()));
                }
                Ok(CMatrix::from_fn(n, m, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
            }
            DenseMatrix::Flat(entries) => {
                let n = (entries.len() as f64).sqrt().round() as usize;
                if n * n != entries.len() {
                    return Err(Error::Parse(format!("flat matrix with {} entries is not square", entries.len())));
                }
                Ok(CMatrix::from_fn(n, n, |i, j| C64::new(entries[i * n + j][0], entries[i * n + j][1])))
            }
        }
    }
}

/// A matrix given either by a gate name (`"X"`, `"CZ"`, ...) or densely.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum MatrixSpec {
    Named(String),
    Dense(DenseMatrix),
}

impl MatrixSpec {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        match self {
            MatrixSpec::Named(name) => {
                linalg::named_matrix(name).ok_or_else(|| Error::Parse(format!("unknown matrix name {name:?}")))
            }
            MatrixSpec::Dense(d) => d.to_matrix(),
        }
    }

    pub fn dense(m: &CMatrix) -> Self {
        MatrixSpec::Dense(DenseMatrix::from_matrix(m))
    }
}
