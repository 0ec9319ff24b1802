//! `symscope`: run diagnostic scenarios and cohomology/anomaly checks from
//! JSON files.
//!
//! Exit codes: 0 on success, 1 on any error, 2 when `--strict` is set and a
//! verdict came out INCONCLUSIVE.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use symscope_core::cohomology::{is_coboundary, is_cocycle, same_class, CocycleJson};
use symscope_core::scenario::{
    run_anomaly, run_scenario, sweep_sizes, to_json_string, DiagnosticKind, ReportBundle, Scenario,
};

#[derive(Parser, Debug)]
#[command(name = "symscope", version, about = "Mixed-state symmetry diagnostics on finite spin chains")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Scenario file; repeat to run several.
    #[arg(long, global = true)]
    scenario: Vec<PathBuf>,
    /// Directory for JSON and CSV reports; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit with code 2 on any INCONCLUSIVE verdict.
    #[arg(long, global = true)]
    strict: bool,
    /// Scenarios run concurrently.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Overrides each scenario's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the diagnostics selected by each scenario.
    Diagnose,
    /// Cocycle checks on cocycle JSON files.
    Cohomology {
        #[command(subcommand)]
        action: CohomologyCommand,
    },
    /// Anomaly index from a scenario's `anomaly` section.
    Anomaly,
    /// Channel experiments.
    Channel {
        #[command(subcommand)]
        action: ChannelCommand,
    },
    /// Per-size values on a fixed window.
    Sweep {
        /// Comma-separated sizes; defaults to the scenario's `sweep.sizes`.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum CohomologyCommand {
    /// Is the file a (normalized) cocycle, and is its class trivial?
    Check { file: PathBuf },
    /// A cochain `η` with `δη = ω`, if one exists.
    Trivialize { file: PathBuf },
    /// Do two cocycles define the same class?
    Compare { first: PathBuf, second: PathBuf },
}

#[derive(Subcommand, Debug)]
enum ChannelCommand {
    /// Apply the scenario's channel and diagnose the output.
    Run,
}

/// What one scenario produced, before writing.
struct Output {
    stem: String,
    json: String,
    csv: Option<Vec<u8>>,
    inconclusive: bool,
    json_name: Option<String>,
    csv_name: Option<String>,
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner()?)
}

fn stem_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned())
}

fn load(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Scenario::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn output_for(path: &Path, s: &Scenario, json: String, csv: Option<Vec<u8>>, inconclusive: bool) -> Output {
    let outputs = s.outputs.clone().unwrap_or_default();
    Output { stem: stem_of(path), json, csv, inconclusive, json_name: outputs.json, csv_name: outputs.csv }
}

fn bundle_output(path: &Path, s: &Scenario, bundle: &ReportBundle) -> Result<Output> {
    let json = to_json_string(bundle)?;
    let csv = csv_bytes(&bundle.csv_rows())?;
    Ok(output_for(path, s, json, Some(csv), bundle.any_inconclusive()))
}

fn run_one(command: &Command, path: &Path, seed: Option<u64>) -> Result<Output> {
    let mut s = load(path)?;
    match command {
        Command::Diagnose => {
            let bundle = run_scenario(&s, seed)?;
            bundle_output(path, &s, &bundle)
        }
        Command::Channel { action: ChannelCommand::Run } => {
            if s.channel.is_none() {
                bail!("{}: channel run needs a \"channel\" section", path.display());
            }
            if s.diagnostics.is_empty() {
                s.diagnostics = vec![DiagnosticKind::ChargeCoherence, DiagnosticKind::Irreversibility];
            }
            let bundle = run_scenario(&s, seed)?;
            bundle_output(path, &s, &bundle)
        }
        Command::Anomaly => {
            let out = run_anomaly(&s)?;
            Ok(output_for(path, &s, to_json_string(&out)?, None, false))
        }
        Command::Sweep { sizes } => {
            let sizes = if sizes.is_empty() {
                s.sweep.as_ref().map(|w| w.sizes.clone()).unwrap_or_default()
            } else {
                sizes.clone()
            };
            let table = sweep_sizes(&s, &sizes, seed)?;
            let csv = csv_bytes(&table.csv_rows())?;
            Ok(output_for(path, &s, to_json_string(&table)?, Some(csv), false))
        }
        Command::Cohomology { .. } => unreachable!("cohomology does not read scenarios"),
    }
}

fn write_outputs(outputs: &[Output], out: Option<&Path>) -> Result<()> {
    let Some(dir) = out else {
        for o in outputs {
            print!("{}", o.json);
        }
        return Ok(());
    };
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for o in outputs {
        let json_path = dir.join(o.json_name.clone().unwrap_or_else(|| format!("{}.json", o.stem)));
        fs::write(&json_path, &o.json).with_context(|| format!("writing {}", json_path.display()))?;
        if let Some(csv) = &o.csv {
            let csv_path = dir.join(o.csv_name.clone().unwrap_or_else(|| format!("{}.csv", o.stem)));
            fs::write(&csv_path, csv).with_context(|| format!("writing {}", csv_path.display()))?;
        }
        log::info!("wrote {}", json_path.display());
    }
    Ok(())
}

fn cohomology(action: &CohomologyCommand) -> Result<String> {
    let read = |p: &PathBuf| -> Result<_> {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        CocycleJson::parse(&text).with_context(|| format!("in {}", p.display()))
    };
    let value = match action {
        CohomologyCommand::Check { file } => {
            let c = read(file)?;
            let cocycle = is_cocycle(&c);
            let trivial = if cocycle { Some(is_coboundary(&c)?.is_some()) } else { None };
            serde_json::json!({
                "degree": c.degree(),
                "is_cocycle": cocycle,
                "is_normalized": c.is_normalized(),
                "class_trivial": trivial,
            })
        }
        CohomologyCommand::Trivialize { file } => {
            let c = read(file)?;
            let witness = is_coboundary(&c)?;
            serde_json::json!({
                "class_trivial": witness.is_some(),
                "witness": witness.as_ref().map(CocycleJson::from_cochain),
            })
        }
        CohomologyCommand::Compare { first, second } => {
            let (a, b) = (read(first)?, read(second)?);
            serde_json::json!({ "same_class": same_class(&a, &b)? })
        }
    };
    Ok(to_json_string(&value)?)
}

fn run(cli: &Cli) -> Result<bool> {
    if let Command::Cohomology { action } = &cli.command {
        let json = cohomology(action)?;
        match &cli.common.out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                fs::write(dir.join("cohomology.json"), json)?;
            }
            None => print!("{json}"),
        }
        return Ok(false);
    }
    if cli.common.scenario.is_empty() {
        bail!("--scenario is required");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.common.jobs.max(1)).build()?;
    let results: Vec<Result<Output>> =
        pool.install(|| cli.common.scenario.par_iter().map(|p| run_one(&cli.command, p, cli.common.seed)).collect());
    let outputs = results.into_iter().collect::<Result<Vec<_>>>()?;
    write_outputs(&outputs, cli.common.out.as_deref())?;
    Ok(outputs.iter().any(|o| o.inconclusive))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(inconclusive) if inconclusive && cli.common.strict => {
            eprintln!("symscope: INCONCLUSIVE verdict under --strict");
            ExitCode::from(2)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("symscope: {e:#}");
            ExitCode::from(1)
        }
    }
}
