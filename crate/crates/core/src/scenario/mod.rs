//! JSON scenarios: build states, actions and channels, run the selected
//! diagnostics, and serialize the results reproducibly.

pub mod output;
pub mod run;
pub mod schema;

pub use output::{sig17, to_json_string, CsvRow, SweepCsvRow};
pub use run::{
    restriction_distances, run_anomaly, run_scenario, sweep_sizes, AnomalyOutput, ReportBundle, SweepRow, SweepTable,
};
pub use schema::{DiagnosticKind, Scenario, SCHEMA_VERSION};
