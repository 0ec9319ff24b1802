//! Fidelity engine and mixed-state symmetry diagnostics.

pub mod coherence;
pub mod correlators;
pub mod entropy;
pub mod extension;
pub mod fidelity;
pub mod purification;
pub mod report;

pub use coherence::{charge_coherence_scan, charged_push};
pub use correlators::{clustering_scan, renyi2_correlator};
pub use entropy::{mutual_information, relative_entropy, von_neumann_entropy, MutualInformation};
pub use extension::{extension_symmetry_defect, extension_symmetry_defect_pure, ExtensionDefect};
pub use fidelity::{fidelity, FidelityValue};
pub use purification::{canonical_purification, purification_clustering_scan};
pub use report::{classify, DiagnosticReport, Thresholds, Verdict, WindowSchedule};
