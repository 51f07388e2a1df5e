//! Staged construction of a planted code and its derived artifacts, with a
//! content-hashed manifest.

mod config;
mod report;
mod run;

pub use config::{coprimality_precheck, Budgets, OrderedF64, RunConfig, Stage};
pub use report::{load_manifest, report, report_from_dir};
pub use run::{
    run_pipeline, Artifact, CodeSummary, CspSummary, DimensionSummary, ExpanderSummary, InnerSummary, Manifest, SsexpSummary,
    VerifySummary, MANIFEST_FILE,
};
