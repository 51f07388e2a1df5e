//! Square Cayley complexes and the quantum Tanner codes built on them.

mod build;
mod complex;
mod css;
mod distance;
mod ssexp;

pub use build::build_code;
pub use complex::{build_complex, Corner, GridConvention, SquareCayleyComplex};
pub use css::{code_dimension, verify_planted, CodeProvenance, CssCode, DimensionReport, PlantedReport};
pub use distance::{estimate_distance, DistanceEstimate};
pub use ssexp::{estimate_ssexp, ssexp_exhaustive, ExpansionSide, SsexpCurve, SsexpPoint};
