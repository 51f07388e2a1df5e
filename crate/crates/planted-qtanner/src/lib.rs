//! Planted quantum Tanner codes over prime fields.
//!
//! The crate builds strongly explicit Cayley expanders on congruence
//! subgroups of `SL2(Z/p^{m+1})`, square Cayley complexes over them, and CSS
//! codes whose inner codes force the all-ones vector to be a nontrivial
//! logical. On top of the codes it emits unsatisfiable sparse linear systems
//! and runs exhaustive checks of the cluster/spread machinery on toy codes.

pub mod csp;
pub mod error;
pub mod expander;
pub mod gf;
pub mod inner;
pub mod nlts;
pub mod par;
pub mod pipeline;
pub mod rng;
pub mod tanner;

pub use error::{Error, Result};
