//! Linear CSP instances `H_Z^T y = β` read off a CSS code, with
//! inconsistency certificates, max-sat probes and the 3-XOR reduction.

mod instance;
mod maxsat;
mod sos;
mod unsat;
mod xor;

pub use instance::{emit_lin_instance, emit_planted_instance, ExplicitInstance, InstanceProvenance, LinConstraint, LinInstance};
pub use maxsat::{max_sat, MaxSatOptions, SatMode, SatReport, SoundnessEvidence};
pub use sos::sos_level_bound;
pub use unsat::{certify_unsat, UnsatCertificate};
pub use xor::{reduce_to_3xor, XorConstraint, XorInstance};
