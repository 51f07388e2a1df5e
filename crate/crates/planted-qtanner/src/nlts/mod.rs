//! Exhaustive checks of the clustering, Hamiltonian and spread machinery on
//! binary toy codes. States live in `F_2^n` bitmasks with bit `i` = coordinate `i`.

mod bits;
mod bounds;
mod clusters;
mod hamiltonian;
mod spread;
mod syndrome;
mod uncertainty;

pub use bounds::{depth_lower_bound, epsilon_threshold, nlts_depth_bound, EpsilonThreshold};
pub use clusters::{
    build_clusters, clustering_from_ssexp, clustering_holds, verify_cluster_lemma, CheckOutcome, ClusterLemmaReport,
    ClusterPartition,
};
pub use hamiltonian::{build_code_hamiltonian, verify_sector_law, CodeHamiltonian, SectorReport};
pub use spread::{
    code_state, compute_logicals, measure_spread, random_low_energy_state, spread_dichotomy, Logicals, QuantumState,
    SpreadOptions, SpreadReport, MU_PRIME, MU_THEOREM,
};
pub use syndrome::{enumerate_syndrome_set, enumerate_syndrome_set_with_cap, Basis, SyndromeSet, DEFAULT_STATE_CAP};
pub use uncertainty::{random_uncertainty_trials, uncertainty_bound, uncertainty_check, UncertaintyStats};
