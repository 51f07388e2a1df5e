//! Constant-size inner code pairs `(C_A, C_B)`: planted sampling, product
//! expansion (exact and sampled), property (*) and q-ary entropy.

mod entropy;
mod expansion;
mod rho;
mod sample;
mod search;
mod star;

pub use entropy::{q_entropy, q_entropy_inv};
pub use expansion::{
    decomposition_cost, product_expansion_exact, product_expansion_exact_with_budget, product_expansion_falsify,
    product_expansion_sampled, ExpansionMode, FalsifyWitness, ProductExpansionReport,
};
pub use rho::Rho;
pub use sample::sample_planted_code;
pub use search::{search_inner_pair, Certification, InnerCodePair, InnerSearchOptions, Provenance};
pub use star::{property_star_alpha, property_star_check, property_star_check_with_alpha};
