//! Cayley expanders on the congruence kernel
//! `G_m = ker(SL2(Z/p^{m+1}) -> SL2(Z/p))`, which has order `p^{3m}`.
//!
//! Elements are indexed by `a + p^m b + p^{2m} c` through the bijection
//! `φ(a,b,c) = I + p[[a,b],[c,d]]`, so neighbor queries are pure arithmetic in
//! time polynomial in `m`.

mod generators;
mod graph;
mod group;
mod spectral;

pub use generators::{default_generators, symmetric_generators, GeneratorMultiset, GeneratorSelection, SearchOptions};
pub use graph::{neighbor, Circulant, CayleyMultigraph, GraphJson, NeighborTable, RegularGraph};
pub use group::{group_inv, group_mul, phi_decode, phi_encode, CongruenceGroup, CongruenceGroupElement};
pub use spectral::{spectral_expansion, spectrum, SpectralOptions, SpectralReport};
