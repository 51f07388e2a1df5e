use rand::Rng;

use crate::gf::{LinearCode, PrimeField, RowSpace, FMatrix};
use crate::rng::rng;
use crate::{Error, Result};

/// A uniformly random `k`-dimensional code in `F_p^n` containing the all-ones
/// vector: `1` followed by `k-1` vectors each drawn uniformly outside the span
/// so far. Every such code arises from the same number of draw sequences, so
/// the law is exactly uniform.
pub fn sample_planted_code(p: u32, n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    let field = PrimeField::new(p)?;
    if k == 0 || k > n {
        return Err(Error::InvalidDimension(format!("planted code of dimension {k} in length {n}")));
    }
    let mut r = rng(seed);
    let mut gens = vec![vec![1u32; n]];
    while gens.len() < k {
        let span = RowSpace::of(&FMatrix::from_dense_rows(field, n, &gens)?);
        let v: Vec<u32> = (0..n).map(|_| r.random_range(0..p)).collect();
        if !span.contains(&v) {
            gens.push(v);
        }
    }
    LinearCode::from_generators(field, n, &gens)
}
