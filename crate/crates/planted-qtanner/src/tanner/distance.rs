use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::CssCode;
use crate::gf::{checked_count, enumerate_min, kernel_basis, FMatrix, RowSpace};
use crate::rng::{index_seed, rng};
use crate::{par, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    /// Exact distance, when every logical coset fits the budget.
    pub exact: Option<usize>,
    /// Lightest logical found on either side; `None` when `k = 0`.
    pub upper_bound: Option<usize>,
    /// Lightest `y ∈ ker H_Z \ rowspace H_X` found.
    pub z_side_upper: Option<usize>,
    /// Lightest `y ∈ ker H_X \ rowspace H_Z` found.
    pub x_side_upper: Option<usize>,
    pub trials: u64,
}

/// Minimum weight of `ker(h) \ rowspace(g)` by enumerating `ker(h)`.
fn exact_side(h: &FMatrix, g: &FMatrix, budget: u64) -> Result<Option<usize>> {
    let ker = kernel_basis(h).dense_rows();
    let stab = RowSpace::of(g);
    let zero = vec![0u32; h.cols()];
    let (w, _) = enumerate_min("logical enumeration", h.field(), &zero, &ker, budget, |_, v| {
        if stab.contains(v) {
            u64::MAX
        } else {
            v.iter().filter(|&&x| x != 0).count() as u64
        }
    })?;
    Ok((w != u64::MAX).then_some(w as usize))
}

/// Information-set sampling: kernel basis vectors of `h` after a random
/// column permutation each have support within one free column plus the pivots.
fn sampled_side(h: &FMatrix, g: &FMatrix, trials: u64, seed: u64) -> Option<usize> {
    let stab = RowSpace::of(g);
    let n = h.cols();
    par::map_range(trials as usize, |t| {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng(index_seed(seed, t as u64)));
        let ker = kernel_basis(&h.permute_columns(&perm));
        (0..ker.rows())
            .filter_map(|r| {
                let mut y = vec![0u32; n];
                for (j, v) in ker.row(r) {
                    y[perm[j]] = v;
                }
                (!stab.contains(&y)).then(|| y.iter().filter(|&&x| x != 0).count())
            })
            .min()
    })
    .into_iter()
    .flatten()
    .min()
}

/// `d = min |y|` over `(C_Z \ C_X^⊥) ∪ (C_X \ C_Z^⊥)`: exact when both kernels
/// have at most `budget` elements, else an upper bound from `trials` samples.
pub fn estimate_distance(code: &CssCode, budget: u64, trials: u64, seed: u64) -> Result<DistanceEstimate> {
    let p = code.field().p() as u64;
    let (rx, rz) = code.ranks();
    let n = code.n() as u64;
    let fits = checked_count("", p, n - rz as u64, budget).is_ok() && checked_count("", p, n - rx as u64, budget).is_ok();
    if fits {
        let z = exact_side(code.hz(), code.hx(), budget)?;
        let x = exact_side(code.hx(), code.hz(), budget)?;
        let best = z.into_iter().chain(x).min();
        return Ok(DistanceEstimate {
            exact: best,
            upper_bound: best,
            z_side_upper: z,
            x_side_upper: x,
            trials: 0,
        });
    }
    let z = sampled_side(code.hz(), code.hx(), trials, index_seed(seed, 0));
    let x = sampled_side(code.hx(), code.hz(), trials, index_seed(seed, 1));
    Ok(DistanceEstimate {
        exact: None,
        upper_bound: z.into_iter().chain(x).min(),
        z_side_upper: z,
        x_side_upper: x,
        trials,
    })
}
