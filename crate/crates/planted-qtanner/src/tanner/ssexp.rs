use num_rational::Ratio;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::CssCode;
use crate::gf::{checked_count, coset_min_weight_with_budget, enumeration_budget, FMatrix, FVector, LinearCode};
use crate::rng::{index_seed, rng};
use crate::{par, Result};

/// Which check matrix is measured: `Boundary` pairs `H_Z` with the coset
/// weight modulo `C_X^⊥ = rowspace H_X`, `Coboundary` pairs `H_X` with `C_Z^⊥`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionSide {
    Boundary,
    Coboundary,
}

impl ExpansionSide {
    fn matrices(self, code: &CssCode) -> (&FMatrix, &FMatrix) {
        match self {
            ExpansionSide::Boundary => (code.hz(), code.hx()),
            ExpansionSide::Coboundary => (code.hx(), code.hz()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SsexpPoint {
    pub epsilon: f64,
    pub samples: u64,
    /// Samples with zero coset weight, excluded as `0/0`.
    pub excluded: u64,
    /// `(|H y|/m, coset weight bound / n)` per retained sample.
    pub pairs: Vec<(f64, f64)>,
    /// `min (|H y|/m) / (|y|_{C^⊥}/n)` over retained samples.
    pub min_ratio: Option<f64>,
    /// Coset weights are exact; otherwise they are greedy upper bounds.
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SsexpCurve {
    pub boundary: Vec<SsexpPoint>,
    pub coboundary: Vec<SsexpPoint>,
}

fn weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Adds multiples of stabilizer rows while that lowers the weight.
fn greedy_coset_weight(y: &[u32], g: &FMatrix) -> usize {
    let f = g.field();
    let mut y = y.to_vec();
    let mut w = weight(&y);
    loop {
        let mut improved = false;
        for r in 0..g.rows() {
            let row = g.row(r);
            for s in 1..f.p() {
                let delta: isize = row
                    .iter()
                    .map(|&(c, v)| {
                        let new = f.add(y[c], f.mul(s, v));
                        (new != 0) as isize - (y[c] != 0) as isize
                    })
                    .sum();
                if delta < 0 {
                    for &(c, v) in &row {
                        y[c] = f.add(y[c], f.mul(s, v));
                    }
                    w = (w as isize + delta) as usize;
                    improved = true;
                }
            }
        }
        if !improved {
            return w;
        }
    }
}

fn side_curve(code: &CssCode, side: ExpansionSide, grid: &[f64], trials: u64, seed: u64) -> Result<Vec<SsexpPoint>> {
    let (h, g) = side.matrices(code);
    let (n, m, f) = (code.n(), h.rows().max(1), code.field());
    let stab = LinearCode::row_span(g);
    let exact = checked_count("", f.p() as u64, stab.dim() as u64, enumeration_budget()).is_ok();
    grid.iter()
        .enumerate()
        .map(|(gi, &eps)| {
            let wmax = ((eps * n as f64 + 1e-9).floor() as usize).min(n);
            let samples = if wmax == 0 { 0 } else { trials };
            let rows = par::map_range(samples as usize, |t| -> Result<Option<(usize, usize)>> {
                let mut r = rng(index_seed(index_seed(seed, gi as u64), t as u64));
                let w = r.random_range(1..=wmax);
                let mut y = vec![0u32; n];
                for i in sample(&mut r, n, w) {
                    y[i] = r.random_range(1..f.p());
                }
                let v = FVector::new(f, y).expect("residues");
                let cw = if exact {
                    coset_min_weight_with_budget(&v, &stab, enumeration_budget())?
                } else {
                    greedy_coset_weight(v.entries(), g)
                };
                Ok((cw > 0).then(|| (h.mul_vec(&v).weight(), cw)))
            });
            let mut pairs = Vec::new();
            let mut excluded = 0;
            let mut min_ratio: Option<f64> = None;
            for r in rows {
                match r? {
                    None => excluded += 1,
                    Some((s, cw)) => {
                        let (a, b) = (s as f64 / m as f64, cw as f64 / n as f64);
                        let ratio = a / b;
                        min_ratio = Some(min_ratio.map_or(ratio, |x: f64| x.min(ratio)));
                        pairs.push((a, b));
                    }
                }
            }
            Ok(SsexpPoint {
                epsilon: eps,
                samples,
                excluded,
                pairs,
                min_ratio,
                exact,
            })
        })
        .collect()
}

/// Sampled small-set (co)boundary expansion: for each `ε`, `trials` random
/// `y` with `1 <= |y| <= εn`.
pub fn estimate_ssexp(code: &CssCode, grid: &[f64], trials: u64, seed: u64) -> Result<SsexpCurve> {
    Ok(SsexpCurve {
        boundary: side_curve(code, ExpansionSide::Boundary, grid, trials, index_seed(seed, 0))?,
        coboundary: side_curve(code, ExpansionSide::Coboundary, grid, trials, index_seed(seed, 1))?,
    })
}

/// Exact `min (|H y|/m) / (|y|_{C^⊥}/n)` over every binary `y` with
/// `1 <= |y| <= max_weight` and nonzero coset weight; `None` if no such `y`.
pub fn ssexp_exhaustive(code: &CssCode, side: ExpansionSide, max_weight: usize) -> Result<Option<Ratio<u64>>> {
    let (h, g) = side.matrices(code);
    let (n, m) = (code.n(), h.rows().max(1));
    checked_count("ssexp enumeration", 2, n as u64, enumeration_budget())?;
    let f = code.field();
    let stab = LinearCode::row_span(g);
    let best = par::map_chunks(1u64 << n, par::CHUNKS, |a, b| -> Result<Option<Ratio<u64>>> {
        let mut best: Option<Ratio<u64>> = None;
        for mask in a.max(1)..b {
            if mask.count_ones() as usize > max_weight {
                continue;
            }
            let v = FVector::new(f, (0..n).map(|i| ((mask >> i) & 1) as u32).collect()).expect("bits");
            let cw = coset_min_weight_with_budget(&v, &stab, enumeration_budget())?;
            if cw == 0 {
                continue;
            }
            let r = Ratio::new(h.mul_vec(&v).weight() as u64 * n as u64, m as u64 * cw as u64);
            best = Some(best.map_or(r, |x| x.min(r)));
        }
        Ok(best)
    });
    let mut out: Option<Ratio<u64>> = None;
    for b in best {
        if let Some(r) = b? {
            out = Some(out.map_or(r, |x| x.min(r)));
        }
    }
    Ok(out)
}
