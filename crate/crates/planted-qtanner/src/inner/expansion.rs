//! Product expansion of a pair `(C1, C2)` of codes in `F_p^n`.
//!
//! Elements of `C1 ⊗ F^n + F^n ⊗ C2` are `n x n` matrices `x = c + r` whose
//! part `c` has every column in `C1` and part `r` has every row in `C2`. With
//! bases `G1` (k1 x n) and `G2` (k2 x n) such a decomposition is
//! `x = G1ᵀ U + W G2` for coefficient matrices `U` (k1 x n) and `W` (n x k2);
//! `c` has as many nonzero columns as `U` and `r` as many nonzero rows as `W`.
//! All decompositions of `x` are `(U + τ G2, W - G1ᵀ τ)` for `τ` (k1 x k2),
//! so `D(x) = min_τ |U + τ G2|_col + |W - G1ᵀ τ|_row` is an exact finite
//! minimum. Restricting `W` to the rows outside the pivots of `G1`
//! parametrizes each `x` exactly once.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Rho;
use crate::gf::{checked_count, enumeration_budget, solve, FMatrix, FVector, LinearCode, PrimeField};
use crate::rng::{index_seed, rng};
use crate::{par, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ExpansionMode {
    /// Minimum over every nonzero element.
    Exact,
    /// Minimum over random elements; an upper bound on the exact value.
    SampledUpperBound { trials: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductExpansionReport {
    pub rho: Rho,
    pub mode: ExpansionMode,
    /// A minimizing `x`, row-major; absent when the space is `{0}`.
    pub witness: Option<Vec<Vec<u32>>>,
    pub witness_weight: usize,
    pub witness_cost: u64,
}

/// An element violating `|x| >= ρ n D(x)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FalsifyWitness {
    pub trial: u64,
    pub x: Vec<Vec<u32>>,
    pub weight: usize,
    /// `D(x)` when `cost_exact`, otherwise the lower bound 1.
    pub cost: u64,
    pub cost_exact: bool,
}

struct Pair {
    f: PrimeField,
    n: usize,
    g1: Vec<Vec<u32>>,
    g2: Vec<Vec<u32>>,
    free_rows: Vec<usize>,
}

impl Pair {
    fn new(c1: &LinearCode, c2: &LinearCode) -> Result<Self> {
        if c1.len() != c2.len() || c1.field() != c2.field() {
            return Err(Error::DimensionMismatch(format!(
                "codes of length {} and {} (p = {}, {})",
                c1.len(),
                c2.len(),
                c1.field().p(),
                c2.field().p()
            )));
        }
        let pivots = c1.pivots();
        Ok(Pair {
            f: c1.field(),
            n: c1.len(),
            g1: c1.basis_rows(),
            g2: c2.basis_rows(),
            free_rows: (0..c1.len()).filter(|i| !pivots.contains(i)).collect(),
        })
    }

    fn k1(&self) -> usize {
        self.g1.len()
    }

    fn k2(&self) -> usize {
        self.g2.len()
    }

    /// Number of free coordinates of the unique parametrization.
    fn space_dim(&self) -> usize {
        self.k1() * self.n + self.free_rows.len() * self.k2()
    }

    /// `(U, W)` from the base-p digits of `index`, least significant first.
    fn decode(&self, mut index: u64) -> (Vec<u32>, Vec<u32>) {
        let p = self.f.p() as u64;
        let (n, k1, k2) = (self.n, self.k1(), self.k2());
        let mut digit = || {
            let d = (index % p) as u32;
            index /= p;
            d
        };
        let u: Vec<u32> = (0..k1 * n).map(|_| digit()).collect();
        let mut w = vec![0u32; n * k2];
        for &i in &self.free_rows {
            for s in 0..k2 {
                w[i * k2 + s] = digit();
            }
        }
        (u, w)
    }

    /// `G1ᵀ U + W G2`, row-major.
    fn element(&self, u: &[u32], w: &[u32]) -> Vec<u32> {
        let (f, n, k1, k2) = (self.f, self.n, self.k1(), self.k2());
        let mut x = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for t in 0..k1 {
                    acc = f.add(acc, f.mul(self.g1[t][i], u[t * n + j]));
                }
                for s in 0..k2 {
                    acc = f.add(acc, f.mul(w[i * k2 + s], self.g2[s][j]));
                }
                x[i * n + j] = acc;
            }
        }
        x
    }

    fn cost_of(&self, u: &[u32], w: &[u32]) -> u64 {
        let (n, k1, k2) = (self.n, self.k1(), self.k2());
        let cols = (0..n).filter(|&j| (0..k1).any(|t| u[t * n + j] != 0)).count();
        let rows = (0..n).filter(|&i| (0..k2).any(|s| w[i * k2 + s] != 0)).count();
        (cols + rows) as u64
    }

    /// `D(x)` for `x = G1ᵀ U + W G2`, minimizing over `τ` with an odometer.
    /// Each digit step adds `G2_s` to row `t` of `U` and subtracts `G1_t` from
    /// column `s` of `W`; `p` steps of one digit cancel.
    fn min_cost(&self, u: &[u32], w: &[u32]) -> u64 {
        self.min_cost_until(u, w, |_| false)
    }

    /// As `min_cost`, but returns the first cost for which `stop` holds. The
    /// result is always an upper bound on `D(x)`.
    fn min_cost_until(&self, u: &[u32], w: &[u32], stop: impl Fn(u64) -> bool) -> u64 {
        let (f, n, k1, k2) = (self.f, self.n, self.k1(), self.k2());
        let p = f.p();
        let (mut u, mut w) = (u.to_vec(), w.to_vec());
        let mut best = self.cost_of(&u, &w);
        if stop(best) {
            return best;
        }
        let digits_len = k1 * k2;
        let mut digits = vec![0u32; digits_len];
        loop {
            let mut d = 0;
            loop {
                if d == digits_len {
                    return best;
                }
                let (t, s) = (d / k2, d % k2);
                for j in 0..n {
                    u[t * n + j] = f.add(u[t * n + j], self.g2[s][j]);
                }
                for i in 0..n {
                    w[i * k2 + s] = f.sub(w[i * k2 + s], self.g1[t][i]);
                }
                digits[d] += 1;
                if digits[d] < p {
                    break;
                }
                digits[d] = 0;
                d += 1;
            }
            best = best.min(self.cost_of(&u, &w));
            if stop(best) {
                return best;
            }
        }
    }

    fn rows(&self, x: &[u32]) -> Vec<Vec<u32>> {
        x.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Random `(U, W)`: even trials put nonzero entries in at most two columns
    /// of `U` and two rows of `W`, odd trials are dense.
    fn random_coefficients(&self, trial: u64, seed: u64) -> (Vec<u32>, Vec<u32>) {
        let (n, k1, k2, p) = (self.n, self.k1(), self.k2(), self.f.p());
        let mut r = rng(index_seed(seed, trial));
        let mut u = vec![0u32; k1 * n];
        let mut w = vec![0u32; n * k2];
        if trial % 2 == 1 {
            u.iter_mut().for_each(|x| *x = r.random_range(0..p));
            w.iter_mut().for_each(|x| *x = r.random_range(0..p));
            return (u, w);
        }
        let cols = if k1 == 0 { 0 } else { r.random_range(0..=2usize) };
        let rows = if k2 == 0 { 0 } else { r.random_range(0..=2usize) };
        for _ in 0..cols {
            let j = r.random_range(0..n);
            for t in 0..k1 {
                u[t * n + j] = r.random_range(0..p);
            }
        }
        for _ in 0..rows {
            let i = r.random_range(0..n);
            for s in 0..k2 {
                w[i * k2 + s] = r.random_range(0..p);
            }
        }
        (u, w)
    }
}

/// Bitmask form of a binary pair with `n <= 64`: row `t` of `U` and column
/// `s` of `W` are words, and a step of `τ` is two xors.
struct BinaryPair {
    n: usize,
    /// `G1_t` as a mask over rows.
    g1: Vec<u64>,
    /// `G2_s` as a mask over columns.
    g2: Vec<u64>,
    free_rows: Vec<usize>,
}

impl BinaryPair {
    fn new(pair: &Pair) -> Option<Self> {
        if pair.f.p() != 2 || pair.n > 64 || pair.k1() * pair.k2() >= 64 {
            return None;
        }
        let mask = |row: &Vec<u32>| row.iter().enumerate().filter(|(_, &v)| v != 0).fold(0u64, |m, (i, _)| m | 1 << i);
        Some(BinaryPair {
            n: pair.n,
            g1: pair.g1.iter().map(mask).collect(),
            g2: pair.g2.iter().map(mask).collect(),
            free_rows: pair.free_rows.clone(),
        })
    }

    /// `(|x|, c)` for the element with index `idx` in `Pair::decode` order,
    /// where `c = D(x)` unless `stop(|x|, c)` ended the τ search early.
    fn weight_and_cost(&self, mut idx: u64, stop: &impl Fn(usize, u64) -> bool) -> (usize, u64) {
        let (n, k1, k2) = (self.n, self.g1.len(), self.g2.len());
        let low = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let u: Vec<u64> = (0..k1)
            .map(|_| {
                let r = idx & low;
                idx = if n == 64 { 0 } else { idx >> n };
                r
            })
            .collect();
        let mut w = vec![0u64; k2];
        for &i in &self.free_rows {
            for ws in w.iter_mut() {
                *ws |= (idx & 1) << i;
                idx >>= 1;
            }
        }
        self.search(u, w, stop)
    }

    /// As `weight_and_cost` for coefficients in `Pair` layout.
    fn weight_and_cost_of(&self, u: &[u32], w: &[u32], stop: &impl Fn(usize, u64) -> bool) -> (usize, u64) {
        let (n, k2) = (self.n, self.g2.len());
        let u = u.chunks(n).map(|row| row.iter().enumerate().fold(0u64, |m, (j, &v)| m | ((v & 1) as u64) << j)).collect();
        let w = (0..k2).map(|s| (0..n).fold(0u64, |m, i| m | ((w[i * k2 + s] & 1) as u64) << i)).collect();
        self.search(u, w, stop)
    }

    fn search(&self, mut u: Vec<u64>, mut w: Vec<u64>, stop: &impl Fn(usize, u64) -> bool) -> (usize, u64) {
        let (n, k1, k2) = (self.n, self.g1.len(), self.g2.len());
        let mut wt = 0usize;
        for i in 0..n {
            let mut row = 0u64;
            for t in 0..k1 {
                if self.g1[t] >> i & 1 == 1 {
                    row ^= u[t];
                }
            }
            for s in 0..k2 {
                if w[s] >> i & 1 == 1 {
                    row ^= self.g2[s];
                }
            }
            wt += row.count_ones() as usize;
        }
        let cost = |u: &[u64], w: &[u64]| {
            (u.iter().fold(0, |a, b| a | b).count_ones() + w.iter().fold(0, |a, b| a | b).count_ones()) as u64
        };
        let mut best = cost(&u, &w);
        if stop(wt, best) {
            return (wt, best);
        }
        // Gray code over τ: step `g` flips digit `trailing_zeros(g)`.
        for g in 1u64..1 << (k1 * k2) {
            let d = g.trailing_zeros() as usize;
            let (t, s) = (d / k2, d % k2);
            u[t] ^= self.g2[s];
            w[s] ^= self.g1[t];
            best = best.min(cost(&u, &w));
            if stop(wt, best) {
                break;
            }
        }
        (wt, best)
    }
}

fn weight(x: &[u32]) -> usize {
    x.iter().filter(|&&v| v != 0).count()
}

/// `|a|/(n D_a) < |b|/(n D_b)`.
fn ratio_less(a: (usize, u64), b: (usize, u64)) -> bool {
    (a.0 as u128) * (b.1 as u128) < (b.0 as u128) * (a.1 as u128)
}

fn report(pair: &Pair, best: Option<(usize, u64, Vec<u32>)>, mode: ExpansionMode) -> ProductExpansionReport {
    match best {
        None => ProductExpansionReport {
            rho: Rho::Infinite,
            mode,
            witness: None,
            witness_weight: 0,
            witness_cost: 0,
        },
        Some((wt, cost, x)) => ProductExpansionReport {
            rho: Rho::new(wt as u64, pair.n as u64 * cost),
            mode,
            witness: Some(pair.rows(&x)),
            witness_weight: wt,
            witness_cost: cost,
        },
    }
}

/// `ρ* = min |x| / (n D(x))` over nonzero `x ∈ C1 ⊗ F^n + F^n ⊗ C2`, or
/// `+∞` when that space is `{0}`.
pub fn product_expansion_exact(c1: &LinearCode, c2: &LinearCode) -> Result<ProductExpansionReport> {
    product_expansion_exact_with_budget(c1, c2, enumeration_budget())
}

/// Enumerates the `p^{k1 n + (n - k1) k2}` elements, each with a τ search
/// over `p^{k1 k2}` values that stops once the element cannot beat the
/// current minimum; fails if either count exceeds `budget`.
pub fn product_expansion_exact_with_budget(c1: &LinearCode, c2: &LinearCode, budget: u64) -> Result<ProductExpansionReport> {
    let pair = Pair::new(c1, c2)?;
    let p = pair.f.p() as u64;
    checked_count("decomposition search", p, (pair.k1() * pair.k2()) as u64, budget)?;
    let total = checked_count("product expansion", p, pair.space_dim() as u64, budget)?;
    let binary = BinaryPair::new(&pair);
    let chunks = par::map_chunks(total, par::CHUNKS, |a, b| {
        let mut best: Option<(usize, u64, u64)> = None;
        for idx in a.max(1)..b {
            // Once `|x| / (n c)` is not below the best ratio for some cost
            // `c >= D(x)`, `x` cannot improve on it.
            let hopeless = |wt: usize, c: u64| best.is_some_and(|(bw, bc, _)| !ratio_less((wt, c), (bw, bc)));
            let (wt, cost) = match &binary {
                Some(bp) => bp.weight_and_cost(idx, &hopeless),
                None => {
                    let (u, w) = pair.decode(idx);
                    let wt = weight(&pair.element(&u, &w));
                    (wt, pair.min_cost_until(&u, &w, |c| hopeless(wt, c)))
                }
            };
            if !hopeless(wt, cost) {
                best = Some((wt, cost, idx));
            }
        }
        best
    });
    let best = chunks.into_iter().flatten().fold(None, |acc: Option<(usize, u64, u64)>, c| match acc {
        Some(a) if !ratio_less((c.0, c.1), (a.0, a.1)) => Some(a),
        _ => Some(c),
    });
    let best = best.map(|(wt, cost, idx)| {
        let (u, w) = pair.decode(idx);
        (wt, cost, pair.element(&u, &w))
    });
    Ok(report(&pair, best, ExpansionMode::Exact))
}

/// Upper bound on `ρ*` from `trials` random elements, each with exact `D`.
pub fn product_expansion_sampled(c1: &LinearCode, c2: &LinearCode, trials: u64, seed: u64) -> Result<ProductExpansionReport> {
    let pair = Pair::new(c1, c2)?;
    checked_count("decomposition search", pair.f.p() as u64, (pair.k1() * pair.k2()) as u64, enumeration_budget())?;
    let samples = par::map_chunks(trials, par::CHUNKS, |a, b| {
        let mut best: Option<(usize, u64, u64)> = None;
        for trial in a..b {
            let (u, w) = pair.random_coefficients(trial, seed);
            let wt = weight(&pair.element(&u, &w));
            if wt == 0 {
                continue;
            }
            let cost = pair.min_cost(&u, &w);
            if best.is_none_or(|(bw, bc, _)| ratio_less((wt, cost), (bw, bc))) {
                best = Some((wt, cost, trial));
            }
        }
        best
    });
    let best = samples.into_iter().flatten().fold(None, |acc: Option<(usize, u64, u64)>, c| match acc {
        Some(a) if !ratio_less((c.0, c.1), (a.0, a.1)) => Some(a),
        _ => Some(c),
    });
    let best = best.map(|(wt, cost, trial)| {
        let (u, w) = pair.random_coefficients(trial, seed);
        (wt, cost, pair.element(&u, &w))
    });
    Ok(report(&pair, best, ExpansionMode::SampledUpperBound { trials }))
}

/// Searches random sparse and random dense elements for `|x| < ρ n D(x)`.
/// `D` is exact when `p^{k1 k2}` fits the global budget; otherwise the lower
/// bound `D >= 1` is used, so a reported witness is always a true violation.
pub fn product_expansion_falsify(c1: &LinearCode, c2: &LinearCode, rho: Rho, trials: u64, seed: u64) -> Option<FalsifyWitness> {
    let pair = Pair::new(c1, c2).ok()?;
    if rho.is_zero() {
        return None;
    }
    let exact = checked_count("decomposition search", pair.f.p() as u64, (pair.k1() * pair.k2()) as u64, enumeration_budget()).is_ok();
    let binary = BinaryPair::new(&pair);
    // `D` only decreases during the τ search; once `ρ n c <= |x|` there is no violation.
    let settled = |wt: usize, c: u64| rho.times_le(pair.n as u64 * c, wt as u64);
    const BATCH: u64 = 1 << 12;
    let mut start = 0;
    while start < trials {
        let end = (start + BATCH).min(trials);
        let hits = par::map_chunks(end - start, 64, |a, b| {
            (start + a..start + b).find_map(|trial| {
                let (u, w) = pair.random_coefficients(trial, seed);
                let x = pair.element(&u, &w);
                let wt = weight(&x);
                if wt == 0 {
                    return None;
                }
                let cost = match (&binary, exact) {
                    (_, false) => 1,
                    (Some(bp), true) => bp.weight_and_cost_of(&u, &w, &settled).1,
                    (None, true) => pair.min_cost_until(&u, &w, |c| settled(wt, c)),
                };
                (!rho.times_le(pair.n as u64 * cost, wt as u64)).then(|| FalsifyWitness {
                    trial,
                    x: pair.rows(&x),
                    weight: wt,
                    cost,
                    cost_exact: exact,
                })
            })
        });
        if let Some(w) = hits.into_iter().flatten().next() {
            return Some(w);
        }
        start = end;
    }
    None
}

/// Exact `D(x)` for an `n x n` matrix `x ∈ C1 ⊗ F^n + F^n ⊗ C2`, found by
/// solving for one decomposition and minimizing over the rest.
pub fn decomposition_cost(c1: &LinearCode, c2: &LinearCode, x: &[Vec<u32>]) -> Result<u64> {
    let pair = Pair::new(c1, c2)?;
    let (f, n, k1, k2) = (pair.f, pair.n, pair.k1(), pair.k2());
    if x.len() != n || x.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("expected a {n} x {n} matrix")));
    }
    checked_count("decomposition search", f.p() as u64, (k1 * k2) as u64, enumeration_budget())?;
    // Unknowns: U[t][j] then W[i][s]; one equation per entry (i, j).
    let unknowns = k1 * n + n * k2;
    let mut triplets = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for t in 0..k1 {
                triplets.push((row, t * n + j, pair.g1[t][i]));
            }
            for s in 0..k2 {
                triplets.push((row, k1 * n + i * k2 + s, pair.g2[s][j]));
            }
        }
    }
    let a = FMatrix::from_triplets(f, n * n, unknowns, triplets)?;
    let b = FVector::new(f, x.concat())?;
    let sol = solve(&a, &b).ok_or_else(|| Error::DomainError("matrix is not in C1 ⊗ F^n + F^n ⊗ C2".into()))?;
    let sol = sol.entries();
    if weight(&x.concat()) == 0 {
        return Ok(0);
    }
    Ok(pair.min_cost(&sol[..k1 * n], &sol[k1 * n..]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn f2() -> PrimeField {
        PrimeField::binary()
    }

    /// Minimum decomposition cost of every element, by enumerating all pairs
    /// `(c, r)` with columns of `c` in `C1` and rows of `r` in `C2`.
    fn oracle_costs(c1: &LinearCode, c2: &LinearCode) -> HashMap<Vec<u32>, u64> {
        let n = c1.len();
        let f = c1.field();
        let w1: Vec<FVector> = (0..c1.size_within(u64::MAX).unwrap()).map(|i| c1.codeword(i)).collect();
        let w2: Vec<FVector> = (0..c2.size_within(u64::MAX).unwrap()).map(|i| c2.codeword(i)).collect();
        let mut cols_choices: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            cols_choices = cols_choices.into_iter().flat_map(|c| (0..w1.len()).map(move |k| [c.clone(), vec![k]].concat())).collect();
        }
        let mut rows_choices: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            rows_choices = rows_choices.into_iter().flat_map(|c| (0..w2.len()).map(move |k| [c.clone(), vec![k]].concat())).collect();
        }
        let mut best: HashMap<Vec<u32>, u64> = HashMap::new();
        for cc in &cols_choices {
            for rc in &rows_choices {
                let mut x = vec![0u32; n * n];
                for i in 0..n {
                    for j in 0..n {
                        x[i * n + j] = f.add(w1[cc[j]].get(i), w2[rc[i]].get(j));
                    }
                }
                let cost = (cc.iter().filter(|&&k| !w1[k].is_zero()).count() + rc.iter().filter(|&&k| !w2[k].is_zero()).count()) as u64;
                let e = best.entry(x).or_insert(u64::MAX);
                *e = (*e).min(cost);
            }
        }
        best
    }

    fn oracle_rho(c1: &LinearCode, c2: &LinearCode) -> Rho {
        let n = c1.len() as u64;
        oracle_costs(c1, c2)
            .into_iter()
            .filter(|(x, _)| weight(x) > 0)
            .map(|(x, d)| Rho::new(weight(&x) as u64, n * d))
            .min()
            .unwrap_or(Rho::Infinite)
    }

    #[test]
    fn zero_codes_are_vacuous() {
        let z = LinearCode::zero(f2(), 3);
        let r = product_expansion_exact(&z, &z).unwrap();
        assert_eq!(r.rho, Rho::Infinite);
        assert!(r.witness.is_none());
    }

    #[test]
    fn repetition_codes_match_oracle() {
        let rep = LinearCode::repetition(f2(), 3);
        let r = product_expansion_exact(&rep, &rep).unwrap();
        assert_eq!(oracle_costs(&rep, &rep).len(), 32);
        assert_eq!(r.rho, oracle_rho(&rep, &rep));
        let x = r.witness.unwrap();
        let d = decomposition_cost(&rep, &rep, &x).unwrap();
        assert_eq!(d, r.witness_cost);
        assert_eq!(Rho::new(r.witness_weight as u64, 3 * d), r.rho);
    }

    #[test]
    fn one_zero_code_gives_relative_distance() {
        let z = LinearCode::zero(f2(), 4);
        let c = LinearCode::from_generators(f2(), 4, &[vec![1, 1, 0, 1], vec![0, 1, 1, 1]]).unwrap();
        assert_eq!(product_expansion_exact(&z, &c).unwrap().rho, Rho::new(2, 4));
        assert_eq!(product_expansion_exact(&c, &z).unwrap().rho, Rho::new(2, 4));
    }

    #[test]
    fn ternary_pair_matches_oracle() {
        let f = PrimeField::new(3).unwrap();
        let c1 = LinearCode::from_generators(f, 3, &[vec![1, 1, 1]]).unwrap();
        let c2 = LinearCode::from_generators(f, 3, &[vec![1, 2, 0]]).unwrap();
        assert_eq!(product_expansion_exact(&c1, &c2).unwrap().rho, oracle_rho(&c1, &c2));
    }

    #[test]
    fn costs_match_oracle_elementwise() {
        let c1 = LinearCode::from_generators(f2(), 3, &[vec![1, 1, 0]]).unwrap();
        let c2 = LinearCode::from_generators(f2(), 3, &[vec![1, 1, 1], vec![0, 1, 1]]).unwrap();
        for (x, d) in oracle_costs(&c1, &c2) {
            let m: Vec<Vec<u32>> = x.chunks(3).map(|r| r.to_vec()).collect();
            assert_eq!(decomposition_cost(&c1, &c2, &m).unwrap(), if weight(&x) == 0 { 0 } else { d });
        }
    }

    #[test]
    fn bitmask_path_matches_generic_path() {
        let c1 = LinearCode::from_generators(f2(), 4, &[vec![1, 1, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        let c2 = LinearCode::from_generators(f2(), 4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]).unwrap();
        let pair = Pair::new(&c1, &c2).unwrap();
        let bp = BinaryPair::new(&pair).unwrap();
        for idx in 0..1u64 << pair.space_dim() {
            let (u, w) = pair.decode(idx);
            let expect = (weight(&pair.element(&u, &w)), pair.min_cost(&u, &w));
            assert_eq!(bp.weight_and_cost(idx, &|_, _| false), expect, "index {idx}");
            assert_eq!(bp.weight_and_cost_of(&u, &w, &|_, _| false), expect, "index {idx}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let full = LinearCode::full(f2(), 4);
        assert!(product_expansion_exact_with_budget(&full, &full, 1 << 10).unwrap_err().is_budget());
    }

    #[test]
    fn falsify_respects_exact_value() {
        let rep = LinearCode::repetition(f2(), 3);
        let c2 = LinearCode::from_generators(f2(), 3, &[vec![1, 1, 0]]).unwrap();
        let exact = product_expansion_exact(&rep, &c2).unwrap().rho;
        assert!(product_expansion_falsify(&rep, &c2, exact, 100_000, 1).is_none());
        assert!(product_expansion_falsify(&rep, &c2, Rho::zero(), 1000, 1).is_none());
        let w = product_expansion_falsify(&rep, &c2, Rho::new(11, 10), 10, 1).unwrap();
        assert!(w.cost_exact);
        assert!((w.weight as u64) * 10 < 11 * 3 * w.cost);
        let Rho::Finite(r) = exact else { panic!() };
        let above = Rho::Finite(r + num_rational::Ratio::new(1, 100));
        let w = product_expansion_falsify(&rep, &c2, above, 100_000, 1).expect("slightly above the exact value");
        assert!(!above.times_le(3 * w.cost, w.weight as u64));
    }

    #[test]
    fn sampled_value_bounds_exact_from_above() {
        let c1 = LinearCode::from_generators(f2(), 4, &[vec![1, 1, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        let c2 = LinearCode::from_generators(f2(), 4, &[vec![1, 1, 0, 0]]).unwrap();
        let exact = product_expansion_exact(&c1, &c2).unwrap().rho;
        let sampled = product_expansion_sampled(&c1, &c2, 5000, 3).unwrap();
        assert!(sampled.rho >= exact);
        assert_eq!(sampled.mode, ExpansionMode::SampledUpperBound { trials: 5000 });
    }
}
