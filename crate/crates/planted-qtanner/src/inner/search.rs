use serde::{Deserialize, Serialize};

use super::{product_expansion_exact_with_budget, product_expansion_falsify, property_star_check, sample_planted_code, Rho};
use crate::gf::{min_distance_with_budget, LinearCode, PrimeField, DEFAULT_BUDGET, INFINITE_DISTANCE};
use crate::rng::{derive_seed, index_seed};
use crate::{par, Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InnerSearchOptions {
    /// Budget of the exact product-expansion checker, per code pair.
    pub exact_budget: u64,
    /// Falsification trials when the exact checker is out of budget.
    pub falsify_trials: u64,
    /// Reject candidates where `C_A` or `C_B` fails property (*).
    pub require_property_star: bool,
    /// Candidates evaluated in parallel per round; 0 means one per worker.
    pub batch: u64,
}

impl Default for InnerSearchOptions {
    fn default() -> Self {
        InnerSearchOptions {
            exact_budget: DEFAULT_BUDGET,
            falsify_trials: 20_000,
            require_property_star: false,
            batch: 0,
        }
    }
}

/// How a pair was shown to be `ρ_target`-product-expanding, strongest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "level")]
pub enum Certification {
    /// Exhaustive minimum `ρ*`.
    Exact { rho: Rho },
    /// Both distances `>= ρ_target Δ` (necessary) and no violation found by
    /// random falsification (evidence only).
    Screened { distances: [usize; 2], falsify_trials: u64 },
    /// `ρ_target = 0` holds for every pair.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub candidate_index: u64,
    pub rho_target: Rho,
    /// Certificate for `(C_A, C_B)`.
    pub primal: Certification,
    /// Certificate for `(C_A^⊥, C_B^⊥)`.
    pub dual: Certification,
}

/// Inner codes `C_A, C_B ⊆ F_p^Δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerCodePair {
    pub delta: usize,
    pub c_a: LinearCode,
    pub c_b: LinearCode,
    pub provenance: Option<Provenance>,
}

impl InnerCodePair {
    pub fn new(c_a: LinearCode, c_b: LinearCode) -> Result<Self> {
        if c_a.len() != c_b.len() || c_a.field() != c_b.field() {
            return Err(Error::DimensionMismatch("inner codes must share length and field".into()));
        }
        Ok(InnerCodePair {
            delta: c_a.len(),
            c_a,
            c_b,
            provenance: None,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.c_a.field()
    }

    pub fn k_a(&self) -> usize {
        self.c_a.dim()
    }

    pub fn k_b(&self) -> usize {
        self.c_b.dim()
    }

    pub fn rate_a(&self) -> f64 {
        self.c_a.rate()
    }

    pub fn rate_b(&self) -> f64 {
        self.c_b.rate()
    }

    /// `1 ∈ C_A` and `1 ∈ C_B^⊥`.
    pub fn is_planted(&self) -> bool {
        self.c_a.contains_ones() && self.c_b.dual().contains_ones()
    }
}

fn certify(c1: &LinearCode, c2: &LinearCode, target: Rho, opts: &InnerSearchOptions, seed: u64) -> Result<Option<Certification>> {
    if target.is_zero() {
        return Ok(Some(Certification::Vacuous));
    }
    match product_expansion_exact_with_budget(c1, c2, opts.exact_budget) {
        Ok(r) => return Ok((r.rho >= target).then_some(Certification::Exact { rho: r.rho })),
        Err(e) if e.is_budget() => {}
        Err(e) => return Err(e),
    }
    let n = c1.len() as u64;
    let d1 = min_distance_with_budget(c1, opts.exact_budget)?;
    let d2 = min_distance_with_budget(c2, opts.exact_budget)?;
    let ok = |d: usize| d == INFINITE_DISTANCE || target.times_le(n, d as u64);
    if !ok(d1) || !ok(d2) {
        return Ok(None);
    }
    if product_expansion_falsify(c1, c2, target, opts.falsify_trials, seed).is_some() {
        return Ok(None);
    }
    Ok(Some(Certification::Screened {
        distances: [d1, d2],
        falsify_trials: opts.falsify_trials,
    }))
}

fn candidate(p: u32, delta: usize, k_a: usize, k_b: usize, target: Rho, seed: u64, t: u64, opts: &InnerSearchOptions) -> Result<Option<InnerCodePair>> {
    let s = index_seed(seed, t);
    let c_a = sample_planted_code(p, delta, k_a, derive_seed(s, "C_A"))?;
    let c_b = sample_planted_code(p, delta, delta - k_b, derive_seed(s, "C_B dual"))?.dual();
    if opts.require_property_star && !(property_star_check(&c_a)? && property_star_check(&c_b)?) {
        return Ok(None);
    }
    let Some(primal) = certify(&c_a, &c_b, target, opts, derive_seed(s, "falsify primal"))? else {
        return Ok(None);
    };
    let Some(dual) = certify(&c_a.dual(), &c_b.dual(), target, opts, derive_seed(s, "falsify dual"))? else {
        return Ok(None);
    };
    let mut pair = InnerCodePair::new(c_a, c_b)?;
    pair.provenance = Some(Provenance {
        seed,
        candidate_index: t,
        rho_target: target,
        primal,
        dual,
    });
    Ok(Some(pair))
}

/// Samples planted pairs (`1 ∈ C_A`, `1 ∈ C_B^⊥`) from per-index seeds and
/// returns the lowest-index candidate for which both `(C_A, C_B)` and
/// `(C_A^⊥, C_B^⊥)` are certified at `ρ_target`.
pub fn search_inner_pair(
    p: u32,
    delta: usize,
    k_a: usize,
    k_b: usize,
    rho_target: Rho,
    budget: u64,
    seed: u64,
    opts: &InnerSearchOptions,
) -> Result<InnerCodePair> {
    for (name, k) in [("k_A", k_a), ("k_B", k_b)] {
        if k == 0 || k >= delta {
            return Err(Error::InvalidDimension(format!("{name} = {k} outside [1, {}]", delta.saturating_sub(1))));
        }
    }
    let batch = if opts.batch == 0 { par::workers() as u64 } else { opts.batch };
    let mut start = 0;
    while start < budget {
        let end = (start + batch).min(budget);
        let results = par::map_range((end - start) as usize, |i| candidate(p, delta, k_a, k_b, rho_target, seed, start + i as u64, opts));
        for r in results {
            if let Some(pair) = r? {
                return Ok(pair);
            }
        }
        start = end;
    }
    Err(Error::SearchExhausted(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::product_expansion_exact;

    #[test]
    fn zero_target_takes_first_candidate() {
        let pair = search_inner_pair(2, 5, 2, 2, Rho::zero(), 10, 9, &InnerSearchOptions::default()).unwrap();
        let prov = pair.provenance.clone().unwrap();
        assert_eq!(prov.candidate_index, 0);
        assert_eq!(prov.primal, Certification::Vacuous);
        assert!(pair.is_planted());
        assert_eq!((pair.k_a(), pair.k_b()), (2, 2));
    }

    #[test]
    fn delta_three_search_matches_exhaustive_feasibility() {
        let target = Rho::new(1, 3);
        let pair = search_inner_pair(2, 3, 2, 1, target, 200, 0, &InnerSearchOptions::default()).unwrap();
        assert!(pair.is_planted());
        let prov = pair.provenance.unwrap();
        let Certification::Exact { rho } = prov.primal else { panic!("expected exact certification") };
        assert!(rho >= target);
        assert_eq!(product_expansion_exact(&pair.c_a, &pair.c_b).unwrap().rho, rho);
        let Certification::Exact { rho: rd } = prov.dual else { panic!() };
        assert_eq!(product_expansion_exact(&pair.c_a.dual(), &pair.c_b.dual()).unwrap().rho, rd);
    }

    #[test]
    fn infeasible_target_exhausts() {
        let r = search_inner_pair(2, 3, 2, 1, Rho::new(1, 1), 20, 0, &InnerSearchOptions::default());
        assert!(matches!(r, Err(Error::SearchExhausted(20))));
    }

    #[test]
    fn screening_used_beyond_exact_budget() {
        let opts = InnerSearchOptions {
            exact_budget: 1 << 12,
            falsify_trials: 2000,
            ..Default::default()
        };
        let pair = search_inner_pair(2, 6, 3, 3, Rho::new(1, 8), 50, 1, &opts).unwrap();
        let prov = pair.provenance.unwrap();
        assert!(matches!(prov.primal, Certification::Screened { .. }));
    }

    #[test]
    fn dimensions_validated() {
        let r = search_inner_pair(2, 4, 0, 1, Rho::zero(), 1, 0, &InnerSearchOptions::default());
        assert!(matches!(r, Err(Error::InvalidDimension(_))));
        let r = search_inner_pair(2, 4, 1, 4, Rho::zero(), 1, 0, &InnerSearchOptions::default());
        assert!(matches!(r, Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn pair_round_trips_through_json() {
        let pair = search_inner_pair(3, 4, 2, 2, Rho::new(1, 8), 200, 2, &InnerSearchOptions::default()).unwrap();
        let j = serde_json::to_string(&pair).unwrap();
        assert_eq!(serde_json::from_str::<InnerCodePair>(&j).unwrap(), pair);
    }
}
