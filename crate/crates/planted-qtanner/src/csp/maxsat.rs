use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LinInstance;
use crate::gf::{checked_count, PrimeField};
use crate::rng::{index_seed, rng};
use crate::{par, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SatMode {
    /// Every assignment; the reported fraction is the maximum.
    Exact,
    /// Seeded random restarts of single-variable hill climbing; the reported
    /// fraction is a lower bound on the maximum.
    LocalSearch,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaxSatOptions {
    pub mode: SatMode,
    /// Cap on `p^m` in exact mode.
    pub budget: u64,
    pub seed: u64,
    pub restarts: u64,
    /// Soundness constant: the evidence is compared against `1 - c1`.
    pub c1: Option<f64>,
}

impl Default for MaxSatOptions {
    fn default() -> Self {
        MaxSatOptions {
            mode: SatMode::Exact,
            budget: 1 << 24,
            seed: 0,
            restarts: 64,
            c1: None,
        }
    }
}

/// How the result relates to `1 - c1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SoundnessEvidence {
    /// The exact maximum is below `1 - c1`.
    Sound,
    /// Some assignment reaches `1 - c1`.
    Refuted,
    /// Local search stayed below `1 - c1`; the true maximum may be higher.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SatReport {
    pub mode: SatMode,
    pub satisfied: usize,
    pub total: usize,
    pub fraction: f64,
    /// Best assignment; in exact mode the lexicographically least maximizer
    /// with variable 0 most significant.
    pub witness: Vec<u32>,
    pub evidence: Option<SoundnessEvidence>,
}

fn better(a: &(usize, Vec<u32>), b: &(usize, Vec<u32>)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Assignment number `t` with variable 0 as the most significant digit.
fn decode(t: u64, p: u32, m: usize) -> Vec<u32> {
    let mut y = vec![0u32; m];
    let mut t = t;
    for v in (0..m).rev() {
        y[v] = (t % p as u64) as u32;
        t /= p as u64;
    }
    y
}

fn exact(inst: &LinInstance, budget: u64) -> Result<(usize, Vec<u32>)> {
    let total = checked_count("max-sat enumeration", inst.p as u64, inst.m as u64, budget)?;
    let (p, m) = (inst.p, inst.m);
    let best = if p == 2 && m <= 63 {
        // Bit v of the mask holds variable v; t enumerates lexicographically.
        let rows: Vec<(u64, bool)> = inst.constraints.iter().map(|c| (c.vars.iter().fold(0u64, |a, &v| a | 1 << v), c.rhs == 1)).collect();
        par::map_chunks(total, par::CHUNKS, |a, b| {
            let mut best = (0usize, u64::MAX);
            for t in a..b {
                let y = if m == 0 { 0 } else { t.reverse_bits() >> (64 - m) };
                let s = rows.iter().filter(|&&(h, r)| ((h & y).count_ones() & 1 == 1) == r).count();
                if s > best.0 || best.1 == u64::MAX {
                    best = (s, t);
                }
            }
            best
        })
        .into_iter()
        .filter(|b| b.1 != u64::MAX)
        .fold((0usize, u64::MAX), |acc, b| if b.0 > acc.0 || acc.1 == u64::MAX { b } else { acc })
    } else {
        par::map_chunks(total, par::CHUNKS, |a, b| {
            let mut best = (0usize, u64::MAX);
            for t in a..b {
                let s = inst.satisfied_count(&decode(t, p, m));
                if s > best.0 || best.1 == u64::MAX {
                    best = (s, t);
                }
            }
            best
        })
        .into_iter()
        .filter(|b| b.1 != u64::MAX)
        .fold((0usize, u64::MAX), |acc, b| if b.0 > acc.0 || acc.1 == u64::MAX { b } else { acc })
    };
    Ok((best.0, decode(best.1, p, m)))
}

/// Variable -> constraints incidence.
fn incidence(inst: &LinInstance) -> Vec<Vec<(usize, u32)>> {
    let mut occ = vec![Vec::new(); inst.m];
    for (i, c) in inst.constraints.iter().enumerate() {
        for (&v, &a) in c.vars.iter().zip(&c.coeffs) {
            occ[v].push((i, a));
        }
    }
    occ
}

/// Steepest-ascent single-variable moves until no move gains.
fn hill_climb(inst: &LinInstance, f: PrimeField, occ: &[Vec<(usize, u32)>], seed: u64) -> (usize, Vec<u32>) {
    let mut r = rng(seed);
    let mut y: Vec<u32> = (0..inst.m).map(|_| r.random_range(0..f.p())).collect();
    let mut value: Vec<u32> = inst.constraints.iter().map(|c| c.evaluate(f, &y)).collect();
    let mut sat = inst.constraints.iter().zip(&value).filter(|(c, &v)| v == c.rhs).count();
    loop {
        let mut best: Option<(i64, usize, u32)> = None;
        for v in 0..inst.m {
            for shift in 1..f.p() {
                let gain: i64 = occ[v]
                    .iter()
                    .map(|&(i, a)| {
                        let rhs = inst.constraints[i].rhs;
                        let new = f.add(value[i], f.mul(a, shift));
                        i64::from(new == rhs) - i64::from(value[i] == rhs)
                    })
                    .sum();
                if gain > 0 && best.is_none_or(|b| gain > b.0) {
                    best = Some((gain, v, shift));
                }
            }
        }
        let Some((gain, v, shift)) = best else { break };
        y[v] = f.add(y[v], shift);
        for &(i, a) in &occ[v] {
            value[i] = f.add(value[i], f.mul(a, shift));
        }
        sat = (sat as i64 + gain) as usize;
    }
    (sat, y)
}

pub fn max_sat(inst: &LinInstance, opts: &MaxSatOptions) -> Result<SatReport> {
    inst.validate()?;
    if let Some(c1) = opts.c1 {
        if !(0.0..=1.0).contains(&c1) {
            return Err(Error::DomainError(format!("c1 = {c1} outside [0, 1]")));
        }
    }
    let (satisfied, witness) = match opts.mode {
        SatMode::Exact => exact(inst, opts.budget)?,
        SatMode::LocalSearch => {
            let f = inst.field();
            let occ = incidence(inst);
            let runs = par::map_range(opts.restarts.max(1) as usize, |k| hill_climb(inst, f, &occ, index_seed(opts.seed, k as u64)));
            runs.into_iter().reduce(|a, b| if better(&b, &a) { b } else { a }).expect("at least one restart")
        }
    };
    let total = inst.constraints.len();
    let fraction = if total == 0 { 1.0 } else { satisfied as f64 / total as f64 };
    let evidence = opts.c1.map(|c1| {
        if fraction >= 1.0 - c1 - 1e-12 {
            SoundnessEvidence::Refuted
        } else if opts.mode == SatMode::Exact {
            SoundnessEvidence::Sound
        } else {
            SoundnessEvidence::Inconclusive
        }
    });
    Ok(SatReport {
        mode: opts.mode,
        satisfied,
        total,
        fraction,
        witness,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{emit_planted_instance, LinConstraint};
    use crate::tanner::CssCode;
    use proptest::prelude::*;

    fn con(vars: &[usize], coeffs: &[u32], rhs: u32) -> LinConstraint {
        LinConstraint {
            vars: vars.to_vec(),
            coeffs: coeffs.to_vec(),
            rhs,
        }
    }

    fn inst(p: u32, m: usize, constraints: Vec<LinConstraint>) -> LinInstance {
        LinInstance {
            p,
            m,
            constraints,
            arity_bound: None,
            provenance: None,
        }
    }

    /// Straight enumeration with the generic evaluator.
    fn oracle(i: &LinInstance) -> (usize, Vec<u32>) {
        let total = (i.p as u64).pow(i.m as u32);
        let mut best = (0, Vec::new());
        for t in 0..total {
            let y = decode(t, i.p, i.m);
            let s = i.satisfied_count(&y);
            if best.1.is_empty() || s > best.0 {
                best = (s, y);
            }
        }
        best
    }

    #[test]
    fn contradictory_pair_is_half() {
        let i = inst(2, 1, vec![con(&[0], &[1], 0), con(&[0], &[1], 1)]);
        let r = max_sat(&i, &MaxSatOptions::default()).unwrap();
        assert_eq!((r.satisfied, r.fraction), (1, 0.5));
        assert_eq!(r.witness, vec![0]);
    }

    #[test]
    fn consistent_system_is_fully_satisfiable() {
        let i = inst(3, 2, vec![con(&[0, 1], &[1, 2], 1), con(&[1], &[1], 2)]);
        for mode in [SatMode::Exact, SatMode::LocalSearch] {
            let r = max_sat(&i, &MaxSatOptions { mode, ..Default::default() }).unwrap();
            assert_eq!(r.fraction, 1.0);
            assert_eq!(i.satisfied_count(&r.witness), 2);
        }
    }

    #[test]
    fn planted_toy_instance_is_not_satisfiable() {
        let i = emit_planted_instance(&CssCode::shor()).unwrap();
        let r = max_sat(&i, &MaxSatOptions { c1: Some(0.05), ..Default::default() }).unwrap();
        assert!(r.fraction < 1.0);
        assert_eq!(r.satisfied, oracle(&i).0);
        assert_eq!(r.evidence, Some(SoundnessEvidence::Sound));
    }

    #[test]
    fn exact_mode_respects_budget() {
        let i = inst(2, 30, vec![]);
        let e = max_sat(&i, &MaxSatOptions { budget: 1 << 20, ..Default::default() }).unwrap_err();
        assert!(e.is_budget());
    }

    #[test]
    fn local_search_flags_inconclusive() {
        let i = emit_planted_instance(&CssCode::steane()).unwrap();
        let r = max_sat(&i, &MaxSatOptions { mode: SatMode::LocalSearch, c1: Some(0.0), ..Default::default() }).unwrap();
        assert_eq!(r.evidence, Some(SoundnessEvidence::Inconclusive));
        assert_eq!(i.satisfied_count(&r.witness), r.satisfied);
    }

    fn arb_instance() -> impl Strategy<Value = LinInstance> {
        (prop_oneof![Just(2u32), Just(3u32)], 1usize..6).prop_flat_map(|(p, m)| {
            let c = (proptest::collection::btree_map(0..m, 1..p, 0..=m), 0..p).prop_map(|(terms, rhs)| {
                let (vars, coeffs) = terms.into_iter().unzip();
                LinConstraint { vars, coeffs, rhs }
            });
            proptest::collection::vec(c, 0..8).prop_map(move |cs| inst(p, m, cs))
        })
    }

    proptest! {
        #[test]
        fn exact_matches_oracle(i in arb_instance()) {
            let r = max_sat(&i, &MaxSatOptions::default()).unwrap();
            let (s, w) = oracle(&i);
            prop_assert_eq!(r.satisfied, s);
            prop_assert_eq!(r.witness, w);
        }

        #[test]
        fn local_search_is_a_lower_bound(i in arb_instance(), seed in 0u64..1000) {
            let ls = max_sat(&i, &MaxSatOptions { mode: SatMode::LocalSearch, seed, restarts: 4, ..Default::default() }).unwrap();
            prop_assert!(ls.satisfied <= oracle(&i).0);
            prop_assert_eq!(i.satisfied_count(&ls.witness), ls.satisfied);
        }
    }
}
