use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::expander::CongruenceGroup;
use crate::inner::Rho;
use crate::tanner::GridConvention;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Expander,
    Inner,
    Code,
    Verify,
    Dimension,
    Ssexp,
    Csp,
}

impl Stage {
    pub const ALL: [Stage; 7] = [Stage::Expander, Stage::Inner, Stage::Code, Stage::Verify, Stage::Dimension, Stage::Ssexp, Stage::Csp];

    pub fn label(self) -> &'static str {
        match self {
            Stage::Expander => "expander",
            Stage::Inner => "inner",
            Stage::Code => "code",
            Stage::Verify => "verify",
            Stage::Dimension => "dimension",
            Stage::Ssexp => "ssexp",
            Stage::Csp => "csp",
        }
    }

    /// Stages whose artifacts this stage reads.
    pub fn requires(self) -> &'static [Stage] {
        match self {
            Stage::Expander | Stage::Inner => &[],
            Stage::Code => &[Stage::Expander, Stage::Inner],
            Stage::Verify | Stage::Dimension | Stage::Ssexp | Stage::Csp => &[Stage::Code],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budgets {
    /// Cap on exhaustive enumeration, per loop.
    pub enumeration: u64,
    /// Inner-pair candidates tried before giving up.
    pub inner_candidates: u64,
    /// Falsification trials for inner pairs beyond the exact budget.
    pub falsify_trials: u64,
    /// Random generator multisets tried by the expander search.
    pub generator_candidates: usize,
    pub ssexp_trials: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: 1 << 24,
            inner_candidates: 256,
            falsify_trials: 20_000,
            generator_candidates: 64,
            ssexp_trials: 200,
        }
    }
}

/// One pipeline run. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Field of the code.
    pub p: u32,
    /// Prime of the congruence group, `|G| = group_prime^{3m}`.
    pub group_prime: u64,
    pub m: u32,
    pub delta: usize,
    pub k_a: usize,
    pub k_b: usize,
    pub rho_target: Rho,
    pub seed: u64,
    pub budgets: Budgets,
    pub output_dir: PathBuf,
    pub stages: Vec<Stage>,
    /// Relative weights at which small-set expansion is sampled.
    pub ssexp_eps: Vec<OrderedF64>,
    pub grid_convention: GridConvention,
}

/// `f64` with `Eq` by bit pattern, so configs compare exactly.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderedF64(pub f64);

impl PartialEq for OrderedF64 {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for OrderedF64 {}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 2,
            group_prime: 3,
            m: 1,
            delta: 5,
            k_a: 2,
            k_b: 2,
            rho_target: Rho::new(1, 8),
            seed: 0,
            budgets: Budgets::default(),
            output_dir: PathBuf::from("out"),
            stages: Stage::ALL.to_vec(),
            ssexp_eps: vec![OrderedF64(0.02), OrderedF64(0.05), OrderedF64(0.1)],
            grid_convention: GridConvention::default(),
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rejects parameters where `gcd(|G| Δ², p) != 1`: then `Σ 1 = n = 0` in `F_p`
/// and the all-ones vector is a stabilizer rather than a logical.
pub fn coprimality_precheck(p: u32, group_prime: u64, m: u32, delta: usize) -> Result<u128> {
    let g = CongruenceGroup::new(group_prime, m)?;
    let order = g.order().ok_or_else(|| Error::Precondition(format!("group order {group_prime}^{} overflows", 3 * m)))?;
    let n = order
        .checked_mul((delta * delta) as u128)
        .ok_or_else(|| Error::Precondition("code length overflows".into()))?;
    let d = gcd(n, p as u128);
    if d != 1 {
        return Err(Error::Precondition(format!(
            "gcd(|G| Δ², p) = gcd({n}, {p}) = {d} != 1: the all-ones vector cannot be planted"
        )));
    }
    Ok(n)
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn has(&self, s: Stage) -> bool {
        self.stages.contains(&s)
    }

    /// Stages in execution order, without duplicates.
    pub fn ordered_stages(&self) -> Vec<Stage> {
        Stage::ALL.into_iter().filter(|s| self.has(*s)).collect()
    }

    /// Field, dimensions, stage closure and the coprimality precheck. Returns `n`.
    pub fn validate(&self) -> Result<u128> {
        crate::gf::PrimeField::new(self.p).map_err(|e| Error::Precondition(format!("field: {e}")))?;
        if self.delta < 2 {
            return Err(Error::Precondition(format!("delta = {} < 2", self.delta)));
        }
        for (name, k) in [("k_a", self.k_a), ("k_b", self.k_b)] {
            if k == 0 || k >= self.delta {
                return Err(Error::Precondition(format!("{name} = {k} outside [1, {}]", self.delta - 1)));
            }
        }
        for s in &self.stages {
            if let Some(r) = s.requires().iter().find(|r| !self.has(**r)) {
                return Err(Error::Precondition(format!("stage `{}` requires stage `{}`", s.label(), r.label())));
            }
        }
        if let Some(e) = self.ssexp_eps.iter().find(|e| !(e.0 > 0.0 && e.0 <= 1.0)) {
            return Err(Error::Precondition(format!("ssexp epsilon {} outside (0, 1]", e.0)));
        }
        coprimality_precheck(self.p, self.group_prime, self.m, self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips() {
        let c = RunConfig::default();
        let text = serde_json::to_string_pretty(&c).unwrap();
        assert!(text.contains("\"rho_target\": \"1/8\""));
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
        assert_eq!(c.validate().unwrap(), 675);
    }

    #[test]
    fn partial_config_uses_defaults() {
        let c = RunConfig::from_json(r#"{"seed": 9, "stages": ["expander"]}"#).unwrap();
        assert_eq!((c.seed, c.delta), (9, 5));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_json(r#"{"seeds": 1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"budgets": {"enumerate": 1}}"#).is_err());
    }

    #[test]
    fn coprimality_rejects_243_over_f3() {
        let c = RunConfig { p: 3, delta: 3, k_a: 1, k_b: 1, ..Default::default() };
        let e = c.validate().unwrap_err();
        assert!(matches!(&e, Error::Precondition(msg) if msg.contains("gcd(243, 3) = 3")), "{e}");
        assert!(e.is_precondition());
    }

    #[test]
    fn missing_dependency_rejected() {
        let c = RunConfig { stages: vec![Stage::Code, Stage::Inner], ..Default::default() };
        let e = c.validate().unwrap_err();
        assert!(e.to_string().contains("requires stage `expander`"));
    }
}
