use serde::{Deserialize, Serialize};

use super::bits::{masks, syndrome_weight};
use crate::tanner::CssCode;
use crate::{par, Error, Result};

/// Default cap on `2^n` for exhaustive state enumeration.
pub const DEFAULT_STATE_CAP: u64 = 1 << 22;

/// `Z` pairs `H_Z` with the stabilizer `C_X^⊥ = rowspace H_X`; `X` pairs
/// `H_X` with `C_Z^⊥`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Z,
}

/// `G^ε = {y ∈ F_2^n : |H y| <= ε m}` with `(H, m) = (H_Z, m_Z)` for `Z` and
/// `(H_X, m_X)` for `X`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyndromeSet {
    pub basis: Basis,
    pub epsilon: f64,
    pub n: usize,
    /// Checks of this basis, as bitmasks.
    pub checks: Vec<u32>,
    /// Checks of the opposite basis; they span the stabilizer quotient.
    pub stabilizers: Vec<u32>,
    /// Largest admissible syndrome weight, `floor(ε m)`.
    pub max_syndrome_weight: usize,
    /// Sorted members.
    pub members: Vec<u32>,
}

pub fn enumerate_syndrome_set(code: &CssCode, basis: Basis, epsilon: f64) -> Result<SyndromeSet> {
    enumerate_syndrome_set_with_cap(code, basis, epsilon, DEFAULT_STATE_CAP)
}

pub fn enumerate_syndrome_set_with_cap(code: &CssCode, basis: Basis, epsilon: f64, cap: u64) -> Result<SyndromeSet> {
    let n = code.n();
    if n > 32 || (1u64 << n) > cap {
        return Err(Error::budget("syndrome set enumeration", format!("2^{n}"), cap));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::DomainError(format!("epsilon {epsilon} < 0")));
    }
    let (h, g) = match basis {
        Basis::Z => (code.hz(), code.hx()),
        Basis::X => (code.hx(), code.hz()),
    };
    let (checks, stabilizers) = (masks(h)?, masks(g)?);
    if checks.len() > 128 {
        return Err(Error::DomainError(format!("{} checks exceed the 128-bit syndrome encoding", checks.len())));
    }
    let max_w = (epsilon * checks.len() as f64 + 1e-9).floor() as usize;
    let members = par::map_chunks(1u64 << n, par::CHUNKS, |a, b| {
        (a..b).map(|y| y as u32).filter(|&y| syndrome_weight(&checks, y) <= max_w).collect::<Vec<u32>>()
    })
    .concat();
    Ok(SyndromeSet {
        basis,
        epsilon,
        n,
        checks,
        stabilizers,
        max_syndrome_weight: max_w,
        members,
    })
}

impl SyndromeSet {
    pub fn contains(&self, y: u32) -> bool {
        self.members.binary_search(&y).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FVector;

    #[test]
    fn extremes() {
        let c = CssCode::steane();
        assert_eq!(enumerate_syndrome_set(&c, Basis::Z, 1.0).unwrap().len(), 128);
        let zero = enumerate_syndrome_set(&c, Basis::Z, 0.0).unwrap();
        assert_eq!(zero.len(), 16);
        for &y in &zero.members {
            let v = FVector::new(c.field(), (0..7).map(|i| (y >> i) & 1).collect()).unwrap();
            assert!(c.hz().mul_vec(&v).is_zero());
        }
    }

    #[test]
    fn steane_third_matches_direct_syndromes() {
        let c = CssCode::steane();
        let s = enumerate_syndrome_set(&c, Basis::Z, 1.0 / 3.0).unwrap();
        for y in 0u32..128 {
            let v = FVector::new(c.field(), (0..7).map(|i| (y >> i) & 1).collect()).unwrap();
            assert_eq!(s.contains(y), c.hz().mul_vec(&v).weight() <= 1);
        }
        // Zero syndrome (16 vectors) plus each of the 3 weight-1 syndromes (16 each).
        assert_eq!(s.len(), 64);
    }

    #[test]
    fn cap_enforced() {
        assert!(enumerate_syndrome_set_with_cap(&CssCode::shor(), Basis::X, 0.5, 256).unwrap_err().is_budget());
    }
}
