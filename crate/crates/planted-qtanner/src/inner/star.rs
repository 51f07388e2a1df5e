use std::collections::HashSet;

use super::q_entropy_inv;
use crate::gf::{enumeration_budget, rref_rows, LinearCode};
use crate::{Error, Result};

/// `α = H_p^{-1}(r / 8n)` with `r = n - dim C`.
pub fn property_star_alpha(code: &LinearCode) -> Result<f64> {
    let n = code.len();
    if n == 0 {
        return Ok(0.0);
    }
    let r = n - code.dim();
    q_entropy_inv(r as f64 / (8.0 * n as f64), code.field().p())
}

/// Property (*) at the threshold [`property_star_alpha`]. For `n <= 10` the
/// threshold admits no nonzero vector, so the check is vacuously true there.
pub fn property_star_check(code: &LinearCode) -> Result<bool> {
    property_star_check_with_alpha(code, property_star_alpha(code)?, enumeration_budget())
}

/// True iff `2 dim(C ∩ V) < m` for every `m`-dimensional `V`, `1 <= m <= n - dim C`,
/// spanned by vectors of weight at most `αn`. Subspaces are grown one
/// sparse vector at a time and deduplicated by their reduced echelon basis.
pub fn property_star_check_with_alpha(code: &LinearCode, alpha: f64, budget: u64) -> Result<bool> {
    let (f, n, k) = (code.field(), code.len(), code.dim());
    let r = n - k;
    let wmax = (alpha * n as f64 + 1e-9).floor().max(0.0) as usize;
    if r == 0 || wmax == 0 {
        return Ok(true);
    }
    let sparse = sparse_vectors(f.p(), n, wmax.min(n), budget)?;
    let code_rows = code.basis_rows();
    let mut visited: u64 = 0;
    let mut level: HashSet<Vec<Vec<u32>>> = HashSet::from([Vec::new()]);
    for m in 1..=r {
        let mut next: HashSet<Vec<Vec<u32>>> = HashSet::new();
        for v in &level {
            for s in &sparse {
                let mut rows = v.clone();
                rows.push(s.clone());
                let red = rref_rows(f, n, rows);
                if red.rank() != m || next.contains(&red.rows) {
                    continue;
                }
                visited += 1;
                if visited > budget {
                    return Err(Error::budget("sparse subspace enumeration", format!("> {budget}"), budget));
                }
                let union = rref_rows(f, n, [code_rows.clone(), red.rows.clone()].concat()).rank();
                if 2 * (k + m - union) >= m {
                    return Ok(false);
                }
                next.insert(red.rows);
            }
        }
        level = next;
    }
    Ok(true)
}

/// Nonzero vectors of weight `<= w` with first nonzero entry 1.
fn sparse_vectors(p: u32, n: usize, w: usize, budget: u64) -> Result<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<u32>, usize, usize)> = vec![(vec![0; n], 0, 0)];
    while let Some((v, pos, wt)) = stack.pop() {
        if wt > 0 {
            out.push(v.clone());
            if out.len() as u64 > budget {
                return Err(Error::budget("sparse vector enumeration", format!("> {budget}"), budget));
            }
        }
        if wt == w {
            continue;
        }
        for i in pos..n {
            let vals = if wt == 0 { 1..2 } else { 1..p };
            for val in vals {
                let mut u = v.clone();
                u[i] = val;
                stack.push((u, i + 1, wt + 1));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{PrimeField, RowSpace, FMatrix};

    fn f2() -> PrimeField {
        PrimeField::binary()
    }

    /// Every subset of sparse vectors of size `<= r`, spanned directly.
    fn oracle(code: &LinearCode, wmax: usize) -> bool {
        let n = code.len();
        let r = n - code.dim();
        let sparse: Vec<Vec<u32>> = (1u32..1 << n)
            .filter(|v| v.count_ones() as usize <= wmax)
            .map(|v| (0..n).map(|i| (v >> i) & 1).collect())
            .collect();
        let s = sparse.len();
        for mask in 1u64..1 << s {
            if mask.count_ones() as usize > r {
                continue;
            }
            let rows: Vec<Vec<u32>> = (0..s).filter(|i| mask >> i & 1 == 1).map(|i| sparse[i].clone()).collect();
            let v = FMatrix::from_dense_rows(f2(), n, &rows).unwrap();
            let m = RowSpace::of(&v).rank();
            if m == 0 || m > r {
                continue;
            }
            let both = RowSpace::of(&v.vstack(code.basis()).unwrap()).rank();
            if 2 * (code.dim() + m - both) >= m {
                return false;
            }
        }
        true
    }

    #[test]
    fn full_space_is_vacuous() {
        assert!(property_star_check(&LinearCode::full(f2(), 6)).unwrap());
        assert!(property_star_check_with_alpha(&LinearCode::full(f2(), 6), 1.0, 1 << 20).unwrap());
    }

    #[test]
    fn small_lengths_have_empty_threshold() {
        let c = LinearCode::from_generators(f2(), 6, &[vec![1, 0, 0, 0, 0, 0]]).unwrap();
        assert!(property_star_alpha(&c).unwrap() * 6.0 < 1.0);
        assert!(property_star_check(&c).unwrap());
    }

    #[test]
    fn sparse_codeword_fails_at_dimension_one() {
        let c = LinearCode::from_generators(f2(), 6, &[vec![1, 1, 0, 0, 0, 0]]).unwrap();
        assert!(!property_star_check_with_alpha(&c, 2.0 / 6.0, 1 << 20).unwrap());
    }

    #[test]
    fn matches_subset_oracle() {
        let zero = LinearCode::zero(f2(), 4);
        assert!(property_star_check_with_alpha(&zero, 0.5, 1 << 20).unwrap());
        assert!(oracle(&zero, 2));
        let codes = [
            LinearCode::repetition(f2(), 4),
            LinearCode::from_generators(f2(), 4, &[vec![1, 1, 1, 0]]).unwrap(),
            LinearCode::from_generators(f2(), 4, &[vec![1, 1, 1, 0], vec![0, 1, 1, 1]]).unwrap(),
            LinearCode::from_generators(f2(), 5, &[vec![1, 1, 1, 0, 0], vec![0, 0, 1, 1, 1]]).unwrap(),
            LinearCode::from_generators(f2(), 5, &[vec![1, 1, 0, 1, 1]]).unwrap(),
        ];
        for c in &codes {
            for wmax in 1..=3 {
                let alpha = wmax as f64 / c.len() as f64;
                assert_eq!(property_star_check_with_alpha(c, alpha, 1 << 20).unwrap(), oracle(c, wmax), "{c:?} w={wmax}");
            }
        }
    }
}
