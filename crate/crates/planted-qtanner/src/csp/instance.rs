use serde::{Deserialize, Serialize};

use crate::gf::{in_rowspace, FVector, PrimeField};
use crate::inner::InnerCodePair;
use crate::tanner::{Corner, CssCode, SquareCayleyComplex};
use crate::{Error, Result};

/// `Σ_k coeffs[k] y_{vars[k]} = rhs` over `F_p`; `vars` strictly increasing,
/// coefficients nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinConstraint {
    pub vars: Vec<usize>,
    pub coeffs: Vec<u32>,
    pub rhs: u32,
}

impl LinConstraint {
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn evaluate(&self, field: PrimeField, y: &[u32]) -> u32 {
        self.vars.iter().zip(&self.coeffs).fold(0, |acc, (&v, &c)| field.add(acc, field.mul(c, y[v])))
    }

    pub fn satisfied(&self, field: PrimeField, y: &[u32]) -> bool {
        self.evaluate(field, y) == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceProvenance {
    pub code: String,
    pub beta: String,
}

/// One constraint per code coordinate, one variable per `Z` check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinInstance {
    pub p: u32,
    /// Number of variables.
    pub m: usize,
    pub constraints: Vec<LinConstraint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<InstanceProvenance>,
}

impl LinInstance {
    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("instance field is prime")
    }

    pub fn max_arity(&self) -> usize {
        self.constraints.iter().map(LinConstraint::arity).max().unwrap_or(0)
    }

    pub fn satisfied_count(&self, y: &[u32]) -> usize {
        let f = self.field();
        self.constraints.iter().filter(|c| c.satisfied(f, y)).count()
    }

    /// Checks variable ranges, ordering and field membership.
    pub fn validate(&self) -> Result<()> {
        let f = PrimeField::new(self.p)?;
        for (i, c) in self.constraints.iter().enumerate() {
            let bad = c.vars.len() != c.coeffs.len()
                || c.vars.windows(2).any(|w| w[0] >= w[1])
                || c.vars.iter().any(|&v| v >= self.m)
                || c.coeffs.iter().any(|&a| a == 0 || !f.contains(a))
                || !f.contains(c.rhs);
            if bad {
                return Err(Error::Parse(format!("constraint {i} is malformed")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: LinInstance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }
}

fn describe(code: &CssCode) -> String {
    serde_json::to_string(code.provenance()).expect("provenance serializes")
}

/// Constraint `i` is column `i` of `H_Z` with right-hand side `β_i`. Requires
/// `β ∈ C_X \ C_Z^⊥`, so the system is inconsistent.
pub fn emit_lin_instance(code: &CssCode, beta: &FVector) -> Result<LinInstance> {
    let f = code.field();
    if beta.len() != code.n() || beta.field() != f {
        return Err(Error::BetaNotAdmissible(format!("beta has length {} over F_{}, code has n = {} over F_{}", beta.len(), beta.field().p(), code.n(), f.p())));
    }
    if !code.hx().mul_vec(beta).is_zero() {
        return Err(Error::BetaNotAdmissible("H_X beta != 0, so beta is not in C_X".into()));
    }
    if in_rowspace(code.hz(), beta) {
        return Err(Error::BetaNotAdmissible("beta lies in rowspace H_Z = C_Z^perp".into()));
    }
    let ht = code.hz().transpose();
    let constraints = (0..code.n())
        .map(|i| {
            let (vars, coeffs) = ht.row(i).into_iter().unzip();
            LinConstraint { vars, coeffs, rhs: beta.get(i) }
        })
        .collect();
    let beta_label = if beta.entries().iter().all(|&b| b == 1) { "one".to_string() } else { format!("{:?}", beta.entries()) };
    Ok(LinInstance {
        p: f.p(),
        m: code.m_z(),
        constraints,
        arity_bound: Some(code.locality()),
        provenance: Some(InstanceProvenance { code: describe(code), beta: beta_label }),
    })
}

/// [`emit_lin_instance`] with `β = 1`.
pub fn emit_planted_instance(code: &CssCode) -> Result<LinInstance> {
    emit_lin_instance(code, &FVector::ones(code.field(), code.n()))
}

/// Constraints of the planted instance of a Tanner code computed one at a
/// time from the complex and the inner codes: constraint `i` touches only the
/// two `Z`-check vertices of face `i`.
#[derive(Clone, Debug)]
pub struct ExplicitInstance {
    complex: SquareCayleyComplex,
    field: PrimeField,
    alphas: Vec<Vec<u32>>,
    betas: Vec<Vec<u32>>,
}

impl ExplicitInstance {
    pub fn new(complex: SquareCayleyComplex, pair: &InnerCodePair) -> Result<Self> {
        if pair.delta != complex.delta() {
            return Err(Error::DimensionMismatch(format!("inner codes of length {} on a complex of degree {}", pair.delta, complex.delta())));
        }
        Ok(ExplicitInstance {
            field: pair.field(),
            alphas: pair.c_a.dual().basis_rows(),
            betas: pair.c_b.dual().basis_rows(),
            complex,
        })
    }

    pub fn num_constraints(&self) -> usize {
        self.complex.num_faces()
    }

    pub fn num_vars(&self) -> usize {
        2 * self.complex.group_order() * self.alphas.len() * self.betas.len()
    }

    /// Column `i` of `H_Z` with right-hand side 1, in the row numbering of
    /// [`crate::tanner::build_code`].
    pub fn constraint(&self, i: usize) -> LinConstraint {
        let f = self.field;
        let g = self.complex.group_order();
        let per_vertex = self.alphas.len() * self.betas.len();
        let mut terms: Vec<(usize, u32)> = Vec::with_capacity(2 * per_vertex);
        for (ci, corner) in [Corner::C01, Corner::C10].into_iter().enumerate() {
            let v = self.complex.vertex_of(corner, i);
            let (r, c) = self.complex.position_in_view(corner, i);
            let base = (ci * g + v) * per_vertex;
            for (ai, a) in self.alphas.iter().enumerate() {
                for (bi, b) in self.betas.iter().enumerate() {
                    let val = f.mul(a[r], b[c]);
                    if val != 0 {
                        terms.push((base + ai * self.betas.len() + bi, val));
                    }
                }
            }
        }
        terms.sort_unstable();
        let (vars, coeffs) = terms.into_iter().unzip();
        LinConstraint { vars, coeffs, rhs: 1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expander::{symmetric_generators, SearchOptions};
    use crate::gf::FMatrix;
    use crate::inner::sample_planted_code;
    use crate::tanner::{build_code, build_complex, CodeProvenance, GridConvention};

    fn steane_beta() -> FVector {
        // The all-ones word is a Hamming codeword outside the simplex code.
        FVector::ones(PrimeField::binary(), 7)
    }

    #[test]
    fn constraints_are_columns_of_hz() {
        let c = CssCode::steane();
        let inst = emit_lin_instance(&c, &steane_beta()).unwrap();
        assert_eq!(inst.m, 3);
        assert_eq!(inst.constraints.len(), 7);
        // Column i of the Hamming check is the binary expansion of i + 1.
        for (i, con) in inst.constraints.iter().enumerate() {
            let expect: Vec<usize> = (0..3).filter(|b| (i + 1) >> b & 1 == 1).collect();
            assert_eq!(con.vars, expect);
            assert!(con.coeffs.iter().all(|&a| a == 1));
            assert_eq!(con.rhs, 1);
        }
        assert!(inst.max_arity() <= c.locality());
    }

    #[test]
    fn zero_beta_rejected() {
        let c = CssCode::steane();
        let e = emit_lin_instance(&c, &FVector::zeros(PrimeField::binary(), 7)).unwrap_err();
        assert!(matches!(e, Error::BetaNotAdmissible(_)));
        // A vector outside C_X is rejected as well.
        let e = emit_lin_instance(&c, &FVector::unit(PrimeField::binary(), 7, 0)).unwrap_err();
        assert!(matches!(e, Error::BetaNotAdmissible(_)));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let inst = emit_planted_instance(&CssCode::steane()).unwrap();
        let text = serde_json::to_string(&inst).unwrap();
        assert!(text.starts_with("{\"p\":2,\"m\":3,\"constraints\":[{\"vars\":[0],\"coeffs\":[1],\"rhs\":1}"));
        assert_eq!(LinInstance::from_json(&text).unwrap(), inst);
        let bad = text.replacen("\"vars\":[0]", "\"vars\":[5]", 1);
        assert!(LinInstance::from_json(&bad).is_err());
    }

    #[test]
    fn explicit_accessor_matches_transpose() {
        let s = symmetric_generators(3, 1, 4, 0, &SearchOptions::default()).unwrap().generators;
        for conv in [GridConvention::NeighborMove, GridConvention::Direct] {
            let x = build_complex(&s, &s, conv).unwrap();
            let c_a = sample_planted_code(5, 4, 2, 5).unwrap();
            let c_b = sample_planted_code(5, 4, 2, 6).unwrap().dual();
            let pair = InnerCodePair::new(c_a, c_b).unwrap();
            let code = build_code(&x, &pair).unwrap();
            let inst = emit_planted_instance(&code).unwrap();
            let ex = ExplicitInstance::new(x, &pair).unwrap();
            assert_eq!(ex.num_vars(), inst.m);
            assert_eq!(ex.num_constraints(), inst.constraints.len());
            for (i, con) in inst.constraints.iter().enumerate() {
                assert_eq!(&ex.constraint(i), con, "constraint {i}");
            }
        }
    }

    #[test]
    fn custom_code_instance() {
        let f = PrimeField::binary();
        let hz = FMatrix::from_dense_rows(f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let hx = FMatrix::from_dense_rows(f, 3, &[vec![1, 1, 1]]).unwrap();
        // H_X H_Z^T = (0, 0), so this is a CSS code; beta = 1 fails H_X beta = 0 since 3 is odd.
        let c = CssCode::new(hx, hz, CodeProvenance::Imported { name: "tiny".into() }).unwrap();
        assert!(emit_planted_instance(&c).is_err());
    }
}
