use serde::{Deserialize, Serialize};

use super::LinInstance;
use crate::gf::{kernel_basis, solve, FMatrix, FVector};
use crate::Result;

/// Either a satisfying assignment or weights `w` on the constraints with
/// `Σ_i w_i a_i = 0` and `Σ_i w_i b_i = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsatCertificate {
    pub inconsistent: bool,
    /// Constraint weights of the contradictory combination.
    pub certificate: Option<Vec<u32>>,
    pub witness: Option<Vec<u32>>,
}

impl UnsatCertificate {
    /// Recomputes the certificate or witness against `instance`.
    pub fn check(&self, instance: &LinInstance) -> bool {
        let f = instance.field();
        match (&self.certificate, &self.witness) {
            (Some(w), None) if self.inconsistent => {
                let mut lhs = vec![0u32; instance.m];
                let mut rhs = 0;
                for (c, &wi) in instance.constraints.iter().zip(w) {
                    for (&v, &a) in c.vars.iter().zip(&c.coeffs) {
                        lhs[v] = f.add(lhs[v], f.mul(wi, a));
                    }
                    rhs = f.add(rhs, f.mul(wi, c.rhs));
                }
                w.len() == instance.constraints.len() && lhs.iter().all(|&x| x == 0) && rhs == 1
            }
            (None, Some(y)) if !self.inconsistent => y.len() == instance.m && instance.satisfied_count(y) == instance.constraints.len(),
            _ => false,
        }
    }
}

fn system(instance: &LinInstance) -> Result<(FMatrix, FVector)> {
    let f = instance.field();
    let trip = instance
        .constraints
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.vars.iter().zip(&c.coeffs).map(move |(&v, &a)| (i, v, a)));
    let a = FMatrix::from_triplets(f, instance.constraints.len(), instance.m, trip)?;
    let b = FVector::new(f, instance.constraints.iter().map(|c| c.rhs).collect())?;
    Ok((a, b))
}

/// Decides consistency of `A y = b` by elimination. An inconsistent system
/// gets a vector of `ker A^T` normalized to pair with `b` to 1.
pub fn certify_unsat(instance: &LinInstance) -> Result<UnsatCertificate> {
    instance.validate()?;
    let (a, b) = system(instance)?;
    if let Some(y) = solve(&a, &b) {
        return Ok(UnsatCertificate {
            inconsistent: false,
            certificate: None,
            witness: Some(y.into_entries()),
        });
    }
    let f = instance.field();
    let left = kernel_basis(&a.transpose());
    let w = (0..left.rows())
        .map(|r| left.row_vector(r))
        .find(|w| w.dot(&b) != 0)
        .expect("an inconsistent system has a left-kernel vector pairing nonzero with b");
    let w = w.scale(f.inv(w.dot(&b)));
    Ok(UnsatCertificate {
        inconsistent: true,
        certificate: Some(w.into_entries()),
        witness: None,
    })
}
