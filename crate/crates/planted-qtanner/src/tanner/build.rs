use super::{CodeProvenance, Corner, CssCode, SquareCayleyComplex};
use crate::gf::FMatrix;
use crate::inner::InnerCodePair;
use crate::{par, Error, Result};

/// Checks supported on the local views of the given corners, one row per
/// vertex and pair of basis vectors `(α, β)`, with grid value `α_r β_c`.
fn local_checks(x: &SquareCayleyComplex, corners: [Corner; 2], alphas: &[Vec<u32>], betas: &[Vec<u32>], pair: &InnerCodePair) -> Result<FMatrix> {
    let f = pair.field();
    let d = x.delta();
    let per_vertex = alphas.len() * betas.len();
    let g = x.group_order();
    let blocks = par::map_range(2 * g, |k| {
        let (corner, v) = (corners[k / g], k % g);
        let view = x.local_view(corner, v);
        let mut trip = Vec::with_capacity(per_vertex * d * d);
        for (ai, a) in alphas.iter().enumerate() {
            for (bi, b) in betas.iter().enumerate() {
                let row = k * per_vertex + ai * betas.len() + bi;
                for r in 0..d {
                    for c in 0..d {
                        let val = f.mul(a[r], b[c]);
                        if val != 0 {
                            trip.push((row, view[r * d + c], val));
                        }
                    }
                }
            }
        }
        trip
    });
    FMatrix::from_triplets(f, 2 * g * per_vertex, x.num_faces(), blocks.into_iter().flatten())
}

/// `H_X` from `C_A ⊗ C_B` on the views of `V00 ⊔ V11`, `H_Z` from
/// `C_A^⊥ ⊗ C_B^⊥` on the views of `V01 ⊔ V10`. Rows are not reduced.
pub fn build_code(x: &SquareCayleyComplex, pair: &InnerCodePair) -> Result<CssCode> {
    if pair.delta != x.delta() {
        return Err(Error::DimensionMismatch(format!("inner codes of length {} on a complex of degree {}", pair.delta, x.delta())));
    }
    let hx = local_checks(x, [Corner::C00, Corner::C11], &pair.c_a.basis_rows(), &pair.c_b.basis_rows(), pair)?;
    let hz = local_checks(x, [Corner::C01, Corner::C10], &pair.c_a.dual().basis_rows(), &pair.c_b.dual().basis_rows(), pair)?;
    let g = x.group();
    CssCode::new(
        hx,
        hz,
        CodeProvenance::Tanner {
            group_prime: g.p(),
            m: g.m(),
            delta: x.delta(),
            k_a: pair.k_a(),
            k_b: pair.k_b(),
            convention: x.convention(),
        },
    )
}
