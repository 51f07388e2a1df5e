use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::rng::rng;
use crate::{Error, Result};

type CMatrix = DMatrix<Complex64>;

/// Tolerance on the operator preconditions.
const OPERATOR_TOL: f64 = 1e-12;
/// Slack on the trace bound.
const BOUND_TOL: f64 = 1e-9;

/// `1/2 + 1/(2√2)`.
pub fn uncertainty_bound() -> f64 {
    0.5 + 0.5 * std::f64::consts::FRAC_1_SQRT_2
}

fn require(what: &str, norm: f64, tol: f64) -> Result<()> {
    if norm.is_finite() && norm <= tol {
        Ok(())
    } else {
        Err(Error::PreconditionViolated { what: what.into(), norm })
    }
}

/// For Hermitian involutions `A`, `B` with `AB + BA = 0` and a density
/// operator `ρ`: whether `min(|Tr Aρ|, |Tr Bρ|) <= 1/2 + 1/(2√2)`.
pub fn uncertainty_check(a: &CMatrix, b: &CMatrix, rho: &CMatrix) -> Result<bool> {
    let d = a.nrows();
    for (name, m) in [("A", a), ("B", b), ("rho", rho)] {
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch(format!("{name} is {}x{}, expected {d}x{d}", m.nrows(), m.ncols())));
        }
    }
    let id = CMatrix::identity(d, d);
    require("A is not Hermitian", (a - a.adjoint()).norm(), OPERATOR_TOL)?;
    require("B is not Hermitian", (b - b.adjoint()).norm(), OPERATOR_TOL)?;
    require("A^2 != I", (a * a - &id).norm(), OPERATOR_TOL)?;
    require("B^2 != I", (b * b - &id).norm(), OPERATOR_TOL)?;
    require("AB + BA != 0", (a * b + b * a).norm(), OPERATOR_TOL)?;
    require("rho is not Hermitian", (rho - rho.adjoint()).norm(), BOUND_TOL)?;
    require("Tr rho != 1", (rho.trace() - Complex64::new(1.0, 0.0)).norm(), BOUND_TOL)?;
    let ta = (a * rho).trace().norm();
    let tb = (b * rho).trace().norm();
    Ok(ta.min(tb) <= uncertainty_bound() + BOUND_TOL)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UncertaintyStats {
    pub trials: u64,
    pub violations: u64,
    /// Largest `min(|Tr Aρ|, |Tr Bρ|)` seen.
    pub max_min_trace: f64,
}

fn gaussian(r: &mut impl Rng, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal)))
}

/// Haar unitary: QR of a complex Gaussian matrix with the phases of `R`'s
/// diagonal moved into `Q`.
fn haar_unitary(r: &mut impl Rng, d: usize) -> CMatrix {
    let qr = gaussian(r, d).qr();
    let (mut q, rr) = (qr.q(), qr.r());
    for j in 0..d {
        let z = rr[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Trials with `A = U(X ⊗ I)U†`, `B = U(Z ⊗ I)U†` on one qubit times a
/// `dim`-dimensional ancilla and random density operators of random rank.
pub fn random_uncertainty_trials(trials: u64, ancilla_dim: usize, seed: u64) -> Result<UncertaintyStats> {
    let mut r = rng(seed);
    let c = |x: f64| Complex64::new(x, 0.0);
    let px = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let pz = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let id = CMatrix::identity(ancilla_dim.max(1), ancilla_dim.max(1));
    let (x0, z0) = (kron(&px, &id), kron(&pz, &id));
    let d = x0.nrows();
    let mut stats = UncertaintyStats {
        trials,
        violations: 0,
        max_min_trace: 0.0,
    };
    for _ in 0..trials {
        let u = haar_unitary(&mut r, d);
        let a = &u * &x0 * u.adjoint();
        let b = &u * &z0 * u.adjoint();
        // Symmetrize away rounding so the Hermitian preconditions hold to 1e-12.
        let a = (&a + a.adjoint()) * c(0.5);
        let b = (&b + b.adjoint()) * c(0.5);
        let rank = r.random_range(1..=d);
        let g = CMatrix::from_fn(d, rank, |_, _| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal)));
        let rho = &g * g.adjoint();
        let rho = &rho / rho.trace();
        if !uncertainty_check(&a, &b, &rho)? {
            stats.violations += 1;
        }
        let m = (&a * &rho).trace().norm().min((&b * &rho).trace().norm());
        stats.max_min_trace = stats.max_min_trace.max(m);
    }
    Ok(stats)
}
