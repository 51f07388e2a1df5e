use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::RegularGraph;
use crate::rng::rng;
use crate::{par, Error, Result};
use rand::Rng;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralOptions {
    /// Largest vertex count handled by dense diagonalization.
    pub dense_limit: usize,
    /// Largest vertex count handled by power iteration.
    pub iterative_limit: usize,
    /// Relative tolerance of the iterative path.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            dense_limit: 5000,
            iterative_limit: 1_000_000,
            tolerance: 1e-9,
            max_iterations: 20_000,
            seed: 0,
        }
    }
}

/// `λ = max |μ|` over adjacency eigenvalues `μ` other than the trivial `Δ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralReport {
    pub vertices: usize,
    pub degree: usize,
    pub lambda: f64,
    /// `λ/Δ`.
    pub ratio: f64,
    /// Largest nontrivial eigenvalue, signed.
    pub second_eigenvalue: f64,
    pub smallest_eigenvalue: f64,
    /// `λ <= 2 sqrt(Δ - 1)`.
    pub ramanujan: bool,
    pub method: String,
    pub tolerance: f64,
}

fn adjacency(g: &impl RegularGraph) -> DMatrix<f64> {
    let n = g.num_vertices();
    let mut a = DMatrix::zeros(n, n);
    for v in 0..n {
        for i in 0..g.degree() {
            a[(v, g.neighbor(v, i))] += 1.0;
        }
    }
    a
}

/// Full adjacency spectrum in ascending order. Requires a symmetric adjacency.
pub fn spectrum(g: &impl RegularGraph) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(adjacency(g)).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn report(n: usize, d: usize, lambda: f64, second: f64, smallest: f64, method: &str, tol: f64) -> SpectralReport {
    SpectralReport {
        vertices: n,
        degree: d,
        lambda,
        ratio: if d == 0 { 0.0 } else { lambda / d as f64 },
        second_eigenvalue: second,
        smallest_eigenvalue: smallest,
        ramanujan: d >= 1 && lambda <= 2.0 * ((d as f64 - 1.0).max(0.0)).sqrt() + tol,
        method: method.into(),
        tolerance: tol,
    }
}

pub fn spectral_expansion(g: &impl RegularGraph, opts: &SpectralOptions) -> Result<SpectralReport> {
    let (n, d) = (g.num_vertices(), g.degree());
    if n == 0 {
        return Err(Error::DomainError("empty graph".into()));
    }
    if n <= opts.dense_limit {
        let mut ev = spectrum(g);
        if n == 1 {
            return Ok(report(1, d, 0.0, 0.0, 0.0, "dense", 1e-9));
        }
        let trivial = (0..n)
            .min_by(|&i, &j| (ev[i] - d as f64).abs().total_cmp(&(ev[j] - d as f64).abs()))
            .expect("nonempty");
        ev.remove(trivial);
        let second = *ev.last().expect("n >= 2");
        let smallest = ev[0];
        let lambda = second.abs().max(smallest.abs());
        return Ok(report(n, d, lambda, second, smallest, "dense", 1e-9));
    }
    if n > opts.iterative_limit {
        return Err(Error::budget("power iteration", n, opts.iterative_limit as u64));
    }
    let sq = power(g, opts, Op::Square)?;
    let top = power(g, opts, Op::Shift(d as f64))? - d as f64;
    let bottom = d as f64 - power(g, opts, Op::Reflect(d as f64))?;
    let lambda = sq.max(0.0).sqrt().max(top.abs()).max(bottom.abs());
    Ok(report(n, d, lambda, top, bottom, "power", opts.tolerance.sqrt()))
}

#[derive(Clone, Copy)]
enum Op {
    /// `A^2`.
    Square,
    /// `A + sI`.
    Shift(f64),
    /// `sI - A`.
    Reflect(f64),
}

fn apply_adj(g: &impl RegularGraph, x: &[f64], out: &mut [f64]) {
    par::fill(out, |v| (0..g.degree()).map(|i| x[g.neighbor(v, i)]).sum());
}

fn deflate(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

/// Top eigenvalue of `op` restricted to the complement of the constant vector.
/// Every operator here is positive semidefinite there, so the Rayleigh
/// quotient increases monotonically to the top eigenvalue.
fn power(g: &impl RegularGraph, opts: &SpectralOptions, op: Op) -> Result<f64> {
    let n = g.num_vertices();
    let mut r = rng(opts.seed);
    let mut x: Vec<f64> = (0..n).map(|_| r.random::<f64>() - 0.5).collect();
    deflate(&mut x);
    if normalize(&mut x) == 0.0 {
        return Ok(0.0);
    }
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut prev = f64::NAN;
    for it in 0..opts.max_iterations {
        apply_adj(g, &x, &mut y);
        match op {
            Op::Square => {
                apply_adj(g, &y, &mut z);
                std::mem::swap(&mut y, &mut z);
            }
            Op::Shift(s) => y.iter_mut().zip(&x).for_each(|(a, b)| *a += s * b),
            Op::Reflect(s) => y.iter_mut().zip(&x).for_each(|(a, b)| *a = s * b - *a),
        }
        deflate(&mut y);
        let est: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        if (est - prev).abs() <= opts.tolerance * est.abs().max(1.0) {
            return Ok(est);
        }
        prev = est;
        if normalize(&mut y) == 0.0 {
            return Ok(0.0);
        }
        std::mem::swap(&mut x, &mut y);
        if it + 1 == opts.max_iterations {
            return Err(Error::ConvergenceFailure { iterations: it + 1, residual: (est - prev).abs() });
        }
    }
    Err(Error::ConvergenceFailure { iterations: opts.max_iterations, residual: f64::NAN })
}

#[cfg(test)]
mod tests {
    use super::super::{default_generators, CayleyMultigraph, Circulant, NeighborTable};
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cycle_spectrum_matches_cosines() {
        for n in [5usize, 8, 13] {
            let got = spectrum(&Circulant::cycle(n));
            let mut want: Vec<f64> = (0..n).map(|k| 2.0 * (2.0 * PI * k as f64 / n as f64).cos()).collect();
            want.sort_by(f64::total_cmp);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-9);
            }
            let r = spectral_expansion(&Circulant::cycle(n), &SpectralOptions::default()).unwrap();
            let mut nontrivial = want.clone();
            nontrivial.pop();
            assert!((r.second_eigenvalue - nontrivial.last().unwrap()).abs() < 1e-9);
            let abs = nontrivial.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!((r.lambda - abs).abs() < 1e-9);
        }
    }

    #[test]
    fn complete_graph_spectrum() {
        let r = spectral_expansion(&Circulant::complete(7), &SpectralOptions::default()).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-9);
        assert!((r.second_eigenvalue + 1.0).abs() < 1e-9);
        assert!(r.ramanujan);
    }

    #[test]
    fn identity_generator_shifts_spectrum_by_one() {
        let s = default_generators(3, 1, 6, 3).unwrap();
        let base = spectrum(&CayleyMultigraph::new(s.clone()).table(1 << 20).unwrap());
        let padded = spectrum(&CayleyMultigraph::new(s.with_identity()).table(1 << 20).unwrap());
        for (a, b) in base.iter().zip(&padded) {
            assert!((b - a - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn level_one_graph_expands() {
        let s = default_generators(3, 1, 6, 0).unwrap();
        let r = spectral_expansion(&CayleyMultigraph::new(s).table(1 << 20).unwrap(), &SpectralOptions::default()).unwrap();
        assert!(r.lambda < 6.0 - 1e-6);
    }

    #[test]
    fn power_iteration_agrees_with_dense() {
        let s = default_generators(3, 2, 6, 0).unwrap();
        let t: NeighborTable = CayleyMultigraph::new(s).table(1 << 20).unwrap();
        let dense = spectral_expansion(&t, &SpectralOptions::default()).unwrap();
        let opts = SpectralOptions { dense_limit: 0, tolerance: 1e-12, max_iterations: 200_000, ..Default::default() };
        let it = spectral_expansion(&t, &opts).unwrap();
        assert_eq!(it.method, "power");
        assert!((it.lambda - dense.lambda).abs() < 1e-3, "{} vs {}", it.lambda, dense.lambda);
    }
}
