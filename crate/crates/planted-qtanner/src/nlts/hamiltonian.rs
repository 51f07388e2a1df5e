use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::bits::{kernel_masks, lex_key, masks, parity, syndrome, syndrome_weight, XorBasis};
use crate::tanner::CssCode;
use crate::{par, Error, Result};

/// Largest qubit count for dense Hamiltonian work.
pub const MAX_HAMILTONIAN_QUBITS: usize = 12;

/// `H = (1/4m_X) Σ_{x rows of H_X} (I - X^x) + (1/4m_Z) Σ_{z rows of H_Z} (I - Z^z)`,
/// stored as term lists; the dense matrix is built on demand.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeHamiltonian {
    pub n: usize,
    pub x_terms: Vec<u32>,
    pub z_terms: Vec<u32>,
}

pub fn build_code_hamiltonian(code: &CssCode) -> Result<CodeHamiltonian> {
    let n = code.n();
    if n > MAX_HAMILTONIAN_QUBITS {
        return Err(Error::budget("dense code Hamiltonian", format!("2^{n} x 2^{n}"), 1 << (2 * MAX_HAMILTONIAN_QUBITS)));
    }
    Ok(CodeHamiltonian {
        n,
        x_terms: masks(code.hx())?,
        z_terms: masks(code.hz())?,
    })
}

impl CodeHamiltonian {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `4 m_X m_Z H v` in exact integer arithmetic.
    pub fn apply_scaled(&self, v: &[i64]) -> Vec<i64> {
        let (mx, mz) = (self.x_terms.len() as i64, self.z_terms.len() as i64);
        let mut out = vec![0i64; v.len()];
        par::fill(&mut out, |u| {
            let u32u = u as u32;
            let xs: i64 = self.x_terms.iter().map(|&x| v[u] - v[(u32u ^ x) as usize]).sum();
            let zs: i64 = self.z_terms.iter().map(|&z| if parity(z & u32u) { 2 * v[u] } else { 0 }).sum();
            mz * xs + mx * zs
        });
        out
    }

    /// `H v` in floating point.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let (mx, mz) = (self.x_terms.len().max(1) as f64, self.z_terms.len().max(1) as f64);
        let mut out = vec![0.0; v.len()];
        par::fill(&mut out, |u| {
            let uu = u as u32;
            let xs: f64 = self.x_terms.iter().map(|&x| v[u] - v[(uu ^ x) as usize]).sum();
            let zs = self.z_terms.iter().filter(|&&z| parity(z & uu)).count() as f64 * 2.0 * v[u];
            xs / (4.0 * mx) + zs / (4.0 * mz)
        });
        out
    }

    /// Dense real symmetric matrix (all terms are real).
    pub fn matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for u in 0..d {
            let mut e = vec![0.0; d];
            e[u] = 1.0;
            for (r, x) in self.apply(&e).into_iter().enumerate() {
                m[(r, u)] = x;
            }
        }
        m
    }

    /// Ascending spectrum of the dense matrix.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Number of eigenvalues within `tol` of zero.
    pub fn null_dimension(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&x| x.abs() <= tol).count()
    }
}

/// The eigenbasis `X^{e_Z} Z^{e_X} |w + C_X^⊥⟩` indexed by syndrome
/// representatives and logical cosets.
#[derive(Clone, Debug)]
pub(crate) struct Sectors {
    pub n: usize,
    pub hx: Vec<u32>,
    pub hz: Vec<u32>,
    /// Lexicographically least vector per `H_X` syndrome.
    pub ex: Vec<u32>,
    /// Lexicographically least vector per `H_Z` syndrome.
    pub ez: Vec<u32>,
    /// Canonical representatives of `ker H_Z / rowspace H_X`.
    pub logical: Vec<u32>,
    pub stabilizers: Vec<u32>,
}

fn least_per_syndrome(rows: &[u32], n: usize) -> Vec<u32> {
    let mut best: BTreeMap<u128, u32> = BTreeMap::new();
    for y in 0u32..1 << n {
        let e = best.entry(syndrome(rows, y)).or_insert(y);
        if lex_key(y, n) < lex_key(*e, n) {
            *e = y;
        }
    }
    best.into_values().collect()
}

impl Sectors {
    pub fn of(code: &CssCode) -> Result<Self> {
        let n = code.n();
        if n > MAX_HAMILTONIAN_QUBITS {
            return Err(Error::budget("sector enumeration", format!("2^{n}"), 1 << MAX_HAMILTONIAN_QUBITS));
        }
        let (hx, hz) = (masks(code.hx())?, masks(code.hz())?);
        let stab = XorBasis::new(&hx);
        let kernel = XorBasis::new(&kernel_masks(code.hz())?).elements();
        let mut logical: Vec<u32> = kernel.iter().map(|&c| stab.reduce(c)).collect();
        logical.sort_unstable();
        logical.dedup();
        Ok(Sectors {
            n,
            ex: least_per_syndrome(&hx, n),
            ez: least_per_syndrome(&hz, n),
            logical,
            stabilizers: stab.elements(),
            hx,
            hz,
        })
    }

    /// Unnormalized `±1` amplitudes of `X^{e_Z} Z^{e_X} |w + C_X^⊥⟩`.
    pub fn state(&self, e_x: u32, e_z: u32, w: u32) -> Vec<i64> {
        let mut v = vec![0i64; 1 << self.n];
        for &s in &self.stabilizers {
            let u = w ^ s;
            v[(u ^ e_z) as usize] = if parity(e_x & u) { -1 } else { 1 };
        }
        v
    }

    /// `4 m_X m_Z` times the sector eigenvalue.
    pub fn scaled_energy(&self, e_x: u32, e_z: u32) -> i64 {
        let (mx, mz) = (self.hx.len() as i64, self.hz.len() as i64);
        2 * mz * syndrome_weight(&self.hx, e_x) as i64 + 2 * mx * syndrome_weight(&self.hz, e_z) as i64
    }

    pub fn energy(&self, e_x: u32, e_z: u32) -> Ratio<i64> {
        let (mx, mz) = (self.hx.len().max(1) as i64, self.hz.len().max(1) as i64);
        Ratio::new(syndrome_weight(&self.hx, e_x) as i64, 2 * mx) + Ratio::new(syndrome_weight(&self.hz, e_z) as i64, 2 * mz)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectorReport {
    pub n: usize,
    pub k: usize,
    /// Number of `(e_X, e_Z)` sectors.
    pub sectors: usize,
    /// Number of sector states. They are pairwise orthogonal (distinct
    /// stabilizer eigenvalues or disjoint supports), so this is the dimension
    /// they span and equals `2^n` when the sectors are complete.
    pub spanned_dimension: usize,
    /// Sectors whose state is not an eigenvector with the predicted value.
    pub violations: usize,
    /// Distinct eigenvalues with their multiplicities, as exact fractions.
    pub spectrum: Vec<(String, usize)>,
}

impl SectorReport {
    pub fn holds(&self) -> bool {
        self.violations == 0 && self.spanned_dimension == 1 << self.n
    }
}

/// Checks `H X^{e_Z} Z^{e_X} |w + C_X^⊥⟩ = (|H_X e_X|/2m_X + |H_Z e_Z|/2m_Z) X^{e_Z} Z^{e_X} |w + C_X^⊥⟩`
/// for every sector and logical coset, in integer arithmetic.
pub fn verify_sector_law(code: &CssCode, ham: &CodeHamiltonian) -> Result<SectorReport> {
    let s = Sectors::of(code)?;
    let mut violations = 0;
    let mut spectrum: BTreeMap<Ratio<i64>, usize> = BTreeMap::new();
    for &ex in &s.ex {
        for &ez in &s.ez {
            let lambda = s.scaled_energy(ex, ez);
            for &w in &s.logical {
                let v = s.state(ex, ez, w);
                let hv = ham.apply_scaled(&v);
                if hv.iter().zip(&v).any(|(a, b)| *a != lambda * b) {
                    violations += 1;
                }
            }
            *spectrum.entry(s.energy(ex, ez)).or_default() += s.logical.len();
        }
    }
    Ok(SectorReport {
        n: s.n,
        k: s.logical.len().trailing_zeros() as usize,
        sectors: s.ex.len() * s.ez.len(),
        spanned_dimension: s.ex.len() * s.ez.len() * s.logical.len(),
        violations,
        spectrum: spectrum.into_iter().map(|(r, m)| (r.to_string(), m)).collect(),
    })
}
