use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::bits::{kernel_masks, masks, parity, syndrome_weight, XorBasis};
use super::hamiltonian::Sectors;
use super::{Basis, ClusterPartition};
use crate::rng::rng;
use crate::tanner::CssCode;
use crate::{par, Error, Result};

/// `1/4 - 1/(4√2)`: the spread guaranteed for pure low-energy states.
pub const MU_PRIME: f64 = 0.25 - 0.25 * std::f64::consts::FRAC_1_SQRT_2;
/// The spread constant stated for mixed low-energy states.
pub const MU_THEOREM: f64 = 0.02;

/// Amplitudes over the computational basis, index `y` = bitmask; or a density
/// matrix given by rows. Serializes as nested `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantumState {
    Pure(Vec<Complex64>),
    Mixed(Vec<Vec<Complex64>>),
}

impl QuantumState {
    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Pure(v) => v.len(),
            QuantumState::Mixed(rows) => rows.len(),
        }
    }

    /// Pure components with their weights; a density matrix is split along
    /// its eigenvectors, dropping weights below `1e-14`.
    pub fn ensemble(&self) -> Vec<(f64, Vec<Complex64>)> {
        match self {
            QuantumState::Pure(v) => {
                let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
                vec![(1.0, v.iter().map(|a| a / norm.sqrt()).collect())]
            }
            QuantumState::Mixed(rows) => {
                let d = rows.len();
                let m = DMatrix::from_fn(d, d, |r, c| rows[r][c]);
                let eig = SymmetricEigen::new(m);
                let trace: f64 = eig.eigenvalues.iter().sum();
                (0..d)
                    .filter(|&i| eig.eigenvalues[i] / trace > 1e-14)
                    .map(|i| (eig.eigenvalues[i] / trace, eig.eigenvectors.column(i).iter().copied().collect()))
                    .collect()
            }
        }
    }
}

/// Anticommuting logical representatives: `x ∈ ker H_X \ rowspace H_Z`,
/// `z ∈ ker H_Z \ rowspace H_X`, `x · z = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Logicals {
    pub x: u32,
    pub z: u32,
}

/// First kernel vector of `H_Z` outside `rowspace H_X`, then the first kernel
/// vector of `H_X` pairing to 1 with it. Requires `k >= 1`.
pub fn compute_logicals(code: &CssCode) -> Result<Logicals> {
    let (hx, hz) = (masks(code.hx())?, masks(code.hz())?);
    let (sx, sz) = (XorBasis::new(&hx), XorBasis::new(&hz));
    let z = kernel_masks(code.hz())?
        .into_iter()
        .find(|&c| !sx.contains(c))
        .ok_or_else(|| Error::DomainError("code has no logical qubit".into()))?;
    let x = kernel_masks(code.hx())?
        .into_iter()
        .find(|&c| parity(c & z))
        .ok_or_else(|| Error::DomainError("no X logical anticommutes with the Z logical".into()))?;
    debug_assert!(!sz.contains(x));
    Ok(Logicals { x, z })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SpreadOptions {
    /// Slack on mass thresholds.
    pub tolerance: f64,
    /// Relative separation `δ`; the verdict requires `dis(S^0, S^1) >= δ n`.
    pub delta: Option<f64>,
}

impl Default for SpreadOptions {
    fn default() -> Self {
        SpreadOptions {
            tolerance: 1e-9,
            delta: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpreadReport {
    pub basis: Basis,
    /// Outcomes whose decoded logical value is 0, sorted.
    pub s0: Vec<u32>,
    pub s1: Vec<u32>,
    pub mass0: f64,
    pub mass1: f64,
    /// Mass on the syndrome set; 1 for states in the low-energy subspace.
    pub support_mass: f64,
    /// Minimum Hamming distance between `S^0` and `S^1`.
    pub separation: Option<usize>,
    pub spread_mu_prime: bool,
    pub spread_mu: bool,
    pub separated: Option<bool>,
}

impl SpreadReport {
    pub fn min_mass(&self) -> f64 {
        self.mass0.min(self.mass1)
    }
}

fn walsh_hadamard(v: &mut [Complex64]) {
    let d = v.len();
    let mut h = 1;
    while h < d {
        for i in (0..d).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
    let s = 1.0 / (d as f64).sqrt();
    v.iter_mut().for_each(|a| *a *= s);
}

/// `(D_X, D_Z)` of a pure state.
fn distributions(v: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    let dz = v.iter().map(|a| a.norm_sqr()).collect();
    let mut w = v.to_vec();
    walsh_hadamard(&mut w);
    (w.iter().map(|a| a.norm_sqr()).collect(), dz)
}

fn min_distance(a: &[u32], b: &[u32]) -> Option<usize> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    par::map_slice(a, |&x| b.iter().map(|&y| (x ^ y).count_ones() as usize).min().unwrap_or(usize::MAX))
        .into_iter()
        .min()
}

struct Split {
    s0: Vec<u32>,
    s1: Vec<u32>,
    separation: Option<usize>,
}

fn split(partition: &ClusterPartition, logical: u32) -> Split {
    let (mut s0, mut s1) = (Vec::new(), Vec::new());
    for &y in &partition.syndrome_set().members {
        let decoded = partition.decode(y).expect("every syndrome in the set has a representative");
        if parity(decoded & logical) {
            s1.push(y);
        } else {
            s0.push(y);
        }
    }
    let separation = min_distance(&s0, &s1);
    Split { s0, s1, separation }
}

fn report(basis: Basis, sp: &Split, partition: &ClusterPartition, dist: &[f64], n: usize, opts: &SpreadOptions) -> SpreadReport {
    let mass = |s: &[u32]| s.iter().map(|&y| dist[y as usize]).sum::<f64>();
    let (mass0, mass1) = (mass(&sp.s0), mass(&sp.s1));
    let support_mass = mass(&partition.syndrome_set().members);
    let spread = |mu: f64| mass0 >= mu - opts.tolerance && mass1 >= mu - opts.tolerance;
    SpreadReport {
        basis,
        s0: sp.s0.clone(),
        s1: sp.s1.clone(),
        mass0,
        mass1,
        support_mass,
        separation: sp.separation,
        spread_mu_prime: spread(MU_PRIME),
        spread_mu: spread(MU_THEOREM),
        separated: opts.delta.map(|d| sp.separation.is_some_and(|s| s as f64 >= d * n as f64 - opts.tolerance)),
    }
}

fn check_inputs(state: &QuantumState, code: &CssCode, px: &ClusterPartition, pz: &ClusterPartition, logicals: &Logicals) -> Result<()> {
    let n = code.n();
    if n > super::hamiltonian::MAX_HAMILTONIAN_QUBITS {
        return Err(Error::budget("dense state", format!("2^{n}"), 1 << super::hamiltonian::MAX_HAMILTONIAN_QUBITS));
    }
    if state.dim() != 1 << n {
        return Err(Error::StateDimensionMismatch {
            expected: 1 << n,
            got: state.dim(),
        });
    }
    if let QuantumState::Mixed(rows) = state {
        if let Some(r) = rows.iter().find(|r| r.len() != rows.len()) {
            return Err(Error::StateDimensionMismatch {
                expected: rows.len(),
                got: r.len(),
            });
        }
    }
    if px.basis != Basis::X || pz.basis != Basis::Z || px.n != n || pz.n != n {
        return Err(Error::DomainError("partitions must be the X and Z partitions of this code".into()));
    }
    let (hx, hz) = (masks(code.hx())?, masks(code.hz())?);
    if syndrome_weight(&hx, logicals.x) != 0 || syndrome_weight(&hz, logicals.z) != 0 || !parity(logicals.x & logicals.z) {
        return Err(Error::DomainError("logicals must be anticommuting kernel vectors".into()));
    }
    Ok(())
}

/// Exact measurement distributions in both bases, with masses on the
/// decoded-logical halves `S^b` of each syndrome set. Returns `(X, Z)` reports.
pub fn measure_spread(
    state: &QuantumState,
    code: &CssCode,
    partition_x: &ClusterPartition,
    partition_z: &ClusterPartition,
    logicals: &Logicals,
    opts: &SpreadOptions,
) -> Result<(SpreadReport, SpreadReport)> {
    check_inputs(state, code, partition_x, partition_z, logicals)?;
    let n = code.n();
    let d = 1usize << n;
    let (mut dx, mut dz) = (vec![0.0; d], vec![0.0; d]);
    for (w, v) in state.ensemble() {
        let (px, pz) = distributions(&v);
        dx.iter_mut().zip(px).for_each(|(a, b)| *a += w * b);
        dz.iter_mut().zip(pz).for_each(|(a, b)| *a += w * b);
    }
    let sx = split(partition_x, logicals.z);
    let sz = split(partition_z, logicals.x);
    Ok((
        report(Basis::X, &sx, partition_x, &dx, n, opts),
        report(Basis::Z, &sz, partition_z, &dz, n, opts),
    ))
}

/// Whether every pure component of `state` is `μ'`-spread in at least one basis.
pub fn spread_dichotomy(
    state: &QuantumState,
    code: &CssCode,
    partition_x: &ClusterPartition,
    partition_z: &ClusterPartition,
    logicals: &Logicals,
    opts: &SpreadOptions,
) -> Result<bool> {
    check_inputs(state, code, partition_x, partition_z, logicals)?;
    for (_, v) in state.ensemble() {
        let (x, z) = measure_spread(&QuantumState::Pure(v), code, partition_x, partition_z, logicals, opts)?;
        if !(x.spread_mu_prime || z.spread_mu_prime) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Normalized uniform superposition over `w + rowspace H_X`; `w` must lie in `ker H_Z`.
pub fn code_state(code: &CssCode, w: u32) -> Result<QuantumState> {
    let s = Sectors::of(code)?;
    if syndrome_weight(&s.hz, w) != 0 {
        return Err(Error::DomainError("coset representative is not in ker H_Z".into()));
    }
    let amp = 1.0 / (s.stabilizers.len() as f64).sqrt();
    Ok(QuantumState::Pure(s.state(0, 0, w).iter().map(|&a| Complex64::new(a as f64 * amp, 0.0)).collect()))
}

/// A random state in the span of sectors with `|H_X e_X| <= ε' m_X` and
/// `|H_Z e_Z| <= ε' m_Z`, with i.i.d. complex Gaussian coefficients.
pub fn random_low_energy_state(code: &CssCode, eps_prime: f64, seed: u64) -> Result<QuantumState> {
    if !(eps_prime >= 0.0) {
        return Err(Error::DomainError(format!("eps' = {eps_prime} < 0")));
    }
    let s = Sectors::of(code)?;
    let cap = |m: usize| (eps_prime * m as f64 + 1e-9).floor() as usize;
    let (cx, cz) = (cap(s.hx.len()), cap(s.hz.len()));
    let mut r = rng(seed);
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << s.n];
    for &ex in s.ex.iter().filter(|&&e| syndrome_weight(&s.hx, e) <= cx) {
        for &ez in s.ez.iter().filter(|&&e| syndrome_weight(&s.hz, e) <= cz) {
            for &w in &s.logical {
                let c = Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal));
                for (a, &b) in v.iter_mut().zip(&s.state(ex, ez, w)) {
                    *a += c * b as f64;
                }
            }
        }
    }
    let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Ok(QuantumState::Pure(v.into_iter().map(|a| a / norm).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlts::{build_clusters, enumerate_syndrome_set};

    fn partitions(code: &CssCode, eps: f64, c1: f64) -> (ClusterPartition, ClusterPartition) {
        let px = build_clusters(&enumerate_syndrome_set(code, Basis::X, eps).unwrap(), c1).unwrap();
        let pz = build_clusters(&enumerate_syndrome_set(code, Basis::Z, eps).unwrap(), c1).unwrap();
        (px, pz)
    }

    #[test]
    fn mu_prime_value() {
        assert!((MU_PRIME - 0.073223304703363).abs() < 1e-12);
    }

    #[test]
    fn logicals_anticommute() {
        for c in [CssCode::steane(), CssCode::shor()] {
            let l = compute_logicals(&c).unwrap();
            assert!(parity(l.x & l.z));
        }
    }

    #[test]
    fn code_state_measures_its_logical() {
        let c = CssCode::steane();
        let l = compute_logicals(&c).unwrap();
        let (px, pz) = partitions(&c, 0.1, 1.0);
        let opts = SpreadOptions::default();
        for (w, b) in [(0u32, 0), (l.z, 1)] {
            let st = code_state(&c, w).unwrap();
            let (x, z) = measure_spread(&st, &c, &px, &pz, &l, &opts).unwrap();
            let (on, off) = if b == 0 { (z.mass0, z.mass1) } else { (z.mass1, z.mass0) };
            assert!((on - 1.0).abs() < 1e-12 && off.abs() < 1e-12);
            assert!((x.mass0 - 0.5).abs() < 1e-12 && (x.mass1 - 0.5).abs() < 1e-12);
            assert!((x.support_mass - 1.0).abs() < 1e-12);
            assert!(x.spread_mu_prime && !z.spread_mu_prime);
            assert_eq!(z.separation, Some(3));
        }
    }

    #[test]
    fn plus_logical_splits_evenly() {
        let c = CssCode::shor();
        let l = compute_logicals(&c).unwrap();
        let (px, pz) = partitions(&c, 0.1, 1.0);
        let (a, b) = (code_state(&c, 0).unwrap(), code_state(&c, l.z).unwrap());
        let (QuantumState::Pure(a), QuantumState::Pure(b)) = (a, b) else { unreachable!() };
        let plus = QuantumState::Pure(a.iter().zip(&b).map(|(x, y)| (x + y) * std::f64::consts::FRAC_1_SQRT_2).collect());
        let (_, z) = measure_spread(&plus, &c, &px, &pz, &l, &SpreadOptions::default()).unwrap();
        assert!((z.mass0 - 0.5).abs() < 1e-12 && (z.mass1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mixed_state_matches_pure_average() {
        let c = CssCode::steane();
        let l = compute_logicals(&c).unwrap();
        let (px, pz) = partitions(&c, 0.1, 1.0);
        let QuantumState::Pure(a) = code_state(&c, 0).unwrap() else { unreachable!() };
        let rho: Vec<Vec<Complex64>> = (0..128).map(|r| (0..128).map(|k| a[r] * a[k].conj()).collect()).collect();
        let (x, z) = measure_spread(&QuantumState::Mixed(rho), &c, &px, &pz, &l, &SpreadOptions::default()).unwrap();
        assert!((z.mass0 - 1.0).abs() < 1e-9 && (x.mass1 - 0.5).abs() < 1e-9);
    }

    #[test]
    fn random_states_are_spread_in_some_basis() {
        for (c, eps) in [(CssCode::steane(), 0.1), (CssCode::shor(), 0.1)] {
            let l = compute_logicals(&c).unwrap();
            let (px, pz) = partitions(&c, eps, 1.0);
            for seed in 0..50 {
                let st = random_low_energy_state(&c, eps, seed).unwrap();
                assert!(spread_dichotomy(&st, &c, &px, &pz, &l, &SpreadOptions::default()).unwrap());
                let (x, z) = measure_spread(&st, &c, &px, &pz, &l, &SpreadOptions::default()).unwrap();
                assert!((x.support_mass - 1.0).abs() < 1e-9 && (z.support_mass - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn state_length_is_checked() {
        let c = CssCode::steane();
        let l = compute_logicals(&c).unwrap();
        let (px, pz) = partitions(&c, 0.1, 1.0);
        let st = QuantumState::Pure(vec![Complex64::new(1.0, 0.0); 8]);
        let e = measure_spread(&st, &c, &px, &pz, &l, &SpreadOptions::default()).unwrap_err();
        assert!(matches!(e, Error::StateDimensionMismatch { expected: 128, got: 8 }));
    }

    #[test]
    fn state_json_round_trip() {
        let st = QuantumState::Pure(vec![Complex64::new(0.5, -0.5), Complex64::new(0.0, 0.5)]);
        let text = serde_json::to_string(&st).unwrap();
        assert_eq!(text, "[[0.5,-0.5],[0.0,0.5]]");
        assert_eq!(serde_json::from_str::<QuantumState>(&text).unwrap(), st);
    }
}
