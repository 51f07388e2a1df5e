use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bits::{bitstring, lex_key, syndrome, XorBasis};
use super::{Basis, SyndromeSet};
use crate::tanner::CssCode;
use crate::{Error, Result};

/// Tolerance for comparing integer weights against real thresholds.
const TOL: f64 = 1e-9;

/// Connected components of `y ~ y'` iff `|y + y'|_{C^⊥} <= 2 c1 ε' n` on a
/// syndrome set, with decoder representatives.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterPartition {
    pub basis: Basis,
    pub epsilon_prime: f64,
    pub c1: f64,
    pub n: usize,
    /// `2 c1 ε' n`.
    pub threshold: f64,
    /// Clusters ordered by lexicographically least member; members sorted.
    pub clusters: Vec<Vec<u32>>,
    /// Translate class of each cluster, numbered by first appearance.
    pub translate_class: Vec<usize>,
    /// Per translate class, the cluster holding its lexicographically least member.
    pub representative_cluster: Vec<usize>,
    /// `e(s)`: lexicographically least member of syndrome `s` in the
    /// representative cluster of its class. Keyed by the syndrome bitmask.
    pub representatives: BTreeMap<u128, u32>,
    #[serde(skip)]
    set: Option<SyndromeSet>,
    #[serde(skip)]
    cluster_of: Vec<u32>,
    #[serde(skip)]
    coset_weight: Vec<u8>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Minimum weight of `y + span(stab)` for every `y ∈ F_2^n`, indexed by the
/// canonical representative.
fn coset_weights(n: usize, stab: &XorBasis) -> Vec<u8> {
    let mut cw = vec![u8::MAX; 1 << n];
    for y in 0u32..1 << n {
        let k = stab.reduce(y) as usize;
        cw[k] = cw[k].min(y.count_ones() as u8);
    }
    cw
}

impl ClusterPartition {
    fn set(&self) -> &SyndromeSet {
        self.set.as_ref().expect("partition built in this process")
    }

    fn stab(&self) -> XorBasis {
        XorBasis::new(&self.set().stabilizers)
    }

    /// `|y|_{C^⊥}`.
    pub fn coset_weight(&self, y: u32) -> usize {
        self.coset_weight[self.stab().reduce(y) as usize] as usize
    }

    /// Cluster index of a member of the syndrome set.
    pub fn cluster_of(&self, y: u32) -> Option<usize> {
        self.cluster_of.get(y as usize).copied().filter(|&c| c != u32::MAX).map(|c| c as usize)
    }

    /// `e(H y)` for a member `y`.
    pub fn representative(&self, y: u32) -> Option<u32> {
        self.representatives.get(&syndrome(&self.set().checks, y)).copied()
    }

    /// `y + e(H y)`, a zero-syndrome vector.
    pub fn decode(&self, y: u32) -> Option<u32> {
        self.representative(y).map(|e| y ^ e)
    }

    pub fn syndrome_set(&self) -> &SyndromeSet {
        self.set()
    }
}

/// Builds the component partition for `ε' = set.epsilon`.
pub fn build_clusters(set: &SyndromeSet, c1: f64) -> Result<ClusterPartition> {
    if !(c1 >= 0.0) {
        return Err(Error::DomainError(format!("c1 = {c1} < 0")));
    }
    let n = set.n;
    let stab = XorBasis::new(&set.stabilizers);
    let coset_weight = coset_weights(n, &stab);
    let threshold = 2.0 * c1 * set.epsilon * n as f64;
    let close: Vec<u32> = (1u32..1 << n)
        .filter(|&z| (coset_weight[stab.reduce(z) as usize] as f64) <= threshold + TOL)
        .collect();
    let mut index = vec![u32::MAX; 1 << n];
    for (i, &y) in set.members.iter().enumerate() {
        index[y as usize] = i as u32;
    }
    let mut dsu = Dsu((0..set.members.len()).collect());
    for (i, &y) in set.members.iter().enumerate() {
        for &z in &close {
            let j = index[(y ^ z) as usize];
            if j != u32::MAX {
                dsu.union(i, j as usize);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for (i, &y) in set.members.iter().enumerate() {
        groups.entry(dsu.find(i)).or_default().push(y);
    }
    let mut clusters: Vec<Vec<u32>> = groups.into_values().collect();
    clusters.sort_by_key(|c| c.iter().map(|&y| lex_key(y, n)).min());
    let mut cluster_of = vec![u32::MAX; 1 << n];
    for (k, c) in clusters.iter().enumerate() {
        for &y in c {
            cluster_of[y as usize] = k as u32;
        }
    }
    // Translate classes: orbits of clusters under y -> y + b for b in a basis of ker H.
    let translations = kernel_of_checks(&set.checks, n);
    let mut cls = Dsu((0..clusters.len()).collect());
    for &y in &set.members {
        for &b in &translations {
            cls.union(cluster_of[y as usize] as usize, cluster_of[(y ^ b) as usize] as usize);
        }
    }
    let mut class_ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut translate_class = Vec::with_capacity(clusters.len());
    let mut representative_cluster = Vec::new();
    for k in 0..clusters.len() {
        let root = cls.find(k);
        let next = class_ids.len();
        let id = *class_ids.entry(root).or_insert(next);
        if id == representative_cluster.len() {
            // Clusters are sorted by least member, so the first seen is the representative.
            representative_cluster.push(k);
        }
        translate_class.push(id);
    }
    let mut representatives: BTreeMap<u128, u32> = BTreeMap::new();
    for &k in &representative_cluster {
        for &y in &clusters[k] {
            let s = syndrome(&set.checks, y);
            let e = representatives.entry(s).or_insert(y);
            if lex_key(y, n) < lex_key(*e, n) {
                *e = y;
            }
        }
    }
    Ok(ClusterPartition {
        basis: set.basis,
        epsilon_prime: set.epsilon,
        c1,
        n,
        threshold,
        clusters,
        translate_class,
        representative_cluster,
        representatives,
        set: Some(set.clone()),
        cluster_of,
        coset_weight,
    })
}

/// Basis of `{y : H y = 0}` from check bitmasks.
fn kernel_of_checks(checks: &[u32], n: usize) -> Vec<u32> {
    let f = crate::gf::PrimeField::binary();
    let rows: Vec<Vec<u32>> = checks.iter().map(|&h| (0..n).map(|i| (h >> i) & 1).collect()).collect();
    let m = crate::gf::FMatrix::from_dense_rows(f, n, &rows).expect("bit rows");
    super::bits::kernel_masks(&m).expect("binary matrix")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    fn pass() -> Self {
        CheckOutcome {
            passed: true,
            counterexample: None,
        }
    }

    fn fail(msg: String) -> Self {
        CheckOutcome {
            passed: false,
            counterexample: Some(msg),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterLemmaReport {
    /// (1) Each pointwise set `{y' : |y + y'|_{C^⊥} <= 2 c1 ε' n}` is the component of `y`.
    pub partition: CheckOutcome,
    /// (2) Distinct clusters are at coset distance `>= c2 n`.
    pub separation: CheckOutcome,
    pub min_coset_distance: Option<usize>,
    pub min_hamming_distance: Option<usize>,
    /// (3) `Cl(y + c) = Cl(y)` iff `c ∈ C^⊥`, for every member `y` and translation `c`.
    pub translate: CheckOutcome,
    /// (4) `y + e(H y)` lies in one stabilizer coset across each cluster.
    pub decoder: CheckOutcome,
}

impl ClusterLemmaReport {
    pub fn all_passed(&self) -> bool {
        self.partition.passed && self.separation.passed && self.translate.passed && self.decoder.passed
    }
}

/// Checks the four cluster properties exhaustively; each failure carries the
/// first counterexample found.
pub fn verify_cluster_lemma(partition: &ClusterPartition, c2: f64) -> ClusterLemmaReport {
    let set = partition.set();
    let n = partition.n;
    let stab = partition.stab();
    let cw = |y: u32| partition.coset_weight[stab.reduce(y) as usize] as usize;
    let close = |y: u32, z: u32| cw(y ^ z) as f64 <= partition.threshold + TOL;

    let mut part = CheckOutcome::pass();
    'outer: for cluster in &partition.clusters {
        for &y in cluster {
            let pointwise = set.members.iter().filter(|&&z| close(y, z)).count();
            if pointwise != cluster.len() {
                let w = cluster.iter().find(|&&z| !close(y, z)).copied();
                part = CheckOutcome::fail(match w {
                    Some(z) => format!("{} and {} share a component but have coset distance {}", bitstring(y, n), bitstring(z, n), cw(y ^ z)),
                    None => format!("pointwise set of {} leaves its component", bitstring(y, n)),
                });
                break 'outer;
            }
        }
    }

    let mut min_cd: Option<(usize, u32, u32)> = None;
    let mut min_hd: Option<usize> = None;
    for (a, ca) in partition.clusters.iter().enumerate() {
        for cb in &partition.clusters[a + 1..] {
            for &y in ca {
                for &z in cb {
                    let d = cw(y ^ z);
                    if min_cd.is_none_or(|m| d < m.0) {
                        min_cd = Some((d, y, z));
                    }
                    let h = (y ^ z).count_ones() as usize;
                    min_hd = Some(min_hd.map_or(h, |m| m.min(h)));
                }
            }
        }
    }
    let separation = match min_cd {
        Some((d, y, z)) if (d as f64) < c2 * n as f64 - TOL => CheckOutcome::fail(format!(
            "{} and {} lie in different clusters at coset distance {d} < c2 n = {}",
            bitstring(y, n),
            bitstring(z, n),
            c2 * n as f64
        )),
        _ => CheckOutcome::pass(),
    };

    let translations = XorBasis::new(&kernel_of_checks(&set.checks, n)).elements();
    let mut translate = CheckOutcome::pass();
    'tr: for &y in &set.members {
        let k = partition.cluster_of(y);
        for &c in &translations {
            let same = partition.cluster_of(y ^ c) == k;
            if same != stab.contains(c) {
                translate = CheckOutcome::fail(format!(
                    "y = {}, c = {}: same cluster {same}, c in stabilizer {}",
                    bitstring(y, n),
                    bitstring(c, n),
                    stab.contains(c)
                ));
                break 'tr;
            }
        }
    }

    let mut decoder = CheckOutcome::pass();
    'dec: for cluster in &partition.clusters {
        let mut coset: Option<(u32, u32)> = None;
        for &y in cluster {
            let Some(d) = partition.decode(y) else {
                decoder = CheckOutcome::fail(format!("no representative for the syndrome of {}", bitstring(y, n)));
                break 'dec;
            };
            let key = stab.reduce(d);
            match coset {
                None => coset = Some((key, y)),
                Some((k, y0)) if k != key => {
                    decoder = CheckOutcome::fail(format!("{} and {} decode to different stabilizer cosets", bitstring(y0, n), bitstring(y, n)));
                    break 'dec;
                }
                _ => {}
            }
        }
    }

    ClusterLemmaReport {
        partition: part,
        separation,
        min_coset_distance: min_cd.map(|m| m.0),
        min_hamming_distance: min_hd,
        translate,
        decoder,
    }
}

/// Clustering constants `(c1, c2, ε0) = (1/c2', c1', 1)` implied by small-set
/// expansion `|H y|/m >= c2' |y|_{C^⊥}/n` for all `|y| <= c1' n`.
pub fn clustering_from_ssexp(c1_prime: f64, c2_prime: f64) -> Result<(f64, f64, f64)> {
    if !(c1_prime > 0.0 && c2_prime > 0.0) || !c1_prime.is_finite() || !c2_prime.is_finite() {
        return Err(Error::DomainError(format!("ssexp constants ({c1_prime}, {c2_prime}) must be positive")));
    }
    Ok((1.0 / c2_prime, c1_prime, 1.0))
}

/// Whether every `y ∈ G^ε` has `|y|_{C^⊥} <= c1 ε n` or `|y|_{C^⊥} >= c2 n`.
pub fn clustering_holds(code: &CssCode, basis: Basis, epsilon: f64, c1: f64, c2: f64) -> Result<bool> {
    let set = super::enumerate_syndrome_set(code, basis, epsilon)?;
    let stab = XorBasis::new(&set.stabilizers);
    let cw = coset_weights(set.n, &stab);
    let n = set.n as f64;
    Ok(set.members.iter().all(|&y| {
        let w = cw[stab.reduce(y) as usize] as f64;
        w <= c1 * epsilon * n + TOL || w >= c2 * n - TOL
    }))
}
