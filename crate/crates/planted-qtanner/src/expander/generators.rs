use serde::{Deserialize, Serialize};

use super::{spectral_expansion, CayleyMultigraph, CongruenceGroup, CongruenceGroupElement, SpectralOptions};
use crate::rng::{index_seed, rng};
use crate::{par, Error, Result};
use rand::Rng;

/// A generator multiset closed under inversion, with an explicit involution
/// `pairing` on indices such that `elements[pairing[i]] = elements[i]^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMultiset {
    group: CongruenceGroup,
    elements: Vec<CongruenceGroupElement>,
    pairing: Vec<usize>,
}

impl GeneratorMultiset {
    /// Pairs each element with the first unpaired copy of its inverse.
    pub fn new(group: CongruenceGroup, elements: Vec<CongruenceGroupElement>) -> Result<Self> {
        let n = elements.len();
        let mut pairing = vec![usize::MAX; n];
        for i in 0..n {
            if pairing[i] != usize::MAX {
                continue;
            }
            let inv = group.inv(&elements[i]);
            let j = (i..n)
                .find(|&j| pairing[j] == usize::MAX && elements[j] == inv)
                .ok_or_else(|| Error::DomainError(format!("generator {i} has no unpaired inverse")))?;
            pairing[i] = j;
            pairing[j] = i;
        }
        Ok(GeneratorMultiset { group, elements, pairing })
    }

    pub fn group(&self) -> CongruenceGroup {
        self.group
    }

    pub fn elements(&self) -> &[CongruenceGroupElement] {
        &self.elements
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn degree(&self) -> usize {
        self.elements.len()
    }

    pub fn coords(&self) -> Vec<[u64; 3]> {
        self.elements.iter().map(|e| [e.a, e.b, e.c]).collect()
    }

    /// Appends the identity, raising the degree by one.
    pub fn with_identity(&self) -> Self {
        let mut elements = self.elements.clone();
        elements.push(self.group.identity());
        Self::new(self.group, elements).expect("identity is self-inverse")
    }

    /// The same words reduced to a lower level.
    pub fn reduce_to(&self, level: u32) -> Result<Self> {
        let g = CongruenceGroup::new(self.group.p(), level)?;
        let elements = self
            .elements
            .iter()
            .map(|e| self.group.reduce(e, level))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorMultiset {
            group: g,
            elements,
            pairing: self.pairing.clone(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Number of random candidate multisets evaluated.
    pub candidates: usize,
    /// Maximal word length over the alphabet `{U, L, D}^{±1}`.
    pub word_length: usize,
    /// Largest group order on which generation is checked by BFS.
    pub bfs_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            candidates: 64,
            word_length: 2,
            bfs_budget: 1 << 22,
        }
    }
}

/// Outcome of the generator search, including how generation was verified.
#[derive(Clone, Debug)]
pub struct GeneratorSelection {
    pub generators: GeneratorMultiset,
    pub candidate_index: usize,
    /// BFS closure size at level 1, out of `p^3`.
    pub closure_level1: usize,
    /// Levels at which the BFS closure reached the full group.
    pub verified_levels: Vec<u32>,
    /// BFS closure at the requested level, when within budget.
    pub closure: Option<usize>,
    /// `λ/Δ` of the level-1 Cayley graph.
    pub level1_ratio: f64,
}

impl GeneratorSelection {
    pub fn generates(&self) -> bool {
        let g = self.generators.group();
        let p3 = (g.p() as usize).pow(3);
        self.closure_level1 == p3 && self.closure.is_none_or(|c| Some(c as u128) == g.order())
    }
}

/// The words `I + pE12`, `I + pE21`, `φ(1,0,0)` and their inverses.
fn alphabet(g: &CongruenceGroup) -> Vec<CongruenceGroupElement> {
    let base = [(0, 1, 0), (0, 0, 1), (1, 0, 0)].map(|(a, b, c)| g.encode(a, b, c).expect("unit coordinates"));
    base.iter().flat_map(|x| [*x, g.inv(x)]).collect()
}

/// Inverse classes `{s, s^{-1}}` of nonidentity words up to `len` letters.
fn word_classes(g: &CongruenceGroup, len: usize) -> Vec<Vec<CongruenceGroupElement>> {
    let letters = alphabet(g);
    let mut words: Vec<CongruenceGroupElement> = Vec::new();
    let mut layer = vec![g.identity()];
    for _ in 0..len {
        layer = layer.iter().flat_map(|w| letters.iter().map(move |l| (w, l))).map(|(w, l)| g.mul(w, l)).collect();
        for w in &layer {
            if !words.contains(w) && *w != g.identity() {
                words.push(*w);
            }
        }
    }
    let mut classes: Vec<Vec<CongruenceGroupElement>> = Vec::new();
    for w in words {
        if classes.iter().any(|c| c.contains(&w)) {
            continue;
        }
        let inv = g.inv(&w);
        classes.push(if inv == w { vec![w] } else { vec![w, inv] });
    }
    classes
}

fn random_multiset(
    g: &CongruenceGroup,
    classes: &[Vec<CongruenceGroupElement>],
    degree: usize,
    seed: u64,
) -> GeneratorMultiset {
    let mut r = rng(seed);
    let mut used = vec![false; classes.len()];
    let mut elems = Vec::with_capacity(degree);
    while elems.len() < degree {
        let room = degree - elems.len();
        let fits: Vec<usize> = (0..classes.len()).filter(|&i| classes[i].len() <= room).collect();
        let fresh: Vec<usize> = fits.iter().copied().filter(|&i| !used[i]).collect();
        let pool = if fresh.is_empty() { &fits } else { &fresh };
        if pool.is_empty() {
            elems.push(g.identity());
            continue;
        }
        let pick = pool[r.random_range(0..pool.len())];
        used[pick] = true;
        elems.extend_from_slice(&classes[pick]);
    }
    GeneratorMultiset::new(*g, elems).expect("classes are closed under inversion")
}

/// Best-effort symmetric multiset of size `degree`: prefers multisets that
/// generate `G_1` (hence `G_m` for odd p), then the smallest level-1 `λ/Δ`.
/// Never fails on degree grounds; check [`GeneratorSelection::generates`].
pub fn symmetric_generators(p: u64, m: u32, degree: usize, seed: u64, opts: &SearchOptions) -> Result<GeneratorSelection> {
    let group = CongruenceGroup::new(p, m)?;
    let classes = word_classes(&group, opts.word_length.max(1));
    let p3 = (p as usize).pow(3);
    let scored = par::map_range(opts.candidates.max(1), |t| -> Result<(usize, f64)> {
        let s = random_multiset(&group, &classes, degree, index_seed(seed, t as u64));
        let low = CayleyMultigraph::new(s.reduce_to(1)?);
        let closure = low.bfs_closure(u64::MAX)?;
        let ratio = if degree == 0 {
            0.0
        } else {
            spectral_expansion(&low.table(u64::MAX)?, &SpectralOptions::default())?.ratio
        };
        Ok((closure, ratio))
    });
    let mut best: Option<(usize, usize, f64)> = None;
    for (t, s) in scored.into_iter().enumerate() {
        let (closure, ratio) = s?;
        let better = match best {
            None => true,
            Some((_, bc, br)) => closure > bc || (closure == bc && ratio < br - 1e-12),
        };
        if better {
            best = Some((t, closure, ratio));
        }
    }
    let (t, closure_level1, level1_ratio) = best.expect("at least one candidate");
    let generators = random_multiset(&group, &classes, degree, index_seed(seed, t as u64));
    let mut verified_levels = Vec::new();
    if closure_level1 == p3 {
        verified_levels.push(1);
    }
    let mut closure = None;
    for level in 2..=m {
        let order = (p as u128).checked_pow(3 * level).unwrap_or(u128::MAX);
        if level != m && level != 2 || order > opts.bfs_budget as u128 {
            continue;
        }
        let c = CayleyMultigraph::new(generators.reduce_to(level)?).bfs_closure(opts.bfs_budget)?;
        if c as u128 == order {
            verified_levels.push(level);
        }
        if level == m {
            closure = Some(c);
        }
    }
    if m == 1 {
        closure = Some(closure_level1);
    }
    Ok(GeneratorSelection {
        generators,
        candidate_index: t,
        closure_level1,
        verified_levels,
        closure,
        level1_ratio,
    })
}

/// A symmetric generating multiset of `G_m` of size `degree`, with generation
/// verified by BFS at level 1, at level 2 and at level `m` whenever those
/// groups fit the BFS budget.
pub fn default_generators(p: u64, m: u32, degree: usize, seed: u64) -> Result<GeneratorMultiset> {
    if degree < 3 {
        return Err(Error::DomainError(format!("degree {degree} < 3")));
    }
    let sel = symmetric_generators(p, m, degree, seed, &SearchOptions::default())?;
    if !sel.generates() {
        let min = if p == 2 { 3 } else { 6 };
        return Err(Error::GenerationFailure(format!(
            "best symmetric multiset of size {degree} reaches {} of {} elements of G_1 over p={p}; \
             G_1 is elementary abelian of rank 3, so symmetric generation needs degree >= {min}",
            sel.closure_level1,
            p.pow(3)
        )));
    }
    Ok(sel.generators)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deep_levels_skip_bfs() {
        let sel = symmetric_generators(3, 30, 6, 0, &SearchOptions::default()).unwrap();
        assert_eq!(sel.verified_levels, vec![1, 2]);
        assert_eq!(sel.closure, None);
        assert_eq!(sel.generators.group().m(), 30);
    }

    #[test]
    fn odd_p_needs_three_inverse_pairs() {
        for degree in 3..6 {
            assert!(matches!(default_generators(3, 1, degree, 0), Err(Error::GenerationFailure(_))));
        }
        let s = default_generators(3, 1, 6, 0).unwrap();
        assert_eq!(CayleyMultigraph::new(s.clone()).bfs_closure(1 << 20).unwrap(), 27);
        for (i, &j) in s.pairing().iter().enumerate() {
            assert_eq!(s.elements()[j], s.group().inv(&s.elements()[i]));
        }
    }

    #[test]
    fn odd_degree_pads_with_identity() {
        let s = default_generators(3, 2, 7, 5).unwrap();
        assert!(s.elements().contains(&s.group().identity()));
        assert_eq!(CayleyMultigraph::new(s).bfs_closure(1 << 20).unwrap(), 729);
    }

    #[test]
    fn binary_groups_have_small_generating_sets() {
        let s = default_generators(2, 1, 3, 0).unwrap();
        assert_eq!(CayleyMultigraph::new(s).bfs_closure(1 << 20).unwrap(), 8);
        let s = default_generators(2, 2, 5, 0).unwrap();
        assert_eq!(CayleyMultigraph::new(s).bfs_closure(1 << 20).unwrap(), 64);
    }

    #[test]
    fn best_effort_reports_partial_closure() {
        let sel = symmetric_generators(3, 1, 4, 0, &SearchOptions::default()).unwrap();
        assert!(!sel.generates());
        assert_eq!(sel.closure_level1, 9);
        assert_eq!(sel.generators.degree(), 4);
    }

    #[test]
    fn search_is_deterministic() {
        let a = default_generators(3, 1, 8, 42).unwrap();
        let b = default_generators(3, 1, 8, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn identity_padding_keeps_closure() {
        let s = default_generators(3, 1, 6, 1).unwrap();
        let padded = s.with_identity();
        assert_eq!(padded.degree(), 7);
        assert_eq!(CayleyMultigraph::new(padded).bfs_closure(1 << 20).unwrap(), 27);
    }
}
