use serde::{Deserialize, Serialize};

use super::elim::Rref;
use super::{checked_count, enumeration_budget, FMatrix, FVector, PrimeField, INFINITE_DISTANCE};
use crate::{par, Error, Result};

/// A linear code `C ⊆ F_p^n` held by its reduced row echelon basis, so two
/// codes are equal iff their bases are.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CodeRepr", into = "CodeRepr")]
pub struct LinearCode {
    field: PrimeField,
    n: usize,
    basis: FMatrix,
}

#[derive(Serialize, Deserialize)]
struct CodeRepr {
    p: u32,
    n: usize,
    basis: Vec<Vec<u32>>,
}

impl TryFrom<CodeRepr> for LinearCode {
    type Error = Error;
    fn try_from(r: CodeRepr) -> Result<Self> {
        let code = LinearCode::from_generators(PrimeField::new(r.p)?, r.n, &r.basis)?;
        if code.dim() != r.basis.len() {
            return Err(Error::Parse("code basis rows are linearly dependent".into()));
        }
        Ok(code)
    }
}

impl From<LinearCode> for CodeRepr {
    fn from(c: LinearCode) -> Self {
        CodeRepr {
            p: c.field.p(),
            n: c.n,
            basis: c.basis.dense_rows(),
        }
    }
}

impl LinearCode {
    /// The span of `gens`; dependent generators are dropped.
    pub fn from_generators(field: PrimeField, n: usize, gens: &[Vec<u32>]) -> Result<Self> {
        for g in gens {
            if g.len() != n {
                return Err(Error::DimensionMismatch(format!("generator of length {} in a code of length {n}", g.len())));
            }
            if let Some(&bad) = g.iter().find(|&&x| !field.contains(x)) {
                return Err(Error::DomainError(format!("entry {bad} is not a residue mod {}", field.p())));
            }
        }
        let red = super::elim::rref_rows(field, n, gens.to_vec());
        Ok(Self::from_rref(red))
    }

    fn from_rref(red: Rref) -> Self {
        let basis = FMatrix::from_dense_rows(red.field, red.cols, &red.rows).expect("echelon rows have code length");
        LinearCode {
            field: red.field,
            n: red.cols,
            basis,
        }
    }

    /// The row span of `m`.
    pub fn row_span(m: &FMatrix) -> Self {
        Self::from_rref(Rref::of(m))
    }

    /// `ker h`.
    pub fn from_parity_check(h: &FMatrix) -> Self {
        let k = Rref::of(h).kernel();
        let red = super::elim::rref_rows(h.field(), h.cols(), k);
        Self::from_rref(red)
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        Self::from_generators(field, n, &[]).expect("empty generator list")
    }

    pub fn full(field: PrimeField, n: usize) -> Self {
        let gens: Vec<Vec<u32>> = (0..n).map(|i| FVector::unit(field, n, i).into_entries()).collect();
        Self::from_generators(field, n, &gens).expect("unit vectors")
    }

    pub fn repetition(field: PrimeField, n: usize) -> Self {
        Self::from_generators(field, n, &[vec![1; n]]).expect("all-ones vector")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn rate(&self) -> f64 {
        self.dim() as f64 / self.n as f64
    }

    /// Basis in reduced row echelon form.
    pub fn basis(&self) -> &FMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<u32>> {
        self.basis.dense_rows()
    }

    fn rref(&self) -> Rref {
        Rref::of(&self.basis)
    }

    /// Columns holding the leading ones of the echelon basis.
    pub fn pivots(&self) -> Vec<usize> {
        self.rref().pivots
    }

    pub fn contains(&self, v: &FVector) -> bool {
        v.len() == self.n && self.rref().contains(v.entries())
    }

    pub fn contains_ones(&self) -> bool {
        self.contains(&FVector::ones(self.field, self.n))
    }

    /// `C^⊥ = {y : y . c = 0 for all c in C}`.
    pub fn dual(&self) -> LinearCode {
        Self::from_parity_check(&self.basis)
    }

    /// A full-rank parity-check matrix, i.e. a basis of the dual.
    pub fn parity_check(&self) -> FMatrix {
        self.dual().basis
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        let red = other.rref();
        self.n == other.n && self.basis_rows().iter().all(|r| red.contains(r))
    }

    /// The codeword whose basis coefficients are the base-p digits of `index`
    /// (least significant digit first).
    pub fn codeword(&self, index: u64) -> FVector {
        let f = self.field;
        let mut v = vec![0; self.n];
        let mut idx = index;
        for r in 0..self.dim() {
            let d = (idx % f.p() as u64) as u32;
            idx /= f.p() as u64;
            if d != 0 {
                for (c, val) in self.basis.row(r) {
                    v[c] = f.add(v[c], f.mul(d, val));
                }
            }
        }
        FVector::new(f, v).expect("codeword entries are residues")
    }

    /// Number of codewords, if it fits the budget.
    pub fn size_within(&self, budget: u64) -> Result<u64> {
        checked_count("codeword enumeration", self.field.p() as u64, self.dim() as u64, budget)
    }
}

/// The row space of a matrix, prepared for repeated membership queries.
#[derive(Clone, Debug)]
pub struct RowSpace {
    red: Rref,
}

impl RowSpace {
    pub fn of(m: &FMatrix) -> Self {
        RowSpace { red: Rref::of(m) }
    }

    pub fn rank(&self) -> usize {
        self.red.rank()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.red.contains(v)
    }

    /// Canonical representative of `v + rowspace`.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.red.reduce(&mut w);
        w
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.red.rows
    }
}

/// Visits `offset + sum_i d_i basis_i` for every index in `start..end`, where
/// `d` are the base-p digits of the index, least significant first.
pub(crate) fn for_each_in_span<F>(field: PrimeField, offset: &[u32], basis: &[Vec<u32>], start: u64, end: u64, mut f: F)
where
    F: FnMut(u64, &[u32]),
{
    let p = field.p();
    let k = basis.len();
    let mut digits = vec![0u32; k];
    let mut v = offset.to_vec();
    let mut idx = start;
    for (i, d) in digits.iter_mut().enumerate() {
        *d = (idx % p as u64) as u32;
        idx /= p as u64;
        if *d != 0 {
            for (x, &b) in v.iter_mut().zip(&basis[i]) {
                *x = field.add(*x, field.mul(*d, b));
            }
        }
    }
    for index in start..end {
        f(index, &v);
        let mut i = 0;
        while i < k {
            for (x, &b) in v.iter_mut().zip(&basis[i]) {
                if b != 0 {
                    *x = field.add(*x, b);
                }
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Minimum of `score` over the affine span `offset + span(basis)`, with the
/// smallest index among ties. Fails if `p^k` exceeds `budget`.
pub(crate) fn enumerate_min<S>(
    what: &str,
    field: PrimeField,
    offset: &[u32],
    basis: &[Vec<u32>],
    budget: u64,
    score: S,
) -> Result<(u64, u64)>
where
    S: Fn(u64, &[u32]) -> u64 + Sync + Send,
{
    let total = checked_count(what, field.p() as u64, basis.len() as u64, budget)?;
    let best = par::map_chunks(total, par::CHUNKS, |a, b| {
        let mut best = (u64::MAX, u64::MAX);
        for_each_in_span(field, offset, basis, a, b, |i, v| {
            let s = score(i, v);
            if s < best.0 {
                best = (s, i);
            }
        });
        best
    });
    Ok(best.into_iter().fold((u64::MAX, u64::MAX), |acc, b| if b.0 < acc.0 { b } else { acc }))
}

fn weight(v: &[u32]) -> u64 {
    v.iter().filter(|&&x| x != 0).count() as u64
}

/// `|v|_C = min_{c in C} |v + c|`, enumerating the coset under the global budget.
pub fn coset_min_weight(v: &FVector, code: &LinearCode) -> Result<usize> {
    coset_min_weight_with_budget(v, code, enumeration_budget())
}

pub fn coset_min_weight_with_budget(v: &FVector, code: &LinearCode, budget: u64) -> Result<usize> {
    assert_eq!(v.len(), code.len(), "vector length must equal code length");
    let basis = code.basis_rows();
    let (w, _) = enumerate_min("coset enumeration", code.field, v.entries(), &basis, budget, |_, x| weight(x))?;
    Ok(w as usize)
}

/// Minimum nonzero codeword weight, or [`INFINITE_DISTANCE`] for the zero code.
pub fn min_distance(code: &LinearCode) -> Result<usize> {
    min_distance_with_budget(code, enumeration_budget())
}

pub fn min_distance_with_budget(code: &LinearCode, budget: u64) -> Result<usize> {
    if code.dim() == 0 {
        return Ok(INFINITE_DISTANCE);
    }
    let basis = code.basis_rows();
    let zero = vec![0; code.len()];
    let (w, _) = enumerate_min("codeword enumeration", code.field, &zero, &basis, budget, |i, x| {
        if i == 0 {
            u64::MAX
        } else {
            weight(x)
        }
    })?;
    Ok(w as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::binary()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(min_distance(&LinearCode::repetition(f2(), 5)).unwrap(), 5);
        assert_eq!(min_distance(&LinearCode::full(f2(), 3)).unwrap(), 1);
        assert_eq!(min_distance(&LinearCode::zero(f2(), 3)).unwrap(), INFINITE_DISTANCE);
        let even = LinearCode::repetition(f2(), 4).dual();
        assert_eq!(even.dim(), 3);
        assert_eq!(min_distance(&even).unwrap(), 2);
    }

    #[test]
    fn coset_weight_examples() {
        let rep = LinearCode::repetition(f2(), 3);
        let v = FVector::from_ints(f2(), &[1, 1, 0]);
        assert_eq!(coset_min_weight(&v, &rep).unwrap(), 1);
        assert_eq!(coset_min_weight(&FVector::ones(f2(), 3), &rep).unwrap(), 0);
        let z = LinearCode::zero(f2(), 3);
        assert_eq!(coset_min_weight(&v, &z).unwrap(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let full = LinearCode::full(f2(), 30);
        let e = min_distance_with_budget(&full, 1 << 10).unwrap_err();
        assert!(e.is_budget());
    }

    #[test]
    fn codeword_indexing_enumerates_the_code() {
        let f3 = PrimeField::new(3).unwrap();
        let c = LinearCode::from_generators(f3, 4, &[vec![1, 2, 0, 1], vec![0, 1, 1, 1]]).unwrap();
        let mut seen = std::collections::HashSet::new();
        for i in 0..9 {
            let w = c.codeword(i);
            assert!(c.contains(&w));
            seen.insert(w);
        }
        assert_eq!(seen.len(), 9);
        let basis = c.basis_rows();
        let zero = vec![0; 4];
        for_each_in_span(f3, &zero, &basis, 0, 9, |i, v| assert_eq!(v, c.codeword(i).entries()));
        for_each_in_span(f3, &zero, &basis, 4, 9, |i, v| assert_eq!(v, c.codeword(i).entries()));
    }

    #[test]
    fn dual_of_dual_is_identity() {
        let f5 = PrimeField::new(5).unwrap();
        let c = LinearCode::from_generators(f5, 4, &[vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(c.dual().dim(), 3);
        assert_eq!(c.dual().dual(), c);
        assert!(c.is_subcode_of(&c.dual().dual()));
    }

    /// Every binary code of length `n` and dimension `<= 3`, by enumerating
    /// generator tuples.
    fn all_small_codes(n: usize) -> Vec<LinearCode> {
        let vecs: Vec<Vec<u32>> = (0u32..1 << n).map(|x| (0..n).map(|i| (x >> i) & 1).collect()).collect();
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut push = |gens: &[&Vec<u32>]| {
            let gens: Vec<Vec<u32>> = gens.iter().map(|g| (*g).clone()).collect();
            let c = LinearCode::from_generators(f2(), n, &gens).unwrap();
            if seen.insert(c.basis_rows()) {
                out.push(c);
            }
        };
        push(&[]);
        for a in 1..vecs.len() {
            push(&[&vecs[a]]);
            for b in a + 1..vecs.len() {
                push(&[&vecs[a], &vecs[b]]);
                for c in b + 1..vecs.len() {
                    push(&[&vecs[a], &vecs[b], &vecs[c]]);
                }
            }
        }
        out
    }

    #[test]
    fn distance_matches_coset_oracle_on_small_codes() {
        for n in 1..=6 {
            let codes = all_small_codes(n);
            if n == 4 {
                // Gaussian binomials: 1 + 15 + 35 + 15 subspaces of F_2^4.
                assert_eq!(codes.len(), 66);
            }
            for code in codes {
                // Oracle: the lightest nonzero codeword is the lightest coset
                // leader of c + C over nonzero c, which equals min |c|.
                let brute = (1..code.size_within(1 << 10).unwrap())
                    .map(|i| code.codeword(i).weight())
                    .min()
                    .unwrap_or(INFINITE_DISTANCE);
                assert_eq!(min_distance(&code).unwrap(), brute);
                for x in 0u32..1 << n {
                    let v = FVector::from_ints(f2(), &(0..n).map(|i| ((x >> i) & 1) as i64).collect::<Vec<_>>());
                    let w = coset_min_weight(&v, &code).unwrap();
                    assert_eq!(w == 0, code.contains(&v));
                    if code.dim() > 0 {
                        let shifted = v.add(&code.codeword(1));
                        assert_eq!(coset_min_weight(&shifted, &code).unwrap(), w);
                    }
                }
            }
        }
    }
}
