use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::gf::is_prime;
use crate::{Error, Result};

/// The group `G_m` for a prime `p` and level `m >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct CongruenceGroup {
    p: u64,
    m: u32,
    /// `p^m`, the coordinate modulus.
    pm: u64,
    /// `p^{m+1}`, the matrix modulus.
    q: u64,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    p: u64,
    m: u32,
}

impl TryFrom<GroupRepr> for CongruenceGroup {
    type Error = Error;
    fn try_from(r: GroupRepr) -> Result<Self> {
        CongruenceGroup::new(r.p, r.m)
    }
}

impl From<CongruenceGroup> for GroupRepr {
    fn from(g: CongruenceGroup) -> Self {
        GroupRepr { p: g.p, m: g.m }
    }
}

/// An element of `G_m` with its coordinates and matrix `[m00, m01, m10, m11]`
/// mod `p^{m+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CongruenceGroupElement {
    pub p: u64,
    pub m: u32,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub matrix: [u64; 4],
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    (a as u128 * b as u128 % q as u128) as u64
}

fn inv_mod(a: u64, n: u64) -> u64 {
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    debug_assert_eq!(r0, 1, "{a} is not a unit mod {n}");
    t0.rem_euclid(n as i128) as u64
}

impl CongruenceGroup {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::DomainError("level m must be at least 1".into()));
        }
        let mut q: u64 = p;
        let mut pm: u64 = 1;
        for _ in 0..m {
            pm = q;
            q = q
                .checked_mul(p)
                .filter(|&v| v < 1 << 62)
                .ok_or_else(|| Error::DomainError(format!("p^(m+1) = {p}^{} exceeds 2^62", m + 1)))?;
        }
        Ok(CongruenceGroup { p, m, pm, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `p^m`.
    pub fn coord_modulus(&self) -> u64 {
        self.pm
    }

    /// `p^{m+1}`.
    pub fn matrix_modulus(&self) -> u64 {
        self.q
    }

    /// `p^{3m}` if it fits in `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.pm as u128).checked_mul(self.pm as u128)?.checked_mul(self.pm as u128)
    }

    pub fn order_big(&self) -> BigUint {
        BigUint::from(self.pm).pow(3)
    }

    /// `p^{3m}` as a `usize`, for groups small enough to materialize.
    pub fn order_usize(&self) -> Option<usize> {
        self.order().and_then(|o| usize::try_from(o).ok())
    }

    pub fn identity(&self) -> CongruenceGroupElement {
        self.encode(0, 0, 0).expect("zero coordinates are valid")
    }

    /// `φ(a,b,c) = I + p[[a,b],[c,d]]` with `d = (1+pa)^{-1}(pbc - a) mod p^m`.
    pub fn encode(&self, a: u64, b: u64, c: u64) -> Result<CongruenceGroupElement> {
        let (p, pm, q) = (self.p, self.pm, self.q);
        if a >= pm || b >= pm || c >= pm {
            return Err(Error::DomainError(format!("coordinates ({a},{b},{c}) must lie in [0, {pm})")));
        }
        let unit = (1 + mulmod(p, a, pm)) % pm;
        let num = (mulmod(mulmod(p, b, pm), c, pm) + pm - a) % pm;
        let d = mulmod(inv_mod(unit, pm), num, pm);
        let matrix = [
            (1 + p * a) % q,
            p * b % q,
            p * c % q,
            (1 + p * d) % q,
        ];
        Ok(CongruenceGroupElement {
            p,
            m: self.m,
            a,
            b,
            c,
            matrix,
        })
    }

    /// Inverse of [`encode`](Self::encode) on matrices in `G_m`.
    pub fn decode(&self, matrix: [u64; 4]) -> Result<CongruenceGroupElement> {
        let (p, q) = (self.p, self.q);
        let [m00, m01, m10, m11] = matrix.map(|x| x % q);
        if m00 % p != 1 % p || m11 % p != 1 % p || m01 % p != 0 || m10 % p != 0 {
            return Err(Error::NotInKernel(format!("{matrix:?} is not the identity mod {p}")));
        }
        let det = (mulmod(m00, m11, q) + q - mulmod(m01, m10, q)) % q;
        if det != 1 % q {
            return Err(Error::NotInKernel(format!("{matrix:?} has determinant {det} mod {q}")));
        }
        let a = (m00 + q - 1) % q / p;
        let e = self.encode(a, m01 / p, m10 / p)?;
        debug_assert_eq!(e.matrix, [m00, m01, m10, m11]);
        Ok(e)
    }

    fn check(&self, x: &CongruenceGroupElement) {
        assert!(x.p == self.p && x.m == self.m, "element of G_{} over p={} used in G_{} over p={}", x.m, x.p, self.m, self.p);
    }

    pub fn mul(&self, x: &CongruenceGroupElement, y: &CongruenceGroupElement) -> CongruenceGroupElement {
        self.check(x);
        self.check(y);
        let q = self.q;
        let [a0, a1, a2, a3] = x.matrix;
        let [b0, b1, b2, b3] = y.matrix;
        let m = [
            (mulmod(a0, b0, q) + mulmod(a1, b2, q)) % q,
            (mulmod(a0, b1, q) + mulmod(a1, b3, q)) % q,
            (mulmod(a2, b0, q) + mulmod(a3, b2, q)) % q,
            (mulmod(a2, b1, q) + mulmod(a3, b3, q)) % q,
        ];
        self.decode(m).expect("G_m is closed under multiplication")
    }

    /// Adjugate inverse, valid because the determinant is 1.
    pub fn inv(&self, x: &CongruenceGroupElement) -> CongruenceGroupElement {
        self.check(x);
        let q = self.q;
        let [a0, a1, a2, a3] = x.matrix;
        self.decode([a3, (q - a1) % q, (q - a2) % q, a0]).expect("G_m is closed under inversion")
    }

    /// `a + p^m b + p^{2m} c`, if the group order fits in `u128`.
    pub fn index(&self, x: &CongruenceGroupElement) -> Option<u128> {
        self.order()?;
        let pm = self.pm as u128;
        Some(x.a as u128 + pm * (x.b as u128 + pm * x.c as u128))
    }

    pub fn index_big(&self, x: &CongruenceGroupElement) -> BigUint {
        let pm = BigUint::from(self.pm);
        BigUint::from(x.a) + &pm * (BigUint::from(x.b) + &pm * BigUint::from(x.c))
    }

    pub fn element(&self, index: u128) -> Result<CongruenceGroupElement> {
        match self.order() {
            Some(o) if index < o => {}
            _ => return self.element_big(&BigUint::from(index)),
        }
        let pm = self.pm as u128;
        self.encode((index % pm) as u64, (index / pm % pm) as u64, (index / pm / pm) as u64)
    }

    pub fn element_big(&self, index: &BigUint) -> Result<CongruenceGroupElement> {
        if *index >= self.order_big() {
            return Err(Error::DomainError(format!("vertex index {index} outside the group of order {}", self.order_big())));
        }
        let pm = BigUint::from(self.pm);
        let digit = |x: &BigUint| (x % &pm).to_u64().expect("digit below p^m");
        let a = digit(index);
        let rest = index / &pm;
        let b = digit(&rest);
        let c = (&rest / &pm).to_u64().expect("top digit below p^m");
        self.encode(a, b, c)
    }

    /// Reduction to level `level <= m` (coordinates mod `p^level`).
    pub fn reduce(&self, x: &CongruenceGroupElement, level: u32) -> Result<CongruenceGroupElement> {
        if level > self.m {
            return Err(Error::DomainError(format!("cannot reduce level {} to level {level}", self.m)));
        }
        let g = CongruenceGroup::new(self.p, level)?;
        let pl = g.pm;
        g.encode(x.a % pl, x.b % pl, x.c % pl)
    }
}

/// Spec-level entry point for `φ`.
pub fn phi_encode(p: u64, m: u32, a: u64, b: u64, c: u64) -> Result<CongruenceGroupElement> {
    CongruenceGroup::new(p, m)?.encode(a, b, c)
}

/// Spec-level entry point for `φ^{-1}`; returns `(a, b, c)`.
pub fn phi_decode(p: u64, m: u32, matrix: [u64; 4]) -> Result<(u64, u64, u64)> {
    let e = CongruenceGroup::new(p, m)?.decode(matrix)?;
    Ok((e.a, e.b, e.c))
}

pub fn group_mul(x: &CongruenceGroupElement, y: &CongruenceGroupElement) -> Result<CongruenceGroupElement> {
    if x.p != y.p || x.m != y.m {
        return Err(Error::GroupMismatch(format!("G_{} over p={} vs G_{} over p={}", x.m, x.p, y.m, y.p)));
    }
    Ok(CongruenceGroup::new(x.p, x.m)?.mul(x, y))
}

pub fn group_inv(x: &CongruenceGroupElement) -> Result<CongruenceGroupElement> {
    Ok(CongruenceGroup::new(x.p, x.m)?.inv(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn encode_examples() {
        assert_eq!(phi_encode(3, 1, 0, 0, 0).unwrap().matrix, [1, 0, 0, 1]);
        let e = phi_encode(3, 1, 1, 0, 0).unwrap();
        assert_eq!(e.matrix, [4, 0, 0, 7]);
        assert_eq!((4 * 7) % 9, 1);
        // d = (1+2)^{-1}(2 - 1) mod 4 = 3 * 1 = 3, so m11 = 1 + 2*3 = 7 mod 8.
        let e = phi_encode(2, 2, 1, 1, 1).unwrap();
        assert_eq!(e.matrix, [3, 2, 2, 7]);
        assert_eq!((3 * 7 + 8 * 8 - 2 * 2) % 8, 1);
    }

    #[test]
    fn decode_examples() {
        assert_eq!(phi_decode(3, 1, [1, 0, 0, 1]).unwrap(), (0, 0, 0));
        assert_eq!(phi_decode(3, 1, [4, 0, 0, 7]).unwrap(), (1, 0, 0));
        assert_eq!(phi_decode(3, 1, [1, 3, 0, 1]).unwrap(), (0, 1, 0));
        assert!(matches!(phi_decode(3, 1, [2, 0, 0, 5]), Err(Error::NotInKernel(_))));
        assert_eq!(phi_decode(3, 1, [1, 3, 3, 1]).unwrap(), (0, 1, 1));
        assert!(matches!(phi_decode(3, 1, [1, 3, 0, 4]), Err(Error::NotInKernel(_))));
    }

    #[test]
    fn phi_is_a_bijection_on_small_groups() {
        for (p, m) in [(3, 1), (3, 2), (2, 3)] {
            let g = CongruenceGroup::new(p, m).unwrap();
            let n = g.order().unwrap();
            let mut seen = std::collections::HashSet::new();
            for i in 0..n {
                let e = g.element(i).unwrap();
                assert_eq!(g.index(&e), Some(i));
                assert_eq!(g.decode(e.matrix).unwrap(), e);
                assert!(seen.insert(e.matrix));
            }
        }
    }

    #[test]
    fn group_axioms_hold_exhaustively_at_27_and_randomly_above() {
        let g = CongruenceGroup::new(3, 1).unwrap();
        let all: Vec<_> = (0..27).map(|i| g.element(i).unwrap()).collect();
        let id = g.identity();
        for x in &all {
            assert_eq!(g.mul(x, &id), *x);
            assert_eq!(g.mul(x, &g.inv(x)), id);
            for y in &all {
                for z in &all {
                    assert_eq!(g.mul(&g.mul(x, y), z), g.mul(x, &g.mul(y, z)));
                }
            }
        }
        let g = CongruenceGroup::new(3, 3).unwrap();
        let mut rng = crate::rng::rng(11);
        let o = g.order().unwrap();
        for _ in 0..10_000 {
            let [x, y, z] = [0; 3].map(|_| g.element(rng.random_range(0..o)).unwrap());
            assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
            assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
            // Oracle: the plain integer matrix product reduced mod p^{m+1}.
            let q = g.matrix_modulus() as u128;
            let [a0, a1, a2, a3] = x.matrix.map(|v| v as u128);
            let [b0, b1, b2, b3] = y.matrix.map(|v| v as u128);
            let direct = [(a0 * b0 + a1 * b2) % q, (a0 * b1 + a1 * b3) % q, (a2 * b0 + a3 * b2) % q, (a2 * b1 + a3 * b3) % q];
            assert_eq!(g.mul(&x, &y).matrix.map(|v| v as u128), direct);
        }
    }

    #[test]
    fn huge_levels_use_big_indices() {
        let g = CongruenceGroup::new(3, 30).unwrap();
        assert!(g.order().is_none());
        assert_eq!(g.order_big(), BigUint::from(3u32).pow(90));
        let idx = g.order_big() - 1u32;
        let e = g.element_big(&idx).unwrap();
        assert_eq!(g.index_big(&e), idx);
        assert!(CongruenceGroup::new(3, 40).is_err());
    }

    #[test]
    fn mixing_groups_is_an_error() {
        let x = phi_encode(3, 1, 1, 0, 0).unwrap();
        let y = phi_encode(3, 2, 1, 0, 0).unwrap();
        assert!(matches!(group_mul(&x, &y), Err(Error::GroupMismatch(_))));
    }
}
