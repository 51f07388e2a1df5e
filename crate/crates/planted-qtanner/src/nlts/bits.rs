use crate::gf::{kernel_basis, FMatrix};
use crate::{Error, Result};

/// Rows of a binary matrix as bitmasks; requires `cols <= 32`.
pub(crate) fn masks(m: &FMatrix) -> Result<Vec<u32>> {
    if m.field().p() != 2 {
        return Err(Error::UnsupportedField(format!("F_{} (binary codes only)", m.field().p())));
    }
    if m.cols() > 32 {
        return Err(Error::DomainError(format!("{} columns exceed the 32-bit state encoding", m.cols())));
    }
    Ok((0..m.rows()).map(|r| m.row(r).iter().fold(0u32, |acc, &(c, _)| acc | 1 << c)).collect())
}

pub(crate) fn parity(x: u32) -> bool {
    x.count_ones() & 1 == 1
}

/// Syndrome as a bitmask over at most 128 checks.
pub(crate) fn syndrome(rows: &[u32], y: u32) -> u128 {
    rows.iter().enumerate().fold(0u128, |acc, (r, &h)| if parity(h & y) { acc | 1 << r } else { acc })
}

pub(crate) fn syndrome_weight(rows: &[u32], y: u32) -> usize {
    rows.iter().filter(|&&h| parity(h & y)).count()
}

/// Lexicographic key of a vector `(y_0, ..., y_{n-1})`: coordinate 0 is most significant.
pub(crate) fn lex_key(y: u32, n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        y.reverse_bits() >> (32 - n)
    }
}

pub(crate) fn bitstring(y: u32, n: usize) -> String {
    (0..n).map(|i| if y >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Fully reduced XOR basis: distinct leading bits, each appearing in one row only.
#[derive(Clone, Debug)]
pub(crate) struct XorBasis {
    rows: Vec<u32>,
}

impl XorBasis {
    pub fn new(gens: &[u32]) -> Self {
        let mut rows: Vec<u32> = Vec::new();
        for &g in gens {
            let mut v = g;
            for &r in &rows {
                v = v.min(v ^ r);
            }
            if v != 0 {
                for r in rows.iter_mut() {
                    *r = (*r).min(*r ^ v);
                }
                rows.push(v);
                rows.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        XorBasis { rows }
    }

    #[cfg(test)]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Canonical representative of `y + span`.
    pub fn reduce(&self, y: u32) -> u32 {
        self.rows.iter().fold(y, |v, &r| v.min(v ^ r))
    }

    pub fn contains(&self, y: u32) -> bool {
        self.reduce(y) == 0
    }

    /// Every element of the span.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = vec![0u32];
        for &r in &self.rows {
            let more: Vec<u32> = out.iter().map(|&x| x ^ r).collect();
            out.extend(more);
        }
        out
    }
}

/// Kernel basis of a binary matrix as bitmasks.
pub(crate) fn kernel_masks(m: &FMatrix) -> Result<Vec<u32>> {
    masks(&kernel_basis(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_basis_is_canonical() {
        let b = XorBasis::new(&[0b1100, 0b0110, 0b1010]);
        assert_eq!(b.dim(), 2);
        let reps: std::collections::HashSet<u32> = (0..16).map(|y| b.reduce(y)).collect();
        assert_eq!(reps.len(), 4);
        assert!(b.contains(0b1010) && !b.contains(0b0001));
        assert_eq!(b.elements().len(), 4);
    }

    #[test]
    fn lex_key_orders_by_first_coordinate() {
        // (1,0,0) > (0,1,1) lexicographically.
        assert!(lex_key(0b001, 3) > lex_key(0b110, 3));
        assert_eq!(bitstring(0b001, 3), "100");
    }
}
