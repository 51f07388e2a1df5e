//! Gauss-Jordan elimination with first-nonzero pivoting.
//!
//! `F_2` rows are bit-packed; other fields use one `u32` per entry. Both
//! backends produce the same reduced row echelon form.

use super::{FMatrix, FVector, PrimeField};
use crate::par;

/// Reduced row echelon form of a row list: nonzero rows only, each with a
/// leading 1 in its pivot column and zeros in every other pivot column.
#[derive(Clone, Debug)]
pub(crate) struct Rref {
    pub field: PrimeField,
    pub cols: usize,
    pub rows: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

/// Row count above which a pivot's elimination sweep runs in parallel.
const PAR_WORK: usize = 1 << 15;

pub(crate) fn rref_rows(field: PrimeField, cols: usize, rows: Vec<Vec<u32>>) -> Rref {
    if field.p() == 2 {
        rref_bits(field, cols, rows)
    } else {
        rref_mod(field, cols, rows)
    }
}

fn rref_bits(field: PrimeField, cols: usize, rows: Vec<Vec<u32>>) -> Rref {
    let words = cols.div_ceil(64);
    let mut mat: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| {
            let mut w = vec![0u64; words];
            for (c, &v) in r.iter().enumerate() {
                if v != 0 {
                    w[c / 64] |= 1 << (c % 64);
                }
            }
            w
        })
        .collect();
    let n = mat.len();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if rank == n {
            break;
        }
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(r) = (rank..n).find(|&r| mat[r][w] & bit != 0) else {
            continue;
        };
        mat.swap(rank, r);
        let pivot = mat[rank].clone();
        let sweep = |i: usize, row: &mut Vec<u64>| {
            if i != rank && row[w] & bit != 0 {
                for k in w..words {
                    row[k] ^= pivot[k];
                }
            }
        };
        if n * (words - w) >= PAR_WORK {
            par::for_each_mut(&mut mat, sweep);
        } else {
            for (i, row) in mat.iter_mut().enumerate() {
                sweep(i, row);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    mat.truncate(rank);
    let rows = mat
        .into_iter()
        .map(|w| (0..cols).map(|c| ((w[c / 64] >> (c % 64)) & 1) as u32).collect())
        .collect();
    Rref { field, cols, rows, pivots }
}

fn rref_mod(field: PrimeField, cols: usize, mut mat: Vec<Vec<u32>>) -> Rref {
    let n = mat.len();
    let p = field.p() as u64;
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if rank == n {
            break;
        }
        let Some(r) = (rank..n).find(|&r| mat[r][col] != 0) else {
            continue;
        };
        mat.swap(rank, r);
        let inv = field.inv(mat[rank][col]);
        for v in mat[rank][col..].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let pivot = mat[rank].clone();
        let sweep = |i: usize, row: &mut Vec<u32>| {
            let f = row[col];
            if i != rank && f != 0 {
                let neg = p - f as u64;
                for k in col..cols {
                    row[k] = ((row[k] as u64 + neg * pivot[k] as u64) % p) as u32;
                }
            }
        };
        if n * (cols - col) >= PAR_WORK {
            par::for_each_mut(&mut mat, sweep);
        } else {
            for (i, row) in mat.iter_mut().enumerate() {
                sweep(i, row);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    mat.truncate(rank);
    Rref {
        field,
        cols,
        rows: mat,
        pivots,
    }
}

impl Rref {
    pub fn of(m: &FMatrix) -> Rref {
        rref_rows(m.field(), m.cols(), m.dense_rows())
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Subtracts pivot-row multiples from `v`; the result is zero iff `v`
    /// lies in the row span.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = f.sub(*x, f.mul(c, r));
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Basis of the null space `{y : row . y = 0 for every row}`, one vector
    /// per free column in increasing order.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    v[pc] = f.neg(row[free]);
                }
                v
            })
            .collect()
    }
}

/// Row rank over `F_p`.
pub fn rank(m: &FMatrix) -> usize {
    Rref::of(m).rank()
}

/// Basis of `{y : M y = 0}` as the rows of the returned matrix.
pub fn kernel_basis(m: &FMatrix) -> FMatrix {
    let basis = Rref::of(m).kernel();
    FMatrix::from_dense_rows(m.field(), m.cols(), &basis).expect("kernel rows have matrix width")
}

/// Some `y` with `A y = b`, or `None` when the system is inconsistent.
pub fn solve(a: &FMatrix, b: &FVector) -> Option<FVector> {
    assert_eq!(b.len(), a.rows(), "right-hand side length must equal row count");
    let cols = a.cols();
    let rows: Vec<Vec<u32>> = (0..a.rows())
        .map(|r| {
            let mut row = a.row_dense(r);
            row.push(b.get(r));
            row
        })
        .collect();
    let red = rref_rows(a.field(), cols + 1, rows);
    if red.pivots.last() == Some(&cols) {
        return None;
    }
    let mut y = vec![0; cols];
    for (row, &pc) in red.rows.iter().zip(&red.pivots) {
        y[pc] = row[cols];
    }
    Some(FVector::new(a.field(), y).expect("reduced entries are residues"))
}

/// Whether `v` is an `F_p`-combination of the rows of `m`, decided by solving
/// `M^T x = v`.
pub fn in_rowspace(m: &FMatrix, v: &FVector) -> bool {
    assert_eq!(v.len(), m.cols(), "vector length must equal column count");
    solve(&m.transpose(), v).is_some()
}
