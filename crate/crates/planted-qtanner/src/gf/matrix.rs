use serde::{Deserialize, Serialize};

use super::{FVector, PrimeField};
use crate::{Error, Result};

/// Matrices with at most this many entries are stored densely.
pub const DENSE_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug)]
enum Storage {
    Dense(Vec<u32>),
    /// Per-row `(column, value)` lists, sorted by column, values nonzero.
    Sparse(Vec<Vec<(u32, u32)>>),
}

/// A matrix over `F_p` stored densely or as sparse row lists.
///
/// Equality compares entries, never storage.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "super::io::JsonMatrix", into = "super::io::JsonMatrix")]
pub struct FMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl PartialEq for FMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && (0..self.rows).all(|r| self.row(r) == other.row(r))
    }
}

impl Eq for FMatrix {}

impl FMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        let storage = if rows * cols <= DENSE_LIMIT {
            Storage::Dense(vec![0; rows * cols])
        } else {
            Storage::Sparse(vec![Vec::new(); rows])
        };
        FMatrix { field, rows, cols, storage }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        Self::from_triplets(field, n, n, (0..n).map(|i| (i, i, 1))).expect("identity entries are valid")
    }

    /// Builds from dense rows; every row must have length `cols`.
    pub fn from_dense_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut trip = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {r} has length {}, expected {cols}", row.len())));
            }
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    trip.push((r, c, v));
                }
            }
        }
        Self::from_triplets(field, rows.len(), cols, trip)
    }

    pub fn from_vectors(field: PrimeField, cols: usize, rows: &[FVector]) -> Result<Self> {
        let dense: Vec<Vec<u32>> = rows.iter().map(|v| v.entries().to_vec()).collect();
        Self::from_dense_rows(field, cols, &dense)
    }

    /// Builds from `(row, col, value)` triplets. Repeated positions add mod p.
    pub fn from_triplets(
        field: PrimeField,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Result<Self> {
        let mut lists: Vec<Vec<(u32, u32)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!("entry ({r},{c}) outside {rows}x{cols}")));
            }
            if !field.contains(v) {
                return Err(Error::DomainError(format!("entry {v} is not a residue mod {}", field.p())));
            }
            lists[r].push((c as u32, v));
        }
        for l in lists.iter_mut() {
            l.sort_by_key(|e| e.0);
            let mut merged: Vec<(u32, u32)> = Vec::with_capacity(l.len());
            for &(c, v) in l.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 = field.add(last.1, v),
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *l = merged;
        }
        let mut m = FMatrix {
            field,
            rows,
            cols,
            storage: Storage::Sparse(lists),
        };
        if rows * cols <= DENSE_LIMIT {
            m = m.into_dense_storage();
        }
        Ok(m)
    }

    pub fn into_dense_storage(self) -> Self {
        match self.storage {
            Storage::Dense(_) => self,
            Storage::Sparse(lists) => {
                let mut d = vec![0; self.rows * self.cols];
                for (r, l) in lists.iter().enumerate() {
                    for &(c, v) in l {
                        d[r * self.cols + c as usize] = v;
                    }
                }
                FMatrix {
                    storage: Storage::Dense(d),
                    ..self
                }
            }
        }
    }

    pub fn into_sparse_storage(self) -> Self {
        let lists = (0..self.rows)
            .map(|r| self.row(r).into_iter().map(|(c, v)| (c as u32, v)).collect())
            .collect();
        FMatrix {
            storage: Storage::Sparse(lists),
            ..self
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        match &self.storage {
            Storage::Dense(d) => d[r * self.cols + c],
            Storage::Sparse(l) => l[r]
                .binary_search_by_key(&(c as u32), |e| e.0)
                .map(|i| l[r][i].1)
                .unwrap_or(0),
        }
    }

    /// Nonzero entries of row `r` as `(column, value)`, by increasing column.
    pub fn row(&self, r: usize) -> Vec<(usize, u32)> {
        match &self.storage {
            Storage::Dense(d) => d[r * self.cols..(r + 1) * self.cols]
                .iter()
                .enumerate()
                .filter(|e| *e.1 != 0)
                .map(|(c, &v)| (c, v))
                .collect(),
            Storage::Sparse(l) => l[r].iter().map(|&(c, v)| (c as usize, v)).collect(),
        }
    }

    pub fn row_dense(&self, r: usize) -> Vec<u32> {
        match &self.storage {
            Storage::Dense(d) => d[r * self.cols..(r + 1) * self.cols].to_vec(),
            Storage::Sparse(_) => {
                let mut out = vec![0; self.cols];
                for (c, v) in self.row(r) {
                    out[c] = v;
                }
                out
            }
        }
    }

    pub fn row_vector(&self, r: usize) -> FVector {
        FVector::new(self.field, self.row_dense(r)).expect("stored entries are residues")
    }

    pub fn dense_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row_dense(r)).collect()
    }

    /// All nonzero entries as `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, u32)> {
        (0..self.rows)
            .flat_map(|r| self.row(r).into_iter().map(move |(c, v)| (r, c, v)))
            .collect()
    }

    pub fn nnz(&self) -> usize {
        (0..self.rows).map(|r| self.row_weight(r)).sum()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        match &self.storage {
            Storage::Dense(d) => d[r * self.cols..(r + 1) * self.cols].iter().filter(|&&v| v != 0).count(),
            Storage::Sparse(l) => l[r].len(),
        }
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for r in 0..self.rows {
            for (c, _) in self.row(r) {
                w[c] += 1;
            }
        }
        w
    }

    pub fn max_row_weight(&self) -> usize {
        (0..self.rows).map(|r| self.row_weight(r)).max().unwrap_or(0)
    }

    pub fn max_col_weight(&self) -> usize {
        self.col_weights().into_iter().max().unwrap_or(0)
    }

    /// Entry sum of every row, mod p.
    pub fn row_sums(&self) -> Vec<u32> {
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|r| (self.row(r).iter().map(|e| e.1 as u64).sum::<u64>() % p) as u32)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.rows).all(|r| self.row_weight(r) == 0)
    }

    pub fn transpose(&self) -> FMatrix {
        let trip = self.triplets().into_iter().map(|(r, c, v)| (c, r, v));
        FMatrix::from_triplets(self.field, self.cols, self.rows, trip).expect("transposed entries are valid")
    }

    pub fn mul_vec(&self, v: &FVector) -> FVector {
        assert_eq!(v.len(), self.cols, "matrix-vector length mismatch");
        let p = self.field.p() as u64;
        let x = v.entries();
        let out = (0..self.rows)
            .map(|r| (self.row(r).iter().map(|&(c, a)| a as u64 * x[c] as u64 % p).sum::<u64>() % p) as u32)
            .collect();
        FVector::new(self.field, out).expect("reduced entries are residues")
    }

    /// `self * other^T`, i.e. all pairwise row inner products.
    pub fn mul_transpose(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let p = self.field.p() as u64;
        let other_t = other.transpose();
        let mut trip = Vec::new();
        for r in 0..self.rows {
            let mut acc = vec![0u64; other.rows];
            for (c, a) in self.row(r) {
                for (s, b) in other_t.row(c) {
                    acc[s] = (acc[s] + a as u64 * b as u64) % p;
                }
            }
            for (s, v) in acc.into_iter().enumerate() {
                if v != 0 {
                    trip.push((r, s, v as u32));
                }
            }
        }
        FMatrix::from_triplets(self.field, self.rows, other.rows, trip).expect("product entries are valid")
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.cols || self.field != other.field {
            return Err(Error::DimensionMismatch("vstack needs equal column counts and fields".into()));
        }
        let off = self.rows;
        let trip = self
            .triplets()
            .into_iter()
            .chain(other.triplets().into_iter().map(|(r, c, v)| (r + off, c, v)));
        FMatrix::from_triplets(self.field, self.rows + other.rows, self.cols, trip)
    }

    /// Reorders columns so that new column `j` is old column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> FMatrix {
        assert_eq!(perm.len(), self.cols);
        let mut inv = vec![0; self.cols];
        for (j, &old) in perm.iter().enumerate() {
            inv[old] = j;
        }
        let trip = self.triplets().into_iter().map(|(r, c, v)| (r, inv[c], v));
        FMatrix::from_triplets(self.field, self.rows, self.cols, trip).expect("permuted entries are valid")
    }
}
