use serde::{Deserialize, Serialize};

use super::PrimeField;
use crate::{Error, Result};

/// A vector in `F_p^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr", into = "VectorRepr")]
pub struct FVector {
    field: PrimeField,
    entries: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    p: u32,
    entries: Vec<u32>,
}

impl TryFrom<VectorRepr> for FVector {
    type Error = Error;
    fn try_from(r: VectorRepr) -> Result<Self> {
        FVector::new(PrimeField::new(r.p)?, r.entries)
    }
}

impl From<FVector> for VectorRepr {
    fn from(v: FVector) -> Self {
        VectorRepr {
            p: v.field.p(),
            entries: v.entries,
        }
    }
}

impl FVector {
    pub fn new(field: PrimeField, entries: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| !field.contains(e)) {
            return Err(Error::DomainError(format!("entry {bad} is not a residue mod {}", field.p())));
        }
        Ok(FVector { field, entries })
    }

    /// Reduces arbitrary integers mod p.
    pub fn from_ints(field: PrimeField, entries: &[i64]) -> Self {
        FVector {
            field,
            entries: entries.iter().map(|&x| field.reduce(x)).collect(),
        }
    }

    pub fn zeros(field: PrimeField, n: usize) -> Self {
        FVector { field, entries: vec![0; n] }
    }

    pub fn ones(field: PrimeField, n: usize) -> Self {
        FVector { field, entries: vec![1 % field.p(); n] }
    }

    pub fn unit(field: PrimeField, n: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, n);
        v.entries[i] = 1;
        v
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries[i]
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn dot(&self, other: &FVector) -> u32 {
        assert_eq!(self.len(), other.len(), "dot product length mismatch");
        let p = self.field.p() as u64;
        let s = self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
        s as u32
    }

    pub fn add(&self, other: &FVector) -> FVector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        let f = self.field;
        FVector {
            field: f,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &FVector) -> FVector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        let f = self.field;
        FVector {
            field: f,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> FVector {
        let f = self.field;
        FVector {
            field: f,
            entries: self.entries.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Sum of entries mod p.
    pub fn entry_sum(&self) -> u32 {
        let p = self.field.p() as u64;
        (self.entries.iter().map(|&e| e as u64).sum::<u64>() % p) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_counts_nonzero_entries() {
        let f = PrimeField::new(3).unwrap();
        let v = FVector::new(f, vec![0, 2, 1, 0]).unwrap();
        assert_eq!(v.weight(), 2);
        assert!(FVector::new(f, vec![3]).is_err());
    }

    #[test]
    fn arithmetic_is_mod_p() {
        let f = PrimeField::new(5).unwrap();
        let a = FVector::from_ints(f, &[1, 2, 3]);
        let b = FVector::from_ints(f, &[4, 4, 4]);
        assert_eq!(a.add(&b).entries(), &[0, 1, 2]);
        assert_eq!(a.sub(&b).entries(), &[2, 3, 4]);
        assert_eq!(a.dot(&b), (4 + 8 + 12) % 5);
        assert_eq!(a.scale(3).entries(), &[3, 1, 4]);
    }
}
