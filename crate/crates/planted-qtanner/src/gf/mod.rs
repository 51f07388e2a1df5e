//! Exact linear algebra over prime fields.

mod code;
mod elim;
mod field;
pub mod io;
mod matrix;
mod vector;

use std::sync::atomic::{AtomicU64, Ordering};

pub use code::{coset_min_weight, coset_min_weight_with_budget, min_distance, min_distance_with_budget, LinearCode, RowSpace};
pub use elim::{kernel_basis, rank, solve, in_rowspace};
pub use field::PrimeField;
pub(crate) use field::is_prime;
pub use matrix::{FMatrix, DENSE_LIMIT};
pub use vector::FVector;

pub(crate) use code::enumerate_min;
pub(crate) use elim::rref_rows;

/// Distance reported for the zero code.
pub const INFINITE_DISTANCE: usize = usize::MAX;

pub const DEFAULT_BUDGET: u64 = 1 << 24;

static BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_BUDGET);

/// Process-wide cap on the number of vectors any exhaustive loop may visit.
pub fn enumeration_budget() -> u64 {
    BUDGET.load(Ordering::Relaxed)
}

pub fn set_enumeration_budget(budget: u64) {
    BUDGET.store(budget, Ordering::Relaxed);
}

/// `base^exp` if it does not exceed `budget`.
pub(crate) fn checked_count(what: &str, base: u64, exp: u64, budget: u64) -> crate::Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base) {
            Some(v) if v <= budget => v,
            _ => return Err(crate::Error::budget(what, format!("{base}^{exp}"), budget)),
        };
    }
    if acc > budget {
        return Err(crate::Error::budget(what, format!("{base}^{exp}"), budget));
    }
    Ok(acc)
}
