use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A nonnegative rational expansion constant, or `+∞` for an empty quantifier.
/// Serialized as `"a/b"`, `"a"` or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rho {
    Finite(Ratio<u64>),
    Infinite,
}

impl Rho {
    pub fn new(num: u64, den: u64) -> Self {
        Rho::Finite(Ratio::new(num, den))
    }

    pub fn zero() -> Self {
        Rho::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rho::Finite(r) if *r.numer() == 0)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rho::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Rho::Infinite => f64::INFINITY,
        }
    }

    /// `self * n <= value`, exactly.
    pub fn times_le(&self, n: u64, value: u64) -> bool {
        match self {
            Rho::Finite(r) => *r.numer() as u128 * n as u128 <= value as u128 * *r.denom() as u128,
            Rho::Infinite => n == 0,
        }
    }

    pub fn squared_half(&self) -> Rho {
        match self {
            Rho::Finite(r) => Rho::Finite(r * r / 2),
            Rho::Infinite => Rho::Infinite,
        }
    }
}

impl Ord for Rho {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rho::Infinite, Rho::Infinite) => Ordering::Equal,
            (Rho::Infinite, _) => Ordering::Greater,
            (_, Rho::Infinite) => Ordering::Less,
            (Rho::Finite(a), Rho::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Rho {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Finite(r) => write!(f, "{r}"),
            Rho::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Rho {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Rho::Infinite);
        }
        let bad = || Error::Parse(format!("`{s}` is not a nonnegative rational"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim().parse::<u64>().map_err(|_| bad())?, d.trim().parse::<u64>().map_err(|_| bad())?),
            None => (s.parse::<u64>().map_err(|_| bad())?, 1),
        };
        if d == 0 {
            return Err(bad());
        }
        Ok(Rho::new(n, d))
    }
}

impl Serialize for Rho {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rho {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
