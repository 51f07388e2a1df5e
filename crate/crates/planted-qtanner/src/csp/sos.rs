use crate::{Error, Result};

/// Number of SoS levels, `c1 c2 m / (4 ℓ)`, that fail to refute an
/// instance on `m` variables with locality `ℓ` and expansion constants `(c1, c2)`.
pub fn sos_level_bound(c1: f64, c2: f64, m: f64, ell: f64) -> Result<f64> {
    for (name, v) in [("c1", c1), ("c2", c2), ("m", m), ("ell", ell)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::DomainError(format!("{name} = {v} must be positive and finite")));
        }
    }
    Ok(c1 * c2 * m / (4.0 * ell))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        assert_eq!(sos_level_bound(1.0, 1.0, 100.0, 25.0).unwrap(), 1.0);
        assert!((sos_level_bound(0.01, 0.1, 1e4, 25.0).unwrap() - 0.1).abs() < 1e-12);
        let a = sos_level_bound(0.3, 0.2, 500.0, 9.0).unwrap();
        let b = sos_level_bound(0.3, 0.2, 1500.0, 9.0).unwrap();
        assert!((b / a - 3.0).abs() < 1e-12);
    }

    #[test]
    fn domain() {
        assert!(sos_level_bound(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(sos_level_bound(1.0, 1.0, 1.0, f64::INFINITY).is_err());
    }
}
