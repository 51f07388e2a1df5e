use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Depth lower bound `(1/3) ln(δ² n / (400 ln(1/μ)))` for circuits preparing a
/// state with `μ`-spread distributions over `δ n`-separated sets.
pub fn depth_lower_bound(n: f64, mu: f64, delta: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0) || !(delta > 0.0) || !(n > 0.0) || !n.is_finite() || !delta.is_finite() {
        return Err(Error::DomainError(format!("need 0 < mu < 1, delta > 0, n > 0 (got mu={mu}, delta={delta}, n={n})")));
    }
    Ok((delta * delta * n / (400.0 * (1.0 / mu).ln())).ln() / 3.0)
}

/// One more than [`depth_lower_bound`]: circuits of this depth or less cannot
/// prepare the state.
pub fn nlts_depth_bound(n: f64, mu: f64, delta: f64) -> Result<f64> {
    Ok(depth_lower_bound(n, mu, delta)? + 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonThreshold {
    pub epsilon: f64,
    /// `1000 ε`, the syndrome radius used for clustering.
    pub epsilon_prime: f64,
}

/// `ε = min{ε0/2, c2/(4 c1), (d/n)/(2 c1)} / 1000`.
pub fn epsilon_threshold(eps0: f64, c1: f64, c2: f64, d_over_n: f64) -> Result<EpsilonThreshold> {
    for (name, v) in [("eps0", eps0), ("c1", c1), ("c2", c2), ("d/n", d_over_n)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::DomainError(format!("{name} = {v} must be positive and finite")));
        }
    }
    let epsilon = (eps0 / 2.0).min(c2 / (4.0 * c1)).min(d_over_n / (2.0 * c1)) / 1000.0;
    Ok(EpsilonThreshold {
        epsilon,
        epsilon_prime: 1000.0 * epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn depth_bound_matches_closed_form() {
        let mu = 0.02f64;
        let v = depth_lower_bound(1e12, mu, 0.1).unwrap();
        let expect = (0.01 * 1e12 / (400.0 * (50.0f64).ln())).ln() / 3.0;
        assert!((v - expect).abs() < 1e-12);
        assert!((nlts_depth_bound(1e12, mu, 0.1).unwrap() - v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn depth_bound_vanishes_at_unit_argument() {
        let (mu, delta) = (0.02f64, 0.5f64);
        let n = 400.0 * (1.0 / mu).ln() / (delta * delta);
        assert!(depth_lower_bound(n, mu, delta).unwrap().abs() < 1e-12);
        let v = depth_lower_bound(1e6, 0.02, 0.1).unwrap();
        assert!((v - (1e4 / (400.0 * 50f64.ln())).ln() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn depth_bound_domain() {
        assert!(depth_lower_bound(100.0, 0.0, 0.1).is_err());
        assert!(depth_lower_bound(100.0, 1.0, 0.1).is_err());
        assert!(depth_lower_bound(100.0, 0.5, 0.0).is_err());
        assert!(depth_lower_bound(0.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn epsilon_picks_minimum() {
        let t = epsilon_threshold(1.0, 2.0, 0.1, 0.05).unwrap();
        assert!((t.epsilon - 0.0125 / 1000.0).abs() < 1e-15);
        assert!((t.epsilon_prime - 0.0125).abs() < 1e-12);
        let t = epsilon_threshold(1.0, 5.0, 0.1, 0.05).unwrap();
        assert!((t.epsilon - 5e-6).abs() < 1e-18);
        assert!((t.epsilon_prime / t.epsilon - 1000.0).abs() < 1e-9);
        assert!(epsilon_threshold(1.0, 0.0, 0.1, 0.1).is_err());
        assert!(epsilon_threshold(f64::NAN, 1.0, 0.1, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn depth_bound_monotone_in_n(n in 1.0f64..1e9, mu in 0.001f64..0.999, d in 0.001f64..1.0) {
            let a = depth_lower_bound(n, mu, d).unwrap();
            let b = depth_lower_bound(2.0 * n, mu, d).unwrap();
            prop_assert!(b > a);
            prop_assert!((b - a - 2f64.ln() / 3.0).abs() < 1e-9);
        }
    }
}
