use crate::{Error, Result};

/// `H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)` on `[0, 1]`.
pub fn q_entropy(x: f64, q: u32) -> Result<f64> {
    if q < 2 {
        return Err(Error::DomainError(format!("alphabet size {q} < 2")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!("entropy argument {x} outside [0, 1]")));
    }
    let lq = (q as f64).ln();
    let xlx = |t: f64| if t == 0.0 { 0.0 } else { t * t.ln() };
    Ok((x * ((q - 1) as f64).ln() - xlx(x) - xlx(1.0 - x)) / lq)
}

/// The inverse of `H_q` on its increasing branch `[0, 1 - 1/q]`, by bisection
/// down to adjacent floats.
pub fn q_entropy_inv(y: f64, q: u32) -> Result<f64> {
    if q < 2 {
        return Err(Error::DomainError(format!("alphabet size {q} < 2")));
    }
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::DomainError(format!("entropy value {y} outside [0, 1]")));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1.0 / q as f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if q_entropy(mid, q)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (elo, ehi) = (q_entropy(lo, q)?, q_entropy(hi, q)?);
    Ok(if (elo - y).abs() <= (ehi - y).abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((q_entropy(0.5, 2).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(q_entropy(0.0, 2).unwrap(), 0.0);
        assert!((q_entropy(2.0 / 3.0, 3).unwrap() - 1.0).abs() < 1e-15);
        assert!(q_entropy(1.5, 2).is_err());
        assert!(q_entropy_inv(-0.1, 2).is_err());
    }

    #[test]
    fn inverse_round_trips_on_grid() {
        for q in [2, 3, 5] {
            for i in 0..=100 {
                let y = i as f64 / 100.0;
                let x = q_entropy_inv(y, q).unwrap();
                assert!((q_entropy(x, q).unwrap() - y).abs() <= 1e-12, "q={q} y={y}");
            }
        }
    }

    #[test]
    fn inverse_of_one_eighth() {
        // Independent Newton iteration on the binary entropy.
        let mut x: f64 = 0.01;
        for _ in 0..100 {
            let h = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
            let dh = ((1.0 - x) / x).log2();
            x -= (h - 0.125) / dh;
        }
        let got = q_entropy_inv(0.125, 2).unwrap();
        assert!((got - x).abs() < 1e-12);
        assert!((q_entropy(got, 2).unwrap() - 0.125).abs() < 1e-12);
    }
}
