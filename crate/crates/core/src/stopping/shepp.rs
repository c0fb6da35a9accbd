use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special_fn::{find_root, kummer_m, phi_cdf, KummerParams, KUMMER_MAX_Z};

fn m_fn(a: f64, b: f64, z: f64) -> Result<f64> {
    kummer_m(KummerParams::new(a, b, z)?)
}

/// Smallest positive root `z*` of `z ↦ M(-μ, ½, z)`, for `μ > 0`.
pub fn smallest_kummer_root(mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::domain(format!("moment order must be positive, got {mu}")));
    }
    let f = |z: f64| m_fn(-mu, 0.5, z);
    let step = 0.01 / (1.0 + mu);
    let mut prev = 0.0;
    let mut z = step;
    while z <= KUMMER_MAX_Z {
        let v = f(z)?;
        if v <= 0.0 {
            if v == 0.0 {
                return Ok(z);
            }
            let g = |t: f64| f(t).unwrap_or(f64::NAN);
            return find_root(g, prev, z);
        }
        prev = z;
        z += step;
    }
    Err(Error::numeric(format!("M(-{mu}, 1/2, z) has no root for 0 < z <= {KUMMER_MAX_Z}")))
}

/// Boundary `c* = √(2z*)` above which `E(T^μ)` is infinite.
pub fn finiteness_threshold(mu: f64) -> Result<f64> {
    smallest_kummer_root(mu).map(|z| (2.0 * z).sqrt())
}

/// `E(T^μ)` for `T = inf{t ≥ m : |W_t| ≥ c√t}`:
///
/// `m^μ (2Φ(-c) + √(2/π) · M(1-μ, 3/2, c²/2) / M(-μ, ½, c²/2) · c e^{-c²/2})`.
///
/// For `μ > 0` the moment is `+∞` from the first root of the denominator
/// onwards. Boundaries with `c²/2` beyond the Kummer range are rejected.
pub fn shepp_moment(m: u64, mu: f64, c: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("initial toss count must be positive"));
    }
    if !(c > 0.0 && c.is_finite()) || !mu.is_finite() {
        return Err(Error::domain(format!("need finite c > 0 and finite mu, got c = {c}, mu = {mu}")));
    }
    let z = 0.5 * c * c;
    if z > KUMMER_MAX_Z {
        return Err(Error::domain(format!("c = {c} is beyond the supported range c <= 10")));
    }
    if mu > 0.0 && z >= smallest_kummer_root(mu)? {
        return Ok(f64::INFINITY);
    }
    let denominator = m_fn(-mu, 0.5, z)?;
    if denominator <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let numerator = m_fn(1.0 - mu, 1.5, z)?;
    let bracket = 2.0 * phi_cdf(-c)? + (2.0 / PI).sqrt() * numerator / denominator * c * (-z).exp();
    Ok((m as f64).powf(mu) * bracket)
}

/// Expected likelihood ratio on first reaching the `c`-sigma boundary,
/// `(1 + c²) / (c√m)`.
pub fn expected_lr_at_stopping(m: u64, c: f64) -> Result<f64> {
    if m == 0 || !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain(format!("need m >= 1 and c > 0, got m = {m}, c = {c}")));
    }
    Ok((1.0 + c * c) / (c * (m as f64).sqrt()))
}

/// The same expectation before the Gaussian tail is replaced by its
/// leading term: `√(π/2) e^{c²/2} E(T^{-1/2})`.
pub fn expected_lr_at_stopping_analytic(m: u64, c: f64) -> Result<f64> {
    Ok((PI / 2.0).sqrt() * (0.5 * c * c).exp() * shepp_moment(m, -0.5, c)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert!((finiteness_threshold(1.0).unwrap() - 1.0).abs() < 1e-6);
        assert!((finiteness_threshold(0.5).unwrap() - 1.3069).abs() < 1e-3);
        assert!(finiteness_threshold(0.0).is_err());
    }

    #[test]
    fn threshold_for_two_is_verified_by_moment() {
        let c_star = finiteness_threshold(2.0).unwrap();
        // Root of 1 - 4z + 4z²/3.
        let z = 1.5 - 1.5f64.sqrt();
        assert!((c_star - (2.0 * z).sqrt()).abs() < 1e-9);
        assert!(shepp_moment(100, 2.0, c_star - 1e-6).unwrap().is_finite());
        assert!(shepp_moment(100, 2.0, c_star + 1e-6).unwrap().is_infinite());
    }

    #[test]
    fn inverse_square_root_moment_simplifies() {
        for c in [0.3, 1.0, 2.0, 3.5] {
            let m = 10_000;
            let simplified =
                (2.0 * phi_cdf(-c).unwrap() + (2.0 / PI).sqrt() * c * (-0.5 * c * c).exp()) / (m as f64).sqrt();
            let got = shepp_moment(m, -0.5, c).unwrap();
            assert!((got / simplified - 1.0).abs() < 1e-13);
        }
        let tiny = shepp_moment(400, -0.5, 1e-9).unwrap();
        assert!((tiny - 0.05).abs() < 1e-10);
    }

    #[test]
    fn first_moment_finite_only_below_one() {
        assert!(shepp_moment(10, 1.0, 1.0).unwrap().is_infinite());
        assert!(shepp_moment(10, 1.0, 0.99).unwrap().is_finite());
    }

    #[test]
    fn expected_lr_examples() {
        assert!((expected_lr_at_stopping(10_000, 2.0).unwrap() - 0.025).abs() < 1e-15);
        assert_eq!(expected_lr_at_stopping(1, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(shepp_moment(0, -0.5, 1.0).is_err());
        assert!(shepp_moment(10, -0.5, 0.0).is_err());
        assert!(shepp_moment(10, -0.5, 11.0).is_err());
    }
}
