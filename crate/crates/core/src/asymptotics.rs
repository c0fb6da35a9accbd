//! Leading-order approximations for the uniform-vs-fair comparison and the
//! guaranteed envelopes that come with them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::phi_cdf;

/// Where the bracket of an [`ErrorEnvelope`] comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Stirling envelope with relative error terms `E1` and `E2`.
    E1E2,
    /// Two-sided Mills-ratio bounds on the Gaussian tail.
    Mills,
    /// Monte Carlo truncation at a toss cap.
    Truncation,
    None,
}

/// An asymptotic estimate together with a guaranteed interval for the
/// exact quantity it approximates.
///
/// `value` is the approximation itself. It need not lie inside
/// `[lower, upper]`: the bracket bounds the exact quantity, not the
/// approximation (the Mills value, for example, always sits above its
/// bracket).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEnvelope {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub provenance: Provenance,
}

impl ErrorEnvelope {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// Worst-case relative error of `value` against anything in the bracket.
    pub fn max_relative_error(&self) -> f64 {
        ((self.value - self.lower) / self.lower).abs().max(((self.upper - self.value) / self.upper).abs())
    }
}

fn check_n(n: f64) -> Result<()> {
    if n > 0.0 && n.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("n must be positive, got {n}")))
    }
}

/// `√(π/(2n)) · e^{u²/2}`.
///
/// `n` is real so the formula can be probed off the integers.
pub fn lr_approx(n: f64, u: f64) -> Result<f64> {
    check_n(n)?;
    Ok((PI / (2.0 * n)).sqrt() * (0.5 * u * u).exp())
}

/// Guaranteed interval for the exact uniform-vs-fair likelihood ratio at
/// `(n, u)`, valid in the regime `n ≤ 4k ≤ 3n`, i.e. `|u| ≤ √n / 2`.
///
/// With `(1+E1) LR = √(π/2n) exp(u²(1+E2)/2)` and
/// `0 ≤ E1 ≤ 1/n`, `u²/(6n) - 4/(3n) ≤ E2 ≤ 2u²/(9n) - 1/n`,
/// the lower end takes `E1 = 1/n` with the smallest `E2` and the upper end
/// `E1 = 0` with the largest.
///
/// Bounds overflow for `u²/2` beyond about 700; use [`ln_lr_envelope`] there.
pub fn lr_envelope(n: u64, u: f64) -> Result<ErrorEnvelope> {
    let ln = ln_lr_envelope(n, u)?;
    Ok(ErrorEnvelope { value: ln.value.exp(), lower: ln.lower.exp(), upper: ln.upper.exp(), provenance: ln.provenance })
}

/// [`lr_envelope`] with every field on the natural-log scale.
pub fn ln_lr_envelope(n: u64, u: f64) -> Result<ErrorEnvelope> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let nf = n as f64;
    let limit = 0.5 * nf.sqrt();
    if !u.is_finite() || u.abs() > limit * (1.0 + 1e-12) {
        return Err(Error::domain(format!(
            "envelope is only proven for |u| <= sqrt(n)/2 = {limit}, got u = {u}"
        )));
    }
    let u2 = u * u;
    let e2_lo = u2 / (6.0 * nf) - 4.0 / (3.0 * nf);
    let e2_hi = 2.0 * u2 / (9.0 * nf) - 1.0 / nf;
    let ln_base = 0.5 * (PI / (2.0 * nf)).ln();
    Ok(ErrorEnvelope {
        value: ln_base + 0.5 * u2,
        lower: ln_base + 0.5 * u2 * (1.0 + e2_lo) - (1.0 / nf).ln_1p(),
        upper: ln_base + 0.5 * u2 * (1.0 + e2_hi),
        provenance: Provenance::E1E2,
    })
}

/// Leading behaviour `√(2/(πu²)) e^{-u²/2}` of the two-sided p-value, with
/// the Mills-ratio bracket for the exact `2Φ(-|u|)`:
/// `(u²/(u²+1)) / |u| · e^{-u²/2} < ∫_{|u|}^∞ e^{-x²/2} dx < ((u²+2)/(u²+3)) / |u| · e^{-u²/2}`.
pub fn p_approx(u: f64) -> Result<ErrorEnvelope> {
    if u == 0.0 || !u.is_finite() {
        return Err(Error::domain(format!("p-value approximation is singular at u = {u}")));
    }
    let u2 = u * u;
    let scale = (2.0 / PI).sqrt() / u.abs() * (-0.5 * u2).exp();
    Ok(ErrorEnvelope {
        value: scale,
        lower: scale * u2 / (u2 + 1.0),
        upper: scale * (u2 + 2.0) / (u2 + 3.0),
        provenance: Provenance::Mills,
    })
}

/// Two-sided normal-approximation p-value `2Φ(-|u|)`.
pub fn normal_p_two_sided(u: f64) -> Result<f64> {
    Ok(2.0 * phi_cdf(-u.abs())?)
}

/// p-value implied by a likelihood ratio at sample size `n`:
/// `1 / √(n ℓ² ln(2n ℓ²/π))`.
pub fn p_from_lr(n: f64, lr: f64) -> Result<f64> {
    check_n(n)?;
    if !(lr > 0.0) {
        return Err(Error::domain(format!("likelihood ratio must be positive, got {lr}")));
    }
    let arg = 2.0 * n * lr * lr / PI;
    if !(arg > 1.0) {
        return Err(Error::domain(format!("need 2 n LR² / π > 1, got {arg}")));
    }
    Ok(1.0 / (n * lr * lr * arg.ln()).sqrt())
}

/// Largest `r` for which the approximation for `ℓ` is claimed to be good.
pub const LR_PVALUE_VALID_R: f64 = 0.05;

/// p-value of the likelihood ratio under the uniform hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrPValue {
    /// `r = P(LR ≤ ℓ | uniform) = (|v|√n + 1)/(n + 1)`.
    pub r: f64,
    /// Approximate likelihood ratio `√(π/2n) exp(n r²/2 - r(1-r))`.
    pub ell: f64,
    /// `r ≤ 0.05`, the regime where the approximation for `ell` holds.
    pub accurate: bool,
}

/// p-value `r` of the likelihood ratio under the uniform hypothesis for an
/// observed deviation `v`, and the approximate likelihood ratio recovered
/// from `r` alone.
///
/// `ell` substitutes `|v| = (rn - (1-r))/√n` into the leading-order
/// likelihood ratio; the exponent is `v²/2 = n r²/2 - r(1-r) + O(1/n)`.
pub fn lr_pvalue_under_h1(n: u64, v: f64) -> Result<LrPValue> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let nf = n as f64;
    let root = nf.sqrt();
    if !v.is_finite() || v.abs() > root * (1.0 + 1e-12) {
        return Err(Error::domain(format!("|v| = {} exceeds sqrt(n) = {root}", v.abs())));
    }
    let r = ((v.abs() * root + 1.0) / (nf + 1.0)).min(1.0);
    let ell = (PI / (2.0 * nf)).sqrt() * (0.5 * nf * r * r - r * (1.0 - r)).exp();
    Ok(LrPValue { r, ell, accurate: r <= LR_PVALUE_VALID_R })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_lr_uniform_vs_fair, standardize, Experiment};

    #[test]
    fn lr_approx_examples() {
        // Direct evaluation gives 11.7708.
        assert!((lr_approx(10_000.0, 3.70).unwrap() - 11.7708).abs() < 1e-3);
        assert!((lr_approx(2.0 * PI, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((lr_approx(1e11, 4.97).unwrap() - 0.916).abs() < 5e-3);
    }

    #[test]
    fn envelope_examples() {
        assert!(lr_envelope(20, 1.789).unwrap().contains(1.288));
        let center = exact_lr_uniform_vs_fair(Experiment::new(100, 50).unwrap());
        assert!(lr_envelope(100, 0.0).unwrap().contains(center));
        assert!(lr_envelope(1000, 2.530).unwrap().contains(0.972));
    }

    #[test]
    fn envelope_regime_is_enforced() {
        // n = 16: |u| <= 2 is the proven regime.
        assert!(lr_envelope(16, 2.0).is_ok());
        assert!(matches!(lr_envelope(16, 2.01), Err(Error::Domain(_))));
        // k = n/4 exactly sits on the boundary.
        let p = standardize(Experiment::new(1000, 250).unwrap(), 0.5).unwrap();
        assert!(lr_envelope(1000, p.u).is_ok());
    }

    #[test]
    fn p_approx_examples() {
        for (u, bound) in [(2.0, 0.19), (5.0, 0.04)] {
            let exact = normal_p_two_sided(u).unwrap();
            let rel = (p_approx(u).unwrap().value - exact) / exact;
            assert!(rel.abs() < bound, "u = {u}: {rel}");
        }
        let env = p_approx(3.0).unwrap();
        assert!(env.contains(normal_p_two_sided(3.0).unwrap()));
        assert!(matches!(p_approx(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn p_from_lr_examples() {
        let p = p_from_lr(1e6, 1.001).unwrap();
        assert!((p / 2.7e-4 - 1.0).abs() < 0.1);
        let p = p_from_lr(1e4, 1.002).unwrap();
        assert!((p / 3.2e-3 - 1.0).abs() < 0.1);
        assert!(matches!(p_from_lr(1.0, 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn lr_pvalue_examples() {
        let r = lr_pvalue_under_h1(400, 1.0).unwrap();
        assert!((r.r - 21.0 / 401.0).abs() < 1e-15);
        assert!(!r.accurate);
        assert_eq!(lr_pvalue_under_h1(400, 20.0).unwrap().r, 1.0);
        let r = lr_pvalue_under_h1(10_000, 3.70).unwrap();
        assert!((r.r - 371.0 / 10_001.0).abs() < 1e-15);
        assert!(r.accurate);
        let exact = exact_lr_uniform_vs_fair(Experiment::new(10_000, 4815).unwrap());
        assert!((r.ell / exact - 1.0).abs() < 0.1, "{} vs {exact}", r.ell);
        assert!(matches!(lr_pvalue_under_h1(100, 10.5), Err(Error::Domain(_))));
    }
}
