//! Likelihood ratios of general alternatives against `H0: p = p0`.
//!
//! Point alternatives are parametrized by their offset `x` from the
//! empirical rate in units of `σn/n`: `p = (k - x σn)/n`. In these units
//! the likelihood ratio is approximately `exp((u² - x²)/2)`, and a density
//! alternative is that ratio averaged against the density.

mod density;
pub mod quadrature;

use serde::{Deserialize, Serialize};

pub use density::{DensityAlternative, NORMALIZATION_TOL};
pub use quadrature::{QuadOptions, QuadResult};

use crate::error::{Error, Result};
use crate::exact::{check_probability, standardize, Experiment, Parametrization, Sided};
use crate::special_fn::{phi_cdf, phi_inv};

/// The point alternative `p = (k - x σn)/n`, with `y = u + x` and
/// `z = y / σn` so that `p = p0 - p0 q0 z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointAlternative {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub p: f64,
}

impl PointAlternative {
    pub fn new(param: &Parametrization, x: f64) -> Result<Self> {
        let y = param.u + x;
        let z = y / param.sigma_n;
        let p = param.p0 - param.p0 * param.q0 * z;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("offset x = {x} puts the alternative at p = {p}, outside (0, 1)")));
        }
        Ok(Self { x, y, z, p })
    }
}

fn ln_lr_x(e: Experiment, param: &Parametrization, x: f64) -> Result<f64> {
    let alt = PointAlternative::new(param, x)?;
    let k = e.k() as f64;
    let rest = (e.n() - e.k()) as f64;
    let heads = if e.k() == 0 { 0.0 } else { k * (-param.q0 * alt.z).ln_1p() };
    let tails = if e.k() == e.n() { 0.0 } else { rest * (param.p0 * alt.z).ln_1p() };
    Ok(heads + tails)
}

/// Natural log of [`lr_x_exact`]:
/// `(p0 n - u σn) ln(1 - q0 z) + (q0 n + u σn) ln(1 + p0 z)`.
pub fn ln_lr_x_exact(e: Experiment, p0: f64, x: f64) -> Result<f64> {
    let param = standardize(e, p0)?;
    ln_lr_x(e, &param, x)
}

/// Exact likelihood ratio of the point alternative at offset `x` against
/// `p = p0`.
pub fn lr_x_exact(e: Experiment, p0: f64, x: f64) -> Result<f64> {
    ln_lr_x_exact(e, p0, x).map(f64::exp)
}

/// `exp((u² - x²)/2)`.
pub fn lr_x_approx(u: f64, x: f64) -> f64 {
    (0.5 * (u * u - x * x)).exp()
}

/// Deviation and largest attainable point-alternative likelihood ratio for
/// a given p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxLr {
    pub p_value: f64,
    pub sided: Sided,
    pub u: f64,
    pub sup_lr: f64,
}

/// `u = -Φ⁻¹(p)` (one-sided) or `-Φ⁻¹(p/2)` (two-sided), and
/// `sup_x LR_x ≈ exp(u²/2)`.
pub fn max_lr_for_pvalue(p: f64, sided: Sided) -> Result<MaxLr> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p-value must lie in (0, 1), got {p}")));
    }
    let tail = match sided {
        Sided::One => p,
        Sided::Two => 0.5 * p,
    };
    let u = -phi_inv(tail)?;
    Ok(MaxLr { p_value: p, sided, u, sup_lr: (0.5 * u * u).exp() })
}

/// Which likelihood ratio is averaged against the density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrand {
    /// `exp((u² - x²)/2)`.
    #[default]
    Approx,
    /// The exact point likelihood ratio; no asymptotic error, slower.
    Exact,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LrfOptions {
    pub integrand: Integrand,
    pub quad: QuadOptions,
}

/// Likelihood ratio of "p has density f" against `p = p0`, using the
/// approximate point likelihood ratio.
pub fn lr_f(e: Experiment, p0: f64, alt: &DensityAlternative) -> Result<f64> {
    lr_f_with(e, p0, alt, LrfOptions::default())
}

/// Likelihood ratio of a density alternative against `p = p0`:
/// `∫ f(k/n - x σn/n) · (σn/n) · LR_x dx` over the offsets where `p` stays
/// in the support of `f`.
pub fn lr_f_with(e: Experiment, p0: f64, alt: &DensityAlternative, opts: LrfOptions) -> Result<f64> {
    let param = standardize(e, p0)?;
    let n = e.n() as f64;
    let scale = param.sigma_n / n;
    let rate = e.k() as f64 / n;
    let p_at = |x: f64| rate - x * scale;
    let (lo, hi) = alt.support();
    let (x_min, x_max) = ((rate - hi) / scale, (rate - lo) / scale);

    // The log-integrand is concave with its maximum at x = 0 and curvature at
    // least 1 (approximate) or p0 q0 (exact); beyond `reach` from the best
    // admissible offset it is below e^{-800} of the peak.
    let reach = match opts.integrand {
        Integrand::Approx => 40.0,
        Integrand::Exact => 40.0 / param.c0,
    };
    let x_peak = 0.0_f64.clamp(x_min, x_max);
    let a = x_min.max(x_peak - reach);
    let b = x_max.min(x_peak + reach);

    let log_lr = |x: f64| -> f64 {
        match opts.integrand {
            Integrand::Approx => 0.5 * (param.u * param.u - x * x),
            Integrand::Exact => ln_lr_x(e, &param, x).unwrap_or(f64::NEG_INFINITY),
        }
    };
    let peak = match opts.integrand {
        Integrand::Exact if x_peak == x_min || x_peak == x_max => {
            // Boundary peak: nudge inside so p stays strictly in (0, 1).
            let inside = if x_peak == x_min { a + 1e-9 * (b - a) } else { b - 1e-9 * (b - a) };
            log_lr(inside)
        }
        _ => log_lr(x_peak),
    };
    if !peak.is_finite() {
        return Err(Error::numeric("likelihood ratio at the peak is not finite"));
    }

    let mut breaks = vec![a, b];
    let pieces = 16;
    breaks.extend((1..pieces).map(|i| a + (b - a) * i as f64 / pieces as f64));
    if a < 0.0 && 0.0 < b {
        breaks.push(0.0);
    }
    breaks.extend(alt.breakpoints().iter().map(|&p| (rate - p) / scale).filter(|&x| x > a && x < b));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let integrand = |x: f64| {
        let density = alt.eval(p_at(x));
        if density == 0.0 {
            0.0
        } else {
            density * scale * (log_lr(x) - peak).exp()
        }
    };
    let r = quadrature::integrate_with_breaks(integrand, &breaks, opts.quad)?;
    Ok(r.value * peak.exp())
}

/// Closed-form likelihood ratio for a normal density with mean `p0 - δ`
/// and standard deviation `s` against `p = p0`:
/// `exp(u²/2 - μ²/(2(1+σ²))) / √(1+σ²)` with `μ = nδ/σn - u`, `σ = ns/σn`.
pub fn lr_normal_family(e: Experiment, p0: f64, mean_shift: f64, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::domain(format!("standard deviation must be positive, got {s}")));
    }
    let param = standardize(e, p0)?;
    let n = e.n() as f64;
    let mu = n * mean_shift / param.sigma_n - param.u;
    let sigma2 = (n * s / param.sigma_n).powi(2);
    Ok((0.5 * param.u * param.u - mu * mu / (2.0 * (1.0 + sigma2))).exp() / (1.0 + sigma2).sqrt())
}

/// `Φ(-u) / (1 - Φ(-u))`, the limit of [`lr_alpha`].
pub fn lr_alpha_limit(u: f64) -> Result<f64> {
    let tail = phi_cdf(-u)?;
    Ok(tail / phi_cdf(u)?)
}

/// Likelihood ratio of "p uniform on (p0, p0+α)" against "p uniform on
/// (p0-α, p0)".
pub fn lr_alpha(e: Experiment, p0: f64, alpha: f64) -> Result<f64> {
    lr_alpha_with(e, p0, alpha, LrfOptions::default())
}

pub fn lr_alpha_with(e: Experiment, p0: f64, alpha: f64, opts: LrfOptions) -> Result<f64> {
    check_probability(p0)?;
    if !(alpha > 0.0 && alpha < p0.min(1.0 - p0)) {
        return Err(Error::domain(format!("need 0 < alpha < min(p0, 1 - p0), got alpha = {alpha}")));
    }
    let upper = DensityAlternative::uniform(p0, p0 + alpha)?;
    let lower = DensityAlternative::uniform(p0 - alpha, p0)?;
    Ok(lr_f_with(e, p0, &upper, opts)? / lr_f_with(e, p0, &lower, opts)?)
}

/// Upper bound `1 + C|u|/√n · e^{u²/2}` on a density alternative's
/// likelihood ratio, when the alternative carries a certified `C`.
pub fn lr_f_upper_bound(e: Experiment, p0: f64, alt: &DensityAlternative) -> Result<Option<f64>> {
    let param = standardize(e, p0)?;
    let n = e.n() as f64;
    Ok(alt
        .sup_bound_near_mle()
        .map(|c| 1.0 + c * param.u.abs() / n.sqrt() * (0.5 * param.u * param.u).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_lr_uniform_vs_fair, Sided};

    fn exp(n: u64, k: u64) -> Experiment {
        Experiment::new(n, k).unwrap()
    }

    #[test]
    fn lr_x_at_null_is_one() {
        let e = exp(1000, 437);
        let p = standardize(e, 0.3).unwrap();
        assert!((lr_x_exact(e, 0.3, -p.u).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lr_x_at_mle_matches_direct_likelihood() {
        let e = exp(10_000, 4815);
        let got = lr_x_exact(e, 0.5, 0.0).unwrap();
        let (k, n) = (4815.0_f64, 10_000.0_f64);
        let phat = k / n;
        let oracle = (k * (2.0 * phat).ln() + (n - k) * (2.0 * (1.0 - phat)).ln()).exp();
        assert!((got / oracle - 1.0).abs() < 1e-10);
        assert!((got / (0.5_f64 * 3.7 * 3.7).exp() - 1.0).abs() < 0.02);
    }

    #[test]
    fn lr_x_rejects_offsets_outside_unit_interval() {
        let e = exp(100, 40);
        assert!(matches!(lr_x_exact(e, 0.5, -30.0), Err(Error::Domain(_))));
        assert!(matches!(lr_x_exact(e, 0.5, 10.0), Err(Error::Domain(_))));
    }

    #[test]
    fn lr_x_approx_examples() {
        assert_eq!(lr_x_approx(1.3, 1.3), 1.0);
        assert!((lr_x_approx(1.960, 0.0) - 6.83).abs() < 0.02);
        assert!((lr_x_approx(3.291, 0.0) - 224.5).abs() < 0.5);
    }

    #[test]
    fn max_lr_examples() {
        let m = max_lr_for_pvalue(0.05, Sided::Two).unwrap();
        assert!((m.u - 1.960).abs() < 5e-4 && (m.sup_lr - 6.8).abs() < 0.05);
        let m = max_lr_for_pvalue(0.005, Sided::One).unwrap();
        assert!((m.u - 2.576).abs() < 5e-4 && (m.sup_lr - 27.6).abs() < 0.05);
        let m = max_lr_for_pvalue(0.5, Sided::One).unwrap();
        assert_eq!((m.u, m.sup_lr), (0.0, 1.0));
        assert!(max_lr_for_pvalue(1.0, Sided::One).is_err());
    }

    #[test]
    fn uniform_lr_f_matches_closed_form() {
        // n = 100, k = 40 gives u = 2.
        let e = exp(100, 40);
        let alt = DensityAlternative::uniform(0.0, 1.0).unwrap();
        let got = lr_f(e, 0.5, &alt).unwrap();
        let closed = 0.5 * (2.0 * std::f64::consts::PI / 100.0).sqrt() * 2f64.exp();
        assert!((got / closed - 1.0).abs() < 0.02, "{got} vs {closed}");
    }

    #[test]
    fn exact_integrand_reproduces_exact_uniform_lr() {
        for &(n, k) in &[(20u64, 6u64), (100, 40), (1000, 460), (1000, 3)] {
            let e = exp(n, k);
            let alt = DensityAlternative::uniform(0.0, 1.0).unwrap();
            let opts = LrfOptions { integrand: Integrand::Exact, ..Default::default() };
            let got = lr_f_with(e, 0.5, &alt, opts).unwrap();
            let want = exact_lr_uniform_vs_fair(e);
            assert!((got / want - 1.0).abs() < 1e-8, "n = {n}, k = {k}: {got} vs {want}");
        }
    }

    #[test]
    fn normal_family_examples() {
        // μ = 0 when the mean sits at k/n.
        let e = exp(10_000, 4815);
        let p = standardize(e, 0.5).unwrap();
        let delta = 0.5 - 0.4815;
        let got = lr_normal_family(e, 0.5, delta, 0.01).unwrap();
        let want = 50.0 / (10_000.0f64 + 2500.0).sqrt() * (0.5 * p.u * p.u).exp();
        assert!((got / want - 1.0).abs() < 1e-12);
        let narrow = lr_normal_family(e, 0.5, delta, 1e-9).unwrap();
        assert!((narrow / (0.5 * p.u * p.u).exp() - 1.0).abs() < 1e-9);
        assert!(lr_normal_family(e, 0.5, delta, 0.0).is_err());
    }

    #[test]
    fn lr_alpha_examples() {
        let e = exp(10_000, 5000);
        assert!((lr_alpha(e, 0.5, 0.1).unwrap() - 1.0).abs() < 1e-9);
        // k = 4918 gives u = 1.64.
        let e = exp(10_000, 4918);
        let got = lr_alpha(e, 0.5, 0.1).unwrap();
        assert!((got / 0.0526 - 1.0).abs() < 0.05, "{got}");
        let mirrored = lr_alpha(e.mirrored(), 0.5, 0.1).unwrap();
        assert!((mirrored * got - 1.0).abs() < 1e-9);
        assert!(lr_alpha(e, 0.5, 0.5).is_err());
    }
}
