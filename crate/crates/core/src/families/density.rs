use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::quadrature::{integrate_with_breaks, QuadOptions};
use crate::error::{Error, Result};

/// Tolerance on `∫ f = 1` accepted by [`DensityAlternative::new`].
pub const NORMALIZATION_TOL: f64 = 1e-8;

type DensityFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Alternative hypothesis "p has density f".
///
/// The density is shared behind an `Arc` and may be evaluated from several
/// threads at once.
#[derive(Clone)]
pub struct DensityAlternative {
    label: String,
    density: Arc<DensityFn>,
    support: (f64, f64),
    breakpoints: Vec<f64>,
    max_density: Option<f64>,
    sup_bound_near_mle: Option<f64>,
}

impl fmt::Debug for DensityAlternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityAlternative")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("sup_bound_near_mle", &self.sup_bound_near_mle)
            .finish()
    }
}

impl DensityAlternative {
    /// Build a density alternative, checking that the support lies in
    /// `[0, 1]` and that `f` is nonnegative and integrates to one there.
    ///
    /// `breakpoints` are interior points where `f` has kinks or narrow
    /// features; the normalization quadrature starts from them.
    pub fn new<F>(label: impl Into<String>, support: (f64, f64), breakpoints: Vec<f64>, density: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (lo, hi) = support;
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(Error::domain(format!("density support ({lo}, {hi}) must be a non-empty subinterval of [0, 1]")));
        }
        let alt = Self {
            label: label.into(),
            density: Arc::new(density),
            support,
            breakpoints: breakpoints.into_iter().filter(|&b| b > lo && b < hi).collect(),
            max_density: None,
            sup_bound_near_mle: None,
        };
        let (mass, negative) = alt.normalization()?;
        if negative {
            return Err(Error::domain(format!("density `{}` takes negative values", alt.label)));
        }
        if (mass - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::domain(format!("density `{}` integrates to {mass}, not 1", alt.label)));
        }
        Ok(alt)
    }

    /// Uniform density on `(a, b)`.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        let height = 1.0 / (b - a);
        Self::new(format!("uniform({a}, {b})"), (a, b), vec![], move |_| height)
            .map(|d| d.with_max_density(height))
    }

    /// Normal density with the given mean and standard deviation, restricted
    /// to `(0, 1)` without renormalization; rejected when the mass outside
    /// `(0, 1)` exceeds [`NORMALIZATION_TOL`].
    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0) {
            return Err(Error::domain(format!("normal density needs sd > 0, got {sd}")));
        }
        let norm = 1.0 / (sd * (2.0 * PI).sqrt());
        let breaks = (-8..=8).map(|i| mean + i as f64 * sd).collect();
        Self::new(format!("normal({mean}, {sd})"), (0.0, 1.0), breaks, move |p| {
            let t = (p - mean) / sd;
            norm * (-0.5 * t * t).exp()
        })
        .map(|d| d.with_max_density(norm))
    }

    /// Record a global upper bound on the density.
    pub fn with_max_density(mut self, max: f64) -> Self {
        self.max_density = Some(max);
        self
    }

    /// Attach the constant `C` for which `P_f(|p - k/n| ≤ c0|u|/√n) ≤ C|u|/√n`
    /// is known to hold. Only the caller can certify this.
    pub fn with_sup_bound_near_mle(mut self, c: f64) -> Self {
        self.sup_bound_near_mle = Some(c);
        self
    }

    /// Certify `C = 2·max f·c0` from a known global bound on the density;
    /// the event `|p - k/n| ≤ c0|u|/√n` is an interval of length
    /// `2c0|u|/√n`. Leaves the alternative unchanged if no bound is known.
    pub fn certify_sup_bound(self, p0: f64) -> Self {
        match self.max_density {
            Some(m) => {
                let c0 = (p0 * (1.0 - p0)).sqrt();
                self.with_sup_bound_near_mle(2.0 * m * c0)
            }
            None => self,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn max_density(&self) -> Option<f64> {
        self.max_density
    }

    pub fn sup_bound_near_mle(&self) -> Option<f64> {
        self.sup_bound_near_mle
    }

    pub fn eval(&self, p: f64) -> f64 {
        if p <= self.support.0 || p >= self.support.1 {
            0.0
        } else {
            (self.density)(p)
        }
    }

    fn normalization(&self) -> Result<(f64, bool)> {
        let (lo, hi) = self.support;
        let mut breaks = vec![lo];
        let grid = 64;
        breaks.extend((1..grid).map(|i| lo + (hi - lo) * i as f64 / grid as f64));
        breaks.extend(self.breakpoints.iter().copied());
        breaks.push(hi);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let negative = std::cell::Cell::new(false);
        let r = integrate_with_breaks(
            |p| {
                let v = (self.density)(p);
                if v < 0.0 {
                    negative.set(true);
                }
                v
            },
            &breaks,
            QuadOptions { abs_tol: 1e-11, rel_tol: 1e-12, ..Default::default() },
        )?;
        Ok((r.value, negative.get()))
    }
}
