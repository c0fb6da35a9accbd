use crate::error::{Error, Result};

/// Largest argument the series is trusted for.
pub const KUMMER_MAX_Z: f64 = 50.0;
/// Hard cap on the number of series terms.
pub const KUMMER_MAX_TERMS: usize = 10_000;

/// Parameters of Kummer's confluent hypergeometric function `M(a, b, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerParams {
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

impl KummerParams {
    pub fn new(a: f64, b: f64, z: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && z.is_finite()) {
            return Err(Error::domain("Kummer parameters must be finite"));
        }
        if b <= 0.0 {
            return Err(Error::domain(format!("Kummer M needs b > 0, got b = {b}")));
        }
        if !(0.0..=KUMMER_MAX_Z).contains(&z) {
            return Err(Error::domain(format!("Kummer M is evaluated for 0 <= z <= {KUMMER_MAX_Z}, got z = {z}")));
        }
        Ok(Self { a, b, z })
    }

    /// Degree of the polynomial when `a` is a non-positive integer.
    pub fn terminating_degree(&self) -> Option<u64> {
        (self.a <= 0.0 && self.a.fract() == 0.0).then(|| (-self.a) as u64)
    }
}

/// `M(a, b, z) = Σ_j (a)_j z^j / ((b)_j j!)` by forward term recurrence.
///
/// The series stops exactly when `a` is a non-positive integer. Otherwise it
/// runs until the terms are decreasing and the latest term is below `1e-16`
/// times the larger of the partial sum and the biggest term seen so far;
/// the second scale keeps the test meaningful near a root, where the
/// partial sum itself goes to zero.
pub fn kummer_m(params: KummerParams) -> Result<f64> {
    let KummerParams { a, b, z } = params;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut peak = 1.0_f64;
    for j in 0..KUMMER_MAX_TERMS {
        let jf = j as f64;
        let ratio = (a + jf) * z / ((b + jf) * (jf + 1.0));
        term *= ratio;
        if term == 0.0 {
            return Ok(sum);
        }
        sum += term;
        peak = peak.max(term.abs());
        if ratio.abs() < 0.5 && term.abs() <= 1e-16 * sum.abs().max(peak) {
            return Ok(sum);
        }
    }
    Err(Error::numeric(format!(
        "Kummer series M({a}, {b}, {z}) did not converge in {KUMMER_MAX_TERMS} terms"
    )))
}
