//! Adaptive Gauss–Kronrod (7/15) quadrature with global interval selection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-12, max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Piece { a, b, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    integrate_with_breaks(f, &[a, b], opts)
}

/// Integrate `f` over `[breaks[0], breaks[last]]`, starting from the
/// partition given by the sorted `breaks`.
///
/// The interval with the largest error estimate is bisected until the
/// summed estimate drops below `max(abs_tol, rel_tol·|value|)`.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], opts: QuadOptions) -> Result<QuadResult> {
    if breaks.len() < 2 || breaks.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("quadrature needs at least two finite break points"));
    }
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] < w[0] {
            return Err(Error::domain("quadrature break points must be sorted"));
        }
        if w[1] > w[0] {
            heap.push(gauss_kronrod(&f, w[0], w[1]));
        }
    }
    let total = |h: &BinaryHeap<Piece>| h.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));

    loop {
        let (value, error) = total(&heap);
        if !value.is_finite() {
            return Err(Error::numeric("integrand produced a non-finite value"));
        }
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) {
            return Ok(QuadResult { value, error, intervals: heap.len() });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::numeric(format!(
                "quadrature did not converge: error estimate {error:e} after {} intervals",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("non-empty partition");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::numeric("quadrature interval collapsed to machine precision"));
        }
        heap.push(gauss_kronrod(&f, worst.a, mid));
        heap.push(gauss_kronrod(&f, mid, worst.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_is_exact_to_degree_22() {
        for d in 0..=22 {
            let got = gauss_kronrod(&|x: f64| x.powi(d), -1.0, 1.0).value;
            let want = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
            assert!((got - want).abs() < 1e-14, "degree {d}");
        }
    }

    #[test]
    fn gauss_rule_is_exact_to_degree_13() {
        // The embedded estimate vanishes for polynomials both rules integrate exactly.
        let p = gauss_kronrod(&|x: f64| 3.0 * x.powi(13) - x.powi(12) + x.powi(4), -1.0, 2.0);
        assert!(p.error < 1e-12);
        let q = gauss_kronrod(&|x: f64| x.powi(16), -1.0, 1.0);
        assert!(q.error > 1e-6);
    }

    #[test]
    fn gaussian_integral() {
        let r = integrate(|x: f64| (-0.5 * x * x).exp(), -40.0, 40.0, QuadOptions::default()).unwrap();
        assert!((r.value - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn discontinuous_integrand() {
        let r = integrate(|x: f64| if x < 0.3 { 1.0 } else { 0.0 }, 0.0, 1.0, QuadOptions::default()).unwrap();
        assert!((r.value - 0.3).abs() < 1e-10);
    }

    #[test]
    fn bad_breaks_are_rejected() {
        assert!(integrate_with_breaks(|x| x, &[1.0], QuadOptions::default()).is_err());
        assert!(integrate_with_breaks(|x| x, &[1.0, 0.0], QuadOptions::default()).is_err());
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = QuadOptions { max_intervals: 3, ..Default::default() };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, opts).unwrap_err();
        assert!(matches!(err, Error::Numeric(_)));
    }
}
