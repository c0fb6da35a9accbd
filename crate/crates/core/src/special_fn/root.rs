use crate::error::{Error, Result};

/// Stopping rule for [`find_root_with`].
#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_iter: usize,
    /// Try a secant step before each bisection; every second step is still
    /// a plain bisection, so the bracket at least halves every two steps.
    pub secant: bool,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { x_tol: 1e-12, f_tol: 1e-12, max_iter: 500, secant: true }
    }
}

/// Root of `f` inside `[lo, hi]`, with the default tolerances.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    find_root_with(f, lo, hi, RootOptions::default())
}

pub fn find_root_with<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, opts: RootOptions) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }

    for iter in 0..opts.max_iter {
        let mid = 0.5 * (a + b);
        let x = if opts.secant && iter % 2 == 0 {
            let s = b - fb * (b - a) / (fb - fa);
            if s > a && s < b {
                s
            } else {
                mid
            }
        } else {
            mid
        };
        let fx = f(x);
        if fx.abs() <= opts.f_tol || fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if b - a <= opts.x_tol {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
    }
    Err(Error::numeric(format!(
        "root finder did not converge in {} iterations (bracket [{a}, {b}])",
        opts.max_iter
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let x = find_root(|x| 1.0 - 2.0 * x, 0.0, 1.0).unwrap();
        assert!((x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bisection_only_converges() {
        let opts = RootOptions { secant: false, ..Default::default() };
        let x = find_root_with(|x| x * x - 2.0, 0.0, 2.0, opts).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reversed_bracket_is_accepted() {
        let x = find_root(|x| x.cos(), 3.0, 0.0).unwrap();
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_a_bracket_error() {
        let err = find_root(|x| x * x + 1.0, -1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }
}
