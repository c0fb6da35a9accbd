use std::f64::consts::PI;
use std::sync::OnceLock;

/// Arguments below this are summed term by term; above it the Stirling
/// series is used.
pub const DEFAULT_EXACT_THRESHOLD: u64 = 1024;

// ln(√(2π))
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// Below this the Stirling remainder is obtained by subtraction from the
// summed table, above it from its asymptotic series (truncation < 1e-17).
const REMAINDER_SERIES_FROM: u64 = 20;

/// Log-factorial evaluator with a configurable switch-over point.
#[derive(Debug, Clone, Copy)]
pub struct LnFactorial {
    threshold: u64,
}

impl Default for LnFactorial {
    fn default() -> Self {
        Self { threshold: DEFAULT_EXACT_THRESHOLD }
    }
}

impl LnFactorial {
    pub fn with_threshold(threshold: u64) -> Self {
        Self { threshold }
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn eval(&self, n: u64) -> f64 {
        if n < 2 {
            0.0
        } else if n < self.threshold {
            if n < DEFAULT_EXACT_THRESHOLD {
                table()[n as usize]
            } else {
                summed(n)
            }
        } else {
            stirling_main(n) + ln_factorial_remainder(n)
        }
    }
}

fn summed(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(DEFAULT_EXACT_THRESHOLD as usize);
        let mut acc = 0.0;
        t.push(0.0);
        for i in 1..DEFAULT_EXACT_THRESHOLD {
            acc += (i as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)` with the default threshold.
pub fn ln_factorial(n: u64) -> f64 {
    LnFactorial::default().eval(n)
}

fn stirling_main(n: u64) -> f64 {
    let x = n as f64;
    x * x.ln() - x + 0.5 * x.ln() + HALF_LN_TWO_PI
}

fn remainder_series(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0
        - r2 * (1.0 / 360.0
            - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 * (1.0 / 1188.0 - r2 * 691.0 / 360_360.0)))))
}

/// Stirling remainder `ln(n!) - (n ln n - n + ½ ln(2πn))` for `n ≥ 1`.
///
/// It lies strictly between `1/(12n+1)` and `1/(12n)`; callers use it to
/// form log-binomials without cancelling terms of size `n ln n`.
pub fn ln_factorial_remainder(n: u64) -> f64 {
    assert!(n >= 1, "Stirling remainder is undefined at 0");
    if n < REMAINDER_SERIES_FROM {
        let x = n as f64;
        table()[n as usize] - (x * x.ln() - x + 0.5 * (2.0 * PI * x).ln())
    } else {
        remainder_series(n as f64)
    }
}
