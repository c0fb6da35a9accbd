//! Exact (non-asymptotic) computations for a coin tossed `n` times.
//!
//! Up to [`EXACT_ARITHMETIC_LIMIT`] tosses every quantity is formed with
//! big-integer rationals and only converted to `f64` at the end. Above it
//! the same quantities are evaluated in log space from the Stirling
//! decomposition `ln C(n,k) = n ln 2 - n·g(z) - ½ ln(2π k(n-k)/n) + remainders`
//! with `z = (n-2k)/n` and `g(z) = ½[(1+z)ln(1+z) + (1-z)ln(1-z)]`, which
//! never subtracts two numbers of size `n ln n`.

use std::cmp::Ordering;
use std::f64::consts::{LN_2, PI};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::{ln_factorial, ln_factorial_remainder};

/// Largest `n` handled with exact rational arithmetic.
pub const EXACT_ARITHMETIC_LIMIT: u64 = 1024;

/// Largest `n` accepted by [`uniform_marginal_check`].
pub const MARGINAL_CHECK_LIMIT: u64 = 2000;

/// An observed outcome: `k` heads in `n` tosses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Experiment {
    n: u64,
    k: u64,
}

impl Experiment {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("an experiment needs at least one toss"));
        }
        if k > n {
            return Err(Error::domain(format!("k = {k} heads is impossible in n = {n} tosses")));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// The same experiment with heads and tails swapped.
    pub fn mirrored(&self) -> Self {
        Self { n: self.n, k: self.n - self.k }
    }
}

/// One- or two-sided tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sided {
    One,
    Two,
}

/// Null success probability `p0` together with the derived scale of an
/// experiment: `σn = √(p0 q0 n)` and the standardized deviation `u` defined
/// by `k = p0 n - u σn`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parametrization {
    pub n: u64,
    pub p0: f64,
    pub q0: f64,
    pub sigma_n: f64,
    pub u: f64,
    pub c0: f64,
}

impl Parametrization {
    /// Head count implied by `(p0, n, u)`.
    pub fn implied_k(&self) -> f64 {
        self.p0 * self.n as f64 - self.u * self.sigma_n
    }

    /// Empirical success rate `k/n`.
    pub fn rate(&self) -> f64 {
        self.implied_k() / self.n as f64
    }
}

pub(crate) fn check_probability(p0: f64) -> Result<()> {
    if p0 > 0.0 && p0 < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("null probability must lie in (0, 1), got {p0}")))
    }
}

/// Standardize an experiment against `p = p0`. A head count below the mean
/// gives `u > 0`.
pub fn standardize(e: Experiment, p0: f64) -> Result<Parametrization> {
    check_probability(p0)?;
    let q0 = 1.0 - p0;
    let c0 = (p0 * q0).sqrt();
    let n = e.n as f64;
    let sigma_n = c0 * n.sqrt();
    let u = (p0 * n - e.k as f64) / sigma_n;
    Ok(Parametrization { n: e.n, p0, q0, sigma_n, u, c0 })
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_positive() { f64::INFINITY } else { 0.0 })
}

/// Exact likelihood ratio of "p uniform on (0,1)" against "p = ½":
/// `k!(n-k)!/n! · 2^n/(n+1) = 2^n / ((n+1) C(n,k))`.
pub fn exact_lr_rational(e: Experiment) -> BigRational {
    let num = BigUint::one() << e.n;
    let den = binomial(e.n, e.k) * (e.n + 1);
    ratio(num, den)
}

/// `g(z) = ½[(1+z)ln(1+z) + (1-z)ln(1-z)] = Σ_{m≥1} z^{2m} / (2m(2m-1))`.
fn entropy_gap(z: f64) -> f64 {
    let z2 = z * z;
    if z2 < 0.25 {
        let mut power = z2;
        let mut sum = 0.0;
        for m in 1..200 {
            let m = m as f64;
            let term = power / (2.0 * m * (2.0 * m - 1.0));
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
            power *= z2;
        }
        sum
    } else {
        let plus = (1.0 + z) * z.ln_1p();
        let minus = if z >= 1.0 { 0.0 } else { (1.0 - z) * (-z).ln_1p() };
        let plus = if z <= -1.0 { 0.0 } else { plus };
        0.5 * (plus + minus)
    }
}

/// `ln P(X = k)` for `X ~ Binomial(n, ½)` without catastrophic cancellation.
pub fn ln_binom_pmf_half(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    if k == 0 || k == n {
        return -(n as f64) * LN_2;
    }
    let nf = n as f64;
    let kf = k as f64;
    let rest = (n - k) as f64;
    let z = (rest - kf) / nf;
    -nf * entropy_gap(z) - 0.5 * (2.0 * PI * kf * (rest / nf)).ln() + ln_factorial_remainder(n)
        - ln_factorial_remainder(k)
        - ln_factorial_remainder(n - k)
}

/// Natural log of [`exact_lr_uniform_vs_fair`], always via log space.
pub fn ln_lr_log_space(e: Experiment) -> f64 {
    -ln_binom_pmf_half(e.n, e.k) - ((e.n + 1) as f64).ln()
}

/// Natural log of the exact likelihood ratio, exact-rational when `n` is
/// small enough.
pub fn ln_exact_lr_uniform_vs_fair(e: Experiment) -> f64 {
    if e.n <= EXACT_ARITHMETIC_LIMIT {
        exact_lr_uniform_vs_fair(e).ln()
    } else {
        ln_lr_log_space(e)
    }
}

/// Exact likelihood ratio of "p uniform on (0,1)" against "p = ½".
///
/// May overflow to `+inf` for extreme head counts at large `n`; use
/// [`ln_exact_lr_uniform_vs_fair`] there.
pub fn exact_lr_uniform_vs_fair(e: Experiment) -> f64 {
    if e.n <= EXACT_ARITHMETIC_LIMIT {
        rational_to_f64(&exact_lr_rational(e))
    } else {
        ln_lr_log_space(e).exp()
    }
}

/// Exact likelihood ratio of "p uniform on (0,1)" against "p = p0", in log
/// space: `ln B(k+1, n-k+1) - k ln p0 - (n-k) ln q0`.
pub fn ln_exact_lr_uniform_vs_point(e: Experiment, p0: f64) -> Result<f64> {
    check_probability(p0)?;
    let ln_beta = if e.n <= EXACT_ARITHMETIC_LIMIT {
        ln_factorial(e.k) + ln_factorial(e.n - e.k) - ln_factorial(e.n + 1)
    } else {
        -ln_binom_pmf_half(e.n, e.k) - e.n as f64 * LN_2 - ((e.n + 1) as f64).ln()
    };
    let k = e.k as f64;
    let rest = (e.n - e.k) as f64;
    let ln_null = if e.k == 0 { 0.0 } else { k * p0.ln() } + if e.k == e.n { 0.0 } else { rest * (-p0).ln_1p() };
    Ok(ln_beta - ln_null)
}

/// Exact lower tail `P(X ≤ k)`, `X ~ Binomial(n, ½)`, as a rational.
pub fn lower_tail_rational(n: u64, k: u64) -> BigRational {
    let mut c = BigUint::one();
    let mut sum = BigUint::one();
    for j in 0..k {
        c = c * (n - j) / (j + 1);
        sum += &c;
    }
    ratio(sum, BigUint::one() << n)
}

/// Exact p-value of a fair-coin binomial test, as a rational.
///
/// One-sided takes the tail on the side of the observation
/// (`P(X ≤ k)` when `k ≤ n/2`, else `P(X ≥ k)`); two-sided is
/// `min(1, 2·min(P(X ≤ k), P(X ≥ k)))`.
pub fn exact_p_value_rational(e: Experiment, sided: Sided) -> BigRational {
    let low = e.k.min(e.n - e.k);
    // P(X ≥ k) = P(X ≤ n-k) by symmetry, so the smaller tail is P(X ≤ low).
    let tail = lower_tail_rational(e.n, low);
    match sided {
        Sided::One => tail,
        Sided::Two => {
            let doubled = tail * BigRational::from_integer(2.into());
            if doubled > BigRational::one() {
                BigRational::one()
            } else {
                doubled
            }
        }
    }
}

/// `ln P(X ≤ k)` for `X ~ Binomial(n, ½)` and `k ≤ n/2`, by summing the pmf
/// downward from `k` relative to its largest term.
fn ln_lower_tail_log_space(n: u64, k: u64) -> f64 {
    debug_assert!(2 * k <= n);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut j = k;
    while j > 0 {
        term *= j as f64 / (n - j + 1) as f64;
        sum += term;
        j -= 1;
        if term < 1e-18 * sum {
            break;
        }
    }
    ln_binom_pmf_half(n, k) + sum.ln()
}

/// Exact p-value of the fair-coin binomial test.
pub fn exact_p_value_fair(e: Experiment, sided: Sided) -> f64 {
    if e.n <= EXACT_ARITHMETIC_LIMIT {
        return rational_to_f64(&exact_p_value_rational(e, sided));
    }
    let low = e.k.min(e.n - e.k);
    let tail = ln_lower_tail_log_space(e.n, low).exp();
    match sided {
        Sided::One => tail,
        Sided::Two => (2.0 * tail).min(1.0),
    }
}

/// `P(k heads | p uniform)` for every `k = 0..=n`, from
/// `C(n,k) · B(k+1, n-k+1)` evaluated with exact factorials.
pub fn uniform_marginal_check(n: u64) -> Result<Vec<BigRational>> {
    if n > MARGINAL_CHECK_LIMIT {
        return Err(Error::domain(format!(
            "exact marginal check is limited to n <= {MARGINAL_CHECK_LIMIT}, got {n}"
        )));
    }
    let mut fact = Vec::with_capacity(n as usize + 2);
    fact.push(BigUint::one());
    for i in 1..=n + 1 {
        let next = fact.last().unwrap() * i;
        fact.push(next);
    }
    let f = |i: u64| &fact[i as usize];
    Ok((0..=n)
        .map(|k| {
            let choose = ratio(f(n).clone(), f(k) * f(n - k));
            let beta = ratio(f(k) * f(n - k), f(n + 1).clone());
            choose * beta
        })
        .collect())
}

fn closer_to_one_exact(n: u64, a: u64, b: u64) -> Ordering {
    let one = BigRational::one();
    let da = (exact_lr_rational(Experiment { n, k: a }) - &one).abs();
    let db = (exact_lr_rational(Experiment { n, k: b }) - &one).abs();
    da.cmp(&db)
}

fn closer_to_one_float(n: u64, a: u64, b: u64) -> Ordering {
    let da = ln_lr_log_space(Experiment { n, k: a }).exp_m1().abs();
    let db = ln_lr_log_space(Experiment { n, k: b }).exp_m1().abs();
    da.partial_cmp(&db).unwrap_or(Ordering::Equal)
}

/// The head count `k ≤ n/2` whose exact likelihood ratio is closest to 1.
///
/// The ratio is nonincreasing in `k` on `[0, n/2]`, so the crossing of
/// `ln LR = 0` is found by bisection and only its two neighbours are
/// compared. Ties go to the smaller `k`.
pub fn find_neutral_k(n: u64) -> Result<Experiment> {
    if n == 0 {
        return Err(Error::domain("find_neutral_k needs n >= 1"));
    }
    let ln_lr = |k: u64| ln_exact_lr_uniform_vs_fair(Experiment { n, k });
    let half = n / 2;
    // Invariant: ln_lr(lo) >= 0; ln_lr(k) < 0 for all k > hi.
    let (mut lo, mut hi) = (0u64, half);
    if ln_lr(hi) >= 0.0 {
        lo = hi;
    }
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if ln_lr(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let k = if lo < half {
        let order = if n <= EXACT_ARITHMETIC_LIMIT {
            closer_to_one_exact(n, lo, lo + 1)
        } else {
            closer_to_one_float(n, lo, lo + 1)
        };
        if order == Ordering::Greater {
            lo + 1
        } else {
            lo
        }
    } else {
        lo
    };
    Experiment::new(n, k)
}

/// Whether the neutral head count for `n` is decided by an exact tie.
pub fn neutral_k_is_tied(n: u64) -> Result<bool> {
    let e = find_neutral_k(n)?;
    if e.k + 1 > n / 2 {
        return Ok(false);
    }
    Ok(if n <= EXACT_ARITHMETIC_LIMIT {
        closer_to_one_exact(n, e.k, e.k + 1) == Ordering::Equal
    } else {
        closer_to_one_float(n, e.k, e.k + 1) == Ordering::Equal
    })
}
