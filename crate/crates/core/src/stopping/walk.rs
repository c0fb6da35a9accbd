use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// Blocks shorter than this are walked toss by toss.
const MIN_BLOCK: u64 = 16;
/// Blocks up to this length are sampled by counting random bits.
const POPCOUNT_LIMIT: u64 = 1024;

/// Exact test of `d² ≥ c²·n` for an `f64` boundary `c`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Boundary {
    c: f64,
    mant_sq: u128,
    // d² · 2^shift ≥ mant_sq · n, where c = mant · 2^(-shift/2).
    shift: i32,
}

impl Boundary {
    pub(crate) fn new(c: f64) -> Self {
        debug_assert!(c > 0.0 && c.is_finite());
        let bits = c.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (mut mant, mut exp) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
        let tz = mant.trailing_zeros();
        mant >>= tz;
        exp += tz as i32;
        Self { c, mant_sq: (mant as u128) * (mant as u128), shift: -2 * exp }
    }

    pub(crate) fn crossed(&self, n: u64, d: u64) -> bool {
        let lhs = (d as u128) * (d as u128);
        let fast = || -> Option<bool> {
            let rhs = self.mant_sq.checked_mul(n as u128)?;
            if self.shift >= 0 {
                Some(shl_exact(lhs, self.shift as u32)? >= rhs)
            } else {
                Some(lhs >= shl_exact(rhs, (-self.shift) as u32)?)
            }
        };
        fast().unwrap_or_else(|| {
            let lhs = BigUint::from(lhs);
            let rhs = BigUint::from(self.mant_sq) * n;
            if self.shift >= 0 {
                (lhs << self.shift as u32) >= rhs
            } else {
                lhs >= (rhs << (-self.shift) as u32)
            }
        })
    }

    /// Number of further tosses that cannot reach the boundary from `(n, d)`.
    fn safe_stride(&self, n: u64, d: u64) -> u64 {
        let reach = (self.c * (n as f64).sqrt()).floor();
        let stride = reach - d as f64 - 1.0;
        if stride >= 1.0 {
            stride as u64
        } else {
            0
        }
    }
}

fn shl_exact(x: u128, s: u32) -> Option<u128> {
    if x == 0 {
        return Some(0);
    }
    (x.leading_zeros() >= s).then(|| x << s)
}

/// Fair coin source for a single trial.
pub(crate) struct Coins {
    rng: ChaCha8Rng,
    bits: u64,
    left: u32,
}

impl Coins {
    pub(crate) fn for_trial(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        Self { rng, bits: 0, left: 0 }
    }

    fn toss(&mut self) -> bool {
        if self.left == 0 {
            self.bits = self.rng.next_u64();
            self.left = 64;
        }
        let head = self.bits & 1 == 1;
        self.bits >>= 1;
        self.left -= 1;
        head
    }

    /// Heads among `len` tosses.
    fn heads(&mut self, len: u64) -> u64 {
        if len <= POPCOUNT_LIMIT {
            let mut count = 0u64;
            let mut rest = len;
            while rest >= 64 {
                count += self.rng.next_u64().count_ones() as u64;
                rest -= 64;
            }
            if rest > 0 {
                count += (self.rng.next_u64() & ((1u64 << rest) - 1)).count_ones() as u64;
            }
            count
        } else {
            Binomial::new(len, 0.5).expect("valid binomial").sample(&mut self.rng)
        }
    }
}

/// Step taken by the walk, reported to trace observers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// The first `m` tosses, taken without boundary checks.
    Initial { n: u64, heads: u64 },
    /// `len` tosses sampled at once from `(n, heads)`; none of them can cross.
    Block { n: u64, heads: u64, len: u64, added: u64 },
    /// A single toss, taking the walk to `(n, heads)`.
    Toss { n: u64, heads: u64, crossed: bool },
}

/// Final state of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub n: u64,
    pub heads: u64,
    pub truncated: bool,
}

pub(crate) fn run_trial(
    m: u64,
    max_tosses: u64,
    boundary: &Boundary,
    coins: &mut Coins,
    mut observe: impl FnMut(Step),
) -> TrialOutcome {
    let mut n = m;
    let mut heads = coins.heads(m);
    observe(Step::Initial { n, heads });
    loop {
        if n >= max_tosses {
            return TrialOutcome { n, heads, truncated: true };
        }
        let d = (2 * heads).abs_diff(n);
        let stride = boundary.safe_stride(n, d).min(max_tosses - n);
        if stride >= MIN_BLOCK {
            let added = coins.heads(stride);
            observe(Step::Block { n, heads, len: stride, added });
            heads += added;
            n += stride;
            continue;
        }
        n += 1;
        if coins.toss() {
            heads += 1;
        }
        let crossed = boundary.crossed(n, (2 * heads).abs_diff(n));
        observe(Step::Toss { n, heads, crossed });
        if crossed {
            return TrialOutcome { n, heads, truncated: false };
        }
    }
}
