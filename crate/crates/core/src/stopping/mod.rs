//! Optional stopping: a fair coin is tossed `m` times and then until
//! `|k - n/2| ≥ c√n / 2`, and the likelihood ratio reported at that point is
//! averaged over many runs.

mod shepp;
mod walk;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use shepp::{
    expected_lr_at_stopping, expected_lr_at_stopping_analytic, finiteness_threshold, shepp_moment,
    smallest_kummer_root,
};
pub use walk::{Step, TrialOutcome};

use walk::{run_trial, Boundary, Coins};

/// Trials per aggregation chunk. Fixed so that results do not depend on
/// how chunks are spread over threads.
const CHUNK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingConfig {
    pub m: u64,
    pub c: f64,
    pub trials: u64,
    pub max_tosses: u64,
    pub seed: u64,
}

impl StoppingConfig {
    pub fn new(m: u64, c: f64, trials: u64, max_tosses: u64, seed: u64) -> Result<Self> {
        let cfg = Self { m, c, trials, max_tosses, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::domain("m must be at least 1"));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::domain(format!("c must be positive and finite, got {}", self.c)));
        }
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        if self.max_tosses < self.m {
            return Err(Error::domain(format!(
                "max_tosses ({}) must be at least m ({})",
                self.max_tosses, self.m
            )));
        }
        Ok(())
    }

    /// `√(π/2) e^{c²/2}`, so that the ratio at stopping time `N` is this over `√N`.
    pub fn lr_scale(&self) -> f64 {
        (PI / 2.0).sqrt() * (0.5 * self.c * self.c).exp()
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OctaveBin {
    /// Stopping times in `[lower, upper)`.
    pub lower: u64,
    pub upper: u64,
    pub count: u64,
}

/// Distribution of stopping times. Truncated trials are counted at the cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoppedNSummary {
    pub min: u64,
    pub median: u64,
    pub p90: u64,
    pub p99: u64,
    pub max: u64,
    /// Bins doubling from `m`.
    pub octaves: Vec<OctaveBin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoppingResult {
    pub config: StoppingConfig,
    pub mean_inv_sqrt_n: Estimate,
    pub mean_lr: Estimate,
    pub truncated: u64,
    pub truncated_fraction: f64,
    /// Bound on the error of `mean_inv_sqrt_n` from counting truncated trials at the cap.
    pub truncation_bias_bound: f64,
    /// The same bound carried over to `mean_lr`.
    pub lr_truncation_bias_bound: f64,
    /// Mean of `N` over trials that stopped; `None` if all were truncated.
    pub mean_n_stopped: Option<f64>,
    pub stopped_n_histogram: StoppedNSummary,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Self {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }

    fn estimate(&self) -> Estimate {
        let std_error = if self.count > 1 {
            (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt()
        } else {
            f64::INFINITY
        };
        Estimate { mean: self.mean, std_error }
    }
}

struct ChunkStats {
    inv_sqrt: Moments,
    truncated: u64,
    stopped_sum: u128,
    stopping_times: Vec<u64>,
}

fn run_chunk(cfg: &StoppingConfig, boundary: &Boundary, chunk: u64) -> ChunkStats {
    let start = chunk * CHUNK;
    let end = (start + CHUNK).min(cfg.trials);
    let mut stats = ChunkStats {
        inv_sqrt: Moments::default(),
        truncated: 0,
        stopped_sum: 0,
        stopping_times: Vec::with_capacity((end - start) as usize),
    };
    for trial in start..end {
        let mut coins = Coins::for_trial(cfg.seed, trial);
        let outcome = run_trial(cfg.m, cfg.max_tosses, boundary, &mut coins, |_| {});
        stats.inv_sqrt.push(1.0 / (outcome.n as f64).sqrt());
        if outcome.truncated {
            stats.truncated += 1;
        } else {
            stats.stopped_sum += outcome.n as u128;
        }
        stats.stopping_times.push(outcome.n);
    }
    stats
}

/// Runs the experiment on the current rayon pool.
pub fn simulate_stopping(cfg: &StoppingConfig) -> Result<StoppingResult> {
    cfg.validate()?;
    let boundary = Boundary::new(cfg.c);
    let chunks = cfg.trials.div_ceil(CHUNK);
    let parts: Vec<ChunkStats> = (0..chunks).into_par_iter().map(|i| run_chunk(cfg, &boundary, i)).collect();
    Ok(summarize(cfg, parts))
}

/// Runs the experiment on a dedicated pool of `workers` threads
/// (`0` picks the rayon default). The result does not depend on `workers`.
pub fn simulate_stopping_with_workers(cfg: &StoppingConfig, workers: usize) -> Result<StoppingResult> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::numeric(format!("could not start worker pool: {e}")))?;
    pool.install(|| simulate_stopping(cfg))
}

/// Replays one trial, reporting every step of the walk to `observe`.
pub fn trace_trial(cfg: &StoppingConfig, trial: u64, observe: impl FnMut(Step)) -> Result<TrialOutcome> {
    cfg.validate()?;
    let boundary = Boundary::new(cfg.c);
    let mut coins = Coins::for_trial(cfg.seed, trial);
    Ok(run_trial(cfg.m, cfg.max_tosses, &boundary, &mut coins, observe))
}

/// Exact check of `|2k - n| ≥ c√n`, the stopping rule used by the simulation.
pub fn boundary_reached(c: f64, n: u64, heads: u64) -> bool {
    Boundary::new(c).crossed(n, (2 * heads).abs_diff(n))
}

fn summarize(cfg: &StoppingConfig, parts: Vec<ChunkStats>) -> StoppingResult {
    let mut inv_sqrt = Moments::default();
    let mut truncated = 0;
    let mut stopped_sum = 0u128;
    let mut times = Vec::with_capacity(cfg.trials as usize);
    for part in parts {
        inv_sqrt = inv_sqrt.merge(part.inv_sqrt);
        truncated += part.truncated;
        stopped_sum += part.stopped_sum;
        times.extend(part.stopping_times);
    }
    let scale = cfg.lr_scale();
    let inv_est = inv_sqrt.estimate();
    let truncated_fraction = truncated as f64 / cfg.trials as f64;
    let truncation_bias_bound = truncated_fraction / (cfg.max_tosses as f64).sqrt();
    let stopped = cfg.trials - truncated;
    StoppingResult {
        config: *cfg,
        mean_inv_sqrt_n: inv_est,
        mean_lr: Estimate { mean: scale * inv_est.mean, std_error: scale * inv_est.std_error },
        truncated,
        truncated_fraction,
        truncation_bias_bound,
        lr_truncation_bias_bound: scale * truncation_bias_bound,
        mean_n_stopped: (stopped > 0).then(|| stopped_sum as f64 / stopped as f64),
        stopped_n_histogram: summarize_times(cfg.m, times),
    }
}

fn summarize_times(m: u64, mut times: Vec<u64>) -> StoppedNSummary {
    times.sort_unstable();
    let len = times.len();
    let quantile = |q: f64| times[(((len - 1) as f64) * q).round() as usize];
    let mut octaves: Vec<OctaveBin> = Vec::new();
    for &n in &times {
        while octaves.last().is_none_or(|bin| n >= bin.upper) {
            let lower = octaves.last().map_or(m, |bin| bin.upper);
            octaves.push(OctaveBin { lower, upper: lower.saturating_mul(2), count: 0 });
        }
        octaves.last_mut().expect("bin exists").count += 1;
    }
    StoppedNSummary {
        min: times[0],
        median: quantile(0.5),
        p90: quantile(0.9),
        p99: quantile(0.99),
        max: times[len - 1],
        octaves,
    }
}
