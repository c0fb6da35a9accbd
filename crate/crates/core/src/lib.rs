//! Likelihood ratios and p-values for coin-tossing hypotheses.
//!
//! The crate is organised bottom-up:
//!
//! * [`special_fn`]: normal CDF and quantile, log-factorials, Kummer's
//!   confluent hypergeometric function and a bracketing root finder.
//! * [`exact`]: exact likelihood ratio of a uniform prior against a fair
//!   coin, exact binomial p-values, and the `u`/`σn` parametrization.
//! * [`asymptotics`]: the leading-order approximations together with
//!   guaranteed error envelopes.
//! * [`families`]: likelihood ratios for point and density alternatives
//!   against `p = p0`, including adaptive quadrature.
//! * [`stopping`]: Monte Carlo of optional stopping at a `c`-sigma boundary
//!   and the Brownian-motion moments it is compared against.
//! * [`report`]: a per-experiment summary combining all of the above.
//! * [`tables`]: the three reference tables and their printed digits.

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod families;
pub mod report;
pub mod special_fn;
pub mod stopping;
pub mod tables;

pub use asymptotics::{ErrorEnvelope, Provenance};
pub use error::{Error, Result};
pub use exact::{Experiment, Parametrization, Sided};
pub use families::{DensityAlternative, PointAlternative};
pub use report::EvidenceReport;
pub use stopping::{StoppingConfig, StoppingResult};
