//! Everything the crate can say about a single experiment, in one record.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::asymptotics::{lr_approx, lr_envelope, normal_p_two_sided, p_approx, ErrorEnvelope, Provenance};
use crate::error::{Error, Result};
use crate::exact::{exact_p_value_fair, ln_exact_lr_uniform_vs_point, standardize, Experiment, Sided};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvidenceReport {
    pub experiment: Experiment,
    pub p0: f64,
    pub u: f64,
    pub ln_exact_lr: f64,
    /// Exact likelihood ratio of a uniform prior on `p` against `p = p0`.
    pub exact_lr: f64,
    /// `√(2π p0 q0 / n) e^{u²/2}`, which is `√(π/2n) e^{u²/2}` at `p0 = ½`.
    pub approx_lr: f64,
    /// Only available for `p0 = ½` inside `|u| ≤ √n/2`.
    pub lr_envelope: Option<ErrorEnvelope>,
    /// Exact binomial p-value; only computed for `p0 = ½`.
    pub exact_p_two_sided: Option<f64>,
    /// Leading-order p-value with its Mills bracket; `None` at `u = 0`.
    pub approx_p: Option<ErrorEnvelope>,
    pub normal_p_two_sided: f64,
    /// `exp(u²/2)`, the largest ratio any point alternative can reach.
    pub max_attainable_lr: f64,
}

impl EvidenceReport {
    pub fn compute(experiment: Experiment, p0: f64) -> Result<Self> {
        let param = standardize(experiment, p0)?;
        let n = experiment.n() as f64;
        let u = param.u;
        let fair = p0 == 0.5;
        let ln_exact_lr = ln_exact_lr_uniform_vs_point(experiment, p0)?;
        let lr_envelope = if fair { lr_envelope(experiment.n(), u).ok() } else { None };
        Ok(Self {
            experiment,
            p0,
            u,
            ln_exact_lr,
            exact_lr: ln_exact_lr.exp(),
            approx_lr: 2.0 * param.c0 * lr_approx(n, u)?,
            lr_envelope,
            exact_p_two_sided: fair.then(|| exact_p_value_fair(experiment, Sided::Two)),
            approx_p: if u == 0.0 { None } else { Some(p_approx(u)?) },
            normal_p_two_sided: normal_p_two_sided(u)?,
            max_attainable_lr: (0.5 * u * u).exp(),
        })
    }

    /// Flat view with one scalar per field, for CSV and JSON output.
    pub fn to_flat(&self) -> FlatReport {
        let env = self.lr_envelope;
        FlatReport {
            n: self.experiment.n(),
            k: self.experiment.k(),
            p0: self.p0,
            u: self.u,
            ln_exact_lr: self.ln_exact_lr,
            exact_lr: self.exact_lr,
            approx_lr: self.approx_lr,
            lr_envelope_lower: env.map(|e| e.lower),
            lr_envelope_upper: env.map(|e| e.upper),
            exact_p_two_sided: self.exact_p_two_sided,
            approx_p: self.approx_p.map(|e| e.value),
            approx_p_lower: self.approx_p.map(|e| e.lower),
            approx_p_upper: self.approx_p.map(|e| e.upper),
            normal_p_two_sided: self.normal_p_two_sided,
            max_attainable_lr: self.max_attainable_lr,
        }
    }
}

/// [`EvidenceReport`] with envelopes spread into scalar columns.
///
/// Infinite values serialize as the strings `"inf"` / `"-inf"` and missing
/// values as `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatReport {
    pub n: u64,
    pub k: u64,
    pub p0: f64,
    #[serde(with = "extended")]
    pub u: f64,
    #[serde(with = "extended")]
    pub ln_exact_lr: f64,
    #[serde(with = "extended")]
    pub exact_lr: f64,
    #[serde(with = "extended")]
    pub approx_lr: f64,
    #[serde(with = "extended_opt")]
    pub lr_envelope_lower: Option<f64>,
    #[serde(with = "extended_opt")]
    pub lr_envelope_upper: Option<f64>,
    pub exact_p_two_sided: Option<f64>,
    pub approx_p: Option<f64>,
    pub approx_p_lower: Option<f64>,
    pub approx_p_upper: Option<f64>,
    pub normal_p_two_sided: f64,
    #[serde(with = "extended")]
    pub max_attainable_lr: f64,
}

impl FlatReport {
    pub const COLUMNS: [&'static str; 15] = [
        "n",
        "k",
        "p0",
        "u",
        "ln_exact_lr",
        "exact_lr",
        "approx_lr",
        "lr_envelope_lower",
        "lr_envelope_upper",
        "exact_p_two_sided",
        "approx_p",
        "approx_p_lower",
        "approx_p_upper",
        "normal_p_two_sided",
        "max_attainable_lr",
    ];
}

impl TryFrom<FlatReport> for EvidenceReport {
    type Error = Error;

    fn try_from(flat: FlatReport) -> Result<Self> {
        let experiment = Experiment::new(flat.n, flat.k)?;
        let lr_envelope = match (flat.lr_envelope_lower, flat.lr_envelope_upper) {
            (Some(lower), Some(upper)) => {
                Some(ErrorEnvelope { value: flat.approx_lr, lower, upper, provenance: Provenance::E1E2 })
            }
            (None, None) => None,
            _ => return Err(Error::domain("envelope needs both bounds")),
        };
        let approx_p = match (flat.approx_p, flat.approx_p_lower, flat.approx_p_upper) {
            (Some(value), Some(lower), Some(upper)) => {
                Some(ErrorEnvelope { value, lower, upper, provenance: Provenance::Mills })
            }
            (None, None, None) => None,
            _ => return Err(Error::domain("p-value envelope needs value and both bounds")),
        };
        Ok(Self {
            experiment,
            p0: flat.p0,
            u: flat.u,
            ln_exact_lr: flat.ln_exact_lr,
            exact_lr: flat.exact_lr,
            approx_lr: flat.approx_lr,
            lr_envelope,
            exact_p_two_sided: flat.exact_p_two_sided,
            approx_p,
            normal_p_two_sided: flat.normal_p_two_sided,
            max_attainable_lr: flat.max_attainable_lr,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr<'a> {
    Num(f64),
    Text(&'a str),
}

fn encode(x: f64) -> Repr<'static> {
    if x == f64::INFINITY {
        Repr::Text("inf")
    } else if x == f64::NEG_INFINITY {
        Repr::Text("-inf")
    } else if x.is_nan() {
        Repr::Text("nan")
    } else {
        Repr::Num(x)
    }
}

fn decode<E: serde::de::Error>(r: Repr<'_>) -> std::result::Result<f64, E> {
    match r {
        Repr::Num(x) => Ok(x),
        Repr::Text("inf") => Ok(f64::INFINITY),
        Repr::Text("-inf") => Ok(f64::NEG_INFINITY),
        Repr::Text("nan") => Ok(f64::NAN),
        Repr::Text(other) => Err(E::custom(format!("not a number: {other:?}"))),
    }
}

/// Serde adapter writing non-finite floats as strings.
pub mod extended {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        encode(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        decode(Repr::deserialize(d)?)
    }
}

/// [`extended`] for optional values.
pub mod extended_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        x.map(encode).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
        Option::<Repr<'de>>::deserialize(d)?.map(decode).transpose()
    }
}
