//! Closed-form minimax bound formulas and the concentration/moment/tail
//! bounds they rest on.
//!
//! With `k` states, `n` samples, curvature `c = f''(1)`, entry floor `delta`
//! and stationary floor `pi*`, the bound table is:
//!
//! ```text
//! prediction (KL)      lower (k-1) ln ln n / (4 e n)       upper 2 k^2 ln ln n / n
//! estimation, f-div    lower (1-s)(k-2) c / (2 n s)        upper (k-1) c / (2 n s)
//! estimation, f, wtd   lower (1-pi*)(k-2) k c / (2 n)      upper (k-1) k c / (2 n)
//! estimation, L2       lower (1-s)^2 (1-1/(k-1)) / (n s)   upper (1-1/k) / (n s)
//! estimation, L2, wtd  lower (1-pi*)^2 k(k-2)/(k-1) / n    upper (k-1) / n
//! iid (KL)             (k-1) / (2n) on both sides
//! ```
//!
//! where `s` is `pi*` when a stationary floor is given and `delta` otherwise,
//! and the weighted rows collapse to their upper form in the `delta`-only
//! class (the bound there is two-sided). Natural logarithms throughout.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

/// Which side of a minimax bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", match self { Side::Lower => "lower", Side::Upper => "upper" })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Side::Lower),
            "upper" => Ok(Side::Upper),
            _ => Err(Error::UnknownToken(s.to_string())),
        }
    }
}

/// Which risk the bound applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskFamily {
    /// Next-state prediction under KL.
    PredictionKl,
    /// Max-over-states estimation under an ordinary f-divergence.
    EstimationF,
    /// Stationary-weighted estimation under an ordinary f-divergence.
    EstimationFWeighted,
    /// Max-over-states estimation under squared Euclidean loss.
    EstimationL2,
    /// Stationary-weighted estimation under squared Euclidean loss.
    EstimationL2Weighted,
    /// The i.i.d. KL baseline.
    IidKl,
}

impl std::fmt::Display for RiskFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let token = match self {
            RiskFamily::PredictionKl => "prediction_kl",
            RiskFamily::EstimationF => "estimation_f",
            RiskFamily::EstimationFWeighted => "estimation_f_weighted",
            RiskFamily::EstimationL2 => "estimation_l2",
            RiskFamily::EstimationL2Weighted => "estimation_l2_weighted",
            RiskFamily::IidKl => "iid_kl",
        };
        write!(f, "{token}")
    }
}

impl std::str::FromStr for RiskFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prediction_kl" => Ok(RiskFamily::PredictionKl),
            "estimation_f" => Ok(RiskFamily::EstimationF),
            "estimation_f_weighted" => Ok(RiskFamily::EstimationFWeighted),
            "estimation_l2" => Ok(RiskFamily::EstimationL2),
            "estimation_l2_weighted" => Ok(RiskFamily::EstimationL2Weighted),
            "iid_kl" => Ok(RiskFamily::IidKl),
            _ => Err(Error::UnknownToken(s.to_string())),
        }
    }
}

/// Parameters of one bound evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundQuery {
    pub k: usize,
    pub n: u64,
    /// Entry floor of the chain class; used when `pi_star` is absent.
    pub delta: Option<f64>,
    /// Stationary floor; takes precedence over `delta` when present.
    pub pi_star: Option<f64>,
    /// `f''(1)` of the divergence (ignored by prediction, L2 and iid rows).
    pub curvature: f64,
    pub side: Side,
    pub risk: RiskFamily,
}

impl BoundQuery {
    fn scale(&self) -> Result<f64> {
        if let Some(p) = self.pi_star {
            if !(p > 0.0 && p <= 1.0 / self.k as f64) {
                return Err(Error::param(format!(
                    "pi_star {p} outside (0, 1/{}]",
                    self.k
                )));
            }
            return Ok(p);
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 1.0 / self.k as f64) {
                return Err(Error::DeltaOutOfRange { delta: d, k: self.k });
            }
            return Ok(d);
        }
        Err(Error::param("estimation bounds need delta or pi_star"))
    }
}

/// Evaluate the bound formula for a query. See the module table.
pub fn bound(q: &BoundQuery) -> Result<f64> {
    if q.k < 2 {
        return Err(Error::TooFewStates(q.k));
    }
    if q.n < 3 {
        return Err(Error::param("bounds need n >= 3"));
    }
    let k = q.k as f64;
    let n = q.n as f64;
    match q.risk {
        RiskFamily::PredictionKl => {
            let lll = n.ln().ln();
            Ok(match q.side {
                Side::Lower => (k - 1.0) * lll / (4.0 * E * n),
                Side::Upper => 2.0 * k * k * lll / n,
            })
        }
        RiskFamily::IidKl => Ok((k - 1.0) / (2.0 * n)),
        RiskFamily::EstimationF => {
            let c = curvature_checked(q)?;
            let s = q.scale()?;
            Ok(match q.side {
                Side::Upper => (k - 1.0) * c / (2.0 * n * s),
                Side::Lower => (1.0 - s) * (k - 2.0) * c / (2.0 * n * s),
            })
        }
        RiskFamily::EstimationFWeighted => {
            let c = curvature_checked(q)?;
            Ok(match (q.side, q.pi_star) {
                (Side::Upper, _) | (Side::Lower, None) => (k - 1.0) * k * c / (2.0 * n),
                (Side::Lower, Some(p)) => {
                    q.scale()?; // range check
                    (1.0 - p) * (k - 2.0) * k * c / (2.0 * n)
                }
            })
        }
        RiskFamily::EstimationL2 => {
            let s = q.scale()?;
            Ok(match q.side {
                Side::Upper => (1.0 - 1.0 / k) / (n * s),
                Side::Lower => (1.0 - s) * (1.0 - s) * (1.0 - 1.0 / (k - 1.0)) / (n * s),
            })
        }
        RiskFamily::EstimationL2Weighted => Ok(match (q.side, q.pi_star) {
            (Side::Upper, _) | (Side::Lower, None) => (k - 1.0) / n,
            (Side::Lower, Some(p)) => {
                q.scale()?;
                (1.0 - p) * (1.0 - p) * (k - k / (k - 1.0)) / n
            }
        }),
    }
}

fn curvature_checked(q: &BoundQuery) -> Result<f64> {
    if !(q.curvature > 0.0) {
        return Err(Error::param(format!(
            "f-divergence bounds need positive curvature, got {}",
            q.curvature
        )));
    }
    Ok(q.curvature)
}

/// Mixing-step constant `ceil(-ln 4 / ln(1 - delta) + 1)`: after this many
/// steps a chain with entry floor `delta` is within 1/2 of stationarity.
pub fn mixing_constant(delta: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta {delta} outside (0, 1)")));
    }
    Ok((-(4.0_f64.ln()) / (1.0 - delta).ln() + 1.0).ceil() as u64)
}

/// Tail bound on the occupancy deviation `|N_i - (n-1) pi_i|` for chains with
/// entry floor `delta`:
///
/// ```text
/// sqrt(2/delta) * exp( (-t^2 / C) / (4((n-1) + 2C) + 40 t) ),   C = mixing_constant(delta)
/// ```
///
/// capped at 1, since a probability bound above 1 is vacuous.
pub fn count_deviation_tail(n: u64, delta: f64, t: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::param("tail bound needs n >= 2"));
    }
    if !(t >= 0.0) {
        return Err(Error::param(format!("t must be nonnegative, got {t}")));
    }
    let c = mixing_constant(delta)? as f64;
    let m = (n - 1) as f64;
    let exponent = (-t * t / c) / (4.0 * (m + 2.0 * c) + 40.0 * t);
    Ok(((2.0 / delta).sqrt() * exponent.exp()).min(1.0))
}

/// Gamma function at half-integer arguments: `gamma(half / 2)` for
/// `half >= 1`, via the recurrence from `gamma(1/2) = sqrt(pi)` and
/// `gamma(1) = 1`.
fn gamma_of_half(half: u32) -> f64 {
    debug_assert!(half >= 1);
    let mut value = if half % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut arg = if half % 2 == 0 { 1.0 } else { 0.5 };
    while arg + 1.0 <= half as f64 / 2.0 {
        value *= arg;
        arg += 1.0;
    }
    value
}

/// Moment bound for the occupancy deviation:
///
/// ```text
/// E |N_i - (n-1) pi_i|^m  <=  m gamma(m/2) / sqrt(2 delta) * (4C (11(n-1) + 2C))^{m/2}
/// ```
pub fn count_deviation_moment(m: u32, n: u64, delta: f64) -> Result<f64> {
    if m < 1 {
        return Err(Error::param("moment order must be at least 1"));
    }
    if n < 2 {
        return Err(Error::param("moment bound needs n >= 2"));
    }
    let c = mixing_constant(delta)? as f64;
    let base = 4.0 * c * (11.0 * (n - 1) as f64 + 2.0 * c);
    Ok(m as f64 * gamma_of_half(m) / (2.0 * delta).sqrt() * base.powf(m as f64 / 2.0))
}

/// Multiplicative Chernoff bound for a binomial upper tail:
/// `Pr(Y >= (1+eps) m p) <= exp(-eps^2 m p / 3)`.
pub fn binomial_upper_tail(m: u64, p: f64, epsilon: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("p {p} outside [0, 1]")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param(format!("epsilon {epsilon} outside (0, 1)")));
    }
    Ok((-epsilon * epsilon * m as f64 * p / 3.0).exp())
}
