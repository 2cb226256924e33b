//! Loss measures between distributions.
//!
//! The f-divergence of `p` from `q` is `D_f(p, q) = sum_i q(i) f(p(i)/q(i))`
//! for a convex generator `f` with `f(1) = 0`. Built-ins cover the smooth
//! family used throughout the crate:
//!
//! ```text
//! KL          f(x) = x ln x             f''(1) = 1      (nats)
//! Chi-squared f(x) = (x - 1)^2          f''(1) = 2
//! Hellinger   f(x) = (sqrt(x) - 1)^2    f''(1) = 1/2
//! Alpha(a)    f(x) = 4 (1 - x^{(1+a)/2}) / (1 - a^2),  a != +-1,  f''(1) = 1
//! ```
//!
//! plus the squared Euclidean distance `L2(p, q) = sum_i (p(i) - q(i))^2`,
//! which is not an f-divergence but shares the same evaluation interface.
//!
//! Conventions: `0 * f(0/0) = 0`, and a zero `q(i)` against a positive `p(i)`
//! yields `+inf` where the generator diverges (KL, Chi-squared, Alpha with
//! a > 1) and the natural finite limit otherwise. Infinity is an ordinary
//! return value; callers decide policy.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::markov::Distribution;

/// Step used by [`Divergence::curvature_check`].
const CURVATURE_STEP: f64 = 1e-4;

/// A user-supplied f-divergence generator with its declared curvature.
#[derive(Clone)]
pub struct CustomDivergence {
    name: String,
    generator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    curvature: f64,
}

impl fmt::Debug for CustomDivergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDivergence")
            .field("name", &self.name)
            .field("curvature", &self.curvature)
            .finish()
    }
}

/// A named loss: one of the built-in f-divergences, the L2 distance, or a
/// custom generator.
#[derive(Debug, Clone)]
pub enum Divergence {
    Kl,
    ChiSquared,
    Hellinger,
    /// Alpha-divergence with parameter `a != +-1`.
    Alpha(f64),
    /// Squared Euclidean distance (no generator).
    L2,
    Custom(CustomDivergence),
}

impl Divergence {
    /// Alpha-divergence constructor; rejects the degenerate `a = +-1`.
    pub fn alpha(a: f64) -> Result<Self> {
        if a == 1.0 || a == -1.0 || !a.is_finite() {
            return Err(Error::param(format!(
                "alpha divergence needs a finite parameter != +-1, got {a}"
            )));
        }
        Ok(Divergence::Alpha(a))
    }

    /// Custom f-divergence. Validates `f(1) = 0` (within 1e-12) and that the
    /// declared curvature matches a finite-difference estimate within 1e-6.
    pub fn custom(
        name: impl Into<String>,
        generator: impl Fn(f64) -> f64 + Send + Sync + 'static,
        curvature: f64,
    ) -> Result<Self> {
        let spec = Divergence::Custom(CustomDivergence {
            name: name.into(),
            generator: Arc::new(generator),
            curvature,
        });
        spec.validate()?;
        Ok(spec)
    }

    /// Check `f(1) = 0` and the stored curvature against finite differences.
    /// `L2` carries no generator and passes vacuously.
    pub fn validate(&self) -> Result<()> {
        let Some(at_one) = self.generator(1.0) else {
            return Ok(());
        };
        if at_one.abs() > 1e-12 {
            return Err(Error::param(format!(
                "generator must vanish at 1, got f(1) = {at_one}"
            )));
        }
        let fd = self.curvature_check()?;
        let stored = self.curvature().expect("generator implies curvature");
        if (fd - stored).abs() > 1e-6 {
            return Err(Error::param(format!(
                "stored curvature {stored} disagrees with finite difference {fd}"
            )));
        }
        Ok(())
    }

    /// The generator `f` evaluated at `x >= 0`; `None` for L2.
    pub fn generator(&self, x: f64) -> Option<f64> {
        Some(match self {
            Divergence::Kl => {
                if x == 0.0 {
                    0.0 // limit of x ln x
                } else {
                    x * x.ln()
                }
            }
            Divergence::ChiSquared => (x - 1.0) * (x - 1.0),
            Divergence::Hellinger => {
                let d = x.sqrt() - 1.0;
                d * d
            }
            Divergence::Alpha(a) => 4.0 * (1.0 - x.powf((1.0 + a) / 2.0)) / (1.0 - a * a),
            Divergence::L2 => return None,
            Divergence::Custom(c) => (c.generator)(x),
        })
    }

    /// `f''(1)`, the curvature that drives every second-order risk formula;
    /// `None` for L2.
    pub fn curvature(&self) -> Option<f64> {
        match self {
            Divergence::Kl => Some(1.0),
            Divergence::ChiSquared => Some(2.0),
            Divergence::Hellinger => Some(0.5),
            Divergence::Alpha(_) => Some(1.0),
            Divergence::L2 => None,
            Divergence::Custom(c) => Some(c.curvature),
        }
    }

    /// Central second difference `(f(1+h) - 2 f(1) + f(1-h)) / h^2` at
    /// `h = 1e-4`, guarding against generator/curvature mismatches.
    pub fn curvature_check(&self) -> Result<f64> {
        let f = |x: f64| self.generator(x);
        match (f(1.0 + CURVATURE_STEP), f(1.0), f(1.0 - CURVATURE_STEP)) {
            (Some(hi), Some(mid), Some(lo)) => {
                Ok((hi - 2.0 * mid + lo) / (CURVATURE_STEP * CURVATURE_STEP))
            }
            _ => Err(Error::param("L2 has no generator to difference")),
        }
    }

    /// `D(p, q)`; nats for KL. Requires matching dimensions.
    pub fn evaluate(&self, p: &Distribution, q: &Distribution) -> Result<f64> {
        if p.k() != q.k() {
            return Err(Error::DimensionMismatch {
                left: p.k(),
                right: q.k(),
            });
        }
        Ok(self.evaluate_raw(p.probs(), q.probs()))
    }

    /// Evaluation on raw slices (lengths assumed equal).
    pub(crate) fn evaluate_raw(&self, p: &[f64], q: &[f64]) -> f64 {
        match self {
            Divergence::Kl => p
                .iter()
                .zip(q)
                .map(|(&pi, &qi)| {
                    if pi == 0.0 {
                        0.0
                    } else if qi == 0.0 {
                        f64::INFINITY
                    } else {
                        pi * (pi / qi).ln()
                    }
                })
                .sum(),
            Divergence::ChiSquared => p
                .iter()
                .zip(q)
                .map(|(&pi, &qi)| {
                    let d = pi - qi;
                    if d == 0.0 {
                        0.0
                    } else if qi == 0.0 {
                        f64::INFINITY
                    } else {
                        d * d / qi
                    }
                })
                .sum(),
            Divergence::Hellinger => p
                .iter()
                .zip(q)
                .map(|(&pi, &qi)| {
                    let d = pi.sqrt() - qi.sqrt();
                    d * d
                })
                .sum(),
            Divergence::Alpha(a) => {
                let half = (1.0 + a) / 2.0;
                let cross: f64 = p
                    .iter()
                    .zip(q)
                    .map(|(&pi, &qi)| pi.powf(half) * qi.powf(1.0 - half))
                    .sum();
                4.0 * (1.0 - cross) / (1.0 - a * a)
            }
            Divergence::L2 => p
                .iter()
                .zip(q)
                .map(|(&pi, &qi)| {
                    let d = pi - qi;
                    d * d
                })
                .sum(),
            Divergence::Custom(c) => p
                .iter()
                .zip(q)
                .map(|(&pi, &qi)| {
                    if qi == 0.0 {
                        if pi == 0.0 {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    } else {
                        qi * (c.generator)(pi / qi)
                    }
                })
                .sum(),
        }
    }
}

impl fmt::Display for Divergence {
    /// Lowercase token used in CLI arguments and CSV output. The alpha
    /// parameter is printed to two decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::Kl => write!(f, "kl"),
            Divergence::ChiSquared => write!(f, "chi2"),
            Divergence::Hellinger => write!(f, "hellinger"),
            Divergence::Alpha(a) => write!(f, "alpha({a:.2})"),
            Divergence::L2 => write!(f, "l2"),
            Divergence::Custom(c) => write!(f, "{}", c.name),
        }
    }
}

impl FromStr for Divergence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kl" => Ok(Divergence::Kl),
            "chi2" => Ok(Divergence::ChiSquared),
            "hellinger" => Ok(Divergence::Hellinger),
            "l2" => Ok(Divergence::L2),
            _ => {
                if let Some(inner) = s.strip_prefix("alpha(").and_then(|r| r.strip_suffix(')')) {
                    let a: f64 = inner
                        .parse()
                        .map_err(|_| Error::UnknownToken(s.to_string()))?;
                    Divergence::alpha(a)
                } else {
                    Err(Error::UnknownToken(s.to_string()))
                }
            }
        }
    }
}

/// `sum_i |p(i) - q(i)|`.
pub fn l1_distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}

/// `max_i |p(i) - q(i)|`.
pub fn linf_distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dist(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_on_equal_arguments() {
        let p = dist(&[0.3, 0.2, 0.5]);
        for spec in [
            Divergence::Kl,
            Divergence::ChiSquared,
            Divergence::Hellinger,
            Divergence::alpha(0.5).unwrap(),
            Divergence::L2,
        ] {
            assert!(spec.evaluate(&p, &p).unwrap().abs() <= 1e-12, "{spec}");
        }
    }

    #[test]
    fn frozen_values() {
        // Direct high-precision evaluations:
        //   KL((1/2,1/2), (1/4,3/4)) = (ln 2 + ln(2/3)) / 2
        //   chi2 = (1/4)^2/(1/4) + (1/4)^2/(3/4) = 1/3
        //   hellinger((1,0), (1/2,1/2)) = 2 - sqrt(2)
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[0.25, 0.75]);
        assert_abs_diff_eq!(
            Divergence::Kl.evaluate(&p, &q).unwrap(),
            0.14384103622589045,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            Divergence::ChiSquared.evaluate(&p, &q).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-12
        );
        let point = dist(&[1.0, 0.0]);
        let half = dist(&[0.5, 0.5]);
        assert_abs_diff_eq!(
            Divergence::Hellinger.evaluate(&point, &half).unwrap(),
            2.0 - std::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
        let e0 = dist(&[1.0, 0.0]);
        let e1 = dist(&[0.0, 1.0]);
        assert_abs_diff_eq!(Divergence::L2.evaluate(&e0, &e1).unwrap(), 2.0);
    }

    #[test]
    fn kl_infinite_on_unsupported_q() {
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[1.0, 0.0]);
        assert_eq!(Divergence::Kl.evaluate(&p, &q).unwrap(), f64::INFINITY);
        assert_eq!(
            Divergence::ChiSquared.evaluate(&p, &q).unwrap(),
            f64::INFINITY
        );
        // Hellinger stays finite by its natural limit.
        assert!(Divergence::Hellinger.evaluate(&p, &q).unwrap().is_finite());
    }

    #[test]
    fn curvatures_match_finite_differences() {
        for spec in [
            Divergence::Kl,
            Divergence::ChiSquared,
            Divergence::Hellinger,
            Divergence::alpha(0.5).unwrap(),
            Divergence::alpha(-0.3).unwrap(),
        ] {
            let fd = spec.curvature_check().unwrap();
            assert_abs_diff_eq!(fd, spec.curvature().unwrap(), epsilon = 1e-6);
        }
    }

    #[test]
    fn quartic_custom_generator_has_zero_curvature() {
        let spec = Divergence::custom("quartic", |x| (x - 1.0).powi(4), 0.0).unwrap();
        assert_abs_diff_eq!(spec.curvature_check().unwrap(), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn alpha_rejects_degenerate_parameters() {
        assert!(Divergence::alpha(1.0).is_err());
        assert!(Divergence::alpha(-1.0).is_err());
        assert!(Divergence::alpha(0.5).is_ok());
    }

    #[test]
    fn generic_generator_path_matches_analytic_kl() {
        let custom = Divergence::custom("kl-generic", |x: f64| x * x.ln(), 1.0).unwrap();
        let p = dist(&[0.2, 0.3, 0.5]);
        let q = dist(&[0.4, 0.4, 0.2]);
        assert_abs_diff_eq!(
            custom.evaluate(&p, &q).unwrap(),
            Divergence::Kl.evaluate(&p, &q).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn tokens_round_trip() {
        for token in ["kl", "chi2", "hellinger", "l2", "alpha(0.33)", "alpha(0.50)"] {
            let spec: Divergence = token.parse().unwrap();
            assert_eq!(spec.to_string(), token);
        }
        assert!("alpha(1)".parse::<Divergence>().is_err());
        assert!("tv".parse::<Divergence>().is_err());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[0.3, 0.3, 0.4]);
        assert!(Divergence::Kl.evaluate(&p, &q).is_err());
    }
}
