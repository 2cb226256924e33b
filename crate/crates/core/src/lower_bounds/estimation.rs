//! The structured prior for the estimation lower bound.
//!
//! Fix a stationary floor `pi*` and let `c = (1 - pi*)/(k - 1)`. Every row of
//! the chain except the last equals the anchor `p* = (c, ..., c, pi*)`; the
//! last row hides a distribution `p'` drawn uniformly from the sup-norm ball
//! of radius `1/n'` around the uniform law on the first `k - 1` states:
//!
//! ```text
//!   [ c          c         ...  c          pi* ]
//!   [ ...                                      ]
//!   [ c          c         ...  c          pi* ]
//!   [ (1-pi*)p'_1  ...  (1-pi*)p'_{k-1}    pi* ]
//! ```
//!
//! with `n' = (n (1 + eps) pi*)^{1/5}` and initial law `p*`. The last column
//! is constant, so the occupancy of the last state is Binomial(n, pi*) and
//! its stationary mass is exactly `pi*`; every other stationary mass is
//! `(1-pi*)(c + pi* p'_j) >= pi*` within the validated parameter range, so
//! sampled chains stay inside the (delta, pi*) class. An estimator's expected
//! loss on the last row, averaged over the prior, is the Monte Carlo evidence
//! against the minimax lower bound.

use rand::Rng;
use rayon::prelude::*;

use crate::divergence::Divergence;
use crate::error::{Error, Result};
use crate::markov::{Distribution, MarkovChain, SampleSequence, TransitionMatrix};
use crate::risk::{RiskEstimate, RiskMode};
use crate::seed::substream;

/// Attempt cap for ball rejection sampling.
const MAX_REJECTIONS: u64 = 1_000_000;

/// The estimation-lower-bound prior; see the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationPrior {
    k: usize,
    n: usize,
    delta: f64,
    pi_star: f64,
    epsilon: f64,
    scale: f64,  // n'
    radius: f64, // 1/n'
}

impl EstimationPrior {
    pub fn new(k: usize, n: usize, delta: f64, pi_star: f64, epsilon: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewStates(k));
        }
        if n < 2 {
            return Err(Error::param("need n >= 2"));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::param(format!("epsilon {epsilon} outside (0, 1)")));
        }
        let kf = k as f64;
        if !(pi_star > 0.0 && pi_star <= 1.0 / kf) {
            return Err(Error::param(format!("pi_star {pi_star} outside (0, 1/{k}]")));
        }
        if !(delta > 0.0 && delta < 1.0 / kf) {
            return Err(Error::DeltaOutOfRange { delta, k });
        }
        let scale = (n as f64 * (1.0 + epsilon) * pi_star).powf(0.2);
        let radius = 1.0 / scale;
        let anchor = 1.0 / (kf - 1.0);
        if radius >= anchor {
            return Err(Error::param(format!(
                "ball radius {radius} reaches the simplex boundary 1/(k-1) = {anchor}"
            )));
        }
        let off = 1.0 - pi_star;
        // Entry floor: every entry of every prior chain must be >= delta.
        let min_entry = pi_star.min(off * anchor).min(off * (anchor - radius));
        if min_entry < delta {
            return Err(Error::param(format!(
                "delta {delta} exceeds the smallest prior entry {min_entry}"
            )));
        }
        // Stationary floor: off-state stationary mass is
        // (1-pi*)(c + pi* p'_j) with p'_j > 1/(k-1) - radius, and must not
        // undercut pi*.
        if off * anchor - off * pi_star * radius < pi_star {
            return Err(Error::param(format!(
                "pi_star {pi_star} would not be the stationary minimum at radius {radius}"
            )));
        }
        Ok(EstimationPrior { k, n, delta, pi_star, epsilon, scale, radius })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn pi_star(&self) -> f64 {
        self.pi_star
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `n' = (n (1 + eps) pi*)^{1/5}`.
    pub fn ball_scale(&self) -> f64 {
        self.scale
    }

    /// Sup-norm radius `1/n'` of the hidden-row ball.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// The anchor law `p* = ((1-pi*)/(k-1), ..., pi*)`: initial law and every
    /// non-hidden row.
    pub fn base_distribution(&self) -> Distribution {
        let c = (1.0 - self.pi_star) / (self.k as f64 - 1.0);
        let mut probs = vec![c; self.k];
        probs[self.k - 1] = self.pi_star;
        Distribution::new_unchecked(probs)
    }

    /// Uniform draw from the sup-norm ball around the uniform law on `k - 1`
    /// states: the first `k - 2` coordinates are sampled uniformly in the
    /// slab and the forced last coordinate accepted iff it lands in its own
    /// interval, which is exact uniformity on the polytope.
    pub fn sample_ball_with(&self, rng: &mut impl Rng) -> Result<Vec<f64>> {
        let dim = self.k - 1;
        let center = 1.0 / dim as f64;
        let (lo, hi) = (center - self.radius, center + self.radius);
        for _ in 0..MAX_REJECTIONS {
            let mut p = Vec::with_capacity(dim);
            let mut sum = 0.0;
            for _ in 0..dim - 1 {
                let u: f64 = rng.random();
                let x = lo + (hi - lo) * u;
                sum += x;
                p.push(x);
            }
            let last = 1.0 - sum;
            if last > lo && last < hi {
                p.push(last);
                return Ok(p);
            }
        }
        Err(Error::RejectionFailed { attempts: MAX_REJECTIONS })
    }

    /// One chain from the prior: anchor rows, hidden last row `(1-pi*) p'`,
    /// initial law `p*`.
    pub fn sample_chain_with(&self, rng: &mut impl Rng) -> Result<MarkovChain> {
        let ball = self.sample_ball_with(rng)?;
        let base = self.base_distribution();
        let mut rows: Vec<Vec<f64>> = vec![base.probs().to_vec(); self.k - 1];
        let mut hidden: Vec<f64> = ball.iter().map(|&p| (1.0 - self.pi_star) * p).collect();
        hidden.push(self.pi_star);
        rows.push(hidden);
        MarkovChain::new(base, TransitionMatrix::new(rows)?)
    }

    /// Seeded variant of [`Self::sample_chain_with`].
    pub fn sample_chain(&self, seed: u64) -> Result<MarkovChain> {
        self.sample_chain_with(&mut substream(seed, &[]))
    }

    /// Monte Carlo Bayes risk of `estimator` on the hidden row: draw a prior
    /// chain and a sequence per trial, and average the divergence between the
    /// true and estimated last rows. This is the quantity the minimax lower
    /// bound `(1-pi*)(k-2) f''(1) / (2 n pi*)` constrains.
    pub fn bayes_risk_estimate<F>(
        &self,
        estimator: F,
        spec: &Divergence,
        trials: u64,
        seed: u64,
    ) -> Result<RiskEstimate>
    where
        F: Fn(&SampleSequence) -> Result<TransitionMatrix> + Sync,
    {
        if trials < 2 {
            return Err(Error::param("need at least 2 trials"));
        }
        let hidden = self.k - 1;
        let losses = (0..trials)
            .into_par_iter()
            .map(|t| {
                let chain = self.sample_chain_with(&mut substream(seed, &[t, 0]))?;
                let x = chain.sample_with(self.n, &mut substream(seed, &[t, 1]));
                let estimate = estimator(&x)?;
                if estimate.k() != self.k {
                    return Err(Error::DimensionMismatch { left: self.k, right: estimate.k() });
                }
                spec.evaluate(chain.matrix().row(hidden), estimate.row(hidden))
            })
            .collect::<Result<Vec<f64>>>()?;
        let n = losses.len() as f64;
        let (value, stderr) = if losses.iter().any(|l| !l.is_finite()) {
            (f64::INFINITY, f64::INFINITY)
        } else {
            let mean = losses.iter().sum::<f64>() / n;
            let var = losses.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / (n - 1.0);
            (mean, (var / n).sqrt())
        };
        Ok(RiskEstimate {
            value,
            stderr,
            trials,
            mode: RiskMode::EstimationMax,
            exact: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::linf_distance;
    use crate::markov::{DEFAULT_MAX_ITERS, DEFAULT_TOL};
    use approx::assert_abs_diff_eq;

    fn reference_prior() -> EstimationPrior {
        EstimationPrior::new(6, 100_000, 0.02, 0.1, 0.1).unwrap()
    }

    #[test]
    fn ball_scale_reference_values() {
        // (1e5 * 1.1 * 0.1)^(1/5).
        let prior = reference_prior();
        assert_abs_diff_eq!(prior.ball_scale(), 6.43100040646092, epsilon = 1e-10);
        assert_abs_diff_eq!(prior.radius(), 0.15549680248742444, epsilon = 1e-10);
    }

    #[test]
    fn ball_samples_stay_in_the_ball() {
        let prior = reference_prior();
        let mut rng = substream(3, &[]);
        let center = vec![0.2; 5];
        for _ in 0..200 {
            let p = prior.sample_ball_with(&mut rng).unwrap();
            assert_eq!(p.len(), 5);
            assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            assert!(linf_distance(&p, &center) < prior.radius());
        }
    }

    #[test]
    fn sampled_chains_sit_in_the_class() {
        let prior = reference_prior();
        for seed in 0..20 {
            let chain = prior.sample_chain(seed).unwrap();
            assert!(chain.matrix().min_entry() >= prior.delta());
            let pi = chain
                .matrix()
                .stationary(DEFAULT_TOL, DEFAULT_MAX_ITERS)
                .unwrap();
            // Last column is constant pi*, so the last state's stationary
            // mass is exactly pi* and is the minimum.
            assert_abs_diff_eq!(pi.get(5), 0.1, epsilon = 1e-10);
            for i in 0..5 {
                assert!(pi.get(i) >= 0.1 - 1e-10);
            }
        }
    }

    #[test]
    fn stationary_mass_matches_the_closed_form() {
        // pi_j = (1-pi*)(c + pi* p'_j) for j < k.
        let prior = reference_prior();
        let chain = prior.sample_chain(11).unwrap();
        let pi = chain
            .matrix()
            .stationary(DEFAULT_TOL, DEFAULT_MAX_ITERS)
            .unwrap();
        let off = 0.9;
        let c = off / 5.0;
        for j in 0..5 {
            let hidden = chain.matrix().entry(5, j) / off;
            assert_abs_diff_eq!(pi.get(j), off * (c + 0.1 * hidden), epsilon = 1e-10);
        }
    }

    #[test]
    fn cheating_estimator_has_zero_risk() {
        // With k = 2 the hidden-row ball is a single point, so every prior
        // chain is the same known matrix and the oracle estimator is
        // expressible; its Bayes risk must be exactly zero.
        let prior = EstimationPrior::new(2, 100, 0.1, 0.3, 0.5).unwrap();
        let truth = prior.sample_chain(0).unwrap().matrix().clone();
        let est = move |_: &SampleSequence| Ok(truth.clone());
        let risk = prior
            .bayes_risk_estimate(est, &Divergence::Kl, 20, 9)
            .unwrap();
        assert_eq!(risk.value, 0.0);
        assert_eq!(risk.stderr, 0.0);
    }

    #[test]
    fn parameter_validation() {
        // radius >= 1/(k-1): tiny n.
        assert!(EstimationPrior::new(6, 2, 0.02, 0.1, 0.1).is_err());
        // delta above the smallest entry.
        assert!(EstimationPrior::new(6, 100_000, 0.05, 0.1, 0.1).is_err());
        // pi_star = 1/k needs radius 0: rejected.
        assert!(EstimationPrior::new(6, 100_000, 0.01, 1.0 / 6.0, 0.1).is_err());
        // epsilon range.
        assert!(EstimationPrior::new(6, 100_000, 0.02, 0.1, 0.0).is_err());
        assert!(EstimationPrior::new(6, 100_000, 0.02, 0.1, 1.0).is_err());
    }

    #[test]
    fn risk_estimate_is_deterministic_given_seed() {
        let prior = EstimationPrior::new(4, 5_000, 0.05, 0.2, 0.5).unwrap();
        let est = |x: &SampleSequence| crate::estimator::Estimator::AddBeta(0.5).estimate(x);
        let a = prior.bayes_risk_estimate(est, &Divergence::Kl, 50, 5).unwrap();
        let b = prior.bayes_risk_estimate(est, &Divergence::Kl, 50, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.value > 0.0);
        assert!(a.stderr >= 0.0);
    }
}
