//! Prediction and estimation risk of an estimator on a known chain.
//!
//! Prediction risk is the expected divergence between the true next-state
//! conditional `M(X_n, .)` and the predicted one:
//!
//! ```text
//! rho = E_{X^n} [ D( M(X_n, .), predict(X^n) ) ]
//! ```
//!
//! Estimation risk is the per-state expected row divergence
//! `e_i = E[ D( M(i, .), Mhat_{X^n}(i, .) ) ]`, combined either as the
//! maximum over states or weighted by the stationary distribution.
//!
//! Both risks come in an exact form (full enumeration of `k^n` sequences,
//! feasible for tiny instances) and a Monte Carlo form (independently seeded
//! restarts). Trials may run in parallel; the reduction is performed in
//! ascending trial order, so results are bit-identical for any worker count.

use rayon::prelude::*;

use crate::divergence::Divergence;
use crate::error::{Error, Result};
use crate::markov::{
    burn_in, Distribution, MarkovChain, SampleSequence, TransitionMatrix, DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
};
use crate::seed::substream;

/// Cap on `k^n` for exact enumeration.
pub const ENUMERATION_BUDGET: f64 = 1e7;

/// How an estimation risk aggregates per-state losses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskMode {
    Prediction,
    EstimationMax,
    EstimationWeighted,
}

impl std::fmt::Display for RiskMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let token = match self {
            RiskMode::Prediction => "prediction",
            RiskMode::EstimationMax => "estimation_max",
            RiskMode::EstimationWeighted => "estimation_weighted",
        };
        write!(f, "{token}")
    }
}

impl std::str::FromStr for RiskMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prediction" => Ok(RiskMode::Prediction),
            "estimation_max" => Ok(RiskMode::EstimationMax),
            "estimation_weighted" => Ok(RiskMode::EstimationWeighted),
            _ => Err(Error::UnknownToken(s.to_string())),
        }
    }
}

/// A risk value, exact or Monte Carlo.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskEstimate {
    /// Risk in the loss units of the chosen divergence.
    pub value: f64,
    /// Standard error of the Monte Carlo mean; 0 for exact values. In max
    /// mode this is the standard error of the argmax state's mean, which
    /// understates the uncertainty of a maximum.
    pub stderr: f64,
    /// Number of Monte Carlo trials; 0 for exact values.
    pub trials: u64,
    pub mode: RiskMode,
    pub exact: bool,
}

impl RiskEstimate {
    fn exact(value: f64, mode: RiskMode) -> Self {
        RiskEstimate { value, stderr: 0.0, trials: 0, mode, exact: true }
    }

    fn monte_carlo(value: f64, stderr: f64, trials: u64, mode: RiskMode) -> Self {
        RiskEstimate { value, stderr, trials, mode, exact: false }
    }
}

/// Per-state Monte Carlo estimation losses.
#[derive(Debug, Clone, PartialEq)]
pub struct PerStateRisk {
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub trials: u64,
}

/// Mean and standard error of a sample; `(inf, inf)` once any value is
/// non-finite.
fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    if samples.iter().any(|x| !x.is_finite()) {
        return (f64::INFINITY, f64::INFINITY);
    }
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn check_budget(k: usize, n: usize) -> Result<()> {
    let size = (k as f64).powi(n as i32);
    if size > ENUMERATION_BUDGET {
        return Err(Error::EnumerationBudget { size, budget: ENUMERATION_BUDGET });
    }
    Ok(())
}

/// Visit every positive-probability sequence of length `n` in lexicographic
/// order, passing `(states, probability)` to `visit`. Zero-probability
/// branches are pruned; they contribute nothing to an expectation and would
/// otherwise produce `0 * inf` against infinite losses.
fn for_each_sequence<E>(
    chain: &MarkovChain,
    n: usize,
    visit: &mut impl FnMut(&SampleSequence, f64) -> Result<(), E>,
) -> Result<(), E> {
    fn recurse<E>(
        chain: &MarkovChain,
        n: usize,
        buf: &mut Vec<usize>,
        prob: f64,
        visit: &mut impl FnMut(&SampleSequence, f64) -> Result<(), E>,
    ) -> Result<(), E> {
        if buf.len() == n {
            let x = SampleSequence::new(buf.clone(), chain.k()).expect("states in range");
            return visit(&x, prob);
        }
        for s in 0..chain.k() {
            let step = match buf.last() {
                None => chain.initial().get(s),
                Some(&prev) => chain.matrix().entry(prev, s),
            };
            if step == 0.0 {
                continue;
            }
            buf.push(s);
            recurse(chain, n, buf, prob * step, visit)?;
            buf.pop();
        }
        Ok(())
    }
    let mut buf = Vec::with_capacity(n);
    recurse(chain, n, &mut buf, 1.0, visit)
}

/// Exact prediction risk by enumeration over all length-`n` sequences.
/// Requires `k^n <= 1e7`.
pub fn exact_prediction_risk<F>(
    chain: &MarkovChain,
    predictor: F,
    n: usize,
    spec: &Divergence,
) -> Result<RiskEstimate>
where
    F: Fn(&SampleSequence) -> Result<Distribution>,
{
    check_budget(chain.k(), n)?;
    if n < 2 {
        return Err(Error::SequenceTooShort { len: n, min: 2 });
    }
    let mut total = 0.0;
    for_each_sequence(chain, n, &mut |x: &SampleSequence, prob| {
        let guess = predictor(x)?;
        let truth = chain.matrix().row(x.last());
        total += prob * spec.evaluate(truth, &guess)?;
        Ok(())
    })?;
    Ok(RiskEstimate::exact(total, RiskMode::Prediction))
}

/// Monte Carlo prediction risk over `trials >= 2` independently seeded
/// restarts. Trial `t` always draws from `substream(seed, [t])`.
pub fn monte_carlo_prediction_risk<F>(
    chain: &MarkovChain,
    predictor: F,
    n: usize,
    spec: &Divergence,
    trials: u64,
    seed: u64,
) -> Result<RiskEstimate>
where
    F: Fn(&SampleSequence) -> Result<Distribution> + Sync,
{
    if trials < 2 {
        return Err(Error::param("need at least 2 trials"));
    }
    if n < 2 {
        return Err(Error::SequenceTooShort { len: n, min: 2 });
    }
    let losses = (0..trials)
        .into_par_iter()
        .map(|t| {
            let x = chain.sample_with(n, &mut substream(seed, &[t]));
            let guess = predictor(&x)?;
            spec.evaluate(chain.matrix().row(x.last()), &guess)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, stderr) = mean_stderr(&losses);
    Ok(RiskEstimate::monte_carlo(mean, stderr, trials, RiskMode::Prediction))
}

fn stationary_weights(chain: &MarkovChain) -> Result<Vec<f64>> {
    Ok(chain
        .matrix()
        .stationary(DEFAULT_TOL, DEFAULT_MAX_ITERS)?
        .probs()
        .to_vec())
}

fn row_losses(
    truth: &MarkovChain,
    estimate: &TransitionMatrix,
    spec: &Divergence,
) -> Result<Vec<f64>> {
    if estimate.k() != truth.k() {
        return Err(Error::DimensionMismatch { left: truth.k(), right: estimate.k() });
    }
    (0..truth.k())
        .map(|i| spec.evaluate(truth.matrix().row(i), estimate.row(i)))
        .collect()
}

/// Exact estimation risk by enumeration. With `apply_burn_in` the estimator
/// sees each sequence with its first `floor(sqrt(n))` entries removed.
pub fn exact_estimation_risk<F>(
    chain: &MarkovChain,
    estimator: F,
    n: usize,
    spec: &Divergence,
    mode: RiskMode,
    apply_burn_in: bool,
) -> Result<RiskEstimate>
where
    F: Fn(&SampleSequence) -> Result<TransitionMatrix>,
{
    check_budget(chain.k(), n)?;
    if n < 2 {
        return Err(Error::SequenceTooShort { len: n, min: 2 });
    }
    let weights = match mode {
        RiskMode::Prediction => {
            return Err(Error::param("estimation risk needs an estimation mode"))
        }
        RiskMode::EstimationMax => None,
        RiskMode::EstimationWeighted => Some(stationary_weights(chain)?),
    };
    let mut per_state = vec![0.0; chain.k()];
    for_each_sequence(chain, n, &mut |x: &SampleSequence, prob| {
        let x = if apply_burn_in { burn_in(x)? } else { x.clone() };
        let estimate = estimator(&x)?;
        for (acc, loss) in per_state.iter_mut().zip(row_losses(chain, &estimate, spec)?) {
            *acc += prob * loss;
        }
        Ok(())
    })?;
    let value = combine(&per_state, weights.as_deref()).0;
    Ok(RiskEstimate::exact(value, mode))
}

/// `(combined value, index of argmax when unweighted)`.
fn combine(per_state: &[f64], weights: Option<&[f64]>) -> (f64, usize) {
    match weights {
        Some(w) => (per_state.iter().zip(w).map(|(e, wi)| wi * e).sum(), 0),
        None => {
            let mut arg = 0;
            for (i, &e) in per_state.iter().enumerate() {
                if e > per_state[arg] {
                    arg = i;
                }
            }
            (per_state[arg], arg)
        }
    }
}

fn monte_carlo_state_losses<F>(
    chain: &MarkovChain,
    estimator: &F,
    n: usize,
    spec: &Divergence,
    apply_burn_in: bool,
    trials: u64,
    seed: u64,
) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&SampleSequence) -> Result<TransitionMatrix> + Sync,
{
    if trials < 2 {
        return Err(Error::param("need at least 2 trials"));
    }
    if n < 2 {
        return Err(Error::SequenceTooShort { len: n, min: 2 });
    }
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let x = chain.sample_with(n, &mut substream(seed, &[t]));
            let x = if apply_burn_in { burn_in(&x)? } else { x };
            let estimate = estimator(&x)?;
            row_losses(chain, &estimate, spec)
        })
        .collect()
}

/// Monte Carlo estimation risk over seeded restarts.
///
/// Max mode reports the largest per-state mean with that state's standard
/// error; weighted mode averages the per-trial stationary-weighted loss, so
/// its standard error reflects within-trial correlation across states.
pub fn monte_carlo_estimation_risk<F>(
    chain: &MarkovChain,
    estimator: F,
    n: usize,
    spec: &Divergence,
    mode: RiskMode,
    apply_burn_in: bool,
    trials: u64,
    seed: u64,
) -> Result<RiskEstimate>
where
    F: Fn(&SampleSequence) -> Result<TransitionMatrix> + Sync,
{
    let weights = match mode {
        RiskMode::Prediction => {
            return Err(Error::param("estimation risk needs an estimation mode"))
        }
        RiskMode::EstimationMax => None,
        RiskMode::EstimationWeighted => Some(stationary_weights(chain)?),
    };
    let by_trial = monte_carlo_state_losses(chain, &estimator, n, spec, apply_burn_in, trials, seed)?;
    match weights {
        Some(w) => {
            let weighted: Vec<f64> = by_trial
                .iter()
                .map(|losses| losses.iter().zip(&w).map(|(l, wi)| l * wi).sum())
                .collect();
            let (mean, stderr) = mean_stderr(&weighted);
            Ok(RiskEstimate::monte_carlo(mean, stderr, trials, mode))
        }
        None => {
            let per_state = per_state_stats(&by_trial, chain.k(), trials);
            let (value, arg) = combine(&per_state.means, None);
            Ok(RiskEstimate::monte_carlo(value, per_state.stderrs[arg], trials, mode))
        }
    }
}

/// Per-state means and standard errors across restarts, for checks that
/// compare each state against its own asymptotic value.
pub fn monte_carlo_estimation_by_state<F>(
    chain: &MarkovChain,
    estimator: F,
    n: usize,
    spec: &Divergence,
    apply_burn_in: bool,
    trials: u64,
    seed: u64,
) -> Result<PerStateRisk>
where
    F: Fn(&SampleSequence) -> Result<TransitionMatrix> + Sync,
{
    let by_trial = monte_carlo_state_losses(chain, &estimator, n, spec, apply_burn_in, trials, seed)?;
    Ok(per_state_stats(&by_trial, chain.k(), trials))
}

fn per_state_stats(by_trial: &[Vec<f64>], k: usize, trials: u64) -> PerStateRisk {
    let mut means = Vec::with_capacity(k);
    let mut stderrs = Vec::with_capacity(k);
    for i in 0..k {
        let column: Vec<f64> = by_trial.iter().map(|l| l[i]).collect();
        let (m, s) = mean_stderr(&column);
        means.push(m);
        stderrs.push(s);
    }
    PerStateRisk { means, stderrs, trials }
}
