//! Transition-matrix estimators and next-state predictors.
//!
//! Matrix estimators map transition counts to a row-stochastic estimate:
//!
//! ```text
//! empirical   M(i,j) = N_ij / N_i                      (uniform row when N_i = 0)
//! add-beta    M(i,j) = (N_ij + b) / (N_i + k b)
//! add-sqrt    M(i,j) = (N_ij + sqrt(N_i)/k) / (N_i + sqrt(N_i))
//! ```
//!
//! The hybrid predictor treats sequences that end in a fresh run of a
//! never-before-seen state specially: there the run length is the only usable
//! evidence, and the predicted self-transition probability is driven by the
//! run length alone. All other sequences fall back to the add-1/2 row of the
//! last state.

use crate::error::{Error, Result};
use crate::markov::{count_transitions, Distribution, SampleSequence, TransitionCounts, TransitionMatrix};

/// Smoothed row estimate `(N_ij + beta) / (N_i + k beta)`; rows with no
/// observations collapse to the uniform prior.
pub fn add_beta_matrix(counts: &TransitionCounts, beta: f64) -> Result<TransitionMatrix> {
    if !(beta > 0.0) {
        return Err(Error::param(format!("beta must be positive, got {beta}")));
    }
    let k = counts.k();
    let rows = (0..k)
        .map(|i| {
            let denom = counts.state_count(i) as f64 + k as f64 * beta;
            (0..k)
                .map(|j| (counts.pair_count(i, j) as f64 + beta) / denom)
                .collect()
        })
        .collect();
    TransitionMatrix::new(rows)
}

/// Row estimate `(N_ij + sqrt(N_i)/k) / (N_i + sqrt(N_i))`, the variance-bias
/// balanced smoothing used for L2 loss. Rows with `N_i = 0` are uniform (the
/// `beta -> 0` smoothing limit, which also keeps divergences finite).
pub fn add_sqrt_matrix(counts: &TransitionCounts) -> TransitionMatrix {
    let k = counts.k();
    let rows = (0..k)
        .map(|i| {
            let n_i = counts.state_count(i) as f64;
            if n_i == 0.0 {
                return vec![1.0 / k as f64; k];
            }
            let root = n_i.sqrt();
            let denom = n_i + root;
            (0..k)
                .map(|j| (counts.pair_count(i, j) as f64 + root / k as f64) / denom)
                .collect()
        })
        .collect();
    TransitionMatrix::new(rows).expect("rows sum to 1 by construction")
}

/// Unsmoothed frequency estimate `N_ij / N_i`; uniform rows where `N_i = 0`.
pub fn empirical_matrix(counts: &TransitionCounts) -> TransitionMatrix {
    let k = counts.k();
    let rows = (0..k)
        .map(|i| {
            let n_i = counts.state_count(i) as f64;
            if n_i == 0.0 {
                return vec![1.0 / k as f64; k];
            }
            (0..k)
                .map(|j| counts.pair_count(i, j) as f64 / n_i)
                .collect()
        })
        .collect();
    TransitionMatrix::new(rows).expect("rows sum to 1 by construction")
}

/// The trailing run of the last state of a sequence, and whether that run is
/// "fresh": the state never appeared before the run began (and the run does
/// not cover the whole sequence).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailRun {
    /// Last state of the sequence.
    pub state: usize,
    /// Maximal number of trailing occurrences of `state`.
    pub run_len: usize,
    /// True iff `state` is absent from the first `n - run_len` positions and
    /// `run_len <= n - 1`.
    pub fresh: bool,
}

/// Classify the tail run of `x`. Requires `n >= 2`.
pub fn classify_tail_run(x: &SampleSequence) -> Result<TailRun> {
    let n = x.len();
    if n < 2 {
        return Err(Error::SequenceTooShort { len: n, min: 2 });
    }
    let states = x.states();
    let state = states[n - 1];
    let run_len = states.iter().rev().take_while(|&&s| s == state).count();
    let fresh = run_len <= n - 1 && !states[..n - run_len].contains(&state);
    Ok(TailRun { state, run_len, fresh })
}

/// Next-state prediction from a fresh tail run: the run state gets
///
/// ```text
/// 1 - 1/(run_len * ln n)   if run_len <= n/2
/// 1 - 1/run_len            otherwise
/// ```
///
/// and the remaining mass is split evenly. Natural log; the `run_len <= n/2`
/// comparison is on real halves, ties taking the first branch. Requires
/// `n >= 3` (at `n = 2` the first branch leaves the simplex).
pub fn run_length_prediction(run: &TailRun, n: usize, k: usize) -> Result<Distribution> {
    if !run.fresh {
        return Err(Error::NotFreshTailRun);
    }
    if n < 3 {
        return Err(Error::SequenceTooShort { len: n, min: 3 });
    }
    if run.state >= k {
        return Err(Error::StateOutOfRange { state: run.state, k });
    }
    let ell = run.run_len as f64;
    let top = if ell <= n as f64 / 2.0 {
        1.0 - 1.0 / (ell * (n as f64).ln())
    } else {
        1.0 - 1.0 / ell
    };
    let rest = (1.0 - top) / (k as f64 - 1.0);
    let mut probs = vec![rest; k];
    probs[run.state] = top;
    Distribution::new(probs)
}

/// Composite next-state predictor: the run-length rule on fresh tail runs,
/// the add-`beta` row of the last state everywhere else.
pub fn hybrid_predict(x: &SampleSequence, beta: f64) -> Result<Distribution> {
    let run = classify_tail_run(x)?;
    if run.fresh {
        run_length_prediction(&run, x.len(), x.k())
    } else {
        let counts = count_transitions(x)?;
        let matrix = add_beta_matrix(&counts, beta)?;
        Ok(matrix.row(x.last()).clone())
    }
}

/// The estimators exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    Empirical,
    AddBeta(f64),
    AddSqrt,
    /// Prediction-only: has no transition-matrix form.
    Hybrid,
}

impl Estimator {
    /// Matrix estimate from counts. `Hybrid` has no matrix form.
    pub fn matrix(&self, counts: &TransitionCounts) -> Result<TransitionMatrix> {
        match self {
            Estimator::Empirical => Ok(empirical_matrix(counts)),
            Estimator::AddBeta(beta) => add_beta_matrix(counts, *beta),
            Estimator::AddSqrt => Ok(add_sqrt_matrix(counts)),
            Estimator::Hybrid => Err(Error::param(
                "hybrid is a predictor and has no transition-matrix form",
            )),
        }
    }

    /// Matrix estimate from a sequence.
    pub fn estimate(&self, x: &SampleSequence) -> Result<TransitionMatrix> {
        self.matrix(&count_transitions(x)?)
    }

    /// Next-state prediction from a sequence: the last state's row of the
    /// matrix estimate, or the hybrid rule.
    pub fn predict(&self, x: &SampleSequence) -> Result<Distribution> {
        match self {
            Estimator::Hybrid => hybrid_predict(x, 0.5),
            _ => Ok(self.estimate(x)?.row(x.last()).clone()),
        }
    }

    pub fn is_predictor_only(&self) -> bool {
        matches!(self, Estimator::Hybrid)
    }
}

impl std::fmt::Display for Estimator {
    /// Token used in CLI arguments and CSV output.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Estimator::Empirical => write!(f, "empirical"),
            Estimator::AddBeta(beta) => write!(f, "add({beta})"),
            Estimator::AddSqrt => write!(f, "add-sqrt"),
            Estimator::Hybrid => write!(f, "hybrid"),
        }
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empirical" => Ok(Estimator::Empirical),
            "add-sqrt" => Ok(Estimator::AddSqrt),
            "hybrid" => Ok(Estimator::Hybrid),
            _ => {
                if let Some(inner) = s.strip_prefix("add(").and_then(|r| r.strip_suffix(')')) {
                    let beta: f64 = inner
                        .parse()
                        .map_err(|_| Error::UnknownToken(s.to_string()))?;
                    if !(beta > 0.0) {
                        return Err(Error::param(format!("beta must be positive, got {beta}")));
                    }
                    Ok(Estimator::AddBeta(beta))
                } else {
                    Err(Error::UnknownToken(s.to_string()))
                }
            }
        }
    }
}
