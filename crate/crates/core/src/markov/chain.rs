use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::substream;

use super::counts::SampleSequence;
use super::distribution::{sample_index, Distribution};
use super::matrix::TransitionMatrix;

/// A Markov chain: initial law plus transition matrix of matching dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    mu: Distribution,
    matrix: TransitionMatrix,
}

impl MarkovChain {
    pub fn new(mu: Distribution, matrix: TransitionMatrix) -> Result<Self> {
        if mu.k() != matrix.k() {
            return Err(Error::DimensionMismatch {
                left: mu.k(),
                right: matrix.k(),
            });
        }
        Ok(MarkovChain { mu, matrix })
    }

    pub fn k(&self) -> usize {
        self.matrix.k()
    }

    pub fn initial(&self) -> &Distribution {
        &self.mu
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    /// Sample `X_1, ..., X_n` with `X_1 ~ mu` and `X_{t+1} ~ M(X_t, .)`.
    pub fn sample_with(&self, n: usize, rng: &mut impl Rng) -> SampleSequence {
        assert!(n >= 1, "need n >= 1");
        let mut states = Vec::with_capacity(n);
        let mut cur = self.mu.sample(rng);
        states.push(cur);
        for _ in 1..n {
            cur = sample_index(self.matrix.row(cur).probs(), rng);
            states.push(cur);
        }
        SampleSequence::new_unchecked(states, self.k())
    }

    /// Deterministic sampling: the same `(chain, n, seed)` always yields the
    /// same sequence.
    pub fn sample(&self, n: usize, seed: u64) -> SampleSequence {
        self.sample_with(n, &mut substream(seed, &[]))
    }

    /// Law of `X_t` (`t >= 1`), i.e. `mu * M^{t-1}` computed by repeated
    /// vector-matrix products. The result is renormalized to absorb
    /// floating-point drift accumulated over long products.
    pub fn marginal(&self, t: usize) -> Result<Distribution> {
        if t < 1 {
            return Err(Error::param("marginal is defined for t >= 1"));
        }
        let mut cur = self.mu.probs().to_vec();
        let mut next = vec![0.0; self.k()];
        for _ in 1..t {
            self.matrix.apply_left(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        let sum: f64 = cur.iter().sum();
        cur.iter_mut().for_each(|x| *x /= sum);
        Distribution::new(cur)
    }

    /// Exact hitting-time distribution: entry `t-1` of the result is the
    /// probability that, starting from `start`, the chain first reaches
    /// `target` at step `t` (for `t = 1..=horizon`).
    ///
    /// Dynamic programming on the taboo chain: propagate mass only through
    /// non-target states and record the inflow into `target` at each step.
    pub fn hitting_time_pmf(
        &self,
        start: usize,
        target: usize,
        horizon: usize,
    ) -> Result<Vec<f64>> {
        let k = self.k();
        if start >= k {
            return Err(Error::StateOutOfRange { state: start, k });
        }
        if target >= k {
            return Err(Error::StateOutOfRange { state: target, k });
        }
        if start == target {
            return Err(Error::param("hitting time needs start != target"));
        }
        if horizon < 1 {
            return Err(Error::param("horizon must be at least 1"));
        }

        let mut alive = vec![0.0; k];
        alive[start] = 1.0;
        let mut pmf = Vec::with_capacity(horizon);
        let mut next = vec![0.0; k];
        for _ in 0..horizon {
            self.matrix.apply_left(&alive, &mut next);
            pmf.push(next[target]);
            next[target] = 0.0;
            std::mem::swap(&mut alive, &mut next);
        }
        Ok(pmf)
    }
}
