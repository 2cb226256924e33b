use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance on probability mass: entries of a distribution must sum to 1
/// within this bound.
pub const PROB_TOL: f64 = 1e-12;

/// A probability distribution over `k >= 2` states.
///
/// Entries are nonnegative and sum to 1 within [`PROB_TOL`]. Values are
/// immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let dist = Distribution { probs };
        dist.validate()?;
        Ok(dist)
    }

    /// Wrap a vector without validating it. The caller is responsible for the
    /// entries; used by analytic constructions that intentionally leave the
    /// simplex (see `lower_bounds`).
    pub fn new_unchecked(probs: Vec<f64>) -> Self {
        Distribution { probs }
    }

    /// Check the type invariants: `k >= 2`, entries nonnegative and summing
    /// to 1 within [`PROB_TOL`].
    pub fn validate(&self) -> Result<()> {
        if self.probs.len() < 2 {
            return Err(Error::TooFewStates(self.probs.len()));
        }
        for (index, &value) in self.probs.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let sum: f64 = self.probs.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::BadSum { sum, tol: PROB_TOL });
        }
        Ok(())
    }

    pub fn uniform(k: usize) -> Self {
        Distribution {
            probs: vec![1.0 / k as f64; k],
        }
    }

    pub fn point_mass(k: usize, state: usize) -> Result<Self> {
        if state >= k {
            return Err(Error::StateOutOfRange { state, k });
        }
        let mut probs = vec![0.0; k];
        probs[state] = 1.0;
        Distribution::new(probs)
    }

    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, state: usize) -> f64 {
        self.probs[state]
    }

    /// Draw one state by inverse CDF over the entries.
    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        sample_index(&self.probs, rng)
    }
}

/// Inverse-CDF draw from a probability vector. The final state absorbs any
/// floating-point shortfall in the cumulative sum.
pub(crate) fn sample_index(probs: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}
