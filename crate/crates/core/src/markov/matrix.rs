use crate::divergence::l1_distance;
use crate::error::{Error, Result};

use super::distribution::Distribution;

/// Default residual tolerance for [`TransitionMatrix::stationary`].
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default iteration cap for [`TransitionMatrix::stationary`].
pub const DEFAULT_MAX_ITERS: u64 = 1_000_000;

/// A row-stochastic `k x k` matrix; row `i` is the law of the next state
/// given current state `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    rows: Vec<Distribution>,
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(Distribution::new)
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn from_rows(rows: Vec<Distribution>) -> Result<Self> {
        let k = rows.len();
        for row in &rows {
            if row.k() != k {
                return Err(Error::NotSquare { rows: k, cols: row.k() });
            }
        }
        if k < 2 {
            return Err(Error::TooFewStates(k));
        }
        Ok(TransitionMatrix { rows })
    }

    /// Wrap raw rows without simplex validation. Row lengths must still be
    /// square; entries are the caller's responsibility (see
    /// [`Distribution::new_unchecked`]).
    pub fn from_rows_unchecked(rows: Vec<Vec<f64>>) -> Self {
        let k = rows.len();
        assert!(rows.iter().all(|r| r.len() == k), "rows must form a square matrix");
        TransitionMatrix {
            rows: rows.into_iter().map(Distribution::new_unchecked).collect(),
        }
    }

    /// Re-check all row invariants.
    pub fn validate(&self) -> Result<()> {
        for row in &self.rows {
            row.validate()?;
            if row.k() != self.rows.len() {
                return Err(Error::NotSquare {
                    rows: self.rows.len(),
                    cols: row.k(),
                });
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &Distribution {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Distribution] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i].get(j)
    }

    pub fn min_entry(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.probs().iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// `out = v * M` (row action).
    pub(crate) fn apply_left(&self, v: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (i, row) in self.rows.iter().enumerate() {
            let w = v[i];
            if w == 0.0 {
                continue;
            }
            for (j, &m) in row.probs().iter().enumerate() {
                out[j] += w * m;
            }
        }
    }

    /// Stationary distribution by power iteration on the row action of the
    /// matrix, i.e. repeated `pi <- pi * M`.
    ///
    /// Returns a `pi` with `||pi * M - pi||_1 <= tol`. The iteration is run
    /// from two distinct starting vectors; if either fails to converge within
    /// `max_iters`, or the two limits disagree, the chain has no unique
    /// stationary law (reducible or periodic) and an error is returned rather
    /// than a silently wrong answer.
    pub fn stationary(&self, tol: f64, max_iters: u64) -> Result<Distribution> {
        if !(tol > 0.0) {
            return Err(Error::param(format!("tol must be positive, got {tol}")));
        }
        let k = self.k();
        let uniform = vec![1.0 / k as f64; k];
        // Any fixed non-uniform start works; weights proportional to 1..=k.
        let total = (k * (k + 1) / 2) as f64;
        let skew: Vec<f64> = (1..=k).map(|i| i as f64 / total).collect();

        let a = self.power_iterate(uniform, tol, max_iters)?;
        let b = self.power_iterate(skew, tol, max_iters)?;
        let agreement = (1e3 * tol).max(1e-10);
        if l1_distance(&a, &b) > agreement {
            return Err(Error::NonUniqueStationary);
        }
        Distribution::new(a)
    }

    fn power_iterate(&self, start: Vec<f64>, tol: f64, max_iters: u64) -> Result<Vec<f64>> {
        let mut cur = start;
        let mut next = vec![0.0; self.k()];
        for _ in 0..max_iters {
            self.apply_left(&cur, &mut next);
            let sum: f64 = next.iter().sum();
            next.iter_mut().for_each(|x| *x /= sum);
            if l1_distance(&next, &cur) <= tol {
                // One more check on the candidate itself.
                self.apply_left(&next, &mut cur);
                if l1_distance(&cur, &next) <= tol {
                    return Ok(next);
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Err(Error::NoConvergence { max_iters })
    }
}
