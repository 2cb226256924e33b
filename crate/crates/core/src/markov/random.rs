use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::substream;

use super::chain::MarkovChain;
use super::distribution::Distribution;
use super::matrix::TransitionMatrix;

/// One draw from the flat Dirichlet over `k` states: normalize `k` i.i.d.
/// unit exponentials.
fn dirichlet_flat(k: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..k)
        .map(|_| {
            let u: f64 = rng.random();
            -(1.0 - u).ln()
        })
        .collect();
    let sum: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= sum);
    v
}

/// Random chain for experiments: initial law and each row of `M'` drawn
/// i.i.d. from the flat Dirichlet, then every entry floored at `delta` via
/// `M = (1 - k*delta) * M' + delta * J`.
///
/// Draw order is fixed (initial law first, then rows top to bottom), so a
/// given seed always produces the same chain.
pub fn random_chain(k: usize, delta: f64, seed: u64) -> Result<MarkovChain> {
    if k < 2 {
        return Err(Error::TooFewStates(k));
    }
    if !(0.0..1.0 / k as f64).contains(&delta) {
        // The class is trivial once delta >= 1/k: only the uniform row fits.
        return Err(Error::DeltaOutOfRange { delta, k });
    }
    let mut rng = substream(seed, &[]);
    let mu = Distribution::new(dirichlet_flat(k, &mut rng))?;
    let scale = 1.0 - k as f64 * delta;
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            dirichlet_flat(k, &mut rng)
                .into_iter()
                .map(|p| scale * p + delta)
                .collect()
        })
        .collect();
    MarkovChain::new(mu, TransitionMatrix::new(rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entries_clamped_and_rows_normalized() {
        for seed in 0..50 {
            let chain = random_chain(5, 0.05, seed).unwrap();
            assert!(chain.matrix().min_entry() >= 0.05);
            for row in chain.matrix().rows() {
                let sum: f64 = row.probs().iter().sum();
                assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn delta_zero_leaves_rows_untouched() {
        // With delta = 0 the clamp is the identity map.
        let a = random_chain(3, 0.0, 11).unwrap();
        let sum: f64 = a.matrix().row(0).probs().iter().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
        assert_eq!(a, random_chain(3, 0.0, 11).unwrap());
    }

    #[test]
    fn clamp_formula_direct_evaluation() {
        // k=2, delta=0.25 applied to the identity gives 0.75/0.25.
        let scale = 1.0 - 2.0 * 0.25;
        let clamped = |p: f64| scale * p + 0.25;
        assert_abs_diff_eq!(clamped(1.0), 0.75);
        assert_abs_diff_eq!(clamped(0.0), 0.25);
    }

    #[test]
    fn delta_at_or_above_one_over_k_is_rejected() {
        assert!(matches!(
            random_chain(4, 0.25, 1),
            Err(Error::DeltaOutOfRange { .. })
        ));
        assert!(random_chain(4, 0.3, 1).is_err());
        assert!(random_chain(4, -0.1, 1).is_err());
    }
}
