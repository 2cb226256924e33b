//! Experiment execution: one random chain per curve, Monte Carlo risk per
//! grid point, theory values attached, rows sorted deterministically.

use markov_risk::seed::{derive_seed, hash_label, substream};
use markov_risk::{
    bound, burn_in, monte_carlo_estimation_risk, monte_carlo_prediction_risk, random_chain,
    BoundQuery, Divergence, Estimator, MarkovChain, RiskFamily, RiskMode, Side,
};

use crate::config::ResolvedConfig;
use crate::error::CliError;

/// One CSV row: a (curve, grid point) evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub k: usize,
    pub n: usize,
    pub delta: f64,
    pub divergence: String,
    pub estimator: String,
    pub risk_mode: String,
    pub trials: u64,
    pub mean_loss: f64,
    pub stderr: f64,
    pub theory_value: Option<f64>,
    pub master_seed: u64,
}

/// Upper-bound theory value for a curve, when one applies: the prediction
/// bound only covers KL (optionally with its constant 2 replaced by 1/2, the
/// plotting convention), estimation bounds need either a curvature or L2.
fn theory_value(
    mode: RiskMode,
    spec: &Divergence,
    k: usize,
    n: usize,
    delta: f64,
    adjust_prediction: bool,
) -> Option<f64> {
    let query = |risk: RiskFamily, curvature: f64| {
        bound(&BoundQuery {
            k,
            n: n as u64,
            delta: Some(delta),
            pi_star: None,
            curvature,
            side: Side::Upper,
            risk,
        })
        .ok()
    };
    match mode {
        RiskMode::Prediction => match spec {
            Divergence::Kl => {
                let factor = if adjust_prediction { 0.25 } else { 1.0 };
                query(RiskFamily::PredictionKl, 1.0).map(|v| v * factor)
            }
            _ => None,
        },
        RiskMode::EstimationMax => match spec {
            Divergence::L2 => query(RiskFamily::EstimationL2, 1.0),
            _ => query(RiskFamily::EstimationF, spec.curvature()?),
        },
        RiskMode::EstimationWeighted => match spec {
            Divergence::L2 => query(RiskFamily::EstimationL2Weighted, 1.0),
            _ => query(RiskFamily::EstimationFWeighted, spec.curvature()?),
        },
    }
}

/// `trials = 1` has no dispersion estimate; evaluate the single restart on
/// the same substream the Monte Carlo path would use for trial 0.
fn single_trial(
    chain: &MarkovChain,
    estimator: Estimator,
    spec: &Divergence,
    mode: RiskMode,
    n: usize,
    apply_burn_in: bool,
    seed: u64,
) -> Result<f64, CliError> {
    let x = chain.sample_with(n, &mut substream(seed, &[0]));
    match mode {
        RiskMode::Prediction => {
            let guess = estimator.predict(&x)?;
            Ok(spec.evaluate(chain.matrix().row(x.last()), &guess)?)
        }
        _ => {
            let x = if apply_burn_in { burn_in(&x)? } else { x };
            let estimate = estimator.estimate(&x)?;
            let losses: Vec<f64> = (0..chain.k())
                .map(|i| spec.evaluate(chain.matrix().row(i), estimate.row(i)))
                .collect::<Result<_, _>>()?;
            match mode {
                RiskMode::EstimationMax => {
                    Ok(losses.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)))
                }
                _ => {
                    let pi = chain.matrix().stationary(1e-12, 1_000_000)?;
                    Ok(losses.iter().zip(pi.probs()).map(|(l, w)| l * w).sum())
                }
            }
        }
    }
}

/// Run every (k, estimator, divergence, n) combination of the configuration.
///
/// Each curve -- an (estimator, divergence) pair -- gets a fresh random chain
/// per alphabet size, seeded from the master seed and the curve label, and
/// keeps it across the `n` grid. Predictor-only estimators (and every curve
/// when `risk_mode` is `prediction`) are scored as prediction risk; the rest
/// follow the configured estimation mode, with burn-in applied to estimation
/// only. Output is fully determined by the configuration; worker counts do
/// not change a byte.
pub fn run_experiment(cfg: &ResolvedConfig) -> Result<Vec<ResultRow>, CliError> {
    if cfg.burn_in && cfg.n_grid.iter().any(|&n| n < 4) {
        return Err(CliError::config("burn-in needs every n >= 4"));
    }
    let mut rows = Vec::new();
    for &k in &cfg.k_grid {
        for &estimator in &cfg.estimators {
            for spec in &cfg.divergences {
                let curve = hash_label(&format!("{estimator}|{spec}"));
                let chain = random_chain(k, cfg.delta, derive_seed(cfg.master_seed, &[curve, k as u64]))?;
                let mode = if estimator.is_predictor_only() {
                    RiskMode::Prediction
                } else {
                    cfg.risk_mode
                };
                for &n in &cfg.n_grid {
                    let seed = derive_seed(cfg.master_seed, &[curve, k as u64, n as u64]);
                    let (mean_loss, stderr) = if cfg.trials == 1 {
                        (single_trial(&chain, estimator, spec, mode, n, cfg.burn_in, seed)?, 0.0)
                    } else {
                        let estimate = match mode {
                            RiskMode::Prediction => monte_carlo_prediction_risk(
                                &chain,
                                |x| estimator.predict(x),
                                n,
                                spec,
                                cfg.trials,
                                seed,
                            )?,
                            _ => monte_carlo_estimation_risk(
                                &chain,
                                |x| estimator.estimate(x),
                                n,
                                spec,
                                mode,
                                cfg.burn_in,
                                cfg.trials,
                                seed,
                            )?,
                        };
                        (estimate.value, estimate.stderr)
                    };
                    rows.push(ResultRow {
                        experiment: cfg.name.clone(),
                        k,
                        n,
                        delta: cfg.delta,
                        divergence: spec.to_string(),
                        estimator: estimator.to_string(),
                        risk_mode: mode.to_string(),
                        trials: cfg.trials,
                        mean_loss,
                        stderr,
                        theory_value: theory_value(mode, spec, k, n, cfg.delta, cfg.adjust_prediction),
                        master_seed: cfg.master_seed,
                    });
                }
            }
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Canonical row order: `(k, n, estimator, divergence)`.
pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        (a.k, a.n, &a.estimator, &a.divergence).cmp(&(b.k, b.n, &b.estimator, &b.divergence))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{preset, ExperimentConfig, Grid};
    use approx::assert_relative_eq;

    fn tiny_config() -> ResolvedConfig {
        ExperimentConfig {
            name: "tiny".into(),
            k: Grid::One(3),
            n: Grid::Many(vec![50, 100]),
            delta: 0.05,
            divergences: vec!["kl".into(), "l2".into()],
            estimators: vec!["add(0.5)".into(), "hybrid".into()],
            trials: 5,
            master_seed: 42,
            burn_in: false,
            risk_mode: "estimation_max".into(),
            adjust_prediction: false,
        }
        .resolve()
        .unwrap()
    }

    #[test]
    fn rows_are_sorted_and_complete() {
        let rows = run_experiment(&tiny_config()).unwrap();
        // 1 k x 2 n x 2 estimators x 2 divergences.
        assert_eq!(rows.len(), 8);
        for pair in rows.windows(2) {
            let a = (&pair[0].k, &pair[0].n, &pair[0].estimator, &pair[0].divergence);
            let b = (&pair[1].k, &pair[1].n, &pair[1].estimator, &pair[1].divergence);
            assert!(a <= b);
        }
        for row in &rows {
            assert!(row.mean_loss.is_finite());
            assert!(row.stderr >= 0.0);
        }
    }

    #[test]
    fn hybrid_rows_are_prediction_mode() {
        let rows = run_experiment(&tiny_config()).unwrap();
        for row in rows {
            if row.estimator == "hybrid" {
                assert_eq!(row.risk_mode, "prediction");
                // Prediction theory exists only for KL.
                assert_eq!(row.theory_value.is_some(), row.divergence == "kl");
            } else {
                assert_eq!(row.risk_mode, "estimation_max");
                assert!(row.theory_value.is_some());
            }
        }
    }

    #[test]
    fn reruns_are_identical() {
        let cfg = tiny_config();
        assert_eq!(run_experiment(&cfg).unwrap(), run_experiment(&cfg).unwrap());
    }

    #[test]
    fn single_trial_runs_deterministically_with_zero_stderr() {
        let mut cfg = tiny_config();
        cfg.trials = 1;
        let once = run_experiment(&cfg).unwrap();
        let twice = run_experiment(&cfg).unwrap();
        assert_eq!(once, twice);
        assert_eq!(
            crate::csvio::render_csv(&once).unwrap(),
            crate::csvio::render_csv(&twice).unwrap()
        );
        for row in &once {
            assert_eq!(row.stderr, 0.0);
            assert_eq!(row.trials, 1);
        }
    }

    #[test]
    fn theory_values_match_bound_table() {
        let rows = run_experiment(&tiny_config()).unwrap();
        for row in rows {
            let Some(theory) = row.theory_value else { continue };
            let expected = match (row.risk_mode.as_str(), row.divergence.as_str()) {
                ("prediction", "kl") => {
                    2.0 * 9.0 * (row.n as f64).ln().ln() / row.n as f64
                }
                ("estimation_max", "kl") => 2.0 / (2.0 * row.n as f64 * 0.05),
                ("estimation_max", "l2") => (1.0 - 1.0 / 3.0) / (row.n as f64 * 0.05),
                other => panic!("unexpected row {other:?}"),
            };
            assert_relative_eq!(theory, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn preset_fig1a_adjusts_the_prediction_constant() {
        let mut cfg = preset("fig1a").unwrap();
        cfg.n = Grid::One(1000);
        cfg.trials = 2;
        let resolved = cfg.resolve().unwrap();
        let rows = run_experiment(&resolved).unwrap();
        let hybrid_row = rows.iter().find(|r| r.estimator == "hybrid").unwrap();
        let unadjusted = 2.0 * 36.0 * (1000.0f64).ln().ln() / 1000.0;
        assert_relative_eq!(
            hybrid_row.theory_value.unwrap(),
            0.25 * unadjusted,
            max_relative = 1e-12
        );
    }
}
