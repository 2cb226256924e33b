//! Built-in oracle-equivalence suite: quick cross-checks of the closed forms
//! against brute force, runnable in seconds from the command line.

use markov_risk::*;

type Check = (&'static str, Result<(), String>);

fn check_exact_vs_monte_carlo() -> Result<(), String> {
    let chain = random_chain(2, 0.1, 11).map_err(|e| e.to_string())?;
    let est = Estimator::AddBeta(0.5);
    let spec = Divergence::Kl;
    let exact = exact_prediction_risk(&chain, |x| est.predict(x), 6, &spec)
        .map_err(|e| e.to_string())?;
    let mc = monte_carlo_prediction_risk(&chain, |x| est.predict(x), 6, &spec, 10_000, 3)
        .map_err(|e| e.to_string())?;
    if (exact.value - mc.value).abs() > 3.0 * mc.stderr {
        return Err(format!(
            "exact {} vs monte carlo {} +- {}",
            exact.value, mc.value, mc.stderr
        ));
    }
    Ok(())
}

fn check_bayes_closed_form() -> Result<(), String> {
    let prior = PredictionPrior::new(4, 7).map_err(|e| e.to_string())?;
    let chains = prior.chains().map_err(|e| e.to_string())?;
    let mut states = vec![0usize; 7];
    // 0 0 0 0 0 1 1: fresh run of length 2 at a level state.
    states[5] = 1;
    states[6] = 1;
    let x = SampleSequence::new(states, 4).map_err(|e| e.to_string())?;
    let run = classify_tail_run(&x).map_err(|e| e.to_string())?;
    let closed = prior.bayes_prediction(&run).map_err(|e| e.to_string())?;
    let brute = posterior_mixture_prediction(&chains, &x).map_err(|e| e.to_string())?;
    let gap = linf_distance(closed.probs(), brute.probs());
    if gap > 1e-10 {
        return Err(format!("closed form and mixture differ by {gap}"));
    }
    Ok(())
}

fn check_hitting_bound() -> Result<(), String> {
    for seed in 0..5u64 {
        let chain = random_chain(4, 0.02, seed).map_err(|e| e.to_string())?;
        let pmf = chain.hitting_time_pmf(0, 3, 50).map_err(|e| e.to_string())?;
        for (idx, &p) in pmf.iter().enumerate() {
            let t = idx + 1;
            if t > 4 && p > 4.0 / t as f64 + 1e-12 {
                return Err(format!("seed {seed}: pmf({t}) = {p} above k/t"));
            }
        }
    }
    Ok(())
}

fn check_mixing_bound() -> Result<(), String> {
    let delta = 0.1;
    let chain = random_chain(3, delta, 5).map_err(|e| e.to_string())?;
    let pi = chain
        .matrix()
        .stationary(1e-12, 1_000_000)
        .map_err(|e| e.to_string())?;
    for t in 1..=100usize {
        let marginal = chain.marginal(t).map_err(|e| e.to_string())?;
        let dist = l1_distance(marginal.probs(), pi.probs());
        let limit = 2.0 * (1.0 - delta).powi(t as i32 - 1);
        if dist > limit + 1e-10 {
            return Err(format!("t={t}: L1 {dist} above {limit}"));
        }
    }
    Ok(())
}

fn check_csv_round_trip() -> Result<(), String> {
    use crate::config::{ExperimentConfig, Grid};
    let cfg = ExperimentConfig {
        name: "selftest".into(),
        k: Grid::One(3),
        n: Grid::Many(vec![60, 90]),
        delta: 0.05,
        divergences: vec!["kl".into()],
        estimators: vec!["add(0.5)".into()],
        trials: 3,
        master_seed: 9,
        burn_in: false,
        risk_mode: "estimation_max".into(),
        adjust_prediction: false,
    }
    .resolve()
    .map_err(|e| e.to_string())?;
    let rows = crate::runner::run_experiment(&cfg).map_err(|e| e.to_string())?;
    let text = crate::csvio::render_csv(&rows).map_err(|e| e.to_string())?;
    let parsed = crate::csvio::parse_csv(&text).map_err(|e| e.to_string())?;
    if parsed != rows {
        return Err("rows changed across a CSV round trip".into());
    }
    Ok(())
}

/// Run the suite, returning one named verdict per check.
pub fn run() -> Vec<Check> {
    vec![
        ("exact risk vs monte carlo (k=2, n=6)", check_exact_vs_monte_carlo()),
        ("bayes closed form vs posterior mixture (k=4, n=7)", check_bayes_closed_form()),
        ("hitting probability bound k/t", check_hitting_bound()),
        ("marginal mixing bound 2(1-delta)^(t-1)", check_mixing_bound()),
        ("experiment CSV round trip", check_csv_round_trip()),
    ]
}
