use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use markov_risk::{
    bound, BoundQuery, Divergence, Estimator, EstimationPrior, PredictionPrior, RiskFamily, Side,
};
use markov_risk_cli::config::Grid;
use markov_risk_cli::{emit_csv, emit_plot, preset, preset_names, Axes, CliError, ExperimentConfig};

/// Markov chain risk experiments: seeded sweeps, bound tables, prior
/// diagnostics. States are labeled 1..=k in all output.
#[derive(Parser)]
#[command(name = "markov-risk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch experiment from a JSON config or a named preset.
    Run(RunArgs),
    /// Print one closed-form bound value.
    Theory(TheoryArgs),
    /// Lower-bound prior diagnostics as CSV.
    Priors(PriorsArgs),
    /// Quick oracle-equivalence suite; exits nonzero on failure.
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    /// Path to a flat JSON experiment config.
    config: Option<PathBuf>,

    /// Use a named preset instead of a config file (fig1a, fig1b, fig1c, fig1d).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,

    /// Output CSV path (defaults to `<name>.csv`).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write an SVG plot.
    #[arg(long)]
    plot: Option<PathBuf>,

    /// Plot axes: loglog or semilog.
    #[arg(long, default_value = "loglog")]
    axes: String,

    // Field overrides; names mirror the config fields.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    divergences: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    estimators: Option<Vec<String>>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    master_seed: Option<u64>,
    #[arg(long)]
    burn_in: Option<bool>,
    #[arg(long)]
    risk_mode: Option<String>,
    #[arg(long)]
    adjust_prediction: Option<bool>,
}

#[derive(Args)]
struct TheoryArgs {
    /// prediction_kl, estimation_f, estimation_f_weighted, estimation_l2,
    /// estimation_l2_weighted, or iid_kl.
    #[arg(long)]
    risk: String,
    /// lower or upper.
    #[arg(long)]
    side: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    pi_star: Option<f64>,
    /// Divergence token supplying the curvature f''(1) (kl, chi2,
    /// hellinger, alpha(a)).
    #[arg(long, conflicts_with = "curvature")]
    divergence: Option<String>,
    /// Explicit curvature f''(1) for f-divergence bounds.
    #[arg(long)]
    curvature: Option<f64>,
    /// Report the prediction upper bound with its constant 2 replaced by 1/2
    /// (the plotting convention).
    #[arg(long)]
    adjusted: bool,
}

#[derive(Args)]
struct PriorsArgs {
    #[command(subcommand)]
    kind: PriorsKind,
}

#[derive(Subcommand)]
enum PriorsKind {
    /// Prediction prior: level grid and exact fresh-run Bayes risk.
    Prediction {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Estimation prior: ball geometry and Monte Carlo Bayes risk of an
    /// estimator on the hidden row.
    Estimation {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        pi_star: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value = "add(0.5)")]
        estimator: String,
        #[arg(long, default_value = "kl")]
        divergence: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn init_worker_pool() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("RISK_WORKERS") {
        let workers: usize = raw
            .parse()
            .map_err(|_| CliError::config(format!("RISK_WORKERS must be a number, got `{raw}`")))?;
        if workers == 0 {
            return Err(CliError::config("RISK_WORKERS must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError::runtime(format!("worker pool: {e}")))?;
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let mut cfg: ExperimentConfig = match (&args.config, &args.preset) {
        (Some(path), None) => ExperimentConfig::load(path)?,
        (None, Some(name)) => preset(name).ok_or_else(|| {
            CliError::config(format!(
                "unknown preset `{name}` (available: {})",
                preset_names().join(", ")
            ))
        })?,
        (None, None) => {
            return Err(CliError::config("pass a config path or --preset"));
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };

    if let Some(name) = args.name {
        cfg.name = name;
    }
    if let Some(k) = args.k {
        cfg.k = Grid::Many(k);
    }
    if let Some(n) = args.n {
        cfg.n = Grid::Many(n);
    }
    if let Some(delta) = args.delta {
        cfg.delta = delta;
    }
    if let Some(divergences) = args.divergences {
        cfg.divergences = divergences;
    }
    if let Some(estimators) = args.estimators {
        cfg.estimators = estimators;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(seed) = args.master_seed {
        cfg.master_seed = seed;
    }
    if let Some(burn_in) = args.burn_in {
        cfg.burn_in = burn_in;
    }
    if let Some(mode) = args.risk_mode {
        cfg.risk_mode = mode;
    }
    if let Some(adjust) = args.adjust_prediction {
        cfg.adjust_prediction = adjust;
    }

    let resolved = cfg.resolve()?;
    let rows = markov_risk_cli::run_experiment(&resolved)?;

    let out = args.out.unwrap_or_else(|| PathBuf::from(format!("{}.csv", resolved.name)));
    emit_csv(&rows, &out)?;
    eprintln!("wrote {} rows to {}", rows.len(), out.display());

    if let Some(plot_path) = args.plot {
        let axes = Axes::from_str(&args.axes)?;
        emit_plot(&rows, &plot_path, axes)?;
        eprintln!("wrote plot to {}", plot_path.display());
    }
    Ok(())
}

fn theory(args: TheoryArgs) -> Result<(), CliError> {
    let risk = RiskFamily::from_str(&args.risk)
        .map_err(|e| CliError::config(format!("--risk: {e}")))?;
    let side =
        Side::from_str(&args.side).map_err(|e| CliError::config(format!("--side: {e}")))?;
    let curvature = match (&args.divergence, args.curvature) {
        (Some(token), None) => {
            let spec = Divergence::from_str(token)
                .map_err(|e| CliError::config(format!("--divergence: {e}")))?;
            spec.curvature().ok_or_else(|| {
                CliError::config("l2 has no curvature; use the estimation_l2 families".to_string())
            })?
        }
        (None, Some(c)) => c,
        (None, None) => 1.0,
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let value = bound(&BoundQuery {
        k: args.k,
        n: args.n,
        delta: args.delta,
        pi_star: args.pi_star,
        curvature,
        side,
        risk,
    })
    .map_err(|e| CliError::config(e.to_string()))?;
    let value = if args.adjusted && risk == RiskFamily::PredictionKl && side == Side::Upper {
        value * 0.25
    } else {
        value
    };
    println!("{value}");
    Ok(())
}

fn priors(args: PriorsArgs) -> Result<(), CliError> {
    match args.kind {
        PriorsKind::Prediction { k, n } => {
            let prior =
                PredictionPrior::new(k, n).map_err(|e| CliError::config(e.to_string()))?;
            let risk = prior.partial_bayes_risk()?;
            let lower = bound(&BoundQuery {
                k,
                n: n as u64,
                delta: None,
                pi_star: None,
                curvature: 1.0,
                side: Side::Lower,
                risk: RiskFamily::PredictionKl,
            })
            .map_err(|e| CliError::config(e.to_string()))?;
            println!("kind,k,n,levels,partial_bayes_risk,theory_lower");
            let levels = prior
                .levels()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(";");
            println!("prediction,{k},{n},{levels},{risk},{lower}");
        }
        PriorsKind::Estimation {
            k,
            n,
            delta,
            pi_star,
            epsilon,
            estimator,
            divergence,
            trials,
            seed,
        } => {
            let prior = EstimationPrior::new(k, n, delta, pi_star, epsilon)
                .map_err(|e| CliError::config(e.to_string()))?;
            let est = Estimator::from_str(&estimator)
                .map_err(|e| CliError::config(format!("--estimator: {e}")))?;
            if est.is_predictor_only() {
                return Err(CliError::config("hybrid has no transition-matrix form"));
            }
            let spec = Divergence::from_str(&divergence)
                .map_err(|e| CliError::config(format!("--divergence: {e}")))?;
            let risk = prior.bayes_risk_estimate(|x| est.estimate(x), &spec, trials, seed)?;
            let lower = bound(&BoundQuery {
                k,
                n: n as u64,
                delta: Some(delta),
                pi_star: Some(pi_star),
                curvature: spec.curvature().unwrap_or(1.0),
                side: Side::Lower,
                risk: match spec {
                    Divergence::L2 => RiskFamily::EstimationL2,
                    _ => RiskFamily::EstimationF,
                },
            })
            .map_err(|e| CliError::config(e.to_string()))?;
            println!(
                "kind,k,n,delta,pi_star,epsilon,ball_scale,radius,estimator,divergence,trials,risk,stderr,theory_lower"
            );
            println!(
                "estimation,{k},{n},{delta},{pi_star},{epsilon},{},{},{est},{spec},{trials},{},{},{lower}",
                prior.ball_scale(),
                prior.radius(),
                risk.value,
                risk.stderr,
            );
        }
    }
    Ok(())
}

fn selftest() -> Result<(), CliError> {
    let mut failures = 0;
    for (name, verdict) in markov_risk_cli::selftest::run() {
        match verdict {
            Ok(()) => println!("PASS {name}"),
            Err(msg) => {
                println!("FAIL {name}: {msg}");
                failures += 1;
            }
        }
    }
    if failures > 0 {
        return Err(CliError::runtime(format!("{failures} selftest check(s) failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_worker_pool().and_then(|()| match cli.command {
        Command::Run(args) => run(args),
        Command::Theory(args) => theory(args),
        Command::Priors(args) => priors(args),
        Command::Selftest => selftest(),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
