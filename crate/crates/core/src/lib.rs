//! Estimation of k-state Markov chains from sequential samples.
//!
//! The crate provides, in order of dependency:
//!
//! - [`markov`]: distributions, row-stochastic matrices, seeded chain
//!   sampling, transition counts, hitting-time dynamics, and the clamped
//!   random chains used by experiments;
//! - [`divergence`]: KL, Chi-squared, Hellinger, Alpha and L2 losses behind
//!   one interface, plus custom f-divergence generators;
//! - [`estimator`]: add-constant, add-sqrt and empirical transition-matrix
//!   estimators, and the run-length next-state predictor;
//! - [`risk`]: exact (enumeration) and Monte Carlo prediction/estimation
//!   risk, reproducible for any worker count;
//! - [`lower_bounds`]: structured priors whose Bayes-optimal predictors have
//!   closed forms, for validating the minimax lower bounds;
//! - [`theory`]: the closed-form minimax bound table and the supporting
//!   concentration, moment and binomial tail bounds.
//!
//! Everything randomized takes an explicit seed; see [`seed`].

pub mod divergence;
mod error;
pub mod estimator;
pub mod lower_bounds;
pub mod markov;
pub mod risk;
pub mod seed;
pub mod theory;

pub use divergence::{l1_distance, linf_distance, Divergence};
pub use error::{Error, Result};
pub use estimator::{
    add_beta_matrix, add_sqrt_matrix, classify_tail_run, empirical_matrix, hybrid_predict,
    run_length_prediction, Estimator, TailRun,
};
pub use lower_bounds::{
    posterior_mixture_prediction, prob_levels, EstimationPrior, PredictionPrior,
};
pub use markov::{
    burn_in, count_transitions, random_chain, Distribution, MarkovChain, SampleSequence,
    TransitionCounts, TransitionMatrix,
};
pub use risk::{
    exact_estimation_risk, exact_prediction_risk, monte_carlo_estimation_by_state,
    monte_carlo_estimation_risk, monte_carlo_prediction_risk, PerStateRisk, RiskEstimate,
    RiskMode,
};
pub use theory::{
    binomial_upper_tail, bound, count_deviation_moment, count_deviation_tail, mixing_constant,
    BoundQuery, RiskFamily, Side,
};
