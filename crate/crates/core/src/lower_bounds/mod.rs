//! Executable lower-bound machinery: structured prior families over chains
//! whose Bayes-optimal predictors have closed forms, plus Monte Carlo Bayes
//! risk for the estimation problem.

mod estimation;
mod prediction;

pub use estimation::EstimationPrior;
pub use prediction::{
    posterior_mixture_prediction, posterior_mixture_raw, prob_levels, PredictionPrior,
};
