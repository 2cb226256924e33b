//! Core probabilistic objects: distributions over a finite alphabet,
//! row-stochastic transition matrices, Markov chains with seeded sampling,
//! transition counts, and the random chain generator used by experiments.
//!
//! States are `0..k` internally; command-line interfaces label them `1..=k`.

mod chain;
mod counts;
mod distribution;
mod matrix;
mod random;

pub use chain::MarkovChain;
pub use counts::{burn_in, count_transitions, SampleSequence, TransitionCounts};
pub use distribution::{Distribution, PROB_TOL};
pub use matrix::{TransitionMatrix, DEFAULT_MAX_ITERS, DEFAULT_TOL};
pub use random::random_chain;
