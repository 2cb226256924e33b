//! Library half of the batch CLI: configuration, the experiment runner, CSV
//! and SVG emission, and the built-in selftest suite. The binary in
//! `main.rs` is a thin argument-parsing layer over these.

pub mod config;
pub mod csvio;
mod error;
pub mod plot;
pub mod runner;
pub mod selftest;

pub use config::{preset, preset_names, ExperimentConfig, ResolvedConfig};
pub use csvio::{emit_csv, parse_csv, render_csv, CSV_HEADER};
pub use error::CliError;
pub use plot::{emit_plot, render_svg, Axes};
pub use runner::{run_experiment, ResultRow};
