//! CSV emission and parsing for result rows.
//!
//! Fixed header, rows sorted by `(k, n, estimator, divergence)`, floats
//! printed as their shortest round-trip decimal, absent theory values as an
//! empty field. No quoting: fields must not contain commas or newlines.

use std::path::Path;

use crate::error::CliError;
use crate::runner::{sort_rows, ResultRow};

pub const CSV_HEADER: &str =
    "experiment,k,n,delta,divergence,estimator,risk_mode,trials,mean_loss,stderr,theory_value,master_seed";

/// Render rows (sorted canonically) to CSV text.
pub fn render_csv(rows: &[ResultRow]) -> Result<String, CliError> {
    if rows.is_empty() {
        return Err(CliError::runtime("no rows to emit"));
    }
    let mut sorted = rows.to_vec();
    sort_rows(&mut sorted);
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &sorted {
        if row.experiment.contains(',') || row.experiment.contains('\n') {
            return Err(CliError::runtime(format!(
                "experiment name {:?} cannot be written unquoted",
                row.experiment
            )));
        }
        let theory = row.theory_value.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.experiment,
            row.k,
            row.n,
            row.delta,
            row.divergence,
            row.estimator,
            row.risk_mode,
            row.trials,
            row.mean_loss,
            row.stderr,
            theory,
            row.master_seed,
        ));
    }
    Ok(out)
}

/// Write rows to `path`.
pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<(), CliError> {
    let text = render_csv(rows)?;
    std::fs::write(path, text)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}

/// Parse CSV text produced by [`render_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => return Err(CliError::runtime(format!("bad CSV header: {other:?}"))),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 12 {
            return Err(CliError::runtime(format!(
                "line {}: expected 12 fields, got {}",
                idx + 2,
                fields.len()
            )));
        }
        let bad = |what: &str| CliError::runtime(format!("line {}: bad {what}", idx + 2));
        rows.push(ResultRow {
            experiment: fields[0].to_string(),
            k: fields[1].parse().map_err(|_| bad("k"))?,
            n: fields[2].parse().map_err(|_| bad("n"))?,
            delta: fields[3].parse().map_err(|_| bad("delta"))?,
            divergence: fields[4].to_string(),
            estimator: fields[5].to_string(),
            risk_mode: fields[6].to_string(),
            trials: fields[7].parse().map_err(|_| bad("trials"))?,
            mean_loss: fields[8].parse().map_err(|_| bad("mean_loss"))?,
            stderr: fields[9].parse().map_err(|_| bad("stderr"))?,
            theory_value: if fields[10].is_empty() {
                None
            } else {
                Some(fields[10].parse().map_err(|_| bad("theory_value"))?)
            },
            master_seed: fields[11].parse().map_err(|_| bad("master_seed"))?,
        });
    }
    Ok(rows)
}
