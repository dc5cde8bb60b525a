//! Library side of the `wickwave` command-line tool.

pub mod catalog;
pub mod config;
pub mod error;
pub mod expr;
pub mod figures;
pub mod output;
pub mod suites;

use config::{Prepared, Problem, RunConfig};
use error::CliError;
use output::{write_grid_csv, GridValues};
use wickwave::nls::nls_grid;
use wickwave::noise::{brownian_path, write_path_csv};
use wickwave::rlw::rlw_grid;

/// Runs fail with exit code 3 when more than this share of points are poles.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.1;

pub struct EvalResult {
    pub csv: Vec<u8>,
    pub points: usize,
    pub excluded: usize,
}

pub fn evaluate(prepared: &Prepared) -> Result<GridValues, CliError> {
    let xs = prepared.xs.values();
    let ts = prepared.ts.values();
    Ok(match &prepared.problem {
        Problem::Nls { params, family, branch } => GridValues::Complex(nls_grid(params, *family, *branch, &xs, &ts)?),
        Problem::RlwGeneral(p) => GridValues::Real(rlw_grid(p, &xs, &ts)?),
        Problem::RlwExample(ex) => GridValues::Real(ex.grid(&xs, &ts)?),
    })
}

/// Parses, evaluates and renders a JSON run configuration.
pub fn run_eval(config_text: &str) -> Result<(EvalResult, Prepared), CliError> {
    let prepared = RunConfig::from_json(config_text)?.prepare()?;
    let values = evaluate(&prepared)?;
    let points = values.len();
    let excluded = values.excluded();
    if excluded as f64 > MAX_EXCLUDED_FRACTION * points as f64 {
        return Err(CliError::Numeric(format!(
            "{excluded} of {points} grid points hit a pole or a non-finite value"
        )));
    }
    let mut csv = Vec::new();
    write_grid_csv(&prepared.xs.values(), &prepared.ts.values(), &values, &mut csv)?;
    Ok((EvalResult { csv, points, excluded }, prepared))
}

pub fn noise_csv(seed: u64, t_end: f64, dt: f64) -> Result<Vec<u8>, CliError> {
    let path = brownian_path(seed, t_end, dt).map_err(|e| CliError::Config(e.to_string()))?;
    let mut out = Vec::new();
    write_path_csv(&path, &mut out)?;
    Ok(out)
}
