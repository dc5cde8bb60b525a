//! Built-in figure parameter sets.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use wickwave::caputo::FractionalOrder;
use wickwave::nls::{nls_grid, Beta, Branch, NlsFamily, NlsParams};
use wickwave::rlw::{NoiseClock, RlwExample, RlwFamily, XiReading};
use wickwave::TimeFn;

use crate::config::{default_t, default_x, Equation, Range};
use crate::error::CliError;
use crate::output::{grid_svg, write_file, write_grid_csv, GridValues};

pub const FIGURES: [&str; 4] = ["fig1", "fig2", "fig3", "fig4"];

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone)]
pub struct FigureOptions {
    pub out_dir: PathBuf,
    pub svg: bool,
    pub x: Option<Range>,
    pub t: Option<Range>,
}

impl FigureOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self { out_dir: out_dir.into(), svg: false, x: None, t: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayCheck {
    pub alpha: f64,
    pub t: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub max_abs_v1: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Observed range of `V4` over a window, next to the quoted values.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub alpha: f64,
    pub window: String,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub quoted: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RlwFigureReport {
    pub figure: String,
    pub noise: String,
    pub decay: Vec<DecayCheck>,
    pub v4_late_time: Vec<Envelope>,
    pub v4_at_origin: Vec<Envelope>,
}

impl RlwFigureReport {
    pub fn decay_passed(&self) -> bool {
        self.decay.iter().all(|d| d.passed)
    }
}

#[derive(Debug)]
pub struct FigureOutput {
    pub files: Vec<PathBuf>,
    pub report: Option<RlwFigureReport>,
}

/// The NLS caption set: `p = −1`, `q = 0.2`, `β = α/c` with `c = −0.01`,
/// `α(t) = −1.5i cos 0.2t`, `λ(t) = i cos 0.2t`, plus the panel's noise.
pub fn nls_figure_params(noise: &TimeFn) -> NlsParams {
    NlsParams::new(
        -1.0,
        0.2,
        TimeFn::new(|t| -1.5 * I * (0.2 * t).cos()),
        Beta::AlphaOver(-0.01),
        TimeFn::new(|t| I * (0.2 * t).cos()),
    )
    .with_noise(noise)
}

/// The RLW caption set: `k = 0.05`, `f1 = −0.2`, `f2 = 10`,
/// `f4 = 0.01 cos 0.5t`, `c1 = c2 = c4 = 1`.
pub fn rlw_figure_example(family: RlwFamily, alpha: f64, mu: f64, noise: TimeFn<f64>) -> Result<RlwExample, CliError> {
    Ok(RlwExample {
        family,
        k: 0.05,
        order: FractionalOrder::new(alpha)?,
        mu: TimeFn::constant(mu),
        f1: TimeFn::constant(-0.2),
        f2: TimeFn::constant(10.0),
        f4: TimeFn::new(|t| 0.01 * (0.5 * t).cos()),
        c1: 1.0,
        c2: 1.0,
        c4: 1.0,
        noise,
        xi: XiReading::OwnSpeed,
        clock: NoiseClock::Outer,
    })
}

pub const FIGURE_ALPHAS: [f64; 3] = [0.25, 0.5, 1.0];

fn fig4_noise() -> TimeFn<f64> {
    TimeFn::new(|t| (0.5 * t).sin())
}

fn emit(
    dir: &Path,
    stem: &str,
    xs: &[f64],
    ts: &[f64],
    values: &GridValues,
    svg: bool,
    files: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    let mut csv = Vec::new();
    write_grid_csv(xs, ts, values, &mut csv)?;
    let path = dir.join(format!("{stem}.csv"));
    write_file(&path, &csv)?;
    files.push(path);
    if svg {
        let path = dir.join(format!("{stem}.svg"));
        write_file(&path, grid_svg(values, stem).as_bytes())?;
        files.push(path);
    }
    Ok(())
}

pub fn run_figure(name: &str, opts: &FigureOptions) -> Result<FigureOutput, CliError> {
    let equation = match name {
        "fig1" | "fig2" => Equation::Nls,
        "fig3" | "fig4" => Equation::Rlw,
        other => {
            return Err(CliError::Config(format!(
                "unknown figure '{other}' (expected one of {})",
                FIGURES.join(", ")
            )))
        }
    };
    let xs = opts.x.clone().unwrap_or_else(|| default_x(equation)).axis("x")?.values();
    let ts = opts.t.clone().unwrap_or_else(default_t).axis("t")?.values();
    let mut files = Vec::new();
    let dir = opts.out_dir.as_path();
    match name {
        "fig1" | "fig2" => {
            let (family, noise_a) = if name == "fig1" {
                (NlsFamily::Two, TimeFn::new(|t| I * (0.1 * t).cos()))
            } else {
                (NlsFamily::Three, TimeFn::new(|t| 0.25 * I * ((0.1 * t).cos() + 1.5 * (0.5 * t).sin())))
            };
            let zero = TimeFn::constant(Complex64::new(0.0, 0.0));
            for (panel, noise) in [("a", noise_a), ("b", zero)] {
                let params = nls_figure_params(&noise);
                let g = nls_grid(&params, family, Branch::Plus, &xs, &ts)?;
                emit(dir, &format!("{name}{panel}"), &xs, &ts, &GridValues::Complex(g), opts.svg, &mut files)?;
            }
            Ok(FigureOutput { files, report: None })
        }
        _ => {
            let noisy = name == "fig4";
            let noise = || if noisy { fig4_noise() } else { TimeFn::constant(0.0) };
            for alpha in FIGURE_ALPHAS {
                let ex = rlw_figure_example(RlwFamily::F1, alpha, -3.0, noise())?;
                let g = ex.grid(&xs, &ts)?;
                emit(dir, &format!("{name}_alpha{alpha}"), &xs, &ts, &GridValues::Real(g), opts.svg, &mut files)?;
            }
            let report = rlw_report(name, noisy)?;
            let path = dir.join(format!("{name}_report.json"));
            let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            write_file(&path, json.as_bytes())?;
            files.push(path);
            Ok(FigureOutput { files, report: Some(report) })
        }
    }
}

/// `max |V1|` over `x ∈ [0, 10]` at `t = 10⁴`.
pub fn decay_check(alpha: f64, noisy: bool) -> Result<DecayCheck, CliError> {
    let noise = if noisy { fig4_noise() } else { TimeFn::constant(0.0) };
    let ex = rlw_figure_example(RlwFamily::F1, alpha, -3.0, noise)?;
    let xs = Range::new(0.0, 10.0, 101).axis("x")?.values();
    let t = 1e4;
    let row = ex.grid(&xs, &[t])?.remove(0);
    let max = row.iter().map(|v| v.map_or(f64::INFINITY, f64::abs)).fold(0.0, f64::max);
    Ok(DecayCheck { alpha, t, x_min: 0.0, x_max: 10.0, max_abs_v1: max, threshold: 1e-3, passed: max < 1e-3 })
}

fn envelope(alpha: f64, window: String, quoted: &str, values: &[f64]) -> Envelope {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let n = finite.len().max(1) as f64;
    Envelope {
        alpha,
        window,
        min: finite.iter().copied().fold(f64::INFINITY, f64::min),
        max: finite.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean: finite.iter().sum::<f64>() / n,
        quoted: quoted.to_string(),
    }
}

/// Decay of `V1` and the observed `V4` ranges (`μ = −1.5`).
pub fn rlw_report(name: &str, noisy: bool) -> Result<RlwFigureReport, CliError> {
    let decay = [0.25, 0.5].into_iter().map(|a| decay_check(a, noisy)).collect::<Result<Vec<_>, _>>()?;
    let noise = || if noisy { fig4_noise() } else { TimeFn::constant(0.0) };
    let late_x = Range::new(0.0, 10.0, 11).axis("x")?.values();
    let late_t = Range::new(1000.0, 1100.0, 201).axis("t")?.values();
    let mut v4_late_time = Vec::new();
    let mut v4_at_origin = Vec::new();
    for alpha in FIGURE_ALPHAS {
        let ex = rlw_figure_example(RlwFamily::F4, alpha, -1.5, noise())?;
        let late: Vec<f64> = ex.grid(&late_x, &late_t)?.into_iter().flatten().map(|v| v.unwrap_or(f64::NAN)).collect();
        let quoted = if noisy { "" } else { "tends to 0.018" };
        v4_late_time.push(envelope(alpha, "x in [0, 10], t in [1000, 1100]".into(), quoted, &late));
        let origin: Vec<f64> = ex.grid(&[0.0], &late_t)?.into_iter().flatten().map(|v| v.unwrap_or(f64::NAN)).collect();
        let quoted = if noisy && alpha == 1.0 { "between -0.08 and 0.12" } else { "" };
        v4_at_origin.push(envelope(alpha, "x = 0, t in [1000, 1100]".into(), quoted, &origin));
    }
    Ok(RlwFigureReport {
        figure: name.to_string(),
        noise: if noisy { "sin(0.5t)".into() } else { "0".into() },
        decay,
        v4_late_time,
        v4_at_origin,
    })
}
