//! JSON run configuration for `eval`.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;
use wickwave::caputo::FractionalOrder;
use wickwave::nls::{Beta, Branch, NlsFamily, NlsParams, PhaseMode, SpeedConvention};
use wickwave::noise::{BrownianNoise, NoiseModel};
use wickwave::rlw::{NoiseClock, RlwExample, RlwFamily, RlwParams, XiReading};
use wickwave::verify::AxisSpec;
use wickwave::wick::{white_noise_series, Truncation};
use wickwave::TimeFn;

use crate::error::CliError;
use crate::expr::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    Nls,
    Rlw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
pub enum Sign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl From<Sign> for Branch {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => Branch::Plus,
            Sign::Minus => Branch::Minus,
        }
    }
}

/// A coefficient given as a JSON number or an expression string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Number(f64),
    Text(String),
}

impl Coef {
    fn expr(&self, field: &str) -> Result<Expr, CliError> {
        match self {
            Coef::Number(v) => Ok(Expr::parse(&format!("{v:?}")).expect("float literal")),
            Coef::Text(s) => Expr::parse(s).map_err(|e| CliError::Config(format!("{field}: {e}"))),
        }
    }

    pub fn complex(&self, field: &str) -> Result<TimeFn, CliError> {
        Ok(self.expr(field)?.to_time_fn())
    }

    pub fn real(&self, field: &str) -> Result<TimeFn<f64>, CliError> {
        self.expr(field)?
            .to_real_time_fn()
            .map_err(|e| CliError::Config(format!("{field}: {e}")))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Range {
    pub fn new(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points }
    }

    pub fn axis(&self, name: &str) -> Result<AxisSpec, CliError> {
        if self.points == 0 || !(self.min.is_finite() && self.max.is_finite()) {
            return Err(CliError::Config(format!("grid.{name}: empty or non-finite range")));
        }
        if self.points > 1 && !(self.max > self.min) {
            return Err(CliError::Config(format!("grid.{name}: max must exceed min")));
        }
        Ok(AxisSpec::new(name, self.min, self.max, self.points))
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x: Option<Range>,
    pub t: Option<Range>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum NoiseConfig {
    #[default]
    Zero,
    Deterministic {
        expr: Coef,
    },
    Brownian {
        seed: u64,
        dt: f64,
        #[serde(default)]
        smoothing: Option<f64>,
        #[serde(default)]
        t_end: Option<f64>,
    },
    /// The transform-side noise `Σ_k (∫_0^t ξ_k) z_k` at a fixed `z`.
    Transform {
        z: Vec<[f64; 2]>,
    },
}

impl NoiseConfig {
    /// Builds the noise as a time function; `horizon` is the largest time
    /// the grid needs.
    pub fn time_fn(&self, horizon: f64) -> Result<TimeFn, CliError> {
        match self {
            NoiseConfig::Zero => Ok(NoiseModel::Zero.as_time_fn()),
            NoiseConfig::Deterministic { expr } => {
                Ok(NoiseModel::Deterministic(expr.complex("noise.expr")?).as_time_fn())
            }
            NoiseConfig::Brownian { seed, dt, smoothing, t_end } => {
                let end = t_end.unwrap_or(horizon);
                if end < horizon {
                    return Err(CliError::Config(format!(
                        "noise.t_end = {end} is shorter than the grid horizon {horizon}"
                    )));
                }
                let b = BrownianNoise::new(*seed, end.max(*dt), *dt, *smoothing)
                    .map_err(|e| CliError::Config(format!("noise: {e}")))?;
                Ok(NoiseModel::Brownian(b).as_time_fn())
            }
            NoiseConfig::Transform { z } => {
                if z.is_empty() {
                    return Err(CliError::Config("noise.z: needs at least one entry".into()));
                }
                let z: Vec<Complex64> = z.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                let trunc = Truncation::new(z.len(), 1);
                Ok(TimeFn::new(move |t| {
                    white_noise_series(t.max(0.0), trunc)
                        .and_then(|s| s.hermite_transform(&z))
                        .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
                }))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NoiseConfig::Zero)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub equation: Equation,
    pub family: u8,
    #[serde(default)]
    pub sign: Sign,
    pub params: serde_json::Value,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NlsParamsConfig {
    pub p: Coef,
    pub q: Coef,
    pub alpha: Coef,
    #[serde(default)]
    pub beta: Option<Coef>,
    /// `β = α/c`.
    #[serde(default)]
    pub c: Option<f64>,
    pub lambda: Coef,
    #[serde(default)]
    pub speed: SpeedConvention,
    #[serde(default)]
    pub phase: PhaseMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RlwForm {
    General,
    Example,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RlwParamsConfig {
    pub form: RlwForm,
    pub k: f64,
    pub order: f64,
    pub mu: Coef,
    // general form
    pub p: Option<Coef>,
    pub q: Option<Coef>,
    pub r: Option<Coef>,
    pub s: Option<Coef>,
    // noise-substituted form
    pub f1: Option<Coef>,
    pub f2: Option<Coef>,
    pub f4: Option<Coef>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c4: Option<f64>,
    #[serde(default)]
    pub xi: XiReading,
    #[serde(default)]
    pub clock: NoiseClock,
}

/// A validated configuration ready for evaluation.
pub enum Problem {
    Nls {
        params: NlsParams,
        family: NlsFamily,
        branch: Branch,
    },
    RlwGeneral(RlwParams),
    RlwExample(RlwExample),
}

pub struct Prepared {
    pub problem: Problem,
    pub xs: AxisSpec,
    pub ts: AxisSpec,
    pub output: Option<PathBuf>,
}

fn required<'a, T>(v: &'a Option<T>, field: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::Config(format!("params.{field}: missing")))
}

fn parse_section<T: serde::de::DeserializeOwned>(v: &serde_json::Value) -> Result<T, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::Config(format!("params: {e}")))
}

/// Default grids: NLS x ∈ [−10, 10], RLW x ∈ [0, 10], t ∈ [0, 20], 201 × 201.
pub fn default_x(equation: Equation) -> Range {
    match equation {
        Equation::Nls => Range::new(-10.0, 10.0, 201),
        Equation::Rlw => Range::new(0.0, 10.0, 201),
    }
}

pub fn default_t() -> Range {
    Range::new(0.0, 20.0, 201)
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn prepare(&self) -> Result<Prepared, CliError> {
        let xr = self.grid.x.clone().unwrap_or_else(|| default_x(self.equation));
        let tr = self.grid.t.clone().unwrap_or_else(default_t);
        let xs = xr.axis("x")?;
        let ts = tr.axis("t")?;
        if ts.min < 0.0 {
            return Err(CliError::Config("grid.t: times must be >= 0".into()));
        }
        let horizon = ts.max;
        let problem = match self.equation {
            Equation::Nls => {
                let family = NlsFamily::from_id(self.family)
                    .map_err(|_| CliError::Config(format!("family: NLS families are 1..3, got {}", self.family)))?;
                let c: NlsParamsConfig = parse_section(&self.params)?;
                let beta = match (&c.beta, c.c) {
                    (Some(b), None) => Beta::Given(b.complex("params.beta")?),
                    (None, Some(cv)) if cv != 0.0 => Beta::AlphaOver(cv),
                    (None, Some(_)) => return Err(CliError::Config("params.c: must be nonzero".into())),
                    _ => {
                        return Err(CliError::Config(
                            "params: give exactly one of beta or c".into(),
                        ))
                    }
                };
                let params = NlsParams::new(
                    c.p.real("params.p")?,
                    c.q.real("params.q")?,
                    c.alpha.complex("params.alpha")?,
                    beta,
                    c.lambda.complex("params.lambda")?,
                )
                .with_speed(c.speed)
                .with_phase(c.phase)
                .with_noise(&self.noise.time_fn(horizon)?);
                Problem::Nls { params, family, branch: self.sign.into() }
            }
            Equation::Rlw => {
                if self.sign != Sign::Plus {
                    return Err(CliError::Config("sign: RLW families have no sign selector".into()));
                }
                let family = RlwFamily::from_id(self.family)
                    .map_err(|_| CliError::Config(format!("family: RLW families are 1..6, got {}", self.family)))?;
                let c: RlwParamsConfig = parse_section(&self.params)?;
                let order = FractionalOrder::new(c.order)
                    .map_err(|e| CliError::Config(format!("params.order: {e}")))?;
                if c.k == 0.0 {
                    return Err(CliError::Config("params.k: must be nonzero".into()));
                }
                if xs.min < 0.0 {
                    return Err(CliError::Config(
                        "grid.x: the fractional transform needs x >= 0".into(),
                    ));
                }
                match c.form {
                    RlwForm::General => {
                        if !self.noise.is_zero() {
                            return Err(CliError::Config(
                                "noise: the general form takes transformed coefficients; use form \"example\" for noise".into(),
                            ));
                        }
                        Problem::RlwGeneral(RlwParams {
                            k: c.k,
                            order,
                            mu: c.mu.real("params.mu")?,
                            p: required(&c.p, "p")?.real("params.p")?,
                            q: required(&c.q, "q")?.real("params.q")?,
                            r: required(&c.r, "r")?.real("params.r")?,
                            s: required(&c.s, "s")?.real("params.s")?,
                            family,
                        })
                    }
                    RlwForm::Example => {
                        let w = self.noise.time_fn(horizon)?;
                        Problem::RlwExample(RlwExample {
                            family,
                            k: c.k,
                            order,
                            mu: c.mu.real("params.mu")?,
                            f1: required(&c.f1, "f1")?.real("params.f1")?,
                            f2: required(&c.f2, "f2")?.real("params.f2")?,
                            f4: required(&c.f4, "f4")?.real("params.f4")?,
                            c1: *required(&c.c1, "c1")?,
                            c2: *required(&c.c2, "c2")?,
                            c4: *required(&c.c4, "c4")?,
                            noise: w.map(|v| v.re),
                            xi: c.xi,
                            clock: c.clock,
                        })
                    }
                }
            }
        };
        Ok(Prepared { problem, xs, ts, output: self.output.clone() })
    }
}
