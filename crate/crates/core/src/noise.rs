//! Noise models: seeded Brownian paths, mollified white noise and
//! deterministic stand-ins.
//!
//! Stream identity: a path for `seed` draws its increments in time order
//! from `ChaCha8Rng::seed_from_u64(seed)` through `StandardNormal`, each
//! scaled by `sqrt(dt)`.

use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::sampled::SampledFunction;
use crate::timefn::TimeFn;

/// Default mollifier width as a multiple of `dt`.
pub const DEFAULT_SMOOTHING_STEPS: f64 = 10.0;

/// `B(0) = 0` and independent `N(0, dt)` increments up to `t_end`.
pub fn brownian_path(seed: u64, t_end: f64, dt: f64) -> Result<SampledFunction> {
    if !(t_end > 0.0 && dt > 0.0) {
        return Err(Error::Domain(format!(
            "Brownian path needs t_end > 0 and dt > 0, got {t_end}, {dt}"
        )));
    }
    let n = (t_end / dt).ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = dt.sqrt();
    let mut values = Vec::with_capacity(n + 1);
    let mut b = 0.0;
    values.push(b);
    for _ in 0..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        b += sd * z;
        values.push(b);
    }
    SampledFunction::new(dt, values)
}

/// Brownian noise source: a sampled path and a mollifier width.
#[derive(Debug, Clone)]
pub struct BrownianNoise {
    pub seed: u64,
    pub path: SampledFunction,
    pub smoothing: f64,
}

impl BrownianNoise {
    /// Samples the path on `[0, t_end]`. `smoothing` defaults to `10 dt`.
    pub fn new(seed: u64, t_end: f64, dt: f64, smoothing: Option<f64>) -> Result<Self> {
        let smoothing = smoothing.unwrap_or(DEFAULT_SMOOTHING_STEPS * dt);
        if smoothing < dt {
            return Err(Error::Domain(format!(
                "smoothing width {smoothing} is below the step {dt}"
            )));
        }
        Ok(Self {
            seed,
            path: brownian_path(seed, t_end, dt)?,
            smoothing,
        })
    }

    /// `(B(b) − B(a))/(b − a)` on the window `[t − τ_s, t + τ_s]` clamped
    /// into the sampled horizon.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        let end = self.path.end();
        if !(t >= 0.0 && t <= end) {
            return Err(Error::Domain(format!("t = {t} outside noise horizon [0, {end}]")));
        }
        let width = 2.0 * self.smoothing;
        let (mut a, mut b) = (t - self.smoothing, t + self.smoothing);
        if a < 0.0 {
            a = 0.0;
            b = width.min(end);
        }
        if b > end {
            b = end;
            a = (end - width).max(0.0);
        }
        Ok((self.path.at(b)? - self.path.at(a)?) / (b - a))
    }
}

/// Source of `W(t)`.
#[derive(Debug, Clone, Default)]
pub enum NoiseModel {
    #[default]
    Zero,
    Deterministic(TimeFn),
    Brownian(BrownianNoise),
}

pub fn white_noise(model: &NoiseModel, t: f64) -> Result<Complex64> {
    match model {
        NoiseModel::Zero => Ok(Complex64::new(0.0, 0.0)),
        NoiseModel::Deterministic(f) => Ok(f.eval(t)),
        NoiseModel::Brownian(b) => b.derivative(t).map(|v| Complex64::new(v, 0.0)),
    }
}

impl NoiseModel {
    /// `W` as a time function. Brownian noise outside its horizon reads NaN.
    pub fn as_time_fn(&self) -> TimeFn {
        match self {
            NoiseModel::Zero => TimeFn::constant(Complex64::new(0.0, 0.0)),
            NoiseModel::Deterministic(f) => f.clone(),
            NoiseModel::Brownian(b) => {
                let b = b.clone();
                TimeFn::new(move |t| Complex64::new(b.derivative(t).unwrap_or(f64::NAN), 0.0))
            }
        }
    }

    /// Real part of [`NoiseModel::as_time_fn`], for real-coefficient families.
    pub fn as_real_time_fn(&self) -> TimeFn<f64> {
        match self {
            NoiseModel::Zero => TimeFn::constant(0.0),
            other => other.as_time_fn().map(|v| v.re),
        }
    }
}

/// Writes `t,B` rows.
pub fn write_path_csv(path: &SampledFunction, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "t,B")?;
    for (i, b) in path.values().iter().enumerate() {
        writeln!(out, "{},{}", path.time(i), b)?;
    }
    Ok(())
}
