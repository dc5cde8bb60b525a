//! Uniformly sampled real functions on `[0, t_N]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples `f(t_i)` at `t_i = i h`, `i = 0..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    step: f64,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Domain(format!("sample step must be positive, got {step}")));
        }
        if values.is_empty() {
            return Err(Error::Domain("sampled function needs at least one value".into()));
        }
        Ok(Self { step, values })
    }

    /// Samples `f` on `n + 1` points with step `h`.
    pub fn from_fn(step: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..=n).map(|i| f(i as f64 * step)).collect();
        Self::new(step, values)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.time(self.values.len() - 1)
    }

    /// Linear interpolation; outside `[0, t_N]` is a domain error.
    pub fn at(&self, t: f64) -> Result<f64> {
        let end = self.end();
        let slack = 1e-12 * self.step;
        if !(t >= -slack && t <= end + slack) {
            return Err(Error::Domain(format!("t = {t} outside sampled horizon [0, {end}]")));
        }
        let t = t.clamp(0.0, end);
        let pos = t / self.step;
        let i = (pos.floor() as usize).min(self.values.len().saturating_sub(2));
        if self.values.len() == 1 {
            return Ok(self.values[0]);
        }
        let w = pos - i as f64;
        Ok(self.values[i] * (1.0 - w) + self.values[i + 1] * w)
    }
}
