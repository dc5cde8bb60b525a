//! Finite-difference stencils, convergence orders and residual reports.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norms below `FLOOR_FACTOR · ε · magnitude` count as rounding noise.
pub const FLOOR_FACTOR: f64 = 1e3;

/// `1e3 · ε · magnitude`.
pub fn rounding_floor(magnitude: f64) -> f64 {
    FLOOR_FACTOR * f64::EPSILON * magnitude.max(f64::MIN_POSITIVE)
}

/// One sampled axis of a residual grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub step: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn new(name: &str, min: f64, max: f64, points: usize) -> Self {
        let step = if points > 1 {
            (max - min) / (points - 1) as f64
        } else {
            0.0
        };
        Self {
            name: name.to_string(),
            min,
            max,
            step,
            points,
        }
    }

    pub fn with_step(name: &str, min: f64, max: f64, step: f64) -> Self {
        let points = ((max - min) / step).round() as usize + 1;
        Self::new(name, min, max, points)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min + i as f64 * self.step
                }
            })
            .collect()
    }
}

/// How residual magnitudes are normalised before taking norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `|R|` as computed.
    Absolute,
    /// `|R| / (1 + Σ |term|)`, the residual relative to the size of the
    /// terms that cancel in it.
    TermScaled,
}

/// Norm at one refinement level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelNorm {
    pub step: f64,
    pub sup_norm: f64,
    pub l2_norm: f64,
}

/// Outcome of substituting a closed form into its equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub label: String,
    pub grid: Vec<AxisSpec>,
    pub normalization: Normalization,
    pub sup_norm: f64,
    pub l2_norm: f64,
    /// Unnormalised sup norm (equals `sup_norm` for absolute reports).
    pub raw_sup_norm: f64,
    pub evaluated_points: usize,
    pub excluded_points: usize,
    pub convergence_order: Option<f64>,
    pub saturated: bool,
    pub levels: Vec<LevelNorm>,
    pub variant_tags: Vec<String>,
}

impl ResidualReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports are plain data")
    }
}

/// Accumulates pointwise residuals into a [`ResidualReport`].
#[derive(Debug, Clone)]
pub struct ResidualAccumulator {
    label: String,
    grid: Vec<AxisSpec>,
    normalization: Normalization,
    cell: f64,
    sup: f64,
    raw_sup: f64,
    sq: f64,
    evaluated: usize,
    excluded: usize,
    tags: Vec<String>,
}

impl ResidualAccumulator {
    pub fn new(label: &str, grid: Vec<AxisSpec>, normalization: Normalization) -> Self {
        let cell = grid
            .iter()
            .map(|a| if a.step > 0.0 { a.step } else { 1.0 })
            .product();
        Self {
            label: label.to_string(),
            grid,
            normalization,
            cell,
            sup: 0.0,
            raw_sup: 0.0,
            sq: 0.0,
            evaluated: 0,
            excluded: 0,
            tags: Vec::new(),
        }
    }

    pub fn tag(mut self, tag: &str) -> Self {
        self.tags.push(tag.to_string());
        self
    }

    /// Records a residual `r` whose cancelling terms have total size `scale`.
    pub fn push(&mut self, r: f64, scale: f64) {
        let v = match self.normalization {
            Normalization::Absolute => r,
            Normalization::TermScaled => r / (1.0 + scale),
        };
        self.sup = self.sup.max(v);
        self.raw_sup = self.raw_sup.max(r);
        self.sq += v * v;
        self.evaluated += 1;
    }

    pub fn exclude(&mut self) {
        self.excluded += 1;
    }

    pub fn finish(self) -> ResidualReport {
        ResidualReport {
            label: self.label,
            grid: self.grid,
            normalization: self.normalization,
            sup_norm: self.sup,
            l2_norm: (self.sq * self.cell).sqrt(),
            raw_sup_norm: self.raw_sup,
            evaluated_points: self.evaluated,
            excluded_points: self.excluded,
            convergence_order: None,
            saturated: false,
            levels: Vec::new(),
            variant_tags: self.tags,
        }
    }
}

/// Central-difference weights for derivative `order` at `accuracy`
/// (offsets `−m..=m`, half-width `m`).
pub fn central_weights(order: usize, accuracy: usize) -> Result<&'static [f64]> {
    Ok(match (order, accuracy) {
        (1, 2) => &[-0.5, 0.0, 0.5],
        (1, 4) => &[1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0],
        (2, 2) => &[1.0, -2.0, 1.0],
        (2, 4) => &[-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0],
        (3, 2) => &[-0.5, 1.0, 0.0, -1.0, 0.5],
        (3, 4) => &[
            1.0 / 8.0,
            -1.0,
            13.0 / 8.0,
            0.0,
            -13.0 / 8.0,
            1.0,
            -1.0 / 8.0,
        ],
        _ => {
            return Err(Error::Domain(format!(
                "no central stencil for order {order}, accuracy {accuracy}"
            )))
        }
    })
}

/// Values that finite differences can act on.
pub trait FieldValue: Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync {}
impl FieldValue for f64 {}
impl FieldValue for Complex64 {}

/// Derivative of uniformly spaced samples. Entry `i` of the result belongs
/// to sample `i + offset`; the `offset` points at each end are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative1D<T> {
    pub offset: usize,
    pub values: Vec<T>,
}

pub fn fd_derivative<T: FieldValue>(
    samples: &[T],
    step: f64,
    order: usize,
    accuracy: usize,
) -> Result<Derivative1D<T>> {
    let w = central_weights(order, accuracy)?;
    let m = w.len() / 2;
    if samples.len() < w.len() {
        return Err(Error::Domain(format!(
            "{} samples are too few for a {}-point stencil",
            samples.len(),
            w.len()
        )));
    }
    let scale = step.powi(order as i32).recip();
    let values = (m..samples.len() - m)
        .map(|i| apply(w, |j| samples[i + j - m]) * scale)
        .collect();
    Ok(Derivative1D { offset: m, values })
}

fn apply<T: FieldValue>(w: &[f64], at: impl Fn(usize) -> T) -> T {
    w.iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .fold(T::zero(), |acc, (j, c)| acc + at(j) * *c)
}

/// Axis of a [`Field2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Along a row (the x direction).
    X,
    /// Across rows (the t direction).
    T,
}

/// Row-major field with `rows` time levels and `cols` space points.
/// `margin_rows`/`margin_cols` mark boundary layers that hold no valid data.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
    pub margin_rows: usize,
    pub margin_cols: usize,
}

impl<T: FieldValue> Field2<T> {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T + Sync) -> Self {
        use rayon::prelude::*;
        let data: Vec<T> = (0..rows)
            .into_par_iter()
            .flat_map_iter(|r| (0..cols).map(move |c| (r, c)).collect::<Vec<_>>())
            .map(|(r, c)| f(r, c))
            .collect();
        Self {
            rows,
            cols,
            data,
            margin_rows: 0,
            margin_cols: 0,
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    /// Central difference along `axis`. The margin grows by the stencil
    /// half-width; entries inside the margin are zero.
    pub fn derivative(&self, axis: Axis, step: f64, order: usize, accuracy: usize) -> Result<Field2<T>> {
        let w = central_weights(order, accuracy)?;
        let m = w.len() / 2;
        let (len, other_margin) = match axis {
            Axis::X => (self.cols, self.margin_cols),
            Axis::T => (self.rows, self.margin_rows),
        };
        if len < w.len() + 2 * other_margin {
            return Err(Error::Domain(format!(
                "axis of {len} points is too short for a {}-point stencil",
                w.len()
            )));
        }
        let scale = step.powi(order as i32).recip();
        let (mr, mc) = match axis {
            Axis::X => (self.margin_rows, self.margin_cols + m),
            Axis::T => (self.margin_rows + m, self.margin_cols),
        };
        let out = Field2::from_fn(self.rows, self.cols, |r, c| {
            if r < mr || r + mr >= self.rows || c < mc || c + mc >= self.cols {
                return T::zero();
            }
            let v = match axis {
                Axis::X => apply(w, |j| self.get(r, c + j - m)),
                Axis::T => apply(w, |j| self.get(r + j - m, c)),
            };
            v * scale
        });
        Ok(Field2 {
            margin_rows: mr,
            margin_cols: mc,
            ..out
        })
    }

    /// `∂³/∂t∂x²` as the t-derivative of the xx-derivative. Debug builds also
    /// compute the other order and check agreement.
    pub fn mixed_txx(&self, dt: f64, dx: f64, accuracy: usize) -> Result<Field2<T>>
    where
        T: Into<Complex64>,
    {
        let a = self.derivative(Axis::X, dx, 2, accuracy)?.derivative(Axis::T, dt, 1, accuracy)?;
        #[cfg(debug_assertions)]
        {
            let b = self.derivative(Axis::T, dt, 1, accuracy)?.derivative(Axis::X, dx, 2, accuracy)?;
            let mag = a
                .data
                .iter()
                .map(|v| (*v).into().norm())
                .filter(|m| m.is_finite())
                .fold(0.0, f64::max);
            for (u, v) in a.data.iter().zip(&b.data) {
                let diff = ((*u).into() - (*v).into()).norm();
                debug_assert!(
                    !diff.is_finite() || diff <= 1e-6 * (1.0 + mag),
                    "mixed derivative orders disagree by {diff}"
                );
            }
        }
        Ok(a)
    }
}

/// Least-squares slope of `log(norm)` against `log(h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEstimate {
    pub order: f64,
    /// True when the norms sit at the rounding floor or do not change.
    pub saturated: bool,
}

/// Estimates the observed order from `(h, norm)` pairs with `h` strictly
/// decreasing. Norms at or below `floor` are dropped; if fewer than two
/// remain, or all norms are equal, the estimate is flagged as saturated
/// with order 0.
pub fn convergence_order(samples: &[(f64, f64)], floor: f64) -> Result<ConvergenceEstimate> {
    if samples.len() < 2 {
        return Err(Error::Domain("convergence order needs at least two levels".into()));
    }
    if samples.windows(2).any(|w| !(w[1].0 < w[0].0)) || samples.iter().any(|s| !(s.0 > 0.0)) {
        return Err(Error::Domain("steps must be positive and strictly decreasing".into()));
    }
    let first = samples[0].1;
    let all_equal = samples.iter().all(|s| s.1 == first);
    let usable: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|s| s.1 > floor && s.1.is_finite())
        .collect();
    if all_equal || usable.len() < 2 {
        return Ok(ConvergenceEstimate {
            order: 0.0,
            saturated: true,
        });
    }
    let n = usable.len() as f64;
    let xs: Vec<f64> = usable.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|s| s.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(ConvergenceEstimate {
        order: sxy / sxx,
        saturated: usable.len() < samples.len(),
    })
}
