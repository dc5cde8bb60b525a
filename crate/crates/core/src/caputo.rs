//! Caputo derivatives: the L1 scheme, the power rule and the fractional
//! traveling-wave transform.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::sampled::SampledFunction;
use crate::special::{frac_scale, frac_unscale, gamma};

/// Order `α ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!("fractional order must lie in (0, 1], got {alpha}")))
        }
    }

    pub const ONE: FractionalOrder = FractionalOrder(1.0);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(a: FractionalOrder) -> f64 {
        a.0
    }
}

/// L1 approximation of the Caputo derivative at `t_n`:
/// `h^{−α}/Γ(2−α) Σ_{j=0}^{n−1} b_j (f_{n−j} − f_{n−j−1})`,
/// `b_j = (j+1)^{1−α} − j^{1−α}`.
///
/// At `α = 1` the weights collapse, so a backward difference is returned
/// instead (second order once two previous samples exist).
pub fn caputo_l1(f: &SampledFunction, alpha: FractionalOrder, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("L1 scheme needs n >= 1".into()));
    }
    if n >= f.len() {
        return Err(Error::Domain(format!(
            "index {n} beyond the last sample {}",
            f.len() - 1
        )));
    }
    let v = f.values();
    let h = f.step();
    if alpha.is_integer() {
        return Ok(if n >= 2 {
            (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h)
        } else {
            (v[n] - v[n - 1]) / h
        });
    }
    let a = alpha.value();
    let e = 1.0 - a;
    let mut sum = 0.0;
    let mut prev_pow = 0.0; // j^{1−α} at j = 0
    for j in 0..n {
        let next_pow = ((j + 1) as f64).powf(e);
        let b = next_pow - prev_pow;
        sum += b * (v[n - j] - v[n - j - 1]);
        prev_pow = next_pow;
    }
    Ok(h.powf(-a) / gamma(2.0 - a) * sum)
}

/// `D^α t^r = Γ(1+r)/Γ(1+r−α) t^{r−α}`.
pub fn caputo_power(r: f64, alpha: FractionalOrder, t: f64) -> Result<f64> {
    let a = alpha.value();
    if !(r > 0.0) {
        return Err(Error::Domain(format!("power rule needs r > 0, got {r}")));
    }
    if t < 0.0 {
        return Err(Error::Domain(format!("power rule needs t >= 0, got {t}")));
    }
    let denom_arg = 1.0 + r - a;
    if denom_arg <= 0.0 && denom_arg == denom_arg.floor() {
        return Err(Error::Domain(format!("Γ pole at 1 + r − α = {denom_arg}")));
    }
    let coef = gamma(1.0 + r) / gamma(denom_arg);
    let ex = r - a;
    if t == 0.0 {
        return Ok(if ex > 0.0 { 0.0 } else { coef });
    }
    Ok(coef * t.powf(ex))
}

/// `ζ = kX + ∫_0^T c(τ_α) dτ` with `X = x^α/Γ(1+α)`, `T = t^α/Γ(1+α)` and
/// `τ_α = [τΓ(1+α)]^{1/α}`.
///
/// `speed(s)` is the family speed with its coefficients read at physical
/// time `s`; this function supplies `s = τ_α`.
pub fn frac_transform_zeta(
    k: f64,
    alpha: FractionalOrder,
    x: f64,
    t: f64,
    speed: impl Fn(f64) -> f64,
) -> Result<f64> {
    Ok(k * frac_space(alpha, x)? + frac_speed_integral(alpha, t, speed)?)
}

/// `X = x^α/Γ(1+α)` for `x ≥ 0`.
pub fn frac_space(alpha: FractionalOrder, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!("fractional transform needs x >= 0, got {x}")));
    }
    Ok(frac_scale(alpha.value(), x))
}

/// `∫_0^T c(τ_α) dτ`.
pub fn frac_speed_integral(alpha: FractionalOrder, t: f64, speed: impl Fn(f64) -> f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("fractional transform needs t >= 0, got {t}")));
    }
    let a = alpha.value();
    let big_t = frac_scale(a, t);
    let opts = quad::QuadOptions {
        max_intervals: 1 << 15,
        ..Default::default()
    };
    quad::integrate_with(
        |tau| (speed(frac_unscale(a, tau).min(t))).into(),
        0.0,
        big_t,
        &opts,
    )
    .map(|v| v.re)
}

/// Returns `(D^α(f∘g)(t), f'(g(t)) D^α g(t))` by the L1 scheme on `n` steps.
///
/// The two agree for `α = 1` or affine `f`; otherwise the gap measures how
/// far the fractional chain rule is from an identity.
pub fn caputo_chain_check(
    g: impl Fn(f64) -> f64,
    f: impl Fn(f64) -> f64,
    alpha: FractionalOrder,
    t: f64,
    n: usize,
) -> Result<(f64, f64)> {
    if !(t > 0.0) || n < 2 {
        return Err(Error::Domain("chain check needs t > 0 and n >= 2".into()));
    }
    let h = t / n as f64;
    let comp = SampledFunction::from_fn(h, n, |s| f(g(s)))?;
    let inner = SampledFunction::from_fn(h, n, &g)?;
    let lhs = caputo_l1(&comp, alpha, n)?;
    let u = g(t);
    let du = 1e-5 * u.abs().max(1.0);
    let fprime = (f(u + du) - f(u - du)) / (2.0 * du);
    let rhs = fprime * caputo_l1(&inner, alpha, n)?;
    Ok((lhs, rhs))
}
