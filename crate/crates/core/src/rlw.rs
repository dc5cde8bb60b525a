//! Traveling-wave families of the Hermite-transformed fractional
//! RLW-Burgers equation.
//!
//! Every family, in general form, noise-substituted form or the `α = 1`
//! special case, has the shape
//! `V = offset + c1/br + c2/br²` with `br = b0 + b1 e^{−rate·ζ}`,
//! captured by [`BracketForm`]. Exact ζ-derivatives follow from
//! `g = 1/br`, which obeys `g' = rate (g − b0 g²)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caputo::{frac_space, frac_speed_integral, FractionalOrder};
use crate::error::{Error, Result};
use crate::special::frac_unscale;
use crate::timefn::TimeFn;
use crate::verify::{
    convergence_order, rounding_floor, Axis, AxisSpec, Field2, LevelNorm, Normalization,
    ResidualAccumulator, ResidualReport,
};

/// `|br| < BRACKET_POLE_TOL (|b0| + |b1 e^{…}|)` is reported as a pole.
pub const BRACKET_POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RlwFamily {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
}

impl RlwFamily {
    pub const ALL: [RlwFamily; 6] = [Self::F1, Self::F2, Self::F3, Self::F4, Self::F5, Self::F6];

    pub fn from_id(id: u8) -> Result<Self> {
        Ok(match id {
            1 => Self::F1,
            2 => Self::F2,
            3 => Self::F3,
            4 => Self::F4,
            5 => Self::F5,
            6 => Self::F6,
            _ => return Err(Error::Config(format!("RLW family must be 1..=6, got {id}"))),
        })
    }

    pub fn id(self) -> u8 {
        match self {
            Self::F1 => 1,
            Self::F2 => 2,
            Self::F3 => 3,
            Self::F4 => 4,
            Self::F5 => 5,
            Self::F6 => 6,
        }
    }
}

/// `y = offset + c1/br + c2/br²`, `br = b0 + b1 e^{−rate·ζ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketForm {
    pub offset: f64,
    pub c1: f64,
    pub c2: f64,
    pub b0: f64,
    pub b1: f64,
    pub rate: f64,
}

impl BracketForm {
    /// `g = 1/br`, evaluated without overflow.
    fn inverse_bracket(&self, zeta: f64) -> Result<f64> {
        let w = -self.rate * zeta;
        if w <= 0.0 {
            let e = w.exp();
            let br = self.b0 + self.b1 * e;
            if br.abs() < BRACKET_POLE_TOL * (self.b0.abs() + (self.b1 * e).abs()) || br == 0.0 {
                return Err(pole(zeta));
            }
            Ok(1.0 / br)
        } else {
            let e = (-w).exp();
            let br = self.b0 * e + self.b1;
            if br.abs() < BRACKET_POLE_TOL * ((self.b0 * e).abs() + self.b1.abs()) || br == 0.0 {
                return Err(pole(zeta));
            }
            Ok(e / br)
        }
    }

    pub fn value(&self, zeta: f64) -> Result<f64> {
        let g = self.inverse_bracket(zeta)?;
        Ok(self.offset + self.c1 * g + self.c2 * g * g)
    }

    /// `[y, y', y'']` in ζ.
    pub fn derivatives(&self, zeta: f64) -> Result<[f64; 3]> {
        let g = self.inverse_bracket(zeta)?;
        let g1 = self.rate * (g - self.b0 * g * g);
        let g2 = self.rate * (g1 - 2.0 * self.b0 * g * g1);
        Ok([
            self.offset + self.c1 * g + self.c2 * g * g,
            self.c1 * g1 + 2.0 * self.c2 * g * g1,
            self.c1 * g2 + 2.0 * self.c2 * (g1 * g1 + g * g2),
        ])
    }

    /// Scales the non-constant part (amplitude perturbation).
    pub fn scaled_amplitude(mut self, factor: f64) -> Self {
        self.c1 *= factor;
        self.c2 *= factor;
        self
    }
}

fn pole(zeta: f64) -> Error {
    Error::PoleEncountered {
        eta: zeta.into(),
    }
}

/// Coefficient bundle for the general families.
#[derive(Debug, Clone)]
pub struct RlwParams {
    pub k: f64,
    pub order: FractionalOrder,
    pub mu: TimeFn<f64>,
    pub p: TimeFn<f64>,
    pub q: TimeFn<f64>,
    pub r: TimeFn<f64>,
    pub s: TimeFn<f64>,
    pub family: RlwFamily,
}

impl RlwParams {
    /// Constant coefficients.
    #[allow(clippy::too_many_arguments)]
    pub fn constant(
        family: RlwFamily,
        k: f64,
        order: FractionalOrder,
        mu: f64,
        p: f64,
        q: f64,
        r: f64,
        s: f64,
    ) -> Self {
        Self {
            k,
            order,
            mu: mu.into(),
            p: p.into(),
            q: q.into(),
            r: r.into(),
            s: s.into(),
            family,
        }
    }

    fn frozen(&self, t: f64) -> Frozen {
        Frozen {
            mu: self.mu.eval(t),
            p: self.p.eval(t),
            q: self.q.eval(t),
            r: self.r.eval(t),
            s: self.s.eval(t),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Frozen {
    mu: f64,
    p: f64,
    q: f64,
    r: f64,
    s: f64,
}

/// The combinations `B1, B2, C1, C2, D1, D2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RlwCombos {
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
}

impl RlwCombos {
    pub fn new(r: f64, s: f64, mu: f64) -> Self {
        let sm = s * mu;
        Self {
            b1: r - sm,
            b2: r - 2.0 * sm,
            c1: r - 6.0 * sm,
            c2: r - 5.0 * sm,
            d1: r + 4.0 * sm,
            d2: r - 2.0 * sm,
        }
    }

    pub fn at(params: &RlwParams, t: f64) -> Self {
        let f = params.frozen(t);
        Self::new(f.r, f.s, f.mu)
    }
}

fn nonzero(v: f64, what: &str, t: f64) -> Result<f64> {
    if v.abs() < 1e-300 || !v.is_finite() {
        Err(Error::Division(format!("{what} vanishes at t = {t}")))
    } else {
        Ok(v)
    }
}

/// The family's `λ(t)`.
pub fn rlw_lambda(params: &RlwParams, t: f64) -> Result<f64> {
    let f = params.frozen(t);
    let s = nonzero(f.s, "s", t)?;
    let c = RlwCombos::new(f.r, s, f.mu);
    Ok(match params.family {
        RlwFamily::F1 | RlwFamily::F4 => c.b1 / s,
        RlwFamily::F2 | RlwFamily::F5 => -c.c1 / s,
        RlwFamily::F3 | RlwFamily::F6 => c.d1 / (6.0 * s),
    })
}

fn speed_formula(family: RlwFamily, k: f64, f: Frozen) -> f64 {
    let (mu, p, r, s) = (f.mu, f.p, f.r, f.s);
    let core = k * mu * mu * s - k * r * mu;
    let rr = k * r * r / s;
    match family {
        RlwFamily::F1 => -k * (4.0 * core + p + rr),
        RlwFamily::F2 => k * (12.0 * core - 8.0 * p + 3.0 * rr) / 8.0,
        RlwFamily::F3 => -k * (4.0 * core + 6.0 * p + rr) / 6.0,
        RlwFamily::F4 => k * (4.0 * core - p + rr),
        RlwFamily::F5 => -k * (12.0 * core + 8.0 * p + 3.0 * rr) / 8.0,
        RlwFamily::F6 => k * (4.0 * core - 6.0 * p + rr) / 6.0,
    }
}

/// The family speed with coefficients read at physical time `s`.
pub fn rlw_speed_at(params: &RlwParams, s: f64) -> Result<f64> {
    let f = params.frozen(s);
    nonzero(f.s, "s", s)?;
    Ok(speed_formula(params.family, params.k, f))
}

/// `c(τ)` with coefficients at `τ_α = [τΓ(1+α)]^{1/α}`.
pub fn rlw_wave_speed(params: &RlwParams, tau: f64) -> Result<f64> {
    if tau < 0.0 {
        return Err(Error::Domain(format!("tau must be >= 0, got {tau}")));
    }
    rlw_speed_at(params, frac_unscale(params.order.value(), tau))
}

/// The bracket form of the selected family at time `t`.
pub fn rlw_form(params: &RlwParams, t: f64) -> Result<BracketForm> {
    let f = params.frozen(t);
    let s = nonzero(f.s, "s", t)?;
    let q = nonzero(f.q, "q", t)?;
    let k = params.k;
    let c = RlwCombos::new(f.r, s, f.mu);
    let sm = s * f.mu;
    let qs = q * s;
    let form = match params.family {
        RlwFamily::F1 | RlwFamily::F4 => BracketForm {
            offset: 0.0,
            c1: 12.0 * k * c.b1 * c.b2 * c.b2 / qs,
            c2: -12.0 * k * c.b1 * c.b1 * c.b2 / qs,
            b0: c.b1,
            b1: -sm,
            rate: c.b2 / s,
        },
        RlwFamily::F2 | RlwFamily::F5 => BracketForm {
            offset: 0.0,
            c1: 0.0,
            c2: -3.0 * k * c.c1 * c.c1 * c.c2 / (4.0 * qs),
            b0: c.c1,
            b1: sm,
            rate: c.c2 / s,
        },
        RlwFamily::F3 | RlwFamily::F6 => BracketForm {
            offset: 0.0,
            c1: 2.0 * k * c.d1 * c.d2 * c.d2 / qs,
            c2: -k * c.d1 * c.d1 * c.d2 / (3.0 * qs),
            b0: c.d1,
            b1: -6.0 * sm,
            rate: c.d2 / (6.0 * s),
        },
    };
    let offset = match params.family {
        RlwFamily::F4 => -2.0 * k * c.b2 * c.b2 / qs,
        RlwFamily::F5 => 3.0 * k * c.b2 * c.b2 / (4.0 * qs),
        RlwFamily::F6 => -k * c.b2 * c.b2 / (3.0 * qs),
        _ => 0.0,
    };
    Ok(BracketForm { offset, ..form })
}

/// `ζ(x, t) = kX + ∫_0^T c(τ) dτ`.
pub fn rlw_zeta(params: &RlwParams, x: f64, t: f64) -> Result<f64> {
    let integral = frac_speed_integral(params.order, t, |s| {
        rlw_speed_at(params, s).unwrap_or(f64::NAN)
    })?;
    if !integral.is_finite() {
        return Err(Error::Division(format!("s vanishes on [0, {t}]")));
    }
    Ok(params.k * frac_space(params.order, x)? + integral)
}

/// `V(x, t)` for the selected family.
pub fn rlw_evaluate(params: &RlwParams, x: f64, t: f64) -> Result<f64> {
    rlw_form(params, t)?.value(rlw_zeta(params, x, t)?)
}

fn zeta_residual(
    form: &BracketForm,
    k: f64,
    c: f64,
    p: f64,
    q: f64,
    r: f64,
    s: f64,
    zetas: &[f64],
    label: &str,
) -> ResidualReport {
    let axis = AxisSpec::new(
        "zeta",
        zetas.first().copied().unwrap_or(0.0),
        zetas.last().copied().unwrap_or(0.0),
        zetas.len(),
    );
    let mut acc = ResidualAccumulator::new(label, vec![axis], Normalization::TermScaled);
    for &z in zetas {
        let Ok([y, y1, y2]) = form.derivatives(z) else {
            acc.exclude();
            continue;
        };
        let terms = [
            (c + k * p) * y,
            0.5 * k * q * y * y,
            k * k * r * y1,
            k * k * c * s * y2,
        ];
        let res: f64 = terms.iter().sum();
        if !res.is_finite() {
            acc.exclude();
            continue;
        }
        acc.push(res.abs(), terms.iter().map(|v| v.abs()).sum());
    }
    acc.finish()
}

/// Residual of `(c + kp)y + ½kq y² + k²r y' + k²cs y''` for an explicit
/// form and speed.
#[allow(clippy::too_many_arguments)]
pub fn ode_residual_for_form(
    form: &BracketForm,
    k: f64,
    speed: f64,
    p: f64,
    q: f64,
    r: f64,
    s: f64,
    zetas: &[f64],
    label: &str,
) -> ResidualReport {
    zeta_residual(form, k, speed, p, q, r, s, zetas, label)
}

/// Reduced-ODE residual of the selected family, coefficients frozen at
/// `t_frozen` and the family's own speed.
pub fn rlw_ode_residual(params: &RlwParams, t_frozen: f64, zetas: &[f64]) -> Result<ResidualReport> {
    let f = params.frozen(t_frozen);
    let form = rlw_form(params, t_frozen)?;
    let c = rlw_speed_at(params, t_frozen)?;
    let label = format!("rlw-ode family {}", params.family.id());
    Ok(zeta_residual(&form, params.k, c, f.p, f.q, f.r, f.s, zetas, &label))
}

/// `V` on the tensor grid `ts × xs` (row per time). Poles give `None`.
pub fn rlw_grid(params: &RlwParams, xs: &[f64], ts: &[f64]) -> Result<Vec<Vec<Option<f64>>>> {
    let spaces: Vec<f64> = xs
        .iter()
        .map(|&x| frac_space(params.order, x).map(|v| params.k * v))
        .collect::<Result<_>>()?;
    ts.par_iter()
        .map(|&t| {
            let form = rlw_form(params, t)?;
            let shift = rlw_zeta(params, 0.0, t)?;
            Ok(spaces.iter().map(|kx| form.value(kx + shift).ok()).collect())
        })
        .collect()
}

/// Reading of the `Ξ` symbol in the fifth and sixth noise-substituted
/// forms, which print `Ξ_2` and `Ξ_3` while defining their own speeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiReading {
    /// Each form uses its own speed.
    #[default]
    OwnSpeed,
    /// Forms 5 and 6 use the speeds of forms 2 and 3, as typeset.
    AsTypeset,
}

/// Time at which the noise inside a speed integrand is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseClock {
    /// `W(t)` at the outer time, as typeset.
    #[default]
    Outer,
    /// `W(τ_α)`, like the other coefficients.
    Rescaled,
}

/// Noise-substituted forms with `R = 0`, `P = f1 + c1 W`,
/// `Q = f2 + c2 W`, `S = f4 + c4 W`.
#[derive(Debug, Clone)]
pub struct RlwExample {
    pub family: RlwFamily,
    pub k: f64,
    pub order: FractionalOrder,
    pub mu: TimeFn<f64>,
    pub f1: TimeFn<f64>,
    pub f2: TimeFn<f64>,
    pub f4: TimeFn<f64>,
    pub c1: f64,
    pub c2: f64,
    pub c4: f64,
    pub noise: TimeFn<f64>,
    pub xi: XiReading,
    pub clock: NoiseClock,
}

impl RlwExample {
    pub fn p_at(&self, t: f64, w: f64) -> f64 {
        self.f1.eval(t) + self.c1 * w
    }

    pub fn q_at(&self, t: f64, w: f64) -> f64 {
        self.f2.eval(t) + self.c2 * w
    }

    pub fn s_at(&self, t: f64, w: f64) -> f64 {
        self.f4.eval(t) + self.c4 * w
    }

    /// The general-form parameters these substitutions stand for
    /// (`r ≡ 0`, noise read at each coefficient's own time).
    pub fn as_general(&self) -> RlwParams {
        let (f1, f2, f4, w) = (self.f1.clone(), self.f2.clone(), self.f4.clone(), self.noise.clone());
        let (c1, c2, c4) = (self.c1, self.c2, self.c4);
        let w1 = w.clone();
        let w2 = w.clone();
        RlwParams {
            k: self.k,
            order: self.order,
            mu: self.mu.clone(),
            p: TimeFn::new(move |t| f1.eval(t) + c1 * w.eval(t)),
            q: TimeFn::new(move |t| f2.eval(t) + c2 * w1.eval(t)),
            r: 0.0.into(),
            s: TimeFn::new(move |t| f4.eval(t) + c4 * w2.eval(t)),
            family: self.family,
        }
    }
}

fn example_shape(family: RlwFamily, k: f64, mu: f64, s: f64, q: f64) -> BracketForm {
    let m2 = mu * mu;
    let base = match family {
        RlwFamily::F1 | RlwFamily::F4 => {
            let a = 48.0 * k * s * m2 / q;
            BracketForm { offset: 0.0, c1: a, c2: -a, b0: 1.0, b1: 1.0, rate: -2.0 * mu }
        }
        RlwFamily::F2 | RlwFamily::F5 => BracketForm {
            offset: 0.0,
            c1: 0.0,
            c2: -675.0 * k * s * m2 / q,
            b0: 6.0,
            b1: -1.0,
            rate: -5.0 * mu,
        },
        RlwFamily::F3 | RlwFamily::F6 => {
            let a = 16.0 * k * s * m2 / q;
            BracketForm { offset: 0.0, c1: a, c2: -a / 3.0, b0: 2.0, b1: -3.0, rate: -mu / 3.0 }
        }
    };
    let offset = match family {
        RlwFamily::F4 => -8.0 * k * m2 * s / q,
        RlwFamily::F5 => -3.0 * k * m2 * s / q,
        RlwFamily::F6 => -4.0 * k * m2 * s / (3.0 * q),
        _ => 0.0,
    };
    BracketForm { offset, ..base }
}

fn example_speed(family: RlwFamily, k: f64, mu: f64, p: f64, s: f64) -> f64 {
    let m2 = mu * mu;
    match family {
        RlwFamily::F1 => -k * (4.0 * k * m2 * s + p),
        RlwFamily::F2 => -(3.0 * k * k * m2 * s - 2.0 * k * p) / 2.0,
        RlwFamily::F3 => -(4.0 * k * k * m2 * s + 6.0 * k * p) / 6.0,
        RlwFamily::F4 => k * (4.0 * k * m2 * s + p),
        RlwFamily::F5 => -(3.0 * k * k * m2 * s + 2.0 * k * p) / 2.0,
        RlwFamily::F6 => (2.0 * k * k * m2 * s - 3.0 * k * p) / 2.0,
    }
}

impl RlwExample {
    fn speed_family(&self) -> RlwFamily {
        match (self.xi, self.family) {
            (XiReading::AsTypeset, RlwFamily::F5) => RlwFamily::F2,
            (XiReading::AsTypeset, RlwFamily::F6) => RlwFamily::F3,
            (_, f) => f,
        }
    }

    /// Speed integrand at physical time `s` for the outer time `t`.
    pub fn speed_at(&self, s: f64, t: f64) -> f64 {
        let w = match self.clock {
            NoiseClock::Outer => self.noise.eval(t),
            NoiseClock::Rescaled => self.noise.eval(s),
        };
        example_speed(self.speed_family(), self.k, self.mu.eval(s), self.p_at(s, w), self.s_at(s, w))
    }

    /// Bracket form at time `t`.
    pub fn form(&self, t: f64) -> Result<BracketForm> {
        let w = self.noise.eval(t);
        let q = nonzero(self.q_at(t, w), "Q", t)?;
        Ok(example_shape(self.family, self.k, self.mu.eval(t), self.s_at(t, w), q))
    }

    /// `Ξ(0, t) = ∫_0^T c(τ) dτ`.
    pub fn xi_shift(&self, t: f64) -> Result<f64> {
        frac_speed_integral(self.order, t, |s| self.speed_at(s, t))
    }

    pub fn evaluate(&self, x: f64, t: f64) -> Result<f64> {
        let xi = self.k * frac_space(self.order, x)? + self.xi_shift(t)?;
        self.form(t)?.value(xi)
    }

    pub fn grid(&self, xs: &[f64], ts: &[f64]) -> Result<Vec<Vec<Option<f64>>>> {
        let spaces: Vec<f64> = xs
            .iter()
            .map(|&x| frac_space(self.order, x).map(|v| self.k * v))
            .collect::<Result<_>>()?;
        ts.par_iter()
            .map(|&t| {
                let form = self.form(t)?;
                let shift = self.xi_shift(t)?;
                Ok(spaces.iter().map(|kx| form.value(kx + shift).ok()).collect())
            })
            .collect()
    }

    /// Reduced-ODE residual (`r = 0`) with coefficients frozen at `t_frozen`.
    pub fn ode_residual(&self, t_frozen: f64, zetas: &[f64]) -> Result<ResidualReport> {
        let w = self.noise.eval(t_frozen);
        let form = self.form(t_frozen)?;
        let c = self.speed_at(t_frozen, t_frozen);
        let label = format!("rlw-ode example {}", self.family.id());
        Ok(zeta_residual(
            &form,
            self.k,
            c,
            self.p_at(t_frozen, w),
            self.q_at(t_frozen, w),
            0.0,
            self.s_at(t_frozen, w),
            zetas,
            &label,
        ))
    }
}

/// The three `α = 1` solutions quoted for `v_t + v_x + v v_x − v_txx = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alpha1Variant {
    V1,
    V2,
    V5,
}

impl Alpha1Variant {
    pub const ALL: [Alpha1Variant; 3] = [Self::V1, Self::V2, Self::V5];

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Self::V1),
            2 => Ok(Self::V2),
            5 => Ok(Self::V5),
            _ => Err(Error::Config(format!("alpha=1 variant must be 1, 2 or 5, got {id}"))),
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Self::V1 => 1,
            Self::V2 => 2,
            Self::V5 => 5,
        }
    }

    /// Bracket form in `ξ`.
    pub fn form(self, k: f64, mu: f64) -> BracketForm {
        let a = k * mu * mu;
        match self {
            Self::V1 => BracketForm { offset: 0.0, c1: -48.0 * a, c2: 24.0 * a, b0: 1.0, b1: 1.0, rate: -2.0 * mu },
            Self::V2 => BracketForm { offset: 0.0, c1: 0.0, c2: 135.0 * a, b0: 6.0, b1: -1.0, rate: -5.0 * mu },
            Self::V5 => BracketForm { offset: -3.0 * a, c1: 0.0, c2: 135.0 * a, b0: 6.0, b1: -1.0, rate: -5.0 * mu },
        }
    }

    /// `ξ(x, t)` with the time integral done in closed form for constant μ.
    pub fn xi(self, k: f64, mu: f64, x: f64, t: f64) -> f64 {
        let km2 = k * mu * mu;
        match self {
            Self::V1 => k * x + k * (4.0 * km2 - 1.0) * t,
            Self::V2 => k * x - 0.5 * k * (3.0 * km2 + 2.0) * t,
            Self::V5 => k * x + 0.5 * k * (3.0 * km2 - 2.0) * t,
        }
    }
}

pub fn rlw_alpha1_special(variant: Alpha1Variant, k: f64, mu: f64, x: f64, t: f64) -> Result<f64> {
    variant.form(k, mu).value(variant.xi(k, mu, x, t))
}

/// Central-difference residual of `v_t + v_x + v v_x − v_txx` for any
/// `v(x, t)` on `rect = (x0, x1, t0, t1)`, normalised by the term sizes.
pub fn bbm_residual_of(
    v: impl Fn(f64, f64) -> Result<f64> + Sync,
    rect: (f64, f64, f64, f64),
    hx: f64,
    ht: f64,
    label: &str,
) -> Result<ResidualReport> {
    let (x0, x1, t0, t1) = rect;
    let xa = AxisSpec::with_step("x", x0, x1, hx);
    let ta = AxisSpec::with_step("t", t0, t1, ht);
    let xs = xa.values();
    let ts = ta.values();
    let rows: Vec<Vec<Option<f64>>> = ts
        .par_iter()
        .map(|&t| xs.iter().map(|&x| v(x, t).ok()).collect())
        .collect();
    let field = Field2::from_fn(ts.len(), xs.len(), |r, c| rows[r][c].unwrap_or(f64::NAN));
    let vt = field.derivative(Axis::T, ht, 1, 2)?;
    let vx = field.derivative(Axis::X, hx, 1, 2)?;
    let vtxx = field.mixed_txx(ht, hx, 2)?;
    let mut acc = ResidualAccumulator::new(label, vec![xa, ta], Normalization::TermScaled);
    for r in 1..ts.len() - 1 {
        for c in 1..xs.len() - 1 {
            let u = field.get(r, c);
            let terms = [vt.get(r, c), vx.get(r, c), u * vx.get(r, c), -vtxx.get(r, c)];
            let res: f64 = terms.iter().sum();
            if !res.is_finite() {
                acc.exclude();
                continue;
            }
            acc.push(res.abs(), terms.iter().map(|v| v.abs()).sum());
        }
    }
    Ok(acc.finish())
}

/// [`bbm_residual_of`] at `h` and `halvings` successive halvings, with the
/// fitted order of the sup norm.
pub fn bbm_convergence_of(
    v: impl Fn(f64, f64) -> Result<f64> + Sync,
    rect: (f64, f64, f64, f64),
    h: f64,
    halvings: usize,
    label: &str,
) -> Result<ResidualReport> {
    let mut levels = Vec::new();
    let mut last = None;
    for level in 0..=halvings {
        let step = h * 0.5f64.powi(level as i32);
        let rep = bbm_residual_of(&v, rect, step, step, label)?;
        levels.push(LevelNorm {
            step,
            sup_norm: rep.sup_norm,
            l2_norm: rep.l2_norm,
        });
        last = Some(rep);
    }
    let pairs: Vec<(f64, f64)> = levels.iter().map(|l| (l.step, l.sup_norm)).collect();
    // normalised residuals are relative, so the floor uses unit magnitude
    let est = convergence_order(&pairs, rounding_floor(1.0))?;
    Ok(ResidualReport {
        convergence_order: Some(est.order),
        saturated: est.saturated,
        levels,
        ..last.expect("at least one level")
    })
}

/// Convergence report for one of the `α = 1` solutions.
pub fn bbm_convergence(
    variant: Alpha1Variant,
    k: f64,
    mu: f64,
    rect: (f64, f64, f64, f64),
    h: f64,
    halvings: usize,
) -> Result<ResidualReport> {
    let label = format!("bbm v{}", variant.id());
    bbm_convergence_of(|x, t| rlw_alpha1_special(variant, k, mu, x, t), rect, h, halvings, &label)
}
