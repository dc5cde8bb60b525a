//! Traveling-wave families of the Hermite-transformed nonlinear
//! Schrödinger equation `iψ_t + αψ_xx + βψ|ψ|² + λψ = 0`.
//!
//! Each family is `ψ = (A1 h(η) + A0) e^{iΦ}` with `h` the Riccati ratio of
//! [`crate::subequation`], `η = x − ∫_0^t ω` and `Φ` the phase.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::subequation::Ansatz;
use crate::timefn::TimeFn;
use crate::verify::{
    convergence_order, rounding_floor, AxisSpec, Field2, LevelNorm, Normalization,
    ResidualAccumulator, ResidualReport, Axis,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NlsFamily {
    One,
    Two,
    Three,
}

impl NlsFamily {
    pub const ALL: [NlsFamily; 3] = [NlsFamily::One, NlsFamily::Two, NlsFamily::Three];

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            _ => Err(Error::Config(format!("NLS family must be 1, 2 or 3, got {id}"))),
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
        }
    }
}

/// The `±` branch shared by `A1` and `A0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

/// Which wave speed `ω` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpeedConvention {
    /// The closed-form speeds `−2iα(p−2q)`, `2iα(2p−q)`, `iα(p+q)`.
    #[default]
    Printed,
    /// The speed forced by the `h²` balance of the reduced ODE given the
    /// closed-form `θ`, `A0`, `A1`: `−3iα(p−q)`, `3iα(p−q)`, `0`. It differs
    /// from the printed one by `−iα(p+q)` in every family.
    Balanced,
}

/// How the phase factor enters `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    /// `e^{iθ(t)}` with `θ` used directly.
    #[default]
    Pointwise,
    /// `e^{i∫_0^t θ}`, which makes `iψ_t` produce the `−θψ` term of the ODE.
    Accumulated,
}

/// Cubic coefficient.
#[derive(Debug, Clone)]
pub enum Beta {
    Given(TimeFn),
    /// `β = α/c`; the amplitude then reads `p√(−2c)` exactly.
    AlphaOver(f64),
}

/// Coefficient bundle. `alpha` and `lambda` are the transformed (or
/// noise-substituted) coefficients at a fixed `z`.
#[derive(Debug, Clone)]
pub struct NlsParams {
    pub p: TimeFn<f64>,
    pub q: TimeFn<f64>,
    pub alpha: TimeFn,
    pub beta: Beta,
    pub lambda: TimeFn,
    pub speed: SpeedConvention,
    pub phase: PhaseMode,
}

impl NlsParams {
    pub fn new(
        p: impl Into<TimeFn<f64>>,
        q: impl Into<TimeFn<f64>>,
        alpha: impl Into<TimeFn>,
        beta: Beta,
        lambda: impl Into<TimeFn>,
    ) -> Self {
        Self {
            p: p.into(),
            q: q.into(),
            alpha: alpha.into(),
            beta,
            lambda: lambda.into(),
            speed: SpeedConvention::default(),
            phase: PhaseMode::default(),
        }
    }

    /// Constant real coefficients.
    pub fn constant(alpha: f64, beta: f64, lambda: f64, p: f64, q: f64) -> Self {
        Self::new(p, q, alpha, Beta::Given(beta.into()), lambda)
    }

    pub fn with_speed(mut self, speed: SpeedConvention) -> Self {
        self.speed = speed;
        self
    }

    pub fn with_phase(mut self, phase: PhaseMode) -> Self {
        self.phase = phase;
        self
    }

    /// Noise substitution `α → α + W`, `λ → λ + W`.
    pub fn with_noise(mut self, w: &TimeFn) -> Self {
        self.alpha = self.alpha.plus(w);
        self.lambda = self.lambda.plus(w);
        self
    }

    pub fn beta_at(&self, t: f64) -> Complex64 {
        match &self.beta {
            Beta::Given(b) => b.eval(t),
            Beta::AlphaOver(c) => self.alpha.eval(t) / *c,
        }
    }

    fn ansatz_at(&self, t: f64) -> Result<Ansatz> {
        Ansatz::new(self.p.eval(t), self.q.eval(t))
    }
}

/// `(θ, ω, A0, A1)` at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlsCoefficients {
    pub theta: Complex64,
    pub omega: Complex64,
    pub a0: Complex64,
    pub a1: Complex64,
}

fn omega_of(speed: SpeedConvention, family: NlsFamily, alpha: Complex64, p: f64, q: f64) -> Complex64 {
    match (speed, family) {
        (SpeedConvention::Printed, NlsFamily::One) => -2.0 * I * alpha * (p - 2.0 * q),
        (SpeedConvention::Printed, NlsFamily::Two) => 2.0 * I * alpha * (2.0 * p - q),
        (SpeedConvention::Printed, NlsFamily::Three) => I * alpha * (p + q),
        (SpeedConvention::Balanced, NlsFamily::One) => -3.0 * I * alpha * (p - q),
        (SpeedConvention::Balanced, NlsFamily::Two) => 3.0 * I * alpha * (p - q),
        (SpeedConvention::Balanced, NlsFamily::Three) => Complex64::new(0.0, 0.0),
    }
}

fn theta_of(family: NlsFamily, alpha: Complex64, lambda: Complex64, d: f64) -> Complex64 {
    match family {
        NlsFamily::One | NlsFamily::Two => lambda - 2.0 * alpha * d * d,
        NlsFamily::Three => lambda - 0.5 * alpha * d * d,
    }
}

pub fn nls_coefficients(
    params: &NlsParams,
    family: NlsFamily,
    branch: Branch,
    t: f64,
) -> Result<NlsCoefficients> {
    let (p, q) = (params.p.eval(t), params.q.eval(t));
    params.ansatz_at(t)?;
    let alpha = params.alpha.eval(t);
    let lambda = params.lambda.eval(t);
    let d = p - q;
    let sigma = branch.sign();
    // s = sqrt(−2α/β) and r = α/β
    let (s, r) = match &params.beta {
        Beta::AlphaOver(c) => {
            if *c == 0.0 {
                return Err(Error::Division("c = 0 in β = α/c".into()));
            }
            (Complex64::new(-2.0 * c, 0.0).sqrt(), Complex64::new(*c, 0.0))
        }
        Beta::Given(b) => {
            let beta = b.eval(t);
            if beta.norm() < 1e-300 {
                return Err(Error::Division(format!("β vanishes at t = {t}")));
            }
            ((-2.0 * alpha / beta).sqrt(), alpha / beta)
        }
    };
    if s.norm() == 0.0 {
        return Err(Error::Division(format!("α vanishes at t = {t}")));
    }
    let a1 = sigma * p * s;
    let a0 = match family {
        NlsFamily::One => Complex64::new(0.0, 0.0),
        NlsFamily::Two => sigma * 2.0 * r * d / s,
        NlsFamily::Three => sigma * r * d / s,
    };
    Ok(NlsCoefficients {
        theta: theta_of(family, alpha, lambda, d),
        omega: omega_of(params.speed, family, alpha, p, q),
        a0,
        a1,
    })
}

fn omega_fn(params: &NlsParams, family: NlsFamily) -> impl Fn(f64) -> Complex64 + '_ {
    move |s| omega_of(params.speed, family, params.alpha.eval(s), params.p.eval(s), params.q.eval(s))
}

fn theta_fn(params: &NlsParams, family: NlsFamily) -> impl Fn(f64) -> Complex64 + '_ {
    move |s| {
        let d = params.p.eval(s) - params.q.eval(s);
        theta_of(family, params.alpha.eval(s), params.lambda.eval(s), d)
    }
}

/// `η(x, t) = x − ∫_0^t ω(s) ds`.
pub fn nls_eta(params: &NlsParams, family: NlsFamily, x: f64, t: f64) -> Result<Complex64> {
    Ok(x - quad::integrate(omega_fn(params, family), 0.0, t)?)
}

/// Time-only data of a family: the η shift `∫ω`, the phase and the
/// coefficients.
#[derive(Debug, Clone, Copy)]
pub struct TimeSlice {
    pub t: f64,
    pub shift: Complex64,
    pub phase: Complex64,
    pub ansatz: Ansatz,
    pub coeffs: NlsCoefficients,
}

impl TimeSlice {
    pub fn eta(&self, x: f64) -> Complex64 {
        x - self.shift
    }

    pub fn envelope(&self, x: f64) -> Result<Complex64> {
        Ok(self.coeffs.a1 * self.ansatz.ratio(self.eta(x))? + self.coeffs.a0)
    }

    pub fn psi(&self, x: f64) -> Result<Complex64> {
        Ok(self.envelope(x)? * (I * self.phase).exp())
    }
}

/// Precomputes the time slices for every `t` (integrals accumulated
/// segment by segment along the sorted times).
pub fn nls_time_slices(
    params: &NlsParams,
    family: NlsFamily,
    branch: Branch,
    ts: &[f64],
) -> Result<Vec<TimeSlice>> {
    let shifts = quad::cumulative(omega_fn(params, family), ts)?;
    let phases = match params.phase {
        PhaseMode::Pointwise => ts.iter().map(|&t| theta_fn(params, family)(t)).collect(),
        PhaseMode::Accumulated => quad::cumulative(theta_fn(params, family), ts)?,
    };
    ts.iter()
        .enumerate()
        .map(|(i, &t)| {
            Ok(TimeSlice {
                t,
                shift: shifts[i],
                phase: phases[i],
                ansatz: params.ansatz_at(t)?,
                coeffs: nls_coefficients(params, family, branch, t)?,
            })
        })
        .collect()
}

pub fn nls_time_slice(params: &NlsParams, family: NlsFamily, branch: Branch, t: f64) -> Result<TimeSlice> {
    Ok(nls_time_slices(params, family, branch, &[t])?.remove(0))
}

/// `ψ(x, t)`.
pub fn nls_evaluate(params: &NlsParams, family: NlsFamily, branch: Branch, x: f64, t: f64) -> Result<Complex64> {
    nls_time_slice(params, family, branch, t)?.psi(x)
}

/// `ψ` on the tensor grid `ts × xs` (row per time). Poles give `None`.
pub fn nls_grid(
    params: &NlsParams,
    family: NlsFamily,
    branch: Branch,
    xs: &[f64],
    ts: &[f64],
) -> Result<Vec<Vec<Option<Complex64>>>> {
    let slices = nls_time_slices(params, family, branch, ts)?;
    Ok(slices
        .par_iter()
        .map(|sl| xs.iter().map(|&x| sl.psi(x).ok()).collect())
        .collect())
}

/// Reduced-ODE residual `−iωu' + αu'' + βu³ + (λ−θ)u` for given
/// coefficients, with `u = A1 h + A0` and exact η-derivatives.
pub fn ode_residual_for(
    ansatz: &Ansatz,
    alpha: Complex64,
    beta: Complex64,
    lambda: Complex64,
    coeffs: &NlsCoefficients,
    etas: &[Complex64],
    label: &str,
) -> ResidualReport {
    let axis = if etas.len() > 1 {
        AxisSpec::new("eta", etas[0].re, etas[etas.len() - 1].re, etas.len())
    } else {
        AxisSpec::new("eta", 0.0, 0.0, etas.len())
    };
    let mut acc = ResidualAccumulator::new(label, vec![axis], Normalization::TermScaled);
    for &eta in etas {
        let Ok(h) = ansatz.derivatives(eta) else {
            acc.exclude();
            continue;
        };
        let u = coeffs.a1 * h[0] + coeffs.a0;
        let u1 = coeffs.a1 * h[1];
        let u2 = coeffs.a1 * h[2];
        let terms = [
            -I * coeffs.omega * u1,
            alpha * u2,
            beta * u * u * u,
            (lambda - coeffs.theta) * u,
        ];
        let r: Complex64 = terms.iter().sum();
        let scale: f64 = terms.iter().map(|v| v.norm()).sum();
        if !r.norm().is_finite() {
            acc.exclude();
            continue;
        }
        acc.push(r.norm(), scale);
    }
    acc.finish()
}

/// Reduced-ODE residual with coefficients frozen at `t_frozen`.
pub fn nls_ode_residual(
    params: &NlsParams,
    family: NlsFamily,
    branch: Branch,
    t_frozen: f64,
    etas: &[Complex64],
) -> Result<ResidualReport> {
    let ans = params.ansatz_at(t_frozen)?;
    let coeffs = nls_coefficients(params, family, branch, t_frozen)?;
    let label = format!("nls-ode family {} {:?} {:?}", family.id(), branch, params.speed);
    Ok(ode_residual_for(
        &ans,
        params.alpha.eval(t_frozen),
        params.beta_at(t_frozen),
        params.lambda.eval(t_frozen),
        &coeffs,
        etas,
        &label,
    ))
}

/// Evenly spaced real η values.
pub fn eta_grid(min: f64, max: f64, points: usize) -> Vec<Complex64> {
    AxisSpec::new("eta", min, max, points)
        .values()
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect()
}

/// Treatment of the cubic term in the PDE residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubicTerm {
    /// `βψ|ψ|²` with `|ψ|² = ψ·conj(ψ)`.
    Conjugated,
    /// `βψU²` with `U = ψe^{−iΦ}` the envelope; equals `βψ³` when `Φ = 0`.
    Envelope,
}

impl CubicTerm {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Conjugated => "conjugated",
            Self::Envelope => "non-conjugated",
        }
    }
}

/// Rectangle for PDE residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

/// PDE residual reports for both cubic-term variants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeResiduals {
    pub conjugated: ResidualReport,
    pub envelope: ResidualReport,
}

fn axis_points(min: f64, max: f64, step: f64) -> Result<AxisSpec> {
    let n = (max - min) / step;
    if !(n >= 4.0) || (n - n.round()).abs() > 1e-6 {
        return Err(Error::Domain(format!(
            "step {step} must divide [{min}, {max}] into at least four cells"
        )));
    }
    Ok(AxisSpec::new("", min, max, n.round() as usize + 1))
}

/// Central-difference residual of `iψ_t + αψ_xx + β·cubic + λψ` on `rect`
/// with steps `(hx, ht)`; coefficients are read at each grid time.
pub fn nls_pde_residual(
    params: &NlsParams,
    family: NlsFamily,
    branch: Branch,
    rect: Rect,
    hx: f64,
    ht: f64,
) -> Result<PdeResiduals> {
    let mut xa = axis_points(rect.x_min, rect.x_max, hx)?;
    let mut ta = axis_points(rect.t_min, rect.t_max, ht)?;
    xa.name = "x".into();
    ta.name = "t".into();
    let xs = xa.values();
    let ts = ta.values();
    let slices = nls_time_slices(params, family, branch, &ts)?;
    let rows: Vec<Vec<Complex64>> = slices
        .par_iter()
        .map(|sl| xs.iter().map(|&x| sl.psi(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let psi = Field2::from_fn(ts.len(), xs.len(), |r, c| rows[r][c]);
    let psi_t = psi.derivative(Axis::T, ht, 1, 2)?;
    let psi_xx = psi.derivative(Axis::X, hx, 2, 2)?;
    let label = format!("nls-pde family {} {:?}", family.id(), branch);
    let grid = vec![xa, ta];
    let mut conj = ResidualAccumulator::new(&label, grid.clone(), Normalization::Absolute)
        .tag(CubicTerm::Conjugated.tag());
    let mut env = ResidualAccumulator::new(&label, grid, Normalization::Absolute)
        .tag(CubicTerm::Envelope.tag());
    for r in 1..ts.len() - 1 {
        let sl = &slices[r];
        let alpha = params.alpha.eval(sl.t);
        let beta = params.beta_at(sl.t);
        let lambda = params.lambda.eval(sl.t);
        let unphase = (-I * sl.phase).exp();
        for c in 1..xs.len() - 1 {
            let v = psi.get(r, c);
            let linear = I * psi_t.get(r, c) + alpha * psi_xx.get(r, c) + lambda * v;
            let rc = linear + beta * v * v * v.conj();
            let u = v * unphase;
            let re = linear + beta * v * u * u;
            conj.push(rc.norm(), 0.0);
            env.push(re.norm(), 0.0);
        }
    }
    Ok(PdeResiduals {
        conjugated: conj.finish(),
        envelope: env.finish(),
    })
}

/// Runs [`nls_pde_residual`] at `(hx, ht)` and `halvings` successive
/// halvings, attaching level norms and the fitted order (sup norm) to each
/// variant.
pub fn nls_pde_convergence(
    params: &NlsParams,
    family: NlsFamily,
    branch: Branch,
    rect: Rect,
    hx: f64,
    ht: f64,
    halvings: usize,
) -> Result<PdeResiduals> {
    let mut runs = Vec::with_capacity(halvings + 1);
    for level in 0..=halvings {
        let f = 0.5f64.powi(level as i32);
        runs.push((hx * f, nls_pde_residual(params, family, branch, rect, hx * f, ht * f)?));
    }
    let finish = |pick: &dyn Fn(&PdeResiduals) -> &ResidualReport| -> Result<ResidualReport> {
        let levels: Vec<LevelNorm> = runs
            .iter()
            .map(|(h, r)| LevelNorm {
                step: *h,
                sup_norm: pick(r).sup_norm,
                l2_norm: pick(r).l2_norm,
            })
            .collect();
        let pairs: Vec<(f64, f64)> = levels.iter().map(|l| (l.step, l.sup_norm)).collect();
        let finest = pick(&runs[runs.len() - 1].1).clone();
        // the reference rectangles keep |ψ| of order one
        let est = convergence_order(&pairs, rounding_floor(1.0))?;
        Ok(ResidualReport {
            convergence_order: Some(est.order),
            saturated: est.saturated,
            levels,
            ..finest
        })
    };
    Ok(PdeResiduals {
        conjugated: finish(&|r: &PdeResiduals| &r.conjugated)?,
        envelope: finish(&|r: &PdeResiduals| &r.envelope)?,
    })
}
