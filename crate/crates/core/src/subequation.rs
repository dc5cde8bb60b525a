//! The Riccati ansatz `h = F/G` and its fractional variant.
//!
//! The ratio `h(η) = (p−q)/(p − q e^{−(p−q)η})` obeys `h' = (p−q)h − p h²`,
//! so every derivative of a polynomial in `h` is again a polynomial in `h`.

use num_complex::Complex64;

use crate::caputo::FractionalOrder;
use crate::error::{Error, Result};
use crate::special::frac_scale;
use crate::timefn::TimeFn;

/// `|p − q| ≤ DEGENERACY_TOL (|p| + |q|)` is rejected.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// `|p − q e^{−(p−q)η}| < POLE_TOL |p|` is reported as a pole.
pub const POLE_TOL: f64 = 1e-12;

/// Ansatz with coefficients frozen at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ansatz {
    p: Complex64,
    q: Complex64,
}

impl Ansatz {
    pub fn new(p: impl Into<Complex64>, q: impl Into<Complex64>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        let gap = (p - q).norm();
        if !(gap > DEGENERACY_TOL * (p.norm() + q.norm())) {
            return Err(Error::DegenerateAnsatz { gap });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> Complex64 {
        self.p
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    /// `p − q`.
    pub fn gap(&self) -> Complex64 {
        self.p - self.q
    }

    /// `h(η) = (p−q)/(p − q e^{−(p−q)η})`.
    pub fn ratio(&self, eta: Complex64) -> Result<Complex64> {
        let d = self.gap();
        let w = -d * eta;
        let scale = POLE_TOL * self.p.norm();
        if w.re <= 0.0 {
            let den = self.p - self.q * w.exp();
            if den.norm() < scale {
                return Err(Error::PoleEncountered { eta });
            }
            Ok(d / den)
        } else {
            // multiply through by e^{−w} so nothing overflows
            let e = (-w).exp();
            let den = self.p * e - self.q;
            if den.norm() < scale * e.norm() {
                return Err(Error::PoleEncountered { eta });
            }
            Ok(d * e / den)
        }
    }

    /// `[h, h', h'', h''']` from the Riccati law.
    pub fn derivatives(&self, eta: Complex64) -> Result<[Complex64; 4]> {
        let h = self.ratio(eta)?;
        Ok(self.derivatives_from(h))
    }

    /// Derivatives given an already evaluated `h`.
    pub fn derivatives_from(&self, h: Complex64) -> [Complex64; 4] {
        let d = self.gap();
        let p = self.p;
        let h1 = d * h - p * h * h;
        let h2 = d * h1 - 2.0 * p * h * h1;
        let h3 = d * h2 - 2.0 * p * (h1 * h1 + h * h2);
        [h, h1, h2, h3]
    }
}

/// Time-dependent ansatz coefficients.
#[derive(Debug, Clone)]
pub struct AnsatzParams {
    pub p: TimeFn,
    pub q: TimeFn,
}

impl AnsatzParams {
    pub fn new(p: impl Into<TimeFn>, q: impl Into<TimeFn>) -> Self {
        Self {
            p: p.into(),
            q: q.into(),
        }
    }

    pub fn at(&self, t: f64) -> Result<Ansatz> {
        Ansatz::new(self.p.eval(t), self.q.eval(t))
    }
}

pub fn fg_ratio(params: &AnsatzParams, t: f64, eta: Complex64) -> Result<Complex64> {
    params.at(t)?.ratio(eta)
}

/// The `order`-th η-derivative of [`fg_ratio`], `order ∈ {1, 2, 3}`.
pub fn fg_ratio_derivatives(
    params: &AnsatzParams,
    t: f64,
    eta: Complex64,
    order: usize,
) -> Result<Complex64> {
    if !(1..=3).contains(&order) {
        return Err(Error::Domain(format!("derivative order must be 1, 2 or 3, got {order}")));
    }
    Ok(params.at(t)?.derivatives(eta)?[order])
}

/// Coefficients of the fractional ansatz.
#[derive(Debug, Clone)]
pub struct FracAnsatzParams {
    pub lambda: TimeFn<f64>,
    pub mu: TimeFn<f64>,
    pub order: FractionalOrder,
}

/// `(λ−μ)/(λ − μ e^{−(λ−μ)η})` with `η = ξ^α/Γ(1+α)`.
pub fn frac_fg_ratio(params: &FracAnsatzParams, t: f64, xi: f64) -> Result<f64> {
    if xi < 0.0 {
        return Err(Error::Domain(format!("fractional ansatz needs xi >= 0, got {xi}")));
    }
    let eta = frac_scale(params.order.value(), xi);
    let ans = Ansatz::new(params.lambda.eval(t), params.mu.eval(t))?;
    Ok(ans.ratio(eta.into())?.re)
}

/// Degree `m` balancing `u^{(r)}` against `u^d`: `m + r = d m`.
pub fn balance_pole_order(highest_derivative_order: u32, nonlinearity_degree: u32) -> Result<u32> {
    let (r, d) = (highest_derivative_order, nonlinearity_degree);
    let err = Error::NoPolynomialBalance { order: r, degree: d };
    if d < 2 || r < 1 {
        return Err(err);
    }
    if r % (d - 1) != 0 {
        return Err(err);
    }
    Ok(r / (d - 1))
}
