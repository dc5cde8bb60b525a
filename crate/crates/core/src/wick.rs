//! Truncated Wick algebra over multi-indices and the Hermite transform.
//!
//! A [`WickSeries`] stores `F = Σ a_α H_α` by its coefficients `a_α` only.
//! The Wick product adds indices, so under the Hermite transform
//! `F ↦ Σ a_α z^α` it becomes the ordinary product of power series.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quad;

/// Coefficients with modulus at or below this are pruned.
pub const PRUNE_TOL: f64 = 1e-14;

/// Exponent vector with trailing zeros stripped.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: impl Into<Vec<u32>>) -> Self {
        let mut v = exponents.into();
        while v.last() == Some(&0) {
            v.pop();
        }
        Self(v)
    }

    /// The empty index ∅.
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    /// `e_k` for a 1-based variable number `k`.
    pub fn unit(k: usize) -> Self {
        assert!(k >= 1, "variables are numbered from 1");
        let mut v = vec![0; k];
        v[k - 1] = 1;
        Self(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of variables touched (position of the last nonzero exponent).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut v = long.clone();
        for (a, b) in v.iter_mut().zip(short) {
            *a += b;
        }
        MultiIndex(v)
    }

    /// `z^α = Π z_i^{α_i}` with `z^0 = 1`.
    pub fn monomial(&self, z: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(z)
            .fold(Complex64::new(1.0, 0.0), |acc, (&e, &zi)| acc * zi.powu(e))
    }
}

/// Truncation bounds: `k` variables and total degree at most `dmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub k: usize,
    pub dmax: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { k: 4, dmax: 6 }
    }
}

impl Truncation {
    pub fn new(k: usize, dmax: u32) -> Self {
        Self { k, dmax }
    }

    pub fn admits(&self, idx: &MultiIndex) -> bool {
        idx.len() <= self.k && idx.degree() <= self.dmax
    }
}

/// Truncated formal series `Σ a_α H_α` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct WickSeries {
    trunc: Truncation,
    terms: BTreeMap<MultiIndex, Complex64>,
    discarded: f64,
}

impl WickSeries {
    pub fn zero(trunc: Truncation) -> Self {
        Self {
            trunc,
            terms: BTreeMap::new(),
            discarded: 0.0,
        }
    }

    pub fn constant(trunc: Truncation, c: Complex64) -> Self {
        let mut s = Self::zero(trunc);
        s.accumulate(MultiIndex::zero(), c);
        s.prune();
        s
    }

    pub fn unit(trunc: Truncation) -> Self {
        Self::constant(trunc, Complex64::new(1.0, 0.0))
    }

    /// `c · e_k` for 1-based `k`.
    pub fn variable(trunc: Truncation, k: usize, c: Complex64) -> Result<Self> {
        Self::from_terms(trunc, [(MultiIndex::unit(k), c)])
    }

    /// Builds a series from `(index, coefficient)` pairs. Repeated indices add.
    /// Indices using more than `k` variables are rejected; indices above
    /// `dmax` are dropped and recorded as truncation loss.
    pub fn from_terms(
        trunc: Truncation,
        terms: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self> {
        let mut s = Self::zero(trunc);
        for (idx, c) in terms {
            if idx.len() > trunc.k {
                return Err(Error::Config(format!(
                    "index {:?} uses {} variables, truncation allows {}",
                    idx.exponents(),
                    idx.len(),
                    trunc.k
                )));
            }
            if idx.degree() > trunc.dmax {
                s.discarded += c.norm();
            } else {
                s.accumulate(idx, c);
            }
        }
        s.prune();
        Ok(s)
    }

    fn accumulate(&mut self, idx: MultiIndex, c: Complex64) {
        *self.terms.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > PRUNE_TOL);
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Complex64 {
        self.terms.get(idx).copied().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&MultiIndex::zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree among stored terms (0 for the zero series).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Accumulated modulus of coefficients dropped by truncation.
    pub fn discarded_mass(&self) -> f64 {
        self.discarded
    }

    pub fn is_lossy(&self) -> bool {
        self.discarded > 0.0
    }

    fn check_same(&self, other: &WickSeries) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::Config(format!(
                "mismatched truncations {:?} and {:?}",
                self.trunc, other.trunc
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &WickSeries) -> Result<WickSeries> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.accumulate(idx.clone(), *c);
        }
        out.discarded += other.discarded;
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> WickSeries {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &WickSeries) -> Result<WickSeries> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `F ◊ G`: coefficient of `γ` is `Σ_{α+β=γ} a_α b_β`.
    pub fn wick_product(&self, other: &WickSeries) -> Result<WickSeries> {
        self.check_same(other)?;
        let mut out = WickSeries::zero(self.trunc);
        out.discarded = self.discarded + other.discarded;
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let g = a.add(b);
                let v = ca * cb;
                if g.degree() > self.trunc.dmax {
                    out.discarded += v.norm();
                } else {
                    out.accumulate(g, v);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// `F^{◊n}` with `F^{◊0}` the unit series.
    pub fn wick_pow(&self, n: u32) -> WickSeries {
        let mut acc = WickSeries::unit(self.trunc);
        for _ in 0..n {
            acc = acc
                .wick_product(self)
                .expect("a series shares its own truncation");
        }
        acc
    }

    /// `exp^◊(F) = e^{a_∅} Σ_{n=0}^{D_max} G^{◊n}/n!` with `G = F − a_∅`.
    pub fn wick_exp(&self) -> WickSeries {
        let a0 = self.constant_term();
        let mut g = self.clone();
        g.terms.remove(&MultiIndex::zero());
        let mut sum = WickSeries::unit(self.trunc);
        let mut power = WickSeries::unit(self.trunc);
        let mut factorial = 1.0;
        for n in 1..=self.trunc.dmax {
            power = power.wick_product(&g).expect("same truncation");
            factorial *= n as f64;
            sum = sum
                .add(&power.scale(Complex64::new(1.0 / factorial, 0.0)))
                .expect("same truncation");
        }
        // G^{◊n} for n > dmax has no admissible terms; its mass is not lost
        // beyond what the products above already recorded.
        sum.scale(a0.exp())
    }

    /// `Σ_α a_α z^α`.
    pub fn hermite_transform(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() < self.trunc.k {
            return Err(Error::Dimension {
                needed: self.trunc.k,
                got: z.len(),
            });
        }
        Ok(self.terms.iter().map(|(idx, c)| c * idx.monomial(z)).sum())
    }
}

/// Orthonormal Hermite functions `ξ_1, …, ξ_n` at `s`
/// (`ξ_k` built on the physicists' polynomial `H_{k−1}`).
pub fn hermite_functions(n: usize, s: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let psi0 = PI.powf(-0.25) * (-0.5 * s * s).exp();
    out.push(psi0);
    if n == 1 {
        return out;
    }
    out.push(2f64.sqrt() * s * psi0);
    for m in 1..n - 1 {
        // ψ_{m+1} = sqrt(2/(m+1)) s ψ_m − sqrt(m/(m+1)) ψ_{m−1}
        let mf = m as f64;
        let next = (2.0 / (mf + 1.0)).sqrt() * s * out[m] - (mf / (mf + 1.0)).sqrt() * out[m - 1];
        out.push(next);
    }
    out
}

/// `ξ_k(s)` for 1-based `k`.
pub fn hermite_function(k: usize, s: f64) -> f64 {
    assert!(k >= 1, "basis functions are numbered from 1");
    hermite_functions(k, s)[k - 1]
}

/// `∫_0^t ξ_k(s) ds` for `k = 1..=n`.
pub fn basis_integrals(t: f64, n: usize) -> Result<Vec<f64>> {
    if t < 0.0 {
        return Err(Error::Domain(format!("white-noise series needs t >= 0, got {t}")));
    }
    let opts = quad::QuadOptions {
        abs_tol: 1e-14,
        ..Default::default()
    };
    (1..=n)
        .map(|k| {
            quad::integrate_with(|s| hermite_function(k, s).into(), 0.0, t, &opts).map(|v| v.re)
        })
        .collect()
}

/// Degree-one series `Σ_k (∫_0^t ξ_k) e_k`, the transform-side white noise.
pub fn white_noise_series(t: f64, trunc: Truncation) -> Result<WickSeries> {
    if trunc.k == 0 {
        return Err(Error::Config("white-noise series needs K >= 1".into()));
    }
    let coeffs = basis_integrals(t, trunc.k)?;
    WickSeries::from_terms(
        trunc,
        coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| (MultiIndex::unit(i + 1), Complex64::new(c, 0.0))),
    )
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    idx: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    trunc: Truncation,
    terms: Vec<TermRepr>,
}

impl Serialize for WickSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(idx, c)| TermRepr {
                    idx: idx.exponents().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WickSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        WickSeries::from_terms(
            repr.trunc,
            repr.terms
                .into_iter()
                .map(|t| (MultiIndex::new(t.idx), Complex64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}
