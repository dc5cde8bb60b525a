//! Verification suites at pinned parameters.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wickwave::caputo::{caputo_l1, caputo_power, FractionalOrder};
use wickwave::nls::{
    eta_grid, nls_ode_residual, nls_pde_convergence, Branch, NlsFamily, NlsParams, PhaseMode,
    Rect, SpeedConvention,
};
use wickwave::rlw::{bbm_convergence, rlw_ode_residual, Alpha1Variant, RlwFamily, RlwParams};
use wickwave::sampled::SampledFunction;
use wickwave::verify::{convergence_order, rounding_floor, AxisSpec, ResidualReport};
use wickwave::wick::{MultiIndex, Truncation, WickSeries};

use crate::error::CliError;

pub const SUITES: [&str; 6] = ["nls-ode", "nls-pde", "rlw-ode", "rlw-alpha1", "wick", "caputo"];

/// Seed for the random parameter draws of every suite.
pub const DRAW_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub requirement: String,
    pub passed: bool,
    /// Non-gating checks are reported but do not affect the exit code.
    pub gating: bool,
}

impl Check {
    fn gate(name: impl Into<String>, value: f64, requirement: impl Into<String>, passed: bool) -> Self {
        Self { name: name.into(), value, requirement: requirement.into(), passed, gating: true }
    }

    fn info(name: impl Into<String>, value: f64, requirement: impl Into<String>, passed: bool) -> Self {
        Self { name: name.into(), value, requirement: requirement.into(), passed, gating: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub reports: Vec<ResidualReport>,
}

impl SuiteOutcome {
    fn new(suite: &str, checks: Vec<Check>, reports: Vec<ResidualReport>) -> Self {
        let passed = checks.iter().filter(|c| c.gating).all(|c| c.passed);
        Self { suite: suite.to_string(), passed, checks, reports }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite outcome serializes")
    }
}

pub fn run_suite(name: &str) -> Result<SuiteOutcome, CliError> {
    match name {
        "nls-ode" => nls_ode(),
        "nls-pde" => nls_pde(),
        "rlw-ode" => rlw_ode(),
        "rlw-alpha1" => rlw_alpha1(),
        "wick" => Ok(wick()),
        "caputo" => caputo(),
        other => Err(CliError::Config(format!(
            "unknown suite '{other}' (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

/// The reference constants and two seeded draws.
pub fn nls_draws() -> Vec<NlsParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(DRAW_SEED);
    let mut out = vec![NlsParams::constant(1.0, -2.0, 0.0, 2.0, 1.0)];
    while out.len() < 3 {
        let alpha = rng.random_range(0.5..2.0);
        let beta = rng.random_range(-2.0..-0.5);
        let lambda = rng.random_range(-1.0..1.0);
        let p: f64 = rng.random_range(-2.0..2.0);
        let q: f64 = rng.random_range(-2.0..2.0);
        if (p - q).abs() < 0.5 || p.abs() < 0.3 {
            continue;
        }
        out.push(NlsParams::constant(alpha, beta, lambda, p, q));
    }
    out
}

/// Three seeded constant draws `(k, μ, p, q, r, s)`.
pub fn rlw_draws() -> Vec<(f64, f64, f64, f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(DRAW_SEED + 1);
    (0..3)
        .map(|_| {
            (
                rng.random_range(0.3..1.5),
                rng.random_range(-2.0..-0.3),
                rng.random_range(-1.0..1.0),
                rng.random_range(0.5..3.0),
                rng.random_range(-0.5..0.5),
                rng.random_range(0.5..2.0),
            )
        })
        .collect()
}

fn nls_ode() -> Result<SuiteOutcome, CliError> {
    let etas = eta_grid(-5.0, 5.0, 1001);
    let mut checks = Vec::new();
    let mut reports = Vec::new();
    for (d, params) in nls_draws().into_iter().enumerate() {
        for speed in [SpeedConvention::Balanced, SpeedConvention::Printed] {
            let params = params.clone().with_speed(speed);
            for f in NlsFamily::ALL {
                for br in Branch::BOTH {
                    let r = nls_ode_residual(&params, f, br, 0.0, &etas)?;
                    let name = format!("draw {d} family {} {:?} {:?}", f.id(), br, speed);
                    let ok = r.sup_norm < 1e-10;
                    checks.push(match speed {
                        SpeedConvention::Balanced => Check::gate(name, r.sup_norm, "< 1e-10", ok),
                        SpeedConvention::Printed => Check::info(name, r.sup_norm, "< 1e-10", ok),
                    });
                    reports.push(r);
                }
            }
        }
    }
    Ok(SuiteOutcome::new("nls-ode", checks, reports))
}

/// Reference PDE problem: `α = 1, β = −2, p = 2, q = 1, λ = 2` so that
/// `θ = 0`, balanced speed, on a rectangle clear of the pole lines.
pub fn nls_pde_reference() -> (NlsParams, Rect, f64, f64) {
    let params = NlsParams::constant(1.0, -2.0, 2.0, 2.0, 1.0).with_speed(SpeedConvention::Balanced);
    let rect = Rect { x_min: -3.0, x_max: 3.0, t_min: 0.5, t_max: 1.5 };
    (params, rect, 0.025, 0.0125)
}

fn nls_pde() -> Result<SuiteOutcome, CliError> {
    let (params, rect, hx, ht) = nls_pde_reference();
    let r = nls_pde_convergence(&params, NlsFamily::One, Branch::Plus, rect, hx, ht, 2)?;
    let env = r.envelope.convergence_order.unwrap_or(f64::NAN);
    let conj = r.conjugated.convergence_order.unwrap_or(f64::NAN);
    let mut checks = vec![
        Check::gate("family 1 non-conjugated order", env, "2.0 ± 0.2", (env - 2.0).abs() <= 0.2),
        Check::info("family 1 conjugated order", conj, "2.0 ± 0.2", (conj - 2.0).abs() <= 0.2),
    ];
    let mut reports = vec![r.envelope, r.conjugated];
    // λ = 0 leaves θ = −2 ≠ 0; compare the two phase readings
    for phase in [PhaseMode::Pointwise, PhaseMode::Accumulated] {
        let p = NlsParams::constant(1.0, -2.0, 0.0, 2.0, 1.0)
            .with_speed(SpeedConvention::Balanced)
            .with_phase(phase);
        let r = nls_pde_convergence(&p, NlsFamily::One, Branch::Plus, rect, hx, ht, 2)?;
        let o = r.envelope.convergence_order.unwrap_or(f64::NAN);
        checks.push(Check::info(
            format!("lambda=0 {phase:?} phase non-conjugated order"),
            o,
            "2.0 ± 0.2",
            (o - 2.0).abs() <= 0.2,
        ));
        let mut rep = r.envelope;
        rep.variant_tags.push(format!("{phase:?}").to_lowercase());
        reports.push(rep);
    }
    Ok(SuiteOutcome::new("nls-pde", checks, reports))
}

const RLW_FAMILIES: [RlwFamily; 6] = [
    RlwFamily::F1,
    RlwFamily::F2,
    RlwFamily::F3,
    RlwFamily::F4,
    RlwFamily::F5,
    RlwFamily::F6,
];

fn rlw_ode() -> Result<SuiteOutcome, CliError> {
    let zetas = AxisSpec::new("zeta", -5.0, 5.0, 1001).values();
    let mut checks = Vec::new();
    let mut reports = Vec::new();
    for (d, (k, mu, p, q, r, s)) in rlw_draws().into_iter().enumerate() {
        for f in RLW_FAMILIES {
            let params = RlwParams::constant(f, k, FractionalOrder::ONE, mu, p, q, r, s);
            let rep = rlw_ode_residual(&params, 0.0, &zetas)?;
            checks.push(Check::gate(
                format!("draw {d} family {}", f.id()),
                rep.sup_norm,
                "< 1e-10",
                rep.sup_norm < 1e-10,
            ));
            reports.push(rep);
        }
    }
    Ok(SuiteOutcome::new("rlw-ode", checks, reports))
}

fn rlw_alpha1() -> Result<SuiteOutcome, CliError> {
    let mut checks = Vec::new();
    let mut reports = Vec::new();
    for v in Alpha1Variant::ALL {
        let rep = bbm_convergence(v, 0.05, -3.0, (0.0, 2.0, 0.0, 2.0), 0.05, 2)?;
        let o = rep.convergence_order.unwrap_or(f64::NAN);
        checks.push(Check::gate(format!("v{} order", v.id()), o, "2.0 ± 0.2", (o - 2.0).abs() <= 0.2));
        reports.push(rep);
    }
    Ok(SuiteOutcome::new("rlw-alpha1", checks, reports))
}

fn indices_up_to(k: usize, dmax: u32) -> Vec<MultiIndex> {
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if cur.len() == k {
            out.push(MultiIndex::new(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(k, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, dmax, &mut Vec::new(), &mut out);
    out
}

fn random_series(rng: &mut ChaCha8Rng, trunc: Truncation, degree: u32) -> WickSeries {
    let mut terms = Vec::new();
    for idx in indices_up_to(trunc.k, degree) {
        if rng.random_bool(0.5) {
            terms.push((idx, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
        }
    }
    WickSeries::from_terms(trunc, terms).expect("indices within truncation")
}

/// Largest normalized homomorphism defect over `pairs` random pairs.
pub fn homomorphism_defect(pairs: usize, seed: u64) -> f64 {
    let trunc = Truncation::new(3, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let df = rng.random_range(0..=6u32);
        let dg = rng.random_range(0..=6 - df);
        let f = random_series(&mut rng, trunc, df);
        let g = random_series(&mut rng, trunc, dg);
        let fg = f.wick_product(&g).expect("same truncation");
        for _ in 0..10 {
            let z: Vec<Complex64> = (0..3)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let hf = f.hermite_transform(&z).expect("length");
            let hg = g.hermite_transform(&z).expect("length");
            let hfg = fg.hermite_transform(&z).expect("length");
            worst = worst.max((hfg - hf * hg).norm() / (1.0 + hf.norm() * hg.norm()));
        }
    }
    worst
}

fn wick() -> SuiteOutcome {
    let defect = homomorphism_defect(200, DRAW_SEED);
    let trunc = Truncation::new(3, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(DRAW_SEED + 2);
    let mut unit_ok = true;
    let mut assoc: f64 = 0.0;
    for _ in 0..50 {
        let f = random_series(&mut rng, trunc, 2);
        let g = random_series(&mut rng, trunc, 2);
        let h = random_series(&mut rng, trunc, 2);
        unit_ok &= WickSeries::unit(trunc).wick_product(&f).expect("same truncation") == f;
        let l = f.wick_product(&g).and_then(|fg| fg.wick_product(&h)).expect("same truncation");
        let r = g.wick_product(&h).and_then(|gh| f.wick_product(&gh)).expect("same truncation");
        assoc = assoc.max(l.sub(&r).expect("same truncation").terms().map(|(_, c)| c.norm()).fold(0.0, f64::max));
    }
    let checks = vec![
        Check::gate("homomorphism defect (200 pairs, 10 z each)", defect, "< 1e-12", defect < 1e-12),
        Check::gate("unit law", if unit_ok { 0.0 } else { 1.0 }, "exact", unit_ok),
        Check::gate("associativity defect", assoc, "< 1e-12", assoc < 1e-12),
    ];
    SuiteOutcome::new("wick", checks, Vec::new())
}

/// `(error at h = 1e-3, fitted order, saturated)` of the L1 scheme for `t^r` at `t = 1`.
pub fn l1_power_check(r: f64, alpha: f64) -> Result<(f64, f64, bool), CliError> {
    let a = FractionalOrder::new(alpha)?;
    let exact = caputo_power(r, a, 1.0)?;
    let err = |n: usize| -> Result<f64, CliError> {
        let h = 1.0 / n as f64;
        let f = SampledFunction::from_fn(h, n, |t| t.powf(r))?;
        Ok((caputo_l1(&f, a, n)? - exact).abs())
    };
    let e1000 = err(1000)?;
    let mut samples = Vec::new();
    for n in [125, 250, 500, 1000] {
        samples.push((1.0 / n as f64, err(n)?));
    }
    let est = convergence_order(&samples, rounding_floor(exact.abs()))?;
    Ok((e1000, est.order, est.saturated))
}

fn caputo() -> Result<SuiteOutcome, CliError> {
    let mut checks = Vec::new();
    for r in [1.0, 2.0, 3.0] {
        for alpha in [0.25, 0.5, 0.75] {
            let (e, order, saturated) = l1_power_check(r, alpha)?;
            checks.push(Check::gate(format!("r={r} alpha={alpha} error at h=1e-3"), e, "< 1e-3", e < 1e-3));
            let target = 2.0 - alpha;
            if saturated && e < rounding_floor(1.0) * 10.0 {
                checks.push(Check::gate(
                    format!("r={r} alpha={alpha} order (pass at floor)"),
                    order,
                    format!("{target} ± 0.25 or at rounding floor"),
                    true,
                ));
            } else {
                checks.push(Check::gate(
                    format!("r={r} alpha={alpha} order"),
                    order,
                    format!("{target} ± 0.25"),
                    (order - target).abs() <= 0.25,
                ));
            }
        }
    }
    Ok(SuiteOutcome::new("caputo", checks, Vec::new()))
}
