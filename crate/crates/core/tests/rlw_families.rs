use proptest::prelude::*;
use wickwave::caputo::FractionalOrder;
use wickwave::rlw::{
    bbm_convergence, bbm_convergence_of, ode_residual_for_form, rlw_alpha1_special, rlw_evaluate,
    rlw_form, rlw_grid, rlw_lambda, rlw_ode_residual, rlw_wave_speed, rlw_zeta, Alpha1Variant,
    BracketForm, NoiseClock, RlwCombos, RlwExample, RlwFamily, RlwParams, XiReading,
};
use wickwave::special::gamma;
use wickwave::verify::AxisSpec;
use wickwave::TimeFn;

const ALL: [RlwFamily; 6] = [
    RlwFamily::F1,
    RlwFamily::F2,
    RlwFamily::F3,
    RlwFamily::F4,
    RlwFamily::F5,
    RlwFamily::F6,
];

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

fn zetas() -> Vec<f64> {
    AxisSpec::new("zeta", -5.0, 5.0, 1001).values()
}

fn figure_example(family: RlwFamily, alpha: f64, noise: TimeFn<f64>) -> RlwExample {
    RlwExample {
        family,
        k: 0.05,
        order: order(alpha),
        mu: TimeFn::constant(-3.0),
        f1: TimeFn::constant(-0.2),
        f2: TimeFn::constant(10.0),
        f4: TimeFn::new(|t| 0.01 * (0.5 * t).cos()),
        c1: 1.0,
        c2: 1.0,
        c4: 1.0,
        noise,
        xi: XiReading::OwnSpeed,
        clock: NoiseClock::Outer,
    }
}

#[test]
fn lambda_relations() {
    let p = |f, r, s, mu| RlwParams::constant(f, 1.0, FractionalOrder::ONE, mu, 0.0, 1.0, r, s);
    assert_eq!(rlw_lambda(&p(RlwFamily::F1, 0.0, 1.0, -3.0), 0.0).unwrap(), 3.0);
    assert_eq!(rlw_lambda(&p(RlwFamily::F2, 0.0, 1.0, -3.0), 0.0).unwrap(), -18.0);
    assert!((rlw_lambda(&p(RlwFamily::F3, 1.0, 1.0, 0.5), 0.0).unwrap() - 0.5).abs() < 1e-15);
    assert!(matches!(
        rlw_lambda(&p(RlwFamily::F1, 0.0, 0.0, 1.0), 0.0),
        Err(wickwave::Error::Division(_))
    ));
}

#[test]
fn constant_speeds() {
    let p = |f| RlwParams::constant(f, 1.0, FractionalOrder::ONE, 1.0, 0.0, 1.0, 0.0, 1.0);
    assert!((rlw_wave_speed(&p(RlwFamily::F1), 0.7).unwrap() + 4.0).abs() < 1e-15);
    assert!((rlw_wave_speed(&p(RlwFamily::F2), 0.7).unwrap() - 1.5).abs() < 1e-15);
}

#[test]
fn time_varying_speed_matches_reference() {
    let params = RlwParams {
        k: 0.8,
        order: order(0.5),
        mu: TimeFn::new(|t| -1.0 + 0.1 * t),
        p: TimeFn::new(|t| 0.7 * t.cos()),
        q: TimeFn::constant(1.0),
        r: TimeFn::constant(0.3),
        s: TimeFn::new(|t| 1.0 + 0.5 * t.sin()),
        family: RlwFamily::F1,
    };
    let tau_alpha = (0.25 * gamma(1.5)).powi(2);
    assert!((tau_alpha - 0.049_087_385_212_340_519_35).abs() < 1e-16);
    let got = rlw_wave_speed(&params, 0.25).unwrap();
    assert!((got + 3.976_896_712_746_546_863).abs() < 1e-13, "{got}");
}

#[test]
fn combos_identity_and_values() {
    let c = RlwCombos::new(0.4, 2.0, -0.5);
    assert_eq!(c.b1, 1.4);
    assert_eq!(c.c1, 6.4);
    assert_eq!(c.c2, 5.4);
    assert_eq!(c.d1, -3.6);
    assert_eq!(c.d2, c.b2);
}

#[test]
fn family_two_decays() {
    let params = RlwParams::constant(RlwFamily::F2, 1.0, FractionalOrder::ONE, -0.5, 0.3, 1.0, 0.0, 1.0);
    let form = rlw_form(&params, 0.0).unwrap();
    // rate −5μ > 0: the exponential grows towards ζ → −∞
    assert!(form.rate > 0.0);
    assert!(form.value(-60.0).unwrap().abs() < 1e-20);
    let c1 = RlwCombos::new(0.0, 1.0, -0.5).c1;
    assert!((form.value(60.0).unwrap() - form.c2 / (c1 * c1)).abs() < 1e-15);
}

// 50-digit values of the first noise-substituted form at (x, t) = (1, 1)
const FIG3: [(f64, f64); 3] = [
    (0.25, 0.004_562_075_967_725_994_608),
    (0.5, 0.004_554_084_415_234_892_025),
    (1.0, 0.004_592_863_798_383_290_300),
];
const FIG4: [(f64, f64); 3] = [
    (0.25, 0.251_391_317_872_762_215_3),
    (0.5, 0.251_383_644_342_440_598_1),
    (1.0, 0.251_423_711_531_169_379_6),
];

#[test]
fn figure_three_and_four_values() {
    for (a, want) in FIG3 {
        let ex = figure_example(RlwFamily::F1, a, TimeFn::constant(0.0));
        let got = ex.evaluate(1.0, 1.0).unwrap();
        assert!(((got - want) / want).abs() < 1e-11, "α={a}: {got} vs {want}");
    }
    for (a, want) in FIG4 {
        let ex = figure_example(RlwFamily::F1, a, TimeFn::new(|t| (0.5 * t).sin()));
        let got = ex.evaluate(1.0, 1.0).unwrap();
        assert!(((got - want) / want).abs() < 1e-11, "α={a}: {got} vs {want}");
    }
}

#[test]
fn figure_three_decays_at_late_time() {
    let xs = AxisSpec::new("x", 0.0, 10.0, 101).values();
    for a in [0.25, 0.5] {
        let ex = figure_example(RlwFamily::F1, a, TimeFn::constant(0.0));
        let g = ex.grid(&xs, &[1e4]).unwrap();
        let max = g[0].iter().map(|v| v.unwrap().abs()).fold(0.0, f64::max);
        assert!(max < 1e-3, "α={a}: {max}");
    }
}

#[test]
fn example_grid_matches_pointwise() {
    let ex = figure_example(RlwFamily::F4, 0.5, TimeFn::new(|t| (0.5 * t).sin()));
    let xs = [0.0, 2.0, 7.0];
    let ts = [0.0, 1.0, 5.0];
    let g = ex.grid(&xs, &ts).unwrap();
    for (i, &t) in ts.iter().enumerate() {
        for (j, &x) in xs.iter().enumerate() {
            let v = ex.evaluate(x, t).unwrap();
            assert!((g[i][j].unwrap() - v).abs() <= 1e-12 * (1.0 + v.abs()));
        }
    }
}

#[test]
fn general_grid_matches_pointwise() {
    let params = RlwParams {
        k: 0.3,
        order: order(0.75),
        mu: TimeFn::constant(-0.8),
        p: TimeFn::new(|t| 0.2 * t.cos()),
        q: TimeFn::constant(2.0),
        r: TimeFn::constant(0.1),
        s: TimeFn::constant(1.0),
        family: RlwFamily::F3,
    };
    let xs = [0.0, 1.0, 4.0];
    let ts = [0.0, 0.5, 3.0];
    let g = rlw_grid(&params, &xs, &ts).unwrap();
    for (i, &t) in ts.iter().enumerate() {
        for (j, &x) in xs.iter().enumerate() {
            let v = rlw_evaluate(&params, x, t).unwrap();
            assert!((g[i][j].unwrap() - v).abs() <= 1e-12 * (1.0 + v.abs()));
        }
    }
    assert!(rlw_zeta(&params, -1.0, 1.0).is_err());
}

#[test]
fn xi_reading_switch_changes_only_forms_five_and_six() {
    for f in ALL {
        let own = figure_example(f, 0.5, TimeFn::constant(0.0));
        let typeset = RlwExample { xi: XiReading::AsTypeset, ..own.clone() };
        let a = own.evaluate(2.0, 3.0).unwrap();
        let b = typeset.evaluate(2.0, 3.0).unwrap();
        if matches!(f, RlwFamily::F5 | RlwFamily::F6) {
            assert_ne!(a, b);
        } else {
            assert_eq!(a, b);
        }
    }
}

#[test]
fn noise_clock_only_matters_with_noise() {
    let quiet = figure_example(RlwFamily::F1, 0.5, TimeFn::constant(0.0));
    let quiet_r = RlwExample { clock: NoiseClock::Rescaled, ..quiet.clone() };
    assert_eq!(quiet.evaluate(1.0, 2.0).unwrap(), quiet_r.evaluate(1.0, 2.0).unwrap());
    let noisy = figure_example(RlwFamily::F1, 0.5, TimeFn::new(|t| (0.5 * t).sin()));
    let noisy_r = RlwExample { clock: NoiseClock::Rescaled, ..noisy.clone() };
    assert_ne!(noisy.evaluate(1.0, 2.0).unwrap(), noisy_r.evaluate(1.0, 2.0).unwrap());
}

#[test]
fn alpha_one_special_values() {
    let (k, mu) = (0.05, -3.0);
    let a = k * mu * mu;
    // ξ₂ = 0 puts the bracket at 6 − 1 = 5
    let t = 0.8;
    let x = 0.5 * (3.0 * a + 2.0) * t;
    let v2 = rlw_alpha1_special(Alpha1Variant::V2, k, mu, x, t).unwrap();
    assert!((v2 - 5.4 * a).abs() < 1e-13);
    // limits of v5 for μ > 0
    let mu = 1.0;
    let a = k * mu * mu;
    let f = Alpha1Variant::V5.form(k, mu);
    assert!((f.value(-40.0).unwrap() - (-3.0 * a + 135.0 * a / 36.0)).abs() < 1e-13);
    assert!((f.value(40.0).unwrap() + 3.0 * a).abs() < 1e-13);
}

/// Family built from the structure that does satisfy the reduced ODE with
/// `r = 0`: `a = λ − μ`, `c = −kp/(1 + k²sa²)`, `A2 = −12kcsλ²/q`,
/// `A1 = 12kcsaλ/q`.
fn control_form(k: f64, lambda: f64, mu: f64, p: f64, q: f64, s: f64) -> (BracketForm, f64) {
    let a = lambda - mu;
    let c = -k * p / (1.0 + k * k * s * a * a);
    let a2 = -12.0 * k * c * s * lambda * lambda / q;
    let a1 = 12.0 * k * c * s * a * lambda / q;
    let form = BracketForm { offset: 0.0, c1: a1 * a, c2: a2 * a * a, b0: lambda, b1: -mu, rate: a };
    (form, c)
}

#[test]
fn residual_engine_accepts_control_solution() {
    for (k, lambda, mu, p, q, s) in [
        (1.0, 1.0, -1.0, 0.5, 2.0, 1.0),
        (0.4, 0.7, -1.3, -1.1, 0.8, 2.5),
        (2.0, -0.6, 0.9, 0.3, -1.5, 0.4),
    ] {
        let (form, c) = control_form(k, lambda, mu, p, q, s);
        let r = ode_residual_for_form(&form, k, c, p, q, 0.0, s, &zetas(), "control");
        assert!(r.sup_norm < 1e-10, "{}", r.sup_norm);
        let bad = ode_residual_for_form(&form.scaled_amplitude(1.01), k, c, p, q, 0.0, s, &zetas(), "control");
        assert!(bad.sup_norm > 1e-3, "{}", bad.sup_norm);
    }
}

#[test]
fn printed_families_leave_order_one_residuals() {
    for f in ALL {
        let params = RlwParams::constant(f, 1.0, FractionalOrder::ONE, -1.0, 0.5, 2.0, 0.0, 1.0);
        let r = rlw_ode_residual(&params, 0.0, &zetas()).unwrap();
        assert!(r.sup_norm > 1e-3, "{}: {}", r.label, r.sup_norm);
    }
}

#[test]
fn bbm_engine_accepts_solitary_wave() {
    let v = 1.5f64;
    let kappa = 0.5 * ((v - 1.0) / v).sqrt();
    let wave = move |x: f64, t: f64| Ok(3.0 * (v - 1.0) / (kappa * (x - v * t)).cosh().powi(2));
    let r = bbm_convergence_of(wave, (0.0, 2.0, 0.0, 2.0), 0.1, 2, "solitary").unwrap();
    let order = r.convergence_order.unwrap();
    assert!((order - 2.0).abs() < 0.2, "order {order}");
}

#[test]
fn printed_alpha_one_solutions_do_not_converge() {
    for variant in Alpha1Variant::ALL {
        let r = bbm_convergence(variant, 0.05, -3.0, (0.0, 2.0, 0.0, 2.0), 0.05, 2).unwrap();
        let order = r.convergence_order.unwrap();
        assert!(order < 1.0, "v{}: order {order}", variant.id());
        assert!(r.sup_norm > 1e-3);
    }
}

proptest! {
    #[test]
    fn d2_equals_b2(r in -5.0f64..5.0, s in -5.0f64..5.0, mu in -5.0f64..5.0) {
        let c = RlwCombos::new(r, s, mu);
        prop_assert_eq!(c.d2, c.b2);
    }

    #[test]
    fn control_solution_random(k in 0.2f64..2.0, lambda in 0.2f64..2.0, mu in -2.0f64..-0.2,
                               p in -1.0f64..1.0, q in 0.5f64..3.0, s in 0.2f64..3.0) {
        let (form, c) = control_form(k, lambda, mu, p, q, s);
        let r = ode_residual_for_form(&form, k, c, p, q, 0.0, s, &zetas(), "control");
        prop_assert!(r.sup_norm < 1e-10, "{}", r.sup_norm);
    }
}
