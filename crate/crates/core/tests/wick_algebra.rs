use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wickwave::wick::{
    basis_integrals, hermite_function, white_noise_series, MultiIndex, Truncation, WickSeries,
};
use wickwave::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn all_indices(k: usize, dmax: u32) -> Vec<MultiIndex> {
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

fn random_series(rng: &mut ChaCha8Rng, trunc: Truncation, max_deg: u32) -> WickSeries {
    let mut terms = Vec::new();
    for idx in all_indices(trunc.k, max_deg) {
        if rng.random_bool(0.6) {
            terms.push((idx, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
        }
    }
    WickSeries::from_terms(trunc, terms).unwrap()
}

fn random_z(rng: &mut ChaCha8Rng, k: usize) -> Vec<Complex64> {
    (0..k)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// Direct evaluation of Σ a_α z^α, written independently of the library.
fn poly_eval(s: &WickSeries, z: &[Complex64]) -> Complex64 {
    let mut acc = c(0.0, 0.0);
    for (idx, a) in s.terms() {
        let mut m = c(1.0, 0.0);
        for (i, e) in idx.exponents().iter().enumerate() {
            for _ in 0..*e {
                m *= z[i];
            }
        }
        acc += a * m;
    }
    acc
}

#[test]
fn multi_index_is_canonical() {
    assert_eq!(MultiIndex::new(vec![1, 0, 2, 0, 0]).exponents(), &[1, 0, 2]);
    assert!(MultiIndex::new(vec![0, 0]).is_zero());
    assert_eq!(MultiIndex::new(vec![0, 0]), MultiIndex::zero());
    let a = MultiIndex::new(vec![1, 2]);
    assert_eq!(a.add(&MultiIndex::unit(3)).exponents(), &[1, 2, 1]);
    assert_eq!(a.degree(), 3);
}

#[test]
fn unit_is_identity() {
    let tr = Truncation::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = random_series(&mut rng, tr, 4);
    let prod = WickSeries::unit(tr).wick_product(&g).unwrap();
    assert_eq!(prod, g);
}

#[test]
fn product_adds_indices() {
    let tr = Truncation::default();
    let e1 = WickSeries::variable(tr, 1, c(1.0, 0.0)).unwrap();
    let sq = e1.wick_product(&e1).unwrap();
    assert_eq!(sq.len(), 1);
    assert_eq!(sq.coeff(&MultiIndex::new(vec![2])), c(1.0, 0.0));
    assert!(!sq.is_lossy());
}

#[test]
fn mismatched_truncations_are_rejected() {
    let a = WickSeries::unit(Truncation::new(2, 3));
    let b = WickSeries::unit(Truncation::new(3, 3));
    assert!(matches!(a.wick_product(&b), Err(Error::Config(_))));
}

#[test]
fn truncation_loss_is_recorded() {
    let tr = Truncation::new(1, 2);
    let e = WickSeries::variable(tr, 1, c(2.0, 0.0)).unwrap();
    let e2 = e.wick_product(&e).unwrap();
    assert!(!e2.is_lossy());
    let e3 = e2.wick_product(&e).unwrap();
    assert!(e3.is_empty());
    assert!((e3.discarded_mass() - 8.0).abs() < 1e-15);
}

#[test]
fn homomorphism_on_random_pairs() {
    let tr = Truncation::new(3, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let df = rng.random_range(0..=6u32);
        let f = random_series(&mut rng, tr, df);
        let g = random_series(&mut rng, tr, 6 - df);
        let fg = f.wick_product(&g).unwrap();
        assert!(!fg.is_lossy());
        for _ in 0..10 {
            let z = random_z(&mut rng, 3);
            let hf = f.hermite_transform(&z).unwrap();
            let hg = g.hermite_transform(&z).unwrap();
            let hfg = fg.hermite_transform(&z).unwrap();
            assert!((hfg - hf * hg).norm() < 1e-12 * (1.0 + hf.norm() * hg.norm()));
            assert!((hf - poly_eval(&f, &z)).norm() < 1e-13 * (1.0 + hf.norm()));
        }
    }
}

#[test]
fn wick_exp_scalar_cases() {
    let tr = Truncation::default();
    assert_eq!(WickSeries::zero(tr).wick_exp(), WickSeries::unit(tr));
    let a0 = c(0.3, -0.7);
    let e = WickSeries::constant(tr, a0).wick_exp();
    assert_eq!(e.len(), 1);
    assert!((e.constant_term() - a0.exp()).norm() < 1e-15);
}

#[test]
fn wick_exp_matches_scalar_exponential() {
    let tr = Truncation::new(2, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let f = WickSeries::from_terms(
            tr,
            [
                (MultiIndex::unit(1), c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
                (MultiIndex::unit(2), c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
            ],
        )
        .unwrap();
        let ef = f.wick_exp();
        for _ in 0..5 {
            let z: Vec<Complex64> = random_z(&mut rng, 2).into_iter().map(|v| v * 0.4).collect();
            let hf = f.hermite_transform(&z).unwrap();
            let got = ef.hermite_transform(&z).unwrap();
            let m = hf.norm();
            // Lagrange form of the Taylor remainder
            let bound = m.powi(7) / 5040.0 * m.exp() + 1e-14;
            assert!((got - hf.exp()).norm() <= bound, "{} > {bound}", (got - hf.exp()).norm());
        }
    }
}

#[test]
fn wick_exp_splits_constant_term() {
    let tr = Truncation::new(1, 6);
    let a0 = c(0.5, 0.25);
    let f = WickSeries::from_terms(tr, [(MultiIndex::zero(), a0), (MultiIndex::unit(1), c(0.2, 0.0))]).unwrap();
    let z = [c(0.1, 0.0)];
    let got = f.wick_exp().hermite_transform(&z).unwrap();
    let want = (a0 + 0.02).exp();
    assert!((got - want).norm() < 1e-12);
}

#[test]
fn transform_basics() {
    let tr = Truncation::default();
    let k = c(2.5, -1.0);
    let s = WickSeries::constant(tr, k);
    assert_eq!(s.hermite_transform(&[c(3.0, 1.0); 4]).unwrap(), k);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = random_series(&mut rng, tr, 6);
    assert_eq!(f.hermite_transform(&[c(0.0, 0.0); 4]).unwrap(), f.constant_term());
    assert!(matches!(
        f.hermite_transform(&[c(0.0, 0.0); 3]),
        Err(Error::Dimension { needed: 4, got: 3 })
    ));
}

#[test]
fn hermite_functions_are_orthonormal() {
    // trapezoid on a wide window; the integrands decay like e^{-s^2}
    let h = 1e-3;
    let n = 6;
    let mut gram = vec![vec![0.0; n]; n];
    let mut s = -12.0;
    while s <= 12.0 {
        for i in 0..n {
            for j in 0..n {
                gram[i][j] += h * hermite_function(i + 1, s) * hermite_function(j + 1, s);
            }
        }
        s += h;
    }
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((gram[i][j] - want).abs() < 1e-9, "({i},{j}) = {}", gram[i][j]);
        }
    }
}

#[test]
fn white_noise_series_coefficients() {
    // 50-digit values of ∫_0^1 ξ_k
    let want = [
        0.642_681_337_217_475_6,
        0.417_963_566_913_721_7,
        -0.189_844_033_424_959_9,
        -0.355_426_335_577_961_6,
    ];
    let got = basis_integrals(1.0, 4).unwrap();
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-13, "{g} vs {w}");
    }
    let s = white_noise_series(1.0, Truncation::default()).unwrap();
    assert_eq!(s.degree(), 1);
    let z = [c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.4, 0.0)];
    let expect: f64 = want.iter().zip([0.1, 0.2, 0.3, 0.4]).map(|(a, b)| a * b).sum();
    assert!((s.hermite_transform(&z).unwrap() - expect).norm() < 1e-13);

    let z2: Vec<Complex64> = z.iter().map(|v| v * 2.0).collect();
    let ratio = s.hermite_transform(&z2).unwrap() / s.hermite_transform(&z).unwrap();
    assert!((ratio - 2.0).norm() < 1e-14);

    let one = white_noise_series(1.0, Truncation::new(1, 6)).unwrap();
    assert_eq!(one.len(), 1);
    assert!((one.coeff(&MultiIndex::unit(1)).re - want[0]).abs() < 1e-13);
}

#[test]
fn white_noise_series_at_origin_is_zero() {
    assert!(white_noise_series(0.0, Truncation::default()).unwrap().is_empty());
    assert!(white_noise_series(-1.0, Truncation::default()).is_err());
}

#[test]
fn longer_window_coefficients() {
    let want = [0.929_704_752_302_735_9, 1.015_579_839_398_381_7, 0.540_720_303_282_585_9, 0.176_436_207_912_892_8];
    let got = basis_integrals(2.5, 4).unwrap();
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-12, "{g} vs {w}");
    }
}

#[test]
fn json_round_trip() {
    let tr = Truncation::new(3, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_series(&mut rng, tr, 4);
    let text = serde_json::to_string(&f).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["trunc"]["k"], 3);
    assert_eq!(v["trunc"]["dmax"], 4);
    assert!(v["terms"][0]["idx"].is_array());
    assert!(v["terms"][0]["re"].is_number());
    let back: WickSeries = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
}

fn arb_series(k: usize, max_deg: u32) -> impl Strategy<Value = WickSeries> {
    let idx = proptest::collection::vec(0u32..=max_deg, k).prop_filter("degree", move |v| {
        v.iter().sum::<u32>() <= max_deg
    });
    proptest::collection::vec((idx, -2.0f64..2.0, -2.0f64..2.0), 0..8).prop_map(move |terms| {
        WickSeries::from_terms(
            Truncation::new(k, 6),
            terms.into_iter().map(|(i, re, im)| (MultiIndex::new(i), Complex64::new(re, im))),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn product_is_commutative(f in arb_series(3, 3), g in arb_series(3, 3)) {
        let a = f.wick_product(&g).unwrap();
        let b = g.wick_product(&f).unwrap();
        for (idx, v) in a.terms() {
            prop_assert!((b.coeff(idx) - v).norm() < 1e-13);
        }
        prop_assert_eq!(a.len(), b.len());
    }

    #[test]
    fn product_is_associative(f in arb_series(2, 2), g in arb_series(2, 2), h in arb_series(2, 2)) {
        let l = f.wick_product(&g).unwrap().wick_product(&h).unwrap();
        let r = f.wick_product(&g.wick_product(&h).unwrap()).unwrap();
        for (idx, v) in l.terms() {
            prop_assert!((r.coeff(idx) - v).norm() < 1e-12);
        }
        for (idx, v) in r.terms() {
            prop_assert!((l.coeff(idx) - v).norm() < 1e-12);
        }
    }

    #[test]
    fn unit_law(f in arb_series(3, 6)) {
        let tr = f.truncation();
        prop_assert_eq!(WickSeries::unit(tr).wick_product(&f).unwrap(), f.clone());
        prop_assert_eq!(f.wick_product(&WickSeries::unit(tr)).unwrap(), f);
    }

    #[test]
    fn canonical_form_is_idempotent(f in arb_series(3, 6)) {
        let again = WickSeries::from_terms(f.truncation(), f.terms().map(|(i, c)| (MultiIndex::new(i.exponents().to_vec()), *c))).unwrap();
        prop_assert_eq!(&again, &f);
        for (idx, c) in f.terms() {
            prop_assert!(c.norm() > 0.0);
            prop_assert!(idx.exponents().last() != Some(&0));
        }
    }

    #[test]
    fn homomorphism_property(f in arb_series(3, 3), g in arb_series(3, 3),
                             z in proptest::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 3)) {
        let z: Vec<Complex64> = z.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let hf = f.hermite_transform(&z).unwrap();
        let hg = g.hermite_transform(&z).unwrap();
        let hfg = f.wick_product(&g).unwrap().hermite_transform(&z).unwrap();
        prop_assert!((hfg - hf * hg).norm() < 1e-12 * (1.0 + hf.norm() * hg.norm()));
    }
}
