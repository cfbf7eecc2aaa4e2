use pairzeta::error::Error;
use pairzeta::numerics::{integrate_smooth, QuadratureSpec, C64};
use pairzeta::testfn::*;
use pairzeta::zeta_engine::fourier_envelope;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn lfe_points() -> Vec<C64> {
    (0..20)
        .map(|k| {
            let re = 0.3 + 2.2 * (k % 5) as f64 / 4.0;
            let im = -10.0 + 20.0 * (k / 5) as f64 / 3.0 + 0.37 * (k % 3) as f64;
            C64::new(re, im.clamp(-10.0, 10.0))
        })
        .collect()
}

#[test]
fn local_functional_equation_holds() {
    let spec = QuadratureSpec::default();
    let f = TestFn::test_function(c(0.0), 1);
    for s in lfe_points() {
        let r = local_fe_residual(&f, s, &spec).unwrap();
        assert!(r < 1e-8, "s={s}: residual {r}");
    }
}

#[test]
fn local_functional_equation_other_functions() {
    let spec = QuadratureSpec::default();
    let f = TestFn::test_function(C64::new(0.5, 2.0), -1);
    let g = TestFn::Bump { a: 2.0, b: 5.0 }.scaled(C64::new(0.0, 1.0));
    for s in [C64::new(0.6, 1.0), C64::new(1.9, -4.0)] {
        assert!(local_fe_residual(&f, s, &spec).unwrap() < 1e-8);
        assert!(local_fe_residual(&g, s, &spec).unwrap() < 1e-8);
    }
}

#[test]
fn local_zeta_of_fourier_preconditions() {
    let spec = QuadratureSpec::default();
    let f = TestFn::test_function(c(0.0), 1);
    assert!(local_zeta_of_fourier(&f, 1, c(-0.5), &spec).is_err());
    assert!(local_zeta_of_fourier(&f, 2, c(0.5), &spec).is_err());
    assert_eq!(
        local_fe_residual(&TestFn::delta_m(0), c(0.5), &spec),
        Err(Error::SupportTouchesZero)
    );
}

#[test]
fn local_zeta_vanishes_on_the_other_side() {
    let spec = QuadratureSpec::default();
    for s0 in [c(0.0), C64::new(1.0, 3.0)] {
        let f = TestFn::test_function(s0, -1);
        for s in [c(0.5), C64::new(-2.3, 1.0), C64::new(4.0, -7.0)] {
            assert_eq!(
                local_zeta(&f, 1, s, default_order(s), &spec).unwrap(),
                c(0.0)
            );
        }
        let g = TestFn::test_function(s0, 1);
        assert_eq!(local_zeta(&g, -1, c(0.5), 2, &spec).unwrap(), c(0.0));
    }
}

#[test]
fn local_zeta_matches_direct_integral() {
    let spec = QuadratureSpec::default();
    let f = TestFn::test_function(C64::new(0.2, 1.0), 1);
    for s in [C64::new(0.5, 2.0), C64::new(-1.5, -4.0), C64::new(3.0, 0.0)] {
        let want =
            integrate_smooth(|x| f.eval(x) * ((s - 1.0) * x.ln()).exp(), 1.0, 5.0, &spec).unwrap();
        let got = local_zeta(&f, 1, s, default_order(s), &spec).unwrap();
        assert!((got - want).norm() < 1e-9 * want.norm().max(1.0), "{s}");
    }
}

#[test]
fn local_zeta_continuation_poles() {
    // Phi(Delta_0; s) has a simple pole at 0 with residue Delta(0) = 1
    let spec = QuadratureSpec::default();
    let f = TestFn::delta_m(0);
    let s = C64::new(1e-6, 0.0);
    let v = local_zeta(&f, 1, s, 3, &spec).unwrap();
    assert!((v * s - 1.0).norm() < 1e-4);
    assert!(local_zeta(&f, 1, c(0.0), 3, &spec).is_err());
}

#[test]
fn flip_is_an_involution() {
    let p = FlipParams::new(C64::new(0.4, 0.1), C64::new(0.3, -0.2));
    for f in [
        TestFn::test_function(c(0.0), 1),
        TestFn::test_function(C64::new(0.7, 1.0), -1),
    ] {
        let back = infinity_flip(&infinity_flip(&f, p).unwrap(), p).unwrap();
        for k in 0..200 {
            let x = -6.0 + 12.0 * k as f64 / 199.0;
            if x == 0.0 {
                continue;
            }
            assert!(
                (back.eval(x) - f.eval(x)).norm() < 1e-12 * (1.0 + f.eval(x).norm()),
                "x={x}"
            );
        }
    }
    assert_eq!(
        infinity_flip(&TestFn::delta_m(1), p),
        Err(Error::SupportTouchesZero)
    );
}

#[test]
fn flip_support_is_inverted() {
    let p = FlipParams::new(c(0.0), c(0.3));
    let f = infinity_flip(&TestFn::test_function(c(0.0), 1), p).unwrap();
    let (a, b) = f.support().unwrap();
    assert!(
        (a + 1.0).abs() < 1e-12 && (b + 0.2).abs() < 1e-12,
        "({a}, {b})"
    );
    assert_eq!(f.eval(0.5), c(0.0));
}

#[test]
fn fourier_decays_within_envelope() {
    let spec = QuadratureSpec::default();
    let f = TestFn::test_function(c(0.0), 1);
    let env = fourier_envelope(&f, 4).unwrap();
    let mut last = f64::INFINITY;
    for y in [1.0, 2.0, 4.0, 8.0, 16.0] {
        let v = fourier(&f, y, &spec).unwrap().norm();
        assert!(
            v <= env.bound(y) * (1.0 + 1e-9),
            "y={y}: {v} > {}",
            env.bound(y)
        );
        last = last.min(v);
    }
    assert!(last < 1e-3);
}

#[test]
fn fourier_of_gaussian_like_bump() {
    // F f(0) is the integral of f
    let spec = QuadratureSpec::default();
    let f = TestFn::Bump { a: 1.0, b: 0.0 };
    let total = integrate_smooth(|x| f.eval(x), -2.0, 2.0, &spec).unwrap();
    assert!((fourier(&f, 0.0, &spec).unwrap() - total).norm() < 1e-10);
    // real and even f has a real, even transform
    let v1 = fourier(&f, 0.7, &spec).unwrap();
    let v2 = fourier(&f, -0.7, &spec).unwrap();
    assert!((v1 - v2).norm() < 1e-10 && v1.im.abs() < 1e-10);
}

#[test]
fn twisted_fourier_agrees_with_plain_for_separated_support() {
    let spec = QuadratureSpec::default();
    let p = FlipParams::new(c(0.0), c(0.3));
    let f = TestFn::test_function(c(0.0), 1);
    let flipped = infinity_flip(&f, p).unwrap();
    for y in [0.5, 1.3] {
        let a = twisted_fourier(&f, p, y, &spec).unwrap();
        let b = fourier(&flipped, y, &spec).unwrap();
        assert!((a - b).norm() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bump_partition_identity(t in 0.01f64..50.0) {
        prop_assert!((bump_delta(t) + bump_delta(-1.0 / t) - 1.0).abs() < 1e-13);
        prop_assert!((bump_delta(-t) + bump_delta(1.0 / t) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn aut_factor_cocycle(x in 0.05f64..20.0, neg in any::<bool>(), mu in -1.0f64..1.0, nu in -1.0f64..1.0) {
        let x = if neg { -x } else { x };
        let p = FlipParams::new(c(mu), c(nu));
        let v = aut_factor(p, x).unwrap() * aut_factor(p, -1.0 / x).unwrap();
        prop_assert!((v - 1.0).norm() < 1e-12);
        let want = (-2.0 * nu - 1.0) * x.abs().ln();
        prop_assert!((aut_factor(p, x).unwrap().norm().ln() - want).abs() < 1e-12);
        prop_assert!((aut_factor(p, x).unwrap().arg() + x.signum() * PI * mu / 2.0).abs() < 1e-12);
    }
}
