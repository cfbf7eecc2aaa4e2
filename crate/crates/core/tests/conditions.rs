use pairzeta::builtins::{eisenstein, theta4};
use pairzeta::conditions::*;
use pairzeta::lattice::{
    divisor_coefficients, Coefficients, DeltaVector, Family, PairSpec, ShiftedLattice,
};
use pairzeta::{Error, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Euler-Maclaurin zeta for real s != 1, N = 20 and six Bernoulli corrections.
fn zeta_oracle(s: f64) -> f64 {
    let n = 20.0f64;
    let mut sum: f64 = (1..20).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let b2k = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
    ];
    let mut rising = s;
    let mut fact = 2.0;
    for (k, b) in b2k.iter().enumerate() {
        let k = k + 1;
        sum += b / fact * rising * n.powf(-s - 2.0 * k as f64 + 1.0);
        rising *= (s + 2.0 * k as f64 - 1.0) * (s + 2.0 * k as f64);
        fact *= (2 * k + 1) as f64 * (2 * k + 2) as f64;
    }
    sum
}

/// Stirling series after shifting the argument past 10.
fn gamma_oracle(x: f64) -> f64 {
    let mut y = x;
    let mut prod = 1.0;
    while y < 10.0 {
        prod *= y;
        y += 1.0;
    }
    let ln = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * y)
        - 1.0 / (360.0 * y.powi(3))
        + 1.0 / (1260.0 * y.powi(5))
        - 1.0 / (1680.0 * y.powi(7))
        + 1.0 / (1188.0 * y.powi(9));
    ln.exp() / prod
}

fn few_samples() -> Vec<C64> {
    vec![
        C64::new(0.2, 3.0),
        C64::new(1.5, -2.0),
        C64::new(-0.5, 7.0),
        C64::new(2.2, 12.0),
    ]
}

fn zero_spec(nu: f64) -> PairSpec {
    let z = Coefficients::zero(ShiftedLattice::integers());
    PairSpec::new(
        z.clone(),
        z,
        DeltaVector::new(),
        DeltaVector::new(),
        C64::new(0.0, 0.0),
        C64::new(nu, 0.0),
    )
    .unwrap()
}

#[test]
fn oracles_self_check() {
    assert!((zeta_oracle(2.0) - PI * PI / 6.0).abs() < 1e-12);
    assert!((zeta_oracle(-1.0) + 1.0 / 12.0).abs() < 1e-12);
    assert!((gamma_oracle(0.5) - PI.sqrt()).abs() < 1e-12);
}

#[test]
fn d1_eisenstein_default_samples() {
    let spec = eisenstein(0.3).unwrap();
    let rep = check_d1(&spec, &default_d1_samples(spec.nu), 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.max_residual < 1e-6);
    assert_eq!(rep.points.len(), 22);
    let laurent: Vec<_> = rep
        .points
        .iter()
        .filter(|p| p.label.starts_with("residue"))
        .collect();
    assert_eq!(laurent.len(), 2);
    assert!((laurent[1].s.0 - 0.4).abs() < 1e-12);
    assert!(laurent.iter().all(|p| p.residual < 1e-6));
}

#[test]
fn d1_detects_scaled_alpha2() {
    let mut spec = eisenstein(0.3).unwrap();
    spec.alpha2 = spec.alpha2.scaled(C64::new(2.0, 0.0));
    let rep = check_d1(&spec, &few_samples(), 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    assert!(rep.max_residual > 0.1);
}

#[test]
fn d1_trivial_and_proximity() {
    let rep = check_d1(&zero_spec(0.3), &few_samples(), 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert_eq!(rep.max_residual, 0.0);
    let err = check_d1(&eisenstein(0.3).unwrap(), &[C64::new(0.45, 0.05)], 1e-6).unwrap_err();
    assert!(matches!(err, Error::PoleProximity { .. }));
}

#[test]
fn d1_swap_symmetry() {
    let spec = eisenstein(0.3).unwrap();
    let samples = few_samples();
    let reflected: Vec<C64> = samples.iter().map(|s| 1.0 - 2.0 * spec.nu - s).collect();
    let a = check_d1(&spec, &samples, 1e-6).unwrap();
    let b = check_d1(&spec.swapped(), &reflected, 1e-6).unwrap();
    assert_eq!(a.verdict, b.verdict);
    assert_eq!(a.verdict, Verdict::Pass);
}

#[test]
fn d2_policies() {
    let spec = eisenstein(0.3).unwrap();
    let ch = Checker::new(spec);
    let rep = ch
        .d2((-1.0, 2.0), &[5.0, 10.0, 20.0, 40.0], GrowthMode::Strict)
        .unwrap();
    assert_eq!(rep.condition, Condition::D21);
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.notes.iter().any(|n| n.contains("heuristic")));
    let rep = ch.d2((-1.0, 2.0), &[1.0], GrowthMode::Weak).unwrap();
    assert_eq!(rep.verdict, Verdict::Inconclusive);
    assert!(rep.notes.iter().any(|n| n.contains("heuristic")));
    assert!(ch.d2((-1.0, 2.0), &[5.0, 150.0], GrowthMode::Weak).is_err());
    assert!(ch
        .d2((2.0, -1.0), &[5.0, 10.0, 20.0], GrowthMode::Weak)
        .is_err());
}

#[test]
fn d3_eisenstein_residue_and_perturbation() {
    let spec = eisenstein(0.3).unwrap();
    // residue at s = 1 of xi_+ + xi_- for zeta(s) zeta(s + 0.6) is 2 zeta(1.6)
    assert!((spec.beta2.get(0).re - zeta_oracle(1.6)).abs() < 1e-9);
    let rep = check_d3(&spec, 1, 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    let mut bad = spec.clone();
    bad.beta2 = DeltaVector::from_pairs(&[(0, spec.beta2.get(0) + 1.0)]);
    let rep = check_d3(&bad, 0, 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    assert!((rep.max_residual - 2.0).abs() < 0.1);
}

#[test]
fn d3_collisions() {
    // 1 - 2 nu = 2 exactly
    let rep = check_d3(&eisenstein(-0.5).unwrap(), 2, 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.notes.iter().any(|n| n.contains("double-pole")));
    // 1 - 2 nu = 1.9, merged with s = 2
    let rep = check_d3(&eisenstein(-0.45).unwrap(), 1, 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.notes.iter().any(|n| n.contains("merged")));
}

#[test]
fn d3_zero_beta_without_poles() {
    let rep = check_d3(&zero_spec(0.3), 2, 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.max_residual < 1e-12);
}

#[test]
fn d4_cases() {
    let rep = check_d4(&eisenstein(0.3).unwrap(), 2, 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.notes.iter().any(|n| n.contains("scanned")));
    assert_eq!(
        check_d4(&zero_spec(0.3), 2, 1e-6).unwrap().verdict,
        Verdict::Pass
    );
    // 0 is not in L_2 but xi(alpha_1) keeps the pole at s = 1
    let z = C64::new(0.0, 0.0);
    let a1 = eisenstein(0.3).unwrap().alpha1;
    let a2 = Coefficients::new(
        ShiftedLattice::new(0.5, 1.0).unwrap(),
        Family::Constant(C64::new(1.0, 0.0)),
        0.0,
        z,
    )
    .unwrap();
    let spec = PairSpec::new(
        a1,
        a2,
        DeltaVector::new(),
        DeltaVector::new(),
        z,
        C64::new(0.3, 0.0),
    )
    .unwrap();
    let rep = check_d4(&spec, 1, 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    let worst = rep
        .points
        .iter()
        .max_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap())
        .unwrap();
    assert_eq!(worst.s, (1.0, 0.0));
}

#[test]
fn pole_profile_generic_matches_zeta() {
    // predicted residue at 0.4 equals the oracle residue zeta(0.4) of zeta(s) zeta(s + 0.6)
    let predicted =
        2.0 * gamma_oracle(0.6) * (0.3 * PI).cos() * zeta_oracle(0.6) / (2.0 * PI).powf(0.6);
    assert!((predicted - zeta_oracle(0.4)).abs() < 1e-10);
    let spec = eisenstein(0.3).unwrap();
    for sign in [1, -1] {
        let rep = pole_profile(&spec, sign, 2, 1e-6).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
    }
    assert!(pole_profile(&spec, 0, 2, 1e-6).is_err());
}

#[test]
fn pole_profile_double_pole() {
    // zeta(s)^2: a_-2 = 1 and a_-1 = 2 gamma at s = 1
    let z = C64::new(0.0, 0.0);
    let a = divisor_coefficients(z, C64::new(-0.5, 0.0));
    let good = DeltaVector::from_pairs(&[(0, C64::new(2.0 * EULER_GAMMA, 0.0))]);
    let spec = PairSpec::new(a.clone(), a.clone(), good.clone(), good, z, z).unwrap();
    let rep = pole_profile(&spec, 1, 1, 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep
        .notes
        .iter()
        .any(|n| n.contains("1+-0i") || n.contains("1+0i")));
    let off = DeltaVector::from_pairs(&[(0, C64::new(2.0 * EULER_GAMMA + 0.5, 0.0))]);
    let bad = PairSpec::new(a.clone(), a.clone(), off.clone(), off, z, z).unwrap();
    let rep = pole_profile(&bad, 1, 1, 1e-6).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    assert!((rep.max_residual - 0.5).abs() < 1e-6);
    // alpha_2(0) = 1 predicts a_-2 = -2
    let one = a.with_value(0.0, C64::new(1.0, 0.0));
    let spec = PairSpec::new(
        one.clone(),
        one,
        DeltaVector::new(),
        DeltaVector::new(),
        z,
        z,
    )
    .unwrap();
    let rep = pole_profile(&spec, 1, 0, 1e-6).unwrap();
    assert!(
        rep.notes.iter().any(|n| n.contains("is -2")),
        "{:?}",
        rep.notes
    );
}

#[test]
fn pole_profile_agrees_with_d3() {
    let spec = eisenstein(-0.5).unwrap();
    assert_eq!(
        pole_profile(&spec, 1, 2, 1e-6).unwrap().verdict,
        Verdict::Pass
    );
    assert_eq!(check_d3(&spec, 2, 1e-6).unwrap().verdict, Verdict::Pass);
}

#[test]
fn qad_beta_cases() {
    assert_eq!(
        check_qad_beta(&eisenstein(0.3).unwrap()).verdict,
        Verdict::Pass
    );
    let z = Coefficients::zero(ShiftedLattice::integers());
    let b = DeltaVector::from_pairs(&[(0, C64::new(1.0, 0.0))]);
    let spec = PairSpec::new(
        z.clone(),
        z.clone(),
        b,
        DeltaVector::new(),
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
    )
    .unwrap();
    let rep = check_qad_beta(&spec);
    assert_eq!(rep.verdict, Verdict::Fail);
    assert!(rep
        .points
        .iter()
        .any(|p| p.label.contains("beta_1(0)") && p.residual == 1.0));
    let b3 = DeltaVector::from_pairs(&[(3, C64::new(1.0, 0.0))]);
    let spec = PairSpec::new(
        z.clone(),
        z,
        b3,
        DeltaVector::new(),
        C64::new(0.0, 0.0),
        C64::new(0.3, 0.0),
    )
    .unwrap();
    assert_eq!(check_qad_beta(&spec).verdict, Verdict::Fail);
}

fn quick_w_options(nu: C64) -> WOptions {
    let mut o = WOptions::defaults(nu);
    o.d1_samples = vec![
        C64::new(0.25, 2.0),
        C64::new(0.25, -3.0),
        C64::new(1.1, 2.0),
        C64::new(-0.6, -3.0),
    ];
    o.heights = vec![2.0, 3.0, 6.0];
    o.m_max = 1;
    o
}

#[test]
fn w_theta_twists_pass() {
    let (spec, v) = theta4().unwrap();
    let rep = check_w(
        &spec,
        &v,
        4,
        &[3, 5],
        false,
        1e-6,
        &quick_w_options(spec.nu),
    )
    .unwrap();
    assert_eq!(rep.condition, Condition::W2);
    assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.notes);
    assert!(rep.max_residual < 1e-6);
    // one non-principal character mod 3 and three mod 5
    assert!(rep
        .points
        .iter()
        .any(|p| p.label.starts_with("d = 5, psi = [3]")));
    assert!(!rep
        .points
        .iter()
        .any(|p| p.label.starts_with("d = 3, psi = [0]")));
}

#[test]
fn w_partial_and_corrupted() {
    let (spec, v) = theta4().unwrap();
    let opts = quick_w_options(spec.nu);
    let rep = check_w(&spec, &v, 4, &[], false, 1e-6, &opts).unwrap();
    assert_eq!(rep.condition, Condition::W1);
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.notes.iter().any(|n| n.contains("partial")));
    let mut bad = spec.clone();
    bad.alpha1 = bad.alpha1.with_value(2.0, C64::new(0.5, 0.0));
    let rep = check_w(&bad, &v, 4, &[], false, 1e-6, &opts).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    assert!(rep
        .points
        .iter()
        .any(|p| p.label.starts_with("untwisted D1") && p.residual > 1e-3));
}

#[test]
fn w_preconditions() {
    let (spec, v) = theta4().unwrap();
    let opts = quick_w_options(spec.nu);
    assert!(check_w(&spec, &v, 4, &[9], false, 1e-6, &opts).is_err());
    assert!(check_w(&spec, &v, 4, &[2], false, 1e-6, &opts).is_err());
    assert!(check_w(&spec.swapped(), &v, 4, &[3], false, 1e-6, &opts).is_err());
    assert!(check_w(&spec, &v, 1, &[3], false, 1e-6, &opts).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn d3_defect_linear_in_beta(eps in 0.05f64..2.0) {
        let spec = eisenstein(0.3).unwrap();
        let defect = |e: f64| {
            let mut s = spec.clone();
            s.beta2 = DeltaVector::from_pairs(&[(0, spec.beta2.get(0) + e)]);
            check_d3(&s, 0, 1e-6).unwrap().max_residual
        };
        let (a, b) = (defect(eps), defect(2.0 * eps));
        prop_assert!((b / a - 2.0).abs() < 1e-6);
        prop_assert!((a - 2.0 * eps).abs() < 1e-6);
    }
}
