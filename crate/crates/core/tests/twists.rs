use pairzeta::builtins::theta4;
use pairzeta::cover_group::{lattices_from_multiplier, MultiplierSystem};
use pairzeta::lattice::{divisor_coefficients, DeltaVector};
use pairzeta::numerics::C64;
use pairzeta::twists::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn totient(d: i64) -> usize {
    (1..=d).filter(|&k| gcd(k, d) == 1).count()
}

fn mobius(mut n: i64) -> i64 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        -r
    } else {
        r
    }
}

#[test]
fn characters_are_orthogonal() {
    for d in 1..=20u64 {
        let chars = characters_mod(d).unwrap();
        let phi = totient(d as i64);
        assert_eq!(chars.len(), phi, "d={d}");
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let s: C64 = (0..d as i64).map(|n| a.eval(n) * b.eval(n).conj()).sum();
                let want = if i == j { phi as f64 } else { 0.0 };
                assert!((s - want).norm() < 1e-12, "d={d} ({i},{j}): {s}");
            }
        }
        // column orthogonality
        for m in 0..d as i64 {
            for n in 0..d as i64 {
                let s: C64 = chars.iter().map(|c| c.eval(m) * c.eval(n).conj()).sum();
                let want = if gcd(m, d as i64) == 1 && m == n {
                    phi as f64
                } else {
                    0.0
                };
                assert!((s - want).norm() < 1e-12);
            }
        }
        assert_eq!(chars.iter().filter(|c| c.is_principal()).count(), 1);
    }
}

#[test]
fn characters_are_multiplicative() {
    for d in [7u64, 12, 16, 20] {
        for c in characters_mod(d).unwrap() {
            for m in 0..d as i64 {
                for n in 0..d as i64 {
                    assert!((c.eval(m * n) - c.eval(m) * c.eval(n)).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn tau_matches_brute_force_and_ramanujan_sums() {
    for d in 1..=30i64 {
        for psi in characters_mod(d as u64).unwrap() {
            for m in -d..=2 * d {
                let brute: C64 = (1..=d)
                    .filter(|&c| gcd(c, d) == 1)
                    .map(|c| {
                        psi.eval(c) * C64::from_polar(1.0, 2.0 * PI * (m * c) as f64 / d as f64)
                    })
                    .sum();
                assert!((tau_psi(&psi, m) - brute).norm() < 1e-10, "d={d} m={m}");
            }
            if psi.is_principal() {
                for m in 0..=d {
                    let g = gcd(m, d);
                    let ram: i64 = (1..=g)
                        .filter(|e| g % e == 0)
                        .map(|e| mobius(d / e) * e)
                        .sum();
                    assert!(
                        (tau_psi(&psi, m) - ram as f64).norm() < 1e-10,
                        "d={d} m={m}"
                    );
                }
            }
        }
    }
}

#[test]
fn gauss_sums_have_modulus_sqrt_d_for_primes() {
    for d in [3u64, 5, 7, 11, 13, 29] {
        for psi in characters_mod(d)
            .unwrap()
            .iter()
            .filter(|c| !c.is_principal())
        {
            assert!((tau_psi(psi, 1).norm() - (d as f64).sqrt()).abs() < 1e-12);
            // tau(m) = conj(psi(m)) tau(1) for units m
            for m in 1..d as i64 {
                assert!((tau_psi(psi, m) - psi.eval(m).conj() * tau_psi(psi, 1)).norm() < 1e-10);
            }
        }
    }
}

fn u_pair(v: &MultiplierSystem) -> (f64, f64) {
    let (l, lhat) = lattices_from_multiplier(v).unwrap();
    (
        l.u1.rem_euclid(1.0),
        (lhat.u1 * v.level as f64).rem_euclid(1.0),
    )
}

#[test]
fn completion_independence_never_trips() {
    let systems = [
        MultiplierSystem::eta_power(1, 0.5).unwrap(),
        MultiplierSystem::theta4(),
        MultiplierSystem::eta_power(4, 1.5).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut trials = 0;
    while trials < 200 {
        let v = &systems[trials % systems.len()];
        let d = rng.gen_range(2..40i64);
        if gcd(d, v.level) != 1 {
            continue;
        }
        let chars = characters_mod(d as u64).unwrap();
        let psi = &chars[rng.gen_range(0..chars.len())];
        let (u, uhat) = u_pair(v);
        let m = rng.gen_range(-5..5);
        let shift = rng.gen_range(-50..50);
        let r = tau_hat_shifted(psi, v, m, u, uhat, shift);
        assert!(r.is_ok(), "d={d} shift={shift}: {r:?}");
        trials += 1;
    }
}

#[test]
fn tau_hat_depends_only_on_residues() {
    let v = MultiplierSystem::theta4();
    let (u, uhat) = u_pair(&v);
    for d in [3u64, 5, 7] {
        for psi in characters_mod(d).unwrap() {
            for m in 0..d as i64 {
                let a = tau_hat(&psi, &v, m, u, uhat).unwrap();
                let b = tau_hat_shifted(&psi, &v, m, u, uhat, 3).unwrap();
                assert!((a - b).norm() < 1e-9, "d={d} m={m}");
            }
        }
    }
    let psi = &characters_mod(6).unwrap()[0];
    assert!(tau_hat(psi, &v, 1, u, uhat).is_err());
}

#[test]
fn modulus_one_twist_is_identity() {
    let psi = &characters_mod(1).unwrap()[0];
    let alpha = divisor_coefficients(C64::new(-0.6, 0.0), C64::new(1.3, 0.0));
    let beta = DeltaVector::from_pairs(&[(0, C64::new(2.0, 0.0))]);
    let (a, b) = twist_coefficients(&alpha, &beta, psi).unwrap();
    assert_eq!(a, alpha);
    assert_eq!(b, beta);
    let (spec, v) = theta4().unwrap();
    let (u, uhat) = u_pair(&v);
    let (ah, bh) = twist_hat_coefficients(
        &spec.alpha2,
        &spec.beta2,
        psi,
        &v,
        spec.mu,
        spec.nu,
        u,
        uhat,
    )
    .unwrap();
    for k in 0..60 {
        let l = spec.alpha2.lattice.point(k);
        assert!((ah.eval(l) - spec.alpha2.eval(l)).norm() < 1e-12, "l={l}");
    }
    assert_eq!(ah.zero_value(), spec.alpha2.zero_value());
    assert_eq!(bh, spec.beta2);
}

#[test]
fn twisted_coefficients_follow_tau() {
    let alpha = divisor_coefficients(C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for psi in characters_mod(5).unwrap() {
        let (a, _) = twist_coefficients(&alpha, &DeltaVector::new(), &psi).unwrap();
        for n in 1..30i64 {
            let want = tau_psi(&psi, n) * alpha.eval(n as f64);
            assert!((a.eval(n as f64) - want).norm() < 1e-12);
        }
    }
}

#[test]
fn primes_coprime_to_level() {
    let ps = primes_pn(6, 40).unwrap();
    assert_eq!(ps, vec![5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    assert!(primes_pn(6, 2).is_err());
}
