//! Riemann zeta reference values. Used as an oracle in tests and in the
//! bundled Eisenstein data; the continuation engine never calls it.

use super::gamma::{check, complex_gamma, sin_pi};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Dirichlet eta via the Cohen-Villegas-Zagier acceleration of the
/// alternating series.
fn eta_cvz(s: C64) -> C64 {
    let n = (40.0 + 2.0 * s.im.abs()).min(240.0) as usize;
    // d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / n as f64; // i = 0 term of the sum, times n below
    let mut acc = term;
    d.push(n as f64 * acc);
    for i in 1..=n {
        let fi = i as f64;
        let nf = n as f64;
        term *= (nf + fi - 1.0) * (nf - fi + 1.0) * 4.0 / ((2.0 * fi - 1.0) * (2.0 * fi));
        acc += term;
        d.push(nf * acc);
    }
    let dn = d[n];
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let base = ((k + 1) as f64).ln();
        sum += sign * (d[k] - dn) * (-s * base).exp();
    }
    -sum / dn
}

fn expm1(z: C64) -> C64 {
    if z.norm() < 1e-3 {
        let mut t = z;
        let mut acc = z;
        for k in 2..10 {
            t = t * z / k as f64;
            acc += t;
        }
        acc
    } else {
        z.exp() - 1.0
    }
}

const BERNOULLI_2K: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Euler-Maclaurin summation; valid for Re s > -15 away from s = 1.
fn zeta_euler_maclaurin(s: C64) -> C64 {
    let n = (30.0 + s.im.abs()) as usize;
    let nf = n as f64;
    let mut sum = C64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_s = (-s * nf.ln()).exp();
    sum += n_s * nf / (s - 1.0) + 0.5 * n_s;
    // rising factorial s (s+1) ... (s+2k-2) / (2k)! * N^{-s-2k+1}
    let mut fac = s / nf * n_s; // s * N^{-s-1}
    let mut denom = 2.0;
    for (j, b) in BERNOULLI_2K.iter().enumerate() {
        let k = j + 1;
        sum += *b / denom * fac;
        let kk = 2 * k as i32;
        fac = fac * (s + (kk - 1) as f64) * (s + kk as f64) / (nf * nf);
        denom *= ((kk + 1) * (kk + 2)) as f64;
    }
    sum
}

/// zeta(s) for s != 1 to about 12 significant digits for |Im s| <= 30.
pub fn riemann_zeta_oracle(s: C64) -> Result<C64> {
    if s == C64::new(1.0, 0.0) {
        return Err(Error::PoleAtOne);
    }
    if s.re < 0.0 {
        // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
        let z1 = riemann_zeta_oracle(1.0 - s)?;
        let g = complex_gamma(1.0 - s)?;
        let v = (s * 2f64.ln()).exp() * ((s - 1.0) * PI.ln()).exp() * sin_pi(s / 2.0) * g * z1;
        return check(v, "riemann_zeta_oracle");
    }
    let denom = -expm1((1.0 - s) * 2f64.ln());
    if denom.norm() < 0.05 && (s - 1.0).norm() > 0.05 {
        return check(zeta_euler_maclaurin(s), "riemann_zeta_oracle");
    }
    check(eta_cvz(s) / denom, "riemann_zeta_oracle")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_values() {
        let z2 = riemann_zeta_oracle(C64::new(2.0, 0.0)).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-13);
        let z0 = riemann_zeta_oracle(C64::new(0.0, 0.0)).unwrap();
        assert!((z0.re + 0.5).abs() < 1e-13);
        let zm1 = riemann_zeta_oracle(C64::new(-1.0, 0.0)).unwrap();
        assert!((zm1.re + 1.0 / 12.0).abs() < 1e-12);
        assert!(riemann_zeta_oracle(C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn two_methods_agree() {
        for &(a, b) in &[
            (0.3, 4.0),
            (2.5, -13.0),
            (0.9, 25.0),
            (1.0, 9.0647),
            (3.0, 0.5),
        ] {
            let s = C64::new(a, b);
            let x = riemann_zeta_oracle(s).unwrap();
            let y = zeta_euler_maclaurin(s);
            assert!(
                (x - y).norm() < 1e-11 * y.norm().max(1.0),
                "{s}: {x} vs {y}"
            );
        }
    }

    #[test]
    fn first_zero() {
        let z = riemann_zeta_oracle(C64::new(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-11);
    }
}
