//! Complex Gamma function and principal powers.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

// Lanczos coefficients for g = 607/128, 15 terms (Godfrey).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_5e-6,
];

/// True when `s` sits on a nonpositive integer (within 1e-14).
pub fn is_nonpositive_integer(s: C64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && (s.re - s.re.round()).abs() < 1e-14
}

/// log Gamma for Re s >= 1/2 via Lanczos, principal-branch-free (sum of logs).
fn ln_gamma_right(s: C64) -> C64 {
    let z = s - 1.0;
    let mut acc = C64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += *c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Gamma(s) for s off the poles. Reflection is used for Re s < 1/2.
pub fn complex_gamma(s: C64) -> Result<C64> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::NonFinite("complex_gamma input"));
    }
    if is_nonpositive_integer(s) {
        return Err(Error::PoleAtNonpositiveInteger(s.re));
    }
    let v = if s.re < 0.5 {
        // Gamma(s) = pi / (sin(pi s) Gamma(1-s))
        let sinpi = sin_pi(s);
        C64::new(PI, 0.0) / (sinpi * ln_gamma_right(1.0 - s).exp())
    } else {
        ln_gamma_right(s).exp()
    };
    check(v, "complex_gamma")
}

/// 1/Gamma(s), entire; exact zero at nonpositive integers.
pub fn recip_gamma(s: C64) -> Result<C64> {
    if is_nonpositive_integer(s) {
        return Ok(C64::new(0.0, 0.0));
    }
    if s.re < 0.5 {
        let v = sin_pi(s) * ln_gamma_right(1.0 - s).exp() / PI;
        return check(v, "recip_gamma");
    }
    check((-ln_gamma_right(s)).exp(), "recip_gamma")
}

/// log Gamma(s) for Re s >= 1/2 (any branch consistent along the half-plane).
pub fn ln_gamma(s: C64) -> Result<C64> {
    if s.re >= 0.5 {
        return check(ln_gamma_right(s), "ln_gamma");
    }
    if is_nonpositive_integer(s) {
        return Err(Error::PoleAtNonpositiveInteger(s.re));
    }
    check(
        C64::new(PI, 0.0).ln() - sin_pi(s).ln() - ln_gamma_right(1.0 - s),
        "ln_gamma",
    )
}

/// sin(pi s) with exact zeros on the integers of the real axis.
pub fn sin_pi(s: C64) -> C64 {
    let n = s.re.round();
    let r = s.re - n;
    let sign = if (n as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let x = C64::new(PI * r, PI * s.im);
    sign * x.sin()
}

/// cos(pi s) with exact zeros at half-integers of the real axis.
pub fn cos_pi(s: C64) -> C64 {
    sin_pi(s + 0.5)
}

/// Principal power z^s = |z|^s e^{i s arg z}, arg in (-pi, pi].
pub fn principal_power(z: C64, s: C64) -> Result<C64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::ZeroBase);
    }
    let arg = principal_arg(z);
    let l = C64::new(z.norm().ln(), arg);
    check((s * l).exp(), "principal_power")
}

/// Principal argument in (-pi, pi]; the negative real axis maps to +pi.
pub fn principal_arg(z: C64) -> f64 {
    if z.im == 0.0 && z.re < 0.0 {
        PI
    } else {
        z.im.atan2(z.re)
    }
}

/// e^{i x} for real x.
pub fn cis(x: f64) -> C64 {
    C64::new(x.cos(), x.sin())
}

/// Reject NaN or infinite components.
pub fn check(v: C64, what: &'static str) -> Result<C64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// n! as f64.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn small_values() {
        assert!(close(
            complex_gamma(C64::new(1.0, 0.0)).unwrap(),
            C64::new(1.0, 0.0),
            1e-14
        ));
        assert!(close(
            complex_gamma(C64::new(4.0, 0.0)).unwrap(),
            C64::new(6.0, 0.0),
            1e-14
        ));
        // sqrt(pi) from the Gaussian integral by a midpoint sum
        let h = 1e-3;
        let gauss: f64 = (0..12000)
            .map(|k| (-(h * (k as f64 + 0.5)).powi(2)).exp() * h)
            .sum::<f64>()
            * 2.0;
        assert!(close(
            complex_gamma(C64::new(0.5, 0.0)).unwrap(),
            C64::new(gauss, 0.0),
            1e-10
        ));
    }

    #[test]
    fn poles_raise() {
        assert!(complex_gamma(C64::new(0.0, 0.0)).is_err());
        assert!(complex_gamma(C64::new(-3.0, 0.0)).is_err());
        assert_eq!(
            recip_gamma(C64::new(-2.0, 0.0)).unwrap(),
            C64::new(0.0, 0.0)
        );
    }

    #[test]
    fn power_branch() {
        let v = principal_power(C64::new(-1.0, 0.0), C64::new(0.5, 0.0)).unwrap();
        assert!((v - C64::new(0.0, 1.0)).norm() < 1e-15);
        let v = principal_power(C64::new(0.0, 1.0), C64::new(2.0, 0.0)).unwrap();
        assert!((v + 1.0).norm() < 1e-15);
        assert!(principal_power(C64::new(0.0, 0.0), C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn large_imaginary_part() {
        // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
        for t in [10.0, 40.0, 90.0] {
            let g = complex_gamma(C64::new(0.5, t)).unwrap();
            let want = PI / (PI * t).cosh();
            assert!((g.norm_sqr() / want - 1.0).abs() < 1e-11, "t={t}");
        }
    }
}
