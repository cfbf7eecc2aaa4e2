//! Gauss-Legendre panels, adaptive integration on finite intervals and
//! truncated integration on half-lines.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Tolerances and panel budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_panels: 4096,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_panels: usize) -> Result<Self> {
        let floor = f64::EPSILON * 100.0;
        if !(abs_tol >= floor && rel_tol >= floor) || max_panels == 0 {
            return Err(Error::InvalidInput(format!(
                "tolerances must be >= {floor:e} and max_panels > 0"
            )));
        }
        Ok(QuadratureSpec {
            abs_tol,
            rel_tol,
            max_panels,
        })
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

static GL20: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
static GL16: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();

/// Cached 20-point rule.
pub fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    GL20.get_or_init(|| gauss_legendre(20))
}

/// Cached 16-point rule.
pub fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    GL16.get_or_init(|| gauss_legendre(16))
}

fn panel<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> C64 {
    let (x, w) = gl20();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = C64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(w) {
        s += *wi * f(c + h * xi);
    }
    s * h
}

/// Fixed composite rule: `panels` equal panels of 20 nodes each.
pub fn integrate_panels<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, panels: usize) -> C64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| panel(&mut f, a + k as f64 * h, a + (k + 1) as f64 * h))
        .sum()
}

/// Adaptive bisection with 20-point Gauss-Legendre panels. A panel is
/// accepted when the two-half estimate matches the whole-panel estimate.
pub fn integrate_smooth<F: FnMut(f64) -> C64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<C64> {
    if a == b {
        return Ok(C64::new(0.0, 0.0));
    }
    let whole = panel(&mut f, a, b);
    let mut stack = vec![(a, b, whole)];
    let mut total = C64::new(0.0, 0.0);
    let mut used = 1usize;
    let mut scale = whole.norm();
    while let Some((lo, hi, est)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(&mut f, lo, mid);
        let right = panel(&mut f, mid, hi);
        let refined = left + right;
        let err = (refined - est).norm();
        scale = scale.max(refined.norm());
        let local_tol = spec.abs_tol.max(spec.rel_tol * scale) * ((hi - lo) / (b - a)).abs();
        if err <= local_tol || (hi - lo).abs() < 1e-12 * (b - a).abs() {
            total += refined;
        } else {
            used += 1;
            if used > spec.max_panels {
                return Err(Error::ToleranceNotReached {
                    what: "integrate_smooth",
                    estimate: err,
                });
            }
            stack.push((lo, mid, left));
            stack.push((mid, hi, right));
        }
    }
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::NonFinite("integrate_smooth"));
    }
    Ok(total)
}

/// Integral over [a, inf) truncated where the envelope tail drops below
/// abs_tol/2. `tail_bound` must be a monotone majorant of |f|.
pub fn integrate_decaying<F, B>(f: F, a: f64, tail_bound: B, spec: &QuadratureSpec) -> Result<C64>
where
    F: FnMut(f64) -> C64,
    B: Fn(f64) -> f64,
{
    let target = spec.abs_tol / 2.0;
    let mut t = a.max(0.0) + 1.0;
    let cap = a + 1e8;
    loop {
        // tail integral of the envelope by a geometric grid on [t, 64 t]
        let mut tail = 0.0;
        let mut lo = t;
        for _ in 0..40 {
            let hi = lo * 2.0;
            let v = integrate_panels(|x| C64::new(tail_bound(x), 0.0), lo, hi, 1).re;
            tail += v.abs();
            if v.abs() < 1e-3 * tail.max(1e-300) {
                break;
            }
            lo = hi;
        }
        if tail < target {
            break;
        }
        t *= 2.0;
        if t > cap {
            return Err(Error::TailNotIntegrable);
        }
    }
    integrate_smooth(
        f,
        a,
        t,
        &QuadratureSpec {
            abs_tol: target,
            ..*spec
        },
    )
}

/// Integral over (0, inf) by the exp-sinh rule t = exp(pi/2 sinh x), with
/// trapezoid steps halved until two levels agree. Handles integrable power
/// singularities at 0 and exponential decay at infinity.
pub fn integrate_exp_sinh<F: FnMut(f64) -> C64>(mut f: F, spec: &QuadratureSpec) -> Result<C64> {
    const X_MAX: f64 = 6.0;
    let mut g = |x: f64| -> C64 {
        let t = (0.5 * PI * x.sinh()).exp();
        if t == 0.0 || !t.is_finite() {
            return C64::new(0.0, 0.0);
        }
        let v = f(t) * (t * 0.5 * PI * x.cosh());
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            C64::new(f64::NAN, 0.0)
        }
    };
    let mut h = 0.5;
    // raw trapezoid sum without the factor h
    let mut sum = g(0.0);
    let mut k = 1;
    while k as f64 * h <= X_MAX {
        sum += g(k as f64 * h) + g(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        let mut odd = C64::new(0.0, 0.0);
        let mut j = 1;
        while j as f64 * h <= X_MAX {
            odd += g(j as f64 * h) + g(-(j as f64) * h);
            j += 2;
        }
        sum += odd;
        let cur = sum * h;
        if !(cur.re.is_finite() && cur.im.is_finite()) {
            return Err(Error::NonFinite("integrate_exp_sinh"));
        }
        let err = (cur - prev).norm();
        if err <= spec.abs_tol.max(spec.rel_tol * cur.norm()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::ToleranceNotReached {
        what: "integrate_exp_sinh",
        estimate: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_rule_exactness() {
        let (x, w) = gauss_legendre(7);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-14);
        let sw: f64 = w.iter().sum();
        assert!((sw - 2.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_examples() {
        let spec = QuadratureSpec::default();
        let one = integrate_smooth(|_| C64::new(1.0, 0.0), 0.0, 1.0, &spec).unwrap();
        assert!((one.re - 1.0).abs() < 1e-14);
        let g = integrate_smooth(|x| C64::new((-PI * x * x).exp(), 0.0), 0.0, 8.0, &spec).unwrap();
        assert!((g.re - 0.5).abs() < 1e-12);
        let odd = integrate_smooth(|x| C64::new(x.powi(3), 0.0), -1.0, 1.0, &spec).unwrap();
        assert!(odd.norm() < 1e-15);
    }

    #[test]
    fn exp_sinh_examples() {
        let spec = QuadratureSpec::new(1e-13, 1e-13, 1).unwrap();
        // Gamma(0.3) from a t^{-0.7} singularity
        let v = integrate_exp_sinh(|t| C64::new(t.powf(-0.7) * (-t).exp(), 0.0), &spec).unwrap();
        assert!((v.re - 2.991568987687590).abs() < 1e-11, "{v}");
        // 1 / (1 + t^2) decays only algebraically
        let v = integrate_exp_sinh(|t| C64::new(1.0 / (1.0 + t * t), 0.0), &spec).unwrap();
        assert!((v.re - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn decaying_examples() {
        let spec = QuadratureSpec::default();
        let v =
            integrate_decaying(|t| C64::new((-t).exp(), 0.0), 0.0, |t| (-t).exp(), &spec).unwrap();
        assert!((v.re - 1.0).abs() < 1e-10);
        let v = integrate_decaying(
            |t| C64::new(t * (-t).exp(), 0.0),
            0.0,
            |t| t * (-t).exp(),
            &spec,
        )
        .unwrap();
        assert!((v.re - 1.0).abs() < 1e-10);
        let v = integrate_decaying(
            |t| C64::new((-PI * t * t).exp(), 0.0),
            0.0,
            |t| (-PI * t * t).exp(),
            &spec,
        )
        .unwrap();
        assert!((v.re - 0.5).abs() < 1e-10);
    }

    #[test]
    fn budget_exhaustion_reports() {
        let spec = QuadratureSpec {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            max_panels: 3,
        };
        let r = integrate_smooth(|x| C64::new((1.0 / (x + 1e-9)).sin(), 0.0), 0.0, 1.0, &spec);
        assert!(matches!(r, Err(Error::ToleranceNotReached { .. })));
    }
}
