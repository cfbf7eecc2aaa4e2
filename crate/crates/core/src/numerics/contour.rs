//! Laurent coefficients by trapezoid sampling on a circle.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Default circle radius for pole data extraction.
pub const DEFAULT_RADIUS: f64 = 0.05;
/// Default number of equispaced nodes.
pub const DEFAULT_NODES: usize = 128;

/// Coefficient a_{-k} of F at s0: (1/n) sum_j F(s0 + r e^{i t_j}) (r e^{i t_j})^k.
pub fn contour_laurent<F>(f: F, s0: C64, k: i32, radius: f64, nodes: usize) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    let mut g = f;
    let v = contour_laurent_vec(|s| g(s).map(|x| vec![x]), s0, k, radius, nodes)?;
    Ok(v[0])
}

/// Vector-valued variant; every sample must return the same length.
pub fn contour_laurent_vec<F>(f: F, s0: C64, k: i32, radius: f64, nodes: usize) -> Result<Vec<C64>>
where
    F: FnMut(C64) -> Result<Vec<C64>>,
{
    Ok(contour_laurent_multi(f, s0, &[k], radius, nodes)?.remove(0))
}

/// Several coefficients a_{-k} from one set of samples; result indexed as [k][component].
pub fn contour_laurent_multi<F>(
    mut f: F,
    s0: C64,
    ks: &[i32],
    radius: f64,
    nodes: usize,
) -> Result<Vec<Vec<C64>>>
where
    F: FnMut(C64) -> Result<Vec<C64>>,
{
    if nodes == 0 || !(radius > 0.0) || ks.is_empty() {
        return Err(Error::InvalidInput(
            "contour needs nodes > 0, radius > 0 and at least one k".into(),
        ));
    }
    let mut acc: Vec<Vec<C64>> = vec![Vec::new(); ks.len()];
    for j in 0..nodes {
        // half-step offset keeps nodes off the real axis
        let theta = 2.0 * PI * (j as f64 + 0.5) / nodes as f64;
        let d = C64::from_polar(radius, theta);
        let vals = f(s0 + d).map_err(|e| Error::SampleFailure(e.to_string()))?;
        for (slot, &k) in acc.iter_mut().zip(ks) {
            if slot.is_empty() {
                *slot = vec![C64::new(0.0, 0.0); vals.len()];
            }
            if vals.len() != slot.len() {
                return Err(Error::SampleFailure("inconsistent sample length".into()));
            }
            let w = d.powi(k);
            for (a, v) in slot.iter_mut().zip(&vals) {
                *a += v * w;
            }
        }
    }
    Ok(acc
        .into_iter()
        .map(|v| v.into_iter().map(|a| a / nodes as f64).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_pole() {
        let r = contour_laurent(|s| Ok(1.0 / s), C64::new(0.0, 0.0), 1, 0.1, 64).unwrap();
        assert!((r - 1.0).norm() < 1e-14);
    }

    #[test]
    fn entire_function() {
        let r = contour_laurent(|s| Ok(s.exp()), C64::new(0.0, 0.0), 1, 0.1, 64).unwrap();
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn double_pole() {
        let s0 = C64::new(1.0, 0.0);
        let f = |s: C64| Ok(1.0 / ((s - 1.0) * (s - 1.0)));
        let a2 = contour_laurent(f, s0, 2, 0.1, 64).unwrap();
        let a1 = contour_laurent(f, s0, 1, 0.1, 64).unwrap();
        assert!((a2 - 1.0).norm() < 1e-14 && a1.norm() < 1e-14);
    }

    #[test]
    fn gamma_residues() {
        // Res_{s=-n} Gamma = (-1)^n / n!
        for n in 0..4 {
            let s0 = C64::new(-(n as f64), 0.0);
            let r = contour_laurent(crate::numerics::complex_gamma, s0, 1, 0.1, 64).unwrap();
            let want = if n % 2 == 0 { 1.0 } else { -1.0 } / crate::numerics::factorial(n);
            assert!((r - want).norm() < 1e-10, "n={n}: {r}");
        }
    }

    #[test]
    fn failure_propagates() {
        let r = contour_laurent(|_| Err(Error::GammaPole), C64::new(0.0, 0.0), 1, 0.1, 8);
        assert!(matches!(r, Err(Error::SampleFailure(_))));
    }
}
