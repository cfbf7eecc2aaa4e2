//! Fourier transforms of compactly supported smooth functions on a
//! uniform frequency grid, computed with one FFT, plus band-limited
//! interpolation between grid points.
//!
//! For f supported in [a, b] the trapezoid rule with spacing H in x is
//! spectrally accurate, so F(u_k) = H * sum_j f(a + jH) e^{2 pi i (a + jH) u_k}
//! on u_k = k * du with H = 1 / (M du).

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

const STENCIL: usize = 16;
/// phase advance of the demodulated transform per grid step
const PHASE_STEP: f64 = 0.22;
const MAX_LOG2: u32 = 22;

/// Tabulated u -> integral f(x) e^{2 pi i x u} dx.
#[derive(Debug, Clone)]
pub struct FourierTable {
    /// spacing in u
    pub du: f64,
    /// center of the support, used to demodulate before interpolation
    pub center: f64,
    /// half the length of the support
    pub half_width: f64,
    /// values at u = (k - half) * du, demodulated by e^{-2 pi i center u}
    demod: Vec<C64>,
    half: usize,
    /// |u| beyond which the table returns zero
    pub cutoff: f64,
    /// largest |F| seen beyond the cutoff
    pub tail: f64,
    /// largest |F| on the grid
    pub peak: f64,
    /// transform at u = 0
    pub at_zero: C64,
}

impl FourierTable {
    /// Build the table for `f` supported in [a, b]. `floor_rel` sets the
    /// truncation level relative to the peak.
    pub fn build<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, floor_rel: f64) -> Result<FourierTable> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput(format!("bad support [{a}, {b}]")));
        }
        let hw = 0.5 * (b - a);
        let center = 0.5 * (a + b);
        let du = PHASE_STEP / (2.0 * PI * hw);
        let mut log2 = 12u32;
        // at least ~400 samples across the support
        while ((b - a) * du * (1u64 << log2) as f64) < 400.0 {
            log2 += 1;
        }
        let mut planner = FftPlanner::<f64>::new();
        loop {
            let m = 1usize << log2;
            let h = 1.0 / (m as f64 * du);
            let mut buf = vec![C64::new(0.0, 0.0); m];
            let count = ((b - a) / h).floor() as usize;
            let mut fsum = 0.0f64;
            for (j, slot) in buf.iter_mut().enumerate().take(count + 1) {
                let v = f(a + j as f64 * h);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite("FourierTable::build"));
                }
                fsum += v.norm();
                *slot = v;
            }
            // rounding floor of the sampled sum
            let noise = 8.0 * f64::EPSILON * h * fsum;
            // unnormalized inverse FFT gives sum_j f_j e^{+2 pi i jk / M}
            planner.plan_fft_inverse(m).process(&mut buf);
            let half = m / 2;
            let mut vals = vec![C64::new(0.0, 0.0); m];
            for (idx, slot) in vals.iter_mut().enumerate() {
                let k = idx as i64 - half as i64;
                let u = k as f64 * du;
                let raw = buf[k.rem_euclid(m as i64) as usize] * h;
                // phase from the left endpoint, then demodulate by the center
                *slot = raw * C64::from_polar(1.0, 2.0 * PI * (a - center) * u);
            }
            let peak = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let thr = (floor_rel * peak).max(noise);
            let edge_start = half * 3 / 4;
            let edge = vals
                .iter()
                .enumerate()
                .filter(|(i, _)| (*i as i64 - half as i64).unsigned_abs() as usize >= edge_start)
                .map(|(_, v)| v.norm())
                .fold(0.0, f64::max);
            if edge > thr && log2 < MAX_LOG2 {
                log2 += 1;
                continue;
            }
            let last = vals
                .iter()
                .enumerate()
                .filter(|(_, v)| v.norm() > thr)
                .map(|(i, _)| (i as i64 - half as i64).unsigned_abs() as usize)
                .max()
                .unwrap_or(0);
            let keep = (last + STENCIL).min(half - 1);
            let demod: Vec<C64> = vals[half - keep..=half + keep].to_vec();
            let at_zero = vals[half];
            return Ok(FourierTable {
                du,
                center,
                half_width: hw,
                demod,
                half: keep,
                cutoff: (last as f64 + 1.0) * du,
                tail: edge.max(thr),
                peak,
                at_zero,
            });
        }
    }

    /// Interpolated transform at u; zero beyond the cutoff.
    pub fn eval(&self, u: f64) -> C64 {
        if u.abs() > self.cutoff {
            return C64::new(0.0, 0.0);
        }
        self.eval_demod(u) * C64::from_polar(1.0, 2.0 * PI * self.center * u)
    }

    /// Interpolated value of F(u) e^{-2 pi i center u}.
    pub fn eval_demod(&self, u: f64) -> C64 {
        let p = u / self.du + self.half as f64;
        let len = self.demod.len();
        let start =
            (p.floor() as i64 - (STENCIL as i64 / 2 - 1)).clamp(0, (len - STENCIL) as i64) as usize;
        lagrange_uniform(&self.demod[start..start + STENCIL], p - start as f64)
    }

    /// Largest |x| over the support.
    pub fn reach(&self) -> f64 {
        self.center.abs() + self.half_width
    }

    /// Grid values (not demodulated) for u = k du.
    pub fn grid_value(&self, k: i64) -> C64 {
        let idx = k + self.half as i64;
        if idx < 0 || idx as usize >= self.demod.len() {
            return C64::new(0.0, 0.0);
        }
        let u = k as f64 * self.du;
        self.demod[idx as usize] * C64::from_polar(1.0, 2.0 * PI * self.center * u)
    }
}

/// Barycentric Lagrange interpolation on nodes 0, 1, ..., n-1 at position t.
pub fn lagrange_uniform(y: &[C64], t: f64) -> C64 {
    let n = y.len();
    let nearest = t.round();
    if (t - nearest).abs() < 1e-14 && nearest >= 0.0 && (nearest as usize) < n {
        return y[nearest as usize];
    }
    let mut num = C64::new(0.0, 0.0);
    let mut den = 0.0;
    let mut w = 1.0;
    for (j, yj) in y.iter().enumerate() {
        let c = w / (t - j as f64);
        num += yj * c;
        den += c;
        // w_j = (-1)^j binom(n-1, j)
        w *= -((n - 1 - j) as f64) / (j as f64 + 1.0);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_window_transform() {
        // e^{-pi x^2} truncated to [-7, 7] is numerically its own transform
        let t =
            FourierTable::build(|x| C64::new((-PI * x * x).exp(), 0.0), -7.0, 7.0, 1e-16).unwrap();
        for &u in &[0.0, 0.013, 0.5, 1.37, 2.2] {
            let want = (-PI * u * u).exp();
            assert!(
                (t.eval(u) - want).norm() < 1e-13,
                "u={u} {}",
                (t.eval(u) - want).norm()
            );
        }
    }

    #[test]
    fn off_center_support() {
        // f(x) = e^{-40 (x-3)^2} on [2, 4]; F(u) = sqrt(pi/40) e^{-pi^2 u^2/40} e^{6 pi i u}
        let t = FourierTable::build(
            |x| C64::new((-40.0 * (x - 3.0) * (x - 3.0)).exp(), 0.0),
            2.0,
            4.0,
            1e-16,
        )
        .unwrap();
        for &u in &[0.0, 0.77, -2.31, 4.0] {
            let want = C64::from_polar(
                (PI / 40.0).sqrt() * (-PI * PI * u * u / 40.0).exp(),
                6.0 * PI * u,
            );
            // the truncated Gaussian differs from the full one by ~e^{-40}
            assert!(
                (t.eval(u) - want).norm() < 1e-13,
                "u={u} {}",
                (t.eval(u) - want).norm()
            );
        }
    }

    #[test]
    fn lagrange_reproduces_polynomials() {
        let y: Vec<C64> = (0..12)
            .map(|j| C64::new((j as f64).powi(11), 1.0))
            .collect();
        let v = lagrange_uniform(&y, 5.37);
        assert!((v - C64::new(5.37f64.powi(11), 1.0)).norm() < 1e-6 * 5.37f64.powi(11));
        assert_eq!(lagrange_uniform(&y, 4.0), y[4]);
    }
}
