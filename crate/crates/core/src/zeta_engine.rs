//! Theta series, zeta integrals Z_+, and the continuation of the completed
//! Dirichlet series (Xi_+, Xi_-) to the whole plane.
//!
//! The continuation inverts
//!   (Z(f^+), Z(f^-)) = Phi_1(f^+; 1 - s) E(s) (Xi_+, Xi_-)^T
//! where f^{+-} are dilated copies of |x|^{s0} Delta(+-x - 3) and
//!   Z(f) = Z_+(alpha_1, F f; s) + Z_+(alpha_2, F f_inf; 1 - 2nu - s)
//!          - alpha_1(0) F f(0) / s + alpha_2(0) F f_inf(0) / (s + 2nu - 1).
//! Each Z_+ is evaluated after exchanging sum and integral:
//!   Z_+(alpha, g; s) = sum_l alpha(l) |l|^{-s} int_{|l|}^inf g(sgn(l) u) u^{s-1} du,
//! with g tabulated once per test function by FFT.

use crate::error::{Error, Result};
use crate::lattice::{Coefficients, PairSpec};
use crate::numerics::{
    check, complex_gamma, gauss_legendre, gl16, integrate_decaying, integrate_panels,
    is_nonpositive_integer, recip_gamma, FourierTable, QuadratureSpec, C64,
};
use crate::testfn::{bump_delta, infinity_flip, TestFn};
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

pub type Mat2 = [[C64; 2]; 2];

/// [[e^{pi i s/2}, e^{-pi i s/2}], [e^{-pi i s/2}, e^{pi i s/2}]]
pub fn matrix_e(s: C64) -> Mat2 {
    let p = (C64::new(0.0, PI / 2.0) * s).exp();
    let m = (C64::new(0.0, -PI / 2.0) * s).exp();
    [[p, m], [m, p]]
}

/// [[0, e^{pi i mu/2}], [e^{-pi i mu/2}, 0]]
pub fn matrix_sigma(mu: C64) -> Mat2 {
    let z = C64::new(0.0, 0.0);
    [
        [z, (C64::new(0.0, PI / 2.0) * mu).exp()],
        [(C64::new(0.0, -PI / 2.0) * mu).exp(), z],
    ]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut r = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

pub fn mat_vec(a: &Mat2, v: [C64; 2]) -> [C64; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

/// Row vector times matrix.
pub fn vec_mat(v: [C64; 2], a: &Mat2) -> [C64; 2] {
    [
        v[0] * a[0][0] + v[1] * a[1][0],
        v[0] * a[0][1] + v[1] * a[1][1],
    ]
}

pub fn mat_inv(a: &Mat2) -> Option<Mat2> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.norm() == 0.0 {
        return None;
    }
    Some([
        [a[1][1] / det, -a[0][1] / det],
        [-a[1][0] / det, a[0][0] / det],
    ])
}

/// Frobenius norm.
pub fn mat_norm(a: &Mat2) -> f64 {
    a.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompletedValue {
    pub xi_plus: C64,
    pub xi_minus: C64,
    pub at: C64,
    pub error_estimate: f64,
}

impl CompletedValue {
    pub fn as_array(&self) -> [C64; 2] {
        [self.xi_plus, self.xi_minus]
    }
}

/// Decay envelope |g(y)| <= amplitude |y|^{-sigma}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub amplitude: f64,
    pub sigma: f64,
}

impl Envelope {
    pub fn bound(&self, y: f64) -> f64 {
        self.amplitude * y.abs().powf(-self.sigma)
    }
}

/// Envelope of F f from integration by parts: |F f(y)| <= ||f^{(k)}||_1 / (2 pi |y|)^k.
pub fn fourier_envelope(f: &TestFn, k: usize) -> Result<Envelope> {
    let (a, b) = f
        .support()
        .ok_or_else(|| Error::InvalidInput("unbounded support".into()))?;
    let mut err = None;
    let l1 = integrate_panels(
        |x| match f.derivative(k, x) {
            Ok(v) => C64::new(v.norm(), 0.0),
            Err(e) => {
                err = Some(e);
                C64::new(0.0, 0.0)
            }
        },
        a,
        b,
        400,
    )
    .re;
    if let Some(e) = err {
        return Err(e);
    }
    // the panel rule is not exact for |.|; pad by 10%
    Ok(Envelope {
        amplitude: 1.1 * l1 / (2.0 * PI).powi(k as i32),
        sigma: k as f64,
    })
}

fn lattice_tail_sum(alpha: &Coefficients, expo: f64, x: f64) -> f64 {
    // bound for sum over |l| > x of |l|^{-expo}, expo > 1, both signs
    let h = alpha.lattice.u2.abs();
    2.0 * (x.powf(1.0 - expo) / ((expo - 1.0) * h) + x.powf(-expo))
}

fn theta_cutoff(alpha: &Coefficients, env: &Envelope, t: f64, tol: f64) -> Result<f64> {
    let r = alpha.growth;
    if env.sigma <= r + 1.0 {
        return Err(Error::InvalidInput(format!(
            "envelope exponent {} must exceed r + 1 = {}",
            env.sigma,
            r + 1.0
        )));
    }
    let cst = alpha.growth_constant(1e3).max(1e-300);
    let mut x = 1.0f64;
    loop {
        let tail =
            cst * env.amplitude * t.powf(-env.sigma) * lattice_tail_sum(alpha, env.sigma - r, x);
        if tail < tol {
            return Ok(x);
        }
        x *= 2.0;
        if x > 1e9 {
            return Err(Error::ToleranceNotReached {
                what: "theta_series",
                estimate: tail,
            });
        }
    }
}

/// theta(alpha, g; t) = sum_{l != 0} alpha(l) g(t l), truncated by the envelope.
pub fn theta_series<G: Fn(f64) -> C64>(
    alpha: &Coefficients,
    g: G,
    t: f64,
    tol: f64,
    env: Option<&Envelope>,
) -> Result<C64> {
    let env = env.ok_or(Error::EnvelopeMissing)?;
    if !(t > 0.0) {
        return Err(Error::InvalidInput("theta series needs t > 0".into()));
    }
    let x = theta_cutoff(alpha, env, t, tol)?;
    let v: C64 = alpha
        .support(x)
        .into_iter()
        .map(|(l, a)| a * g(t * l))
        .sum();
    check(v, "theta_series")
}

/// Z_+(alpha, g; s) = int_1^inf theta(alpha, g; t) t^{s-1} dt.
pub fn z_plus<G: Fn(f64) -> C64>(
    alpha: &Coefficients,
    g: G,
    s: C64,
    spec: &QuadratureSpec,
    env: Option<&Envelope>,
) -> Result<C64> {
    let env = env.ok_or(Error::EnvelopeMissing)?;
    let r = alpha.growth;
    if env.sigma <= r + 1.0 || env.sigma <= s.re {
        return Err(Error::InvalidInput("envelope too weak for this s".into()));
    }
    let cst = alpha.growth_constant(1e3).max(1e-300);
    let lat_sum = alpha
        .support(1e3)
        .iter()
        .map(|(l, _)| l.abs().powf(r - env.sigma))
        .sum::<f64>()
        + lattice_tail_sum(alpha, env.sigma - r, 1e3);
    let k = cst * env.amplitude * lat_sum;
    let inner_tol = spec.abs_tol * 1e-2;
    let mut err = None;
    let v = integrate_decaying(
        |t| match theta_series(alpha, &g, t, inner_tol, Some(env)) {
            Ok(th) => th * ((s - 1.0) * t.ln()).exp(),
            Err(e) => {
                err = Some(e);
                C64::new(0.0, 0.0)
            }
        },
        1.0,
        |t| k * t.powf(s.re - 1.0 - env.sigma),
        spec,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    check(v, "z_plus")
}

/// Truncated sum over 0 < sign*l of alpha(l) |l|^{-s} and the tail bound used.
pub fn raw_dirichlet_with_bound(
    alpha: &Coefficients,
    sign: i32,
    s: C64,
    tol: f64,
) -> Result<(C64, f64)> {
    let r = alpha.growth;
    let need = r + 1.5;
    if s.re <= need {
        return Err(Error::OutsideConvergence {
            re_s: s.re,
            needed: need,
        });
    }
    let cst = alpha.growth_constant(1e3).max(1e-300);
    let expo = s.re - r;
    let mut x = 16.0f64;
    let mut tail = cst * lattice_tail_sum(alpha, expo, x) / 2.0;
    while tail > tol && x < 4.0e6 {
        x *= 2.0;
        tail = cst * lattice_tail_sum(alpha, expo, x) / 2.0;
    }
    let sg = sign as f64;
    let v: C64 = alpha
        .support(x)
        .into_iter()
        .filter(|(l, _)| l * sg > 0.0)
        .map(|(l, a)| a * (-s * l.abs().ln()).exp())
        .sum();
    Ok((check(v, "raw_dirichlet")?, tail))
}

/// xi_{sign}(alpha; s) by direct summation in the region of absolute convergence.
pub fn raw_dirichlet(alpha: &Coefficients, sign: i32, s: C64, tol: f64) -> Result<C64> {
    raw_dirichlet_with_bound(alpha, sign, s, tol).map(|v| v.0)
}

/// (xi_+, xi_-) = (2 pi)^s Xi / Gamma(s).
pub fn uncomplete(v: &CompletedValue) -> Result<(C64, C64)> {
    let s = v.at;
    if is_nonpositive_integer(s) {
        return Err(Error::GammaPole);
    }
    let f = (s * (2.0 * PI).ln()).exp() * recip_gamma(s)?;
    Ok((f * v.xi_plus, f * v.xi_minus))
}

struct SignLayout {
    ln_u: Vec<f64>,
    w: Vec<f64>,
    gp: Vec<C64>,
    gm: Vec<C64>,
    starts: Vec<usize>,
    ln_b: Vec<f64>,
    b: Vec<f64>,
    alpha: Vec<C64>,
}

/// Z_+ for one coefficient side and one tabulated transform, for both g(u) and g(-u).
pub struct ZPlusPlan {
    layouts: Vec<SignLayout>,
    floor: f64,
    pub tau_max: f64,
    pub nodes: usize,
}

impl ZPlusPlan {
    pub fn new(support: &[(f64, C64)], table: &FourierTable, tau_max: f64) -> Self {
        let (gx, gw) = gl16();
        let cutoff = table.cutoff;
        let reach = table.reach();
        let max_len = |u: f64| (1.2 / (reach + tau_max / (2.0 * PI * u))).min(0.25 * u);
        let mut layouts = Vec::new();
        let mut nodes = 0;
        for sign in [1.0f64, -1.0] {
            let mut bp: Vec<(f64, C64)> = support
                .iter()
                .filter(|(l, _)| l * sign > 0.0 && l.abs() < cutoff)
                .map(|(l, a)| (l.abs(), *a))
                .collect();
            if bp.is_empty() {
                continue;
            }
            bp.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut lay = SignLayout {
                ln_u: Vec::new(),
                w: Vec::new(),
                gp: Vec::new(),
                gm: Vec::new(),
                starts: Vec::new(),
                ln_b: Vec::new(),
                b: Vec::new(),
                alpha: Vec::new(),
            };
            for j in 0..bp.len() {
                let lo0 = bp[j].0;
                let hi = if j + 1 < bp.len() {
                    bp[j + 1].0
                } else {
                    cutoff
                };
                lay.starts.push(lay.ln_u.len());
                lay.ln_b.push(lo0.ln());
                lay.b.push(lo0);
                lay.alpha.push(bp[j].1);
                let mut lo = lo0;
                while lo < hi {
                    let mut len = max_len(lo);
                    if lo + len > hi || hi - (lo + len) < 0.25 * len {
                        len = hi - lo;
                        if len > max_len(lo) {
                            len *= 0.5;
                        }
                    }
                    let c = lo + 0.5 * len;
                    let h = 0.5 * len;
                    for (x, w) in gx.iter().zip(gw) {
                        let u = c + h * x;
                        lay.ln_u.push(u.ln());
                        lay.w.push(w * h);
                        lay.gp.push(table.eval(sign * u) * (w * h));
                        lay.gm.push(table.eval(-sign * u) * (w * h));
                    }
                    lo += len;
                }
            }
            nodes += lay.ln_u.len();
            layouts.push(lay);
        }
        ZPlusPlan {
            layouts,
            floor: table.tail + 1e-15 * table.peak,
            tau_max,
            nodes,
        }
    }

    /// (Z_+ with g(u), Z_+ with g(-u), error estimate).
    ///
    /// The estimate treats the table errors (size `floor`) as independent
    /// per node and reports three standard deviations.
    pub fn eval(&self, s: C64) -> (C64, C64, f64) {
        let mut zp = C64::new(0.0, 0.0);
        let mut zm = C64::new(0.0, 0.0);
        let mut var = 0.0;
        let sm1 = s - 1.0;
        for lay in &self.layouts {
            let weights: Vec<f64> = lay
                .alpha
                .iter()
                .zip(&lay.b)
                .map(|(a, b)| a.norm() * b.powf(-s.re))
                .collect();
            // prefix weight of breakpoints below the current node
            let mut below: f64 = weights.iter().sum();
            let mut ap = C64::new(0.0, 0.0);
            let mut am = C64::new(0.0, 0.0);
            let mut j = lay.starts.len();
            for i in (0..lay.ln_u.len()).rev() {
                let lu = lay.ln_u[i];
                let r = (sm1.re * lu).exp();
                let (sn, cs) = (sm1.im * lu).sin_cos();
                let e = C64::new(r * cs, r * sn);
                ap += lay.gp[i] * e;
                am += lay.gm[i] * e;
                let t = lay.w[i] * r * below;
                var += t * t;
                while j > 0 && lay.starts[j - 1] == i {
                    j -= 1;
                    let lb = (-s * lay.ln_b[j]).exp();
                    zp += lay.alpha[j] * lb * ap;
                    zm += lay.alpha[j] * lb * am;
                    below -= weights[j];
                }
            }
        }
        (zp, zm, 3.0 * self.floor * var.sqrt())
    }
}

/// Z(alpha_1, F f; s) for a test function f supported on one side of 0, and
/// for its reflection x -> f(-x).
pub struct ZetaIntegralPlan {
    side1: ZPlusPlan,
    side2: ZPlusPlan,
    g1_zero: C64,
    g2_zero: C64,
    a1_zero: C64,
    a2_zero: C64,
    reflect2: C64,
    nu: C64,
}

/// Relative truncation level of the Fourier tables.
pub const TABLE_FLOOR: f64 = 1e-16;

impl ZetaIntegralPlan {
    pub fn new(spec: &PairSpec, f: &TestFn, tau_max: f64) -> Result<Self> {
        let p = crate::testfn::FlipParams::new(spec.mu, spec.nu);
        let (a, b) = f.support().ok_or(Error::SupportTouchesZero)?;
        let flipped = infinity_flip(f, p)?;
        let (fa, fb) = flipped.support().ok_or(Error::SupportTouchesZero)?;
        let t1 = FourierTable::build(|x| f.eval(x), a, b, TABLE_FLOOR)?;
        let t2 = FourierTable::build(|x| flipped.eval(x), fa, fb, TABLE_FLOOR)?;
        let s1 = spec.alpha1.support(t1.cutoff);
        let s2 = spec.alpha2.support(t2.cutoff);
        let sgn = if a > 0.0 { 1.0 } else { -1.0 };
        Ok(ZetaIntegralPlan {
            side1: ZPlusPlan::new(&s1, &t1, tau_max),
            side2: ZPlusPlan::new(&s2, &t2, tau_max),
            g1_zero: t1.at_zero,
            g2_zero: t2.at_zero,
            a1_zero: spec.alpha1.zero_value(),
            a2_zero: spec.alpha2.zero_value(),
            reflect2: (C64::new(0.0, -sgn * PI) * spec.mu).exp(),
            nu: spec.nu,
        })
    }

    pub fn tau_max(&self) -> f64 {
        self.side1.tau_max
    }

    pub fn nodes(&self) -> usize {
        self.side1.nodes + self.side2.nodes
    }

    /// ([Z(f), Z(f reflected)], error bound).
    pub fn eval(&self, s: C64) -> ([C64; 2], f64) {
        let w = 1.0 - 2.0 * self.nu - s;
        let (p1, m1, e1) = self.side1.eval(s);
        let (p2, m2, e2) = self.side2.eval(w);
        let pole1 = self.a1_zero * self.g1_zero / s;
        let d2 = s + 2.0 * self.nu - 1.0;
        let pole2 = self.a2_zero * self.g2_zero / d2;
        let zp = p1 + p2 - pole1 + pole2;
        let zm = m1 + self.reflect2 * m2 - pole1 + self.reflect2 * pole2;
        ([zp, zm], e1 + e2)
    }
}

/// Default dilation of the test functions. Balances the decay of F f and F f_inf
/// for unit-spaced lattices.
pub const DEFAULT_DILATION: f64 = 0.3;
/// Exclusion radius around s = 0 and s = 1 - 2 nu.
pub const POLE_EXCLUSION: f64 = 0.1;
/// Offset used around integer s, where E(s) is singular.
pub const INTEGER_OFFSET: f64 = 1e-4;
/// Beyond Re s = growth + DIRECT_SUM_MARGIN the series is summed directly.
pub const DIRECT_SUM_MARGIN: f64 = 3.5;
/// Absolute tail tolerance of the direct sums.
const DIRECT_SUM_TOL: f64 = 1e-13;

struct SlicePlan {
    zi: ZetaIntegralPlan,
    s0: C64,
    norm_nodes: Vec<(f64, f64)>,
    c: f64,
}

impl SlicePlan {
    fn normalizer(&self, s: C64) -> C64 {
        // Phi_1(f^+; 1 - s) = c^{1-s} int_1^5 y^{s0 - s} Delta(y - 3) dy
        let d = self.s0 - s;
        let v: C64 = self
            .norm_nodes
            .iter()
            .map(|(ly, w)| *w * (d * ly).exp())
            .sum();
        v * ((1.0 - s) * self.c.ln()).exp()
    }
}

fn normalizer_nodes() -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(20);
    let panels = 200;
    let h = 4.0 / panels as f64;
    let mut v = Vec::with_capacity(panels * 20);
    for k in 0..panels {
        let c = 1.0 + (k as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            let y = c + 0.5 * h * xi;
            let d = bump_delta(y - 3.0);
            if d != 0.0 {
                v.push((y.ln(), wi * 0.5 * h * d));
            }
        }
    }
    v
}

/// Continuation engine for one pair spec with cached per-height plans.
pub struct PairEngine {
    specs: [PairSpec; 2],
    pub dilation: f64,
    cache: Mutex<HashMap<(u8, i64), Arc<SlicePlan>>>,
}

impl PairEngine {
    pub fn new(spec: PairSpec) -> Self {
        PairEngine::with_dilation(spec, DEFAULT_DILATION)
    }

    pub fn with_dilation(spec: PairSpec, c: f64) -> Self {
        let sw = spec.swapped();
        PairEngine {
            specs: [spec, sw],
            dilation: c,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &PairSpec {
        &self.specs[0]
    }

    fn plan(&self, which: u8, tau0: i64) -> Result<Arc<SlicePlan>> {
        if let Some(p) = self.cache.lock().unwrap().get(&(which, tau0)) {
            return Ok(p.clone());
        }
        let spec = &self.specs[(which - 1) as usize];
        let s0 = C64::new(0.0, tau0 as f64);
        let f = TestFn::test_function(s0, 1).dilated(self.dilation);
        let zi = ZetaIntegralPlan::new(spec, &f, tau0.unsigned_abs() as f64 + 1.0)?;
        let plan = Arc::new(SlicePlan {
            zi,
            s0,
            norm_nodes: normalizer_nodes(),
            c: self.dilation,
        });
        self.cache
            .lock()
            .unwrap()
            .insert((which, tau0), plan.clone());
        Ok(plan)
    }

    fn check_which(which: u8) -> Result<()> {
        if which == 1 || which == 2 {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "which must be 1 or 2, got {which}"
            )))
        }
    }

    /// Direct inversion at s; E(s) must be invertible.
    fn invert(&self, which: u8, s: C64) -> Result<CompletedValue> {
        let plan = self.plan(which, s.im.round() as i64)?;
        let (z, zerr) = plan.zi.eval(s);
        let norm = plan.normalizer(s);
        if norm.norm() < 1e-8 {
            return Err(Error::NormalizerVanishes);
        }
        let e = matrix_e(s);
        let einv = mat_inv(&e).ok_or(Error::InvalidInput("E(s) singular".into()))?;
        let xi = mat_vec(&einv, z);
        let xi = [xi[0] / norm, xi[1] / norm];
        let rounding = 1e-15 * (z[0].norm() + z[1].norm());
        let err = mat_norm(&einv) * (zerr + rounding) / norm.norm();
        Ok(CompletedValue {
            xi_plus: check(xi[0], "completed_pair")?,
            xi_minus: check(xi[1], "completed_pair")?,
            at: s,
            error_estimate: err,
        })
    }

    /// (2 pi)^{-s} Gamma(s) times the directly summed series.
    fn direct(&self, which: u8, s: C64) -> Result<CompletedValue> {
        let alpha = &self.specs[(which - 1) as usize].alpha1;
        let k = (-s * (2.0 * PI).ln()).exp() * complex_gamma(s)?;
        let (p, ep) = raw_dirichlet_with_bound(alpha, 1, s, DIRECT_SUM_TOL)?;
        let (m, em) = raw_dirichlet_with_bound(alpha, -1, s, DIRECT_SUM_TOL)?;
        let rounding = 1e-15 * (p.norm() + m.norm());
        Ok(CompletedValue {
            xi_plus: check(k * p, "completed_pair")?,
            xi_minus: check(k * m, "completed_pair")?,
            at: s,
            error_estimate: k.norm() * (ep.max(em) + rounding),
        })
    }

    /// (Xi_+, Xi_-) without the pole-proximity guard; used for contour sampling.
    pub fn completed_unchecked(&self, which: u8, s: C64) -> Result<CompletedValue> {
        PairEngine::check_which(which)?;
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::NonFinite("completed_pair"));
        }
        if s.re >= self.specs[(which - 1) as usize].alpha1.growth + DIRECT_SUM_MARGIN {
            return self.direct(which, s);
        }
        let n = s.re.round();
        let dist = (s - n).norm();
        if dist >= 0.1 * INTEGER_OFFSET {
            return self.invert(which, s);
        }
        // cubic interpolation through n +- h, n +- h/2
        let h = INTEGER_OFFSET;
        let xs = [n - h, n - h / 2.0, n + h / 2.0, n + h];
        let mut vals = Vec::with_capacity(4);
        for x in xs {
            vals.push(self.invert(which, C64::new(x, s.im))?);
        }
        let mut out = [C64::new(0.0, 0.0); 2];
        let mut err: f64 = 0.0;
        for (i, xi) in xs.iter().enumerate() {
            let mut li = C64::new(1.0, 0.0);
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    li *= (s - xj) / (xi - xj);
                }
            }
            out[0] += li * vals[i].xi_plus;
            out[1] += li * vals[i].xi_minus;
            err = err.max(vals[i].error_estimate * li.norm());
        }
        Ok(CompletedValue {
            xi_plus: out[0],
            xi_minus: out[1],
            at: s,
            error_estimate: 4.0 * err,
        })
    }

    /// (Xi_+, Xi_-)(alpha_which; s), refusing points within 0.1 of the poles.
    pub fn completed(&self, which: u8, s: C64) -> Result<CompletedValue> {
        PairEngine::check_which(which)?;
        let nu = self.specs[0].nu;
        for pole in [C64::new(0.0, 0.0), 1.0 - 2.0 * nu] {
            if (s - pole).norm() < POLE_EXCLUSION {
                return Err(Error::PoleProximity {
                    s: (s.re, s.im),
                    pole: (pole.re, pole.im),
                });
            }
        }
        self.completed_unchecked(which, s)
    }

    /// Z(alpha_1, F f; s) and its error bound for the engine's test function at height tau0.
    pub fn zeta_integrals(&self, which: u8, s: C64) -> Result<([C64; 2], f64)> {
        PairEngine::check_which(which)?;
        let plan = self.plan(which, s.im.round() as i64)?;
        Ok(plan.zi.eval(s))
    }

    /// Rows of a vertical-line sweep; `count` points from tmin in steps of `step`.
    pub fn sweep(
        &self,
        which: u8,
        sigma: f64,
        tmin: f64,
        tmax: f64,
        step: f64,
    ) -> Result<Vec<Result<CompletedValue>>> {
        if !(step > 0.0) || tmax < tmin {
            return Err(Error::InvalidInput(
                "sweep needs step > 0 and tmax >= tmin".into(),
            ));
        }
        let count = ((tmax - tmin) / step + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|k| self.completed(which, C64::new(sigma, tmin + k as f64 * step)))
            .collect())
    }
}

/// One-shot wrapper around `PairEngine::completed`.
pub fn completed_pair(
    spec: &PairSpec,
    which: u8,
    s: C64,
    _qspec: &QuadratureSpec,
) -> Result<CompletedValue> {
    PairEngine::new(spec.clone()).completed(which, s)
}

/// T_alpha(f) = alpha(0) F f(0) + sum_{l != 0} alpha(l) F f(l) using a tabulated transform.
fn lattice_functional(alpha: &Coefficients, table: &FourierTable) -> C64 {
    let mut v = alpha.zero_value() * table.at_zero;
    for (l, a) in alpha.support(table.cutoff) {
        v += a * table.eval(l);
    }
    v
}

/// |T_1(f) - T_2(f_{mu,nu,inf})| for f supported away from 0.
pub fn pair_relation_residual(spec: &PairSpec, f: &TestFn, _tol: f64) -> Result<f64> {
    let p = crate::testfn::FlipParams::new(spec.mu, spec.nu);
    let flipped = infinity_flip(f, p)?;
    let (a, b) = f.support().ok_or(Error::SupportTouchesZero)?;
    let (fa, fb) = flipped.support().ok_or(Error::SupportTouchesZero)?;
    let t1 = FourierTable::build(|x| f.eval(x), a, b, TABLE_FLOOR)?;
    let t2 = FourierTable::build(|x| flipped.eval(x), fa, fb, TABLE_FLOOR)?;
    let v = lattice_functional(&spec.alpha1, &t1) - lattice_functional(&spec.alpha2, &t2);
    Ok(check(v, "pair_relation_residual")?.norm())
}

/// Theta value recovered by Mellin inversion next to the direct lattice sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MellinRoundtrip {
    pub reconstructed: C64,
    pub direct: C64,
    pub rel_error: f64,
}

/// theta_0(t) = sum_{l != 0} alpha_1(l) F f(t l), recovered as
/// (1 / 2 pi) int_{-T}^{T} Z(alpha_1, F f; sigma + i tau) t^{-sigma - i tau} d tau
/// and compared with the direct sum. sigma must exceed the growth exponent + 1.
pub fn mellin_roundtrip(
    spec: &PairSpec,
    f: &TestFn,
    t: f64,
    sigma: f64,
    tau_max: f64,
) -> Result<MellinRoundtrip> {
    if !(t > 0.0) || !(tau_max > 0.0) {
        return Err(Error::InvalidInput(
            "mellin_roundtrip needs t > 0 and tau_max > 0".into(),
        ));
    }
    let need = spec.alpha1.growth + 1.0;
    if sigma <= need {
        return Err(Error::OutsideConvergence {
            re_s: sigma,
            needed: need,
        });
    }
    let plan = ZetaIntegralPlan::new(spec, f, tau_max)?;
    let (x, w) = gauss_legendre(20);
    let panels = (2.0 * tau_max).ceil() as usize;
    let h = 2.0 * tau_max / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..panels {
        let c = -tau_max + (k as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            let s = C64::new(sigma, c + 0.5 * h * xi);
            let (z, _) = plan.eval(s);
            acc += z[0] * (-s * t.ln()).exp() * (wi * 0.5 * h);
        }
    }
    let reconstructed = acc / (2.0 * PI);
    let (a, b) = f.support().ok_or(Error::SupportTouchesZero)?;
    let table = FourierTable::build(|x| f.eval(x), a, b, TABLE_FLOOR)?;
    let mut direct = C64::new(0.0, 0.0);
    for (l, al) in spec.alpha1.support(table.cutoff / t) {
        direct += al * table.eval(t * l);
    }
    let rel_error = (reconstructed - direct).norm() / direct.norm().max(1e-300);
    Ok(MellinRoundtrip {
        reconstructed,
        direct,
        rel_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn matrix_examples() {
        let e0 = matrix_e(c(0.0));
        assert!(e0.iter().flatten().all(|v| (v - 1.0).norm() < 1e-15));
        let e1 = matrix_e(c(1.0));
        let i = C64::new(0.0, 1.0);
        assert!((e1[0][0] - i).norm() < 1e-15 && (e1[0][1] + i).norm() < 1e-15);
        let s = C64::new(0.3, 0.7);
        let e = matrix_e(s);
        let det = e[0][0] * e[1][1] - e[0][1] * e[1][0];
        let want = 2.0 * i * (s * PI).sin();
        assert!((det - want).norm() < 1e-13);
        let sg = matrix_sigma(c(1.0));
        assert!(
            (sg[0][1] - i).norm() < 1e-15
                && (sg[1][0] + i).norm() < 1e-15
                && sg[0][0].norm() == 0.0
        );
        let sq = mat_mul(&matrix_sigma(c(0.37)), &matrix_sigma(c(0.37)));
        assert!((sq[0][0] - 1.0).norm() < 1e-15 && sq[0][1].norm() < 1e-15);
    }

    #[test]
    fn uncomplete_inverts_completion() {
        let s = C64::new(1.7, -2.0);
        let g = crate::numerics::complex_gamma(s).unwrap();
        let k = (-s * (2.0 * PI).ln()).exp() * g;
        let v = CompletedValue {
            xi_plus: k * 3.0,
            xi_minus: k * C64::new(0.0, 1.0),
            at: s,
            error_estimate: 0.0,
        };
        let (p, m) = uncomplete(&v).unwrap();
        assert!((p - 3.0).norm() < 1e-13 && (m - C64::new(0.0, 1.0)).norm() < 1e-13);
        let bad = CompletedValue { at: c(-2.0), ..v };
        assert_eq!(uncomplete(&bad), Err(Error::GammaPole));
    }
}
