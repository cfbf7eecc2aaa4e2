//! Smooth compactly supported test functions, the flip f -> f_{mu,nu,inf},
//! Fourier transforms and local zeta functions.
//!
//! Test functions are small expression trees. Values are computed directly;
//! derivatives of any order come from Taylor jets, so the D_nu recursion
//! never touches finite differences.

use crate::error::{Error, Result};
use crate::lattice::as_integer;
use crate::numerics::{
    cis, complex_gamma, gl16, integrate_smooth, principal_power, FourierTable, Jet, QuadratureSpec,
    C64,
};
use std::f64::consts::PI;
use std::ops::Neg;

/// Highest derivative order the jet machinery is asked for.
pub const MAX_DERIVATIVE_ORDER: usize = 64;

/// (mu, nu) of the automorphic factor J_{mu,nu}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipParams {
    pub mu: C64,
    pub nu: C64,
}

impl FlipParams {
    pub fn new(mu: C64, nu: C64) -> Self {
        FlipParams { mu, nu }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestFn {
    /// Delta(a x + b)
    Bump {
        a: f64,
        b: f64,
    },
    /// |x|^s
    AbsPow(C64),
    /// x^m
    Monomial(u32),
    /// e^{-a x^2}
    Gaussian(f64),
    Product(Box<TestFn>, Box<TestFn>),
    Scale(C64, Box<TestFn>),
    /// x -> f(x / c), c > 0
    Dilate(f64, Box<TestFn>),
    /// x -> J_{mu,nu}(x) f(-1/x)
    Flip {
        inner: Box<TestFn>,
        p: FlipParams,
    },
    /// x^2 f'' + (2 nu + 2)(2 x f' + (2 nu + 1) f)
    DNu {
        inner: Box<TestFn>,
        nu: C64,
    },
}

/// Alias used in the public interface.
pub type SmoothCompactFn = TestFn;

/// The bump Delta: 1 on |t| <= 1/2, 0 on |t| >= 2, Delta(t) + Delta(-1/t) = 1.
pub fn bump_delta(t: f64) -> f64 {
    let a = t.abs();
    if a <= 0.5 {
        return 1.0;
    }
    if a >= 2.0 {
        return 0.0;
    }
    let e = 1.0 / (4.0 - t * t) - 1.0 / (4.0 - 1.0 / (t * t));
    if e > 700.0 {
        0.0
    } else {
        1.0 / (1.0 + e.exp())
    }
}

/// Jet of Delta at t.
pub fn bump_jet(t: f64, order: usize) -> Jet {
    let a = t.abs();
    if a <= 0.5 {
        return Jet::constant(C64::new(1.0, 0.0), order);
    }
    if a >= 2.0 {
        return Jet::zero(order);
    }
    let x = Jet::variable(t, order);
    let x2 = &x * &x;
    let one = C64::new(1.0, 0.0);
    let four = C64::new(4.0, 0.0);
    let p = (&x2).neg().add_const(four).recip();
    let q = x2.recip().scale(-one).add_const(four).recip();
    let e = &p - &q;
    let e0 = e.value().re;
    if e0 > 745.0 {
        return Jet::zero(order);
    }
    if e0 < -745.0 {
        return Jet::constant(one, order);
    }
    if e0 > 0.0 {
        // Delta = w / (1 + w), w = e^{-E}
        let w = (&e).neg().exp();
        &w * &w.add_const(one).recip()
    } else {
        e.exp().add_const(one).recip()
    }
}

impl TestFn {
    /// |x|^{s0} Delta(eps x - 3), supported in eps x in [1, 5].
    pub fn test_function(s0: C64, eps: i32) -> TestFn {
        TestFn::Product(
            Box::new(TestFn::AbsPow(s0)),
            Box::new(TestFn::Bump {
                a: eps as f64,
                b: -3.0,
            }),
        )
    }

    /// x^m Delta(x).
    pub fn delta_m(m: u32) -> TestFn {
        TestFn::Product(
            Box::new(TestFn::Monomial(m)),
            Box::new(TestFn::Bump { a: 1.0, b: 0.0 }),
        )
    }

    pub fn times(self, other: TestFn) -> TestFn {
        TestFn::Product(Box::new(self), Box::new(other))
    }

    pub fn scaled(self, c: C64) -> TestFn {
        TestFn::Scale(c, Box::new(self))
    }

    pub fn dilated(self, c: f64) -> TestFn {
        TestFn::Dilate(c, Box::new(self))
    }

    /// Closed support interval, or None when unbounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            TestFn::Bump { a, b } => {
                let p = (-2.0 - b) / a;
                let q = (2.0 - b) / a;
                Some((p.min(q), p.max(q)))
            }
            TestFn::AbsPow(_) | TestFn::Monomial(_) | TestFn::Gaussian(_) => None,
            TestFn::Product(f, g) => match (f.support(), g.support()) {
                (None, s) | (s, None) => s,
                (Some((a, b)), Some((c, d))) => {
                    let lo = a.max(c);
                    let hi = b.min(d);
                    Some(if lo <= hi { (lo, hi) } else { (lo, lo) })
                }
            },
            TestFn::Scale(_, f) | TestFn::DNu { inner: f, .. } => f.support(),
            TestFn::Dilate(c, f) => f.support().map(|(a, b)| (a * c, b * c)),
            TestFn::Flip { inner, .. } => {
                let (a, b) = inner.support()?;
                if a <= 0.0 && b >= 0.0 {
                    return None;
                }
                Some((-1.0 / a, -1.0 / b))
            }
        }
    }

    /// True when the support is compact and excludes a neighborhood of 0.
    pub fn vanishes_near_zero(&self) -> bool {
        matches!(self.support(), Some((a, b)) if a > 0.0 || b < 0.0)
    }

    fn outside(&self, x: f64) -> bool {
        match self.support() {
            Some((a, b)) => x < a || x > b,
            None => false,
        }
    }

    pub fn eval(&self, x: f64) -> C64 {
        match self {
            TestFn::Bump { a, b } => C64::new(bump_delta(a * x + b), 0.0),
            TestFn::AbsPow(s) => {
                if x == 0.0 {
                    return if s.norm() == 0.0 {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    };
                }
                (s * x.abs().ln()).exp()
            }
            TestFn::Monomial(m) => C64::new(x.powi(*m as i32), 0.0),
            TestFn::Gaussian(a) => C64::new((-a * x * x).exp(), 0.0),
            TestFn::Product(f, g) => {
                // evaluate the compactly supported factor first
                let (first, second) = if f.support().is_some() {
                    (f, g)
                } else {
                    (g, f)
                };
                let v = first.eval(x);
                if v.norm() == 0.0 {
                    return v;
                }
                v * second.eval(x)
            }
            TestFn::Scale(c, f) => c * f.eval(x),
            TestFn::Dilate(c, f) => f.eval(x / c),
            TestFn::Flip { inner, p } => {
                if x == 0.0 || inner.outside(-1.0 / x) {
                    return C64::new(0.0, 0.0);
                }
                match aut_factor(*p, x) {
                    Ok(j) => j * inner.eval(-1.0 / x),
                    Err(_) => C64::new(0.0, 0.0),
                }
            }
            TestFn::DNu { .. } => self
                .jet(x, 0)
                .map(|j| j.value())
                .unwrap_or(C64::new(f64::NAN, 0.0)),
        }
    }

    /// Taylor jet of the given order at x.
    pub fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        if order > 3 * MAX_DERIVATIVE_ORDER {
            return Err(Error::DerivativeOrderExceeded {
                needed: order,
                available: 3 * MAX_DERIVATIVE_ORDER,
            });
        }
        if self.outside(x) {
            return Ok(Jet::zero(order));
        }
        Ok(match self {
            TestFn::Bump { a, b } => {
                let mut j = bump_jet(a * x + b, order);
                let mut f = 1.0;
                for c in j.0.iter_mut() {
                    *c *= f;
                    f *= a;
                }
                j
            }
            TestFn::AbsPow(s) => {
                if x == 0.0 {
                    return match as_integer(*s, 0.0) {
                        Some(n) if n >= 0 && n % 2 == 0 => {
                            Ok(Jet::variable(0.0, order).powi(n as u32))
                        }
                        _ => Err(Error::InvalidInput("|x|^s is not smooth at 0".into())),
                    };
                }
                Jet::variable(x, order)
                    .scale(C64::new(x.signum(), 0.0))
                    .powc(*s)
            }
            TestFn::Monomial(m) => Jet::variable(x, order).powi(*m),
            TestFn::Gaussian(a) => {
                let v = Jet::variable(x, order);
                (&v * &v).scale(C64::new(-a, 0.0)).exp()
            }
            TestFn::Product(f, g) => {
                let jf = f.jet(x, order)?;
                if jf.0.iter().all(|c| c.norm() == 0.0) {
                    return Ok(jf);
                }
                &jf * &g.jet(x, order)?
            }
            TestFn::Scale(c, f) => f.jet(x, order)?.scale(*c),
            TestFn::Dilate(c, f) => f.jet(x / c, order)?.dilate(*c),
            TestFn::Flip { inner, p } => {
                if x == 0.0 {
                    return Ok(Jet::zero(order));
                }
                let v = Jet::variable(x, order);
                let sgn = x.signum();
                let phase = (C64::new(0.0, -sgn * PI / 2.0) * p.mu).exp();
                let jf = v
                    .scale(C64::new(sgn, 0.0))
                    .powc(-2.0 * p.nu - 1.0)
                    .scale(phase);
                let h = v.recip().scale(C64::new(-1.0, 0.0));
                let outer = inner.jet(-1.0 / x, order)?;
                &jf * &outer.compose(&h)
            }
            TestFn::DNu { inner, nu } => {
                let g = inner.jet(x, order + 2)?;
                let d1 = g.differentiate();
                let d2 = d1.differentiate();
                let v = Jet::variable(x, order);
                let g0 = g.truncate(order);
                let d1 = d1.truncate(order);
                let t1 = &(&v * &v) * &d2;
                let t2 = (&(&v * &d1).scale(C64::new(2.0, 0.0)) + &g0.scale(2.0 * nu + 1.0))
                    .scale(2.0 * nu + 2.0);
                &t1 + &t2
            }
        })
    }

    /// f^{(k)}(x).
    pub fn derivative(&self, k: usize, x: f64) -> Result<C64> {
        if k > MAX_DERIVATIVE_ORDER {
            return Err(Error::DerivativeOrderExceeded {
                needed: k,
                available: MAX_DERIVATIVE_ORDER,
            });
        }
        Ok(self.jet(x, k)?.derivative(k))
    }
}

/// J_{mu,nu}(x) = e^{-sgn(x) pi i mu / 2} |x|^{-2 nu - 1}.
pub fn aut_factor(p: FlipParams, x: f64) -> Result<C64> {
    if x == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let phase = (C64::new(0.0, -x.signum() * PI / 2.0) * p.mu).exp();
    Ok(phase * principal_power(C64::new(x.abs(), 0.0), -2.0 * p.nu - 1.0)?)
}

/// f_{mu,nu,inf}(x) = J_{mu,nu}(x) f(-1/x); requires support away from 0.
pub fn infinity_flip(f: &TestFn, p: FlipParams) -> Result<TestFn> {
    if !f.vanishes_near_zero() {
        return Err(Error::SupportTouchesZero);
    }
    Ok(TestFn::Flip {
        inner: Box::new(f.clone()),
        p,
    })
}

fn bounded_support(f: &TestFn) -> Result<(f64, f64)> {
    f.support()
        .ok_or_else(|| Error::InvalidInput("test function needs compact support".into()))
}

/// Integral of f(x) e^{2 pi i x y} over the support.
pub fn fourier(f: &TestFn, y: f64, spec: &QuadratureSpec) -> Result<C64> {
    let (a, b) = bounded_support(f)?;
    if b <= a {
        return Ok(C64::new(0.0, 0.0));
    }
    oscillatory(|x| f.eval(x), a, b, y, spec)
}

fn oscillatory<F: Fn(f64) -> C64>(
    g: F,
    a: f64,
    b: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<C64> {
    let panels = (1.0 + 2.0 * y.abs() * (b - a)).ceil() as usize;
    let h = (b - a) / panels as f64;
    let sub = QuadratureSpec {
        abs_tol: spec.abs_tol / panels as f64,
        ..*spec
    };
    let mut total = C64::new(0.0, 0.0);
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == panels { b } else { lo + h };
        total += integrate_smooth(|x| g(x) * cis(2.0 * PI * x * y), lo, hi, &sub)?;
    }
    Ok(total)
}

fn sup_abs(f: &TestFn, a: f64, b: f64) -> f64 {
    (0..=400)
        .map(|k| f.eval(a + (b - a) * k as f64 / 400.0).norm())
        .fold(0.0, f64::max)
}

/// Twisted Fourier transform F_{mu,nu,inf}(f)(y) for f that may be nonzero at 0.
pub fn twisted_fourier(f: &TestFn, p: FlipParams, y: f64, spec: &QuadratureSpec) -> Result<C64> {
    let (a, b) = bounded_support(f)?;
    if a > 0.0 || b < 0.0 {
        return fourier(&infinity_flip(f, p)?, y, spec);
    }
    let e_plus = (C64::new(0.0, PI / 2.0) * p.mu).exp();
    let e_minus = (C64::new(0.0, -PI / 2.0) * p.mu).exp();
    if y == 0.0 {
        let w = 2.0 * p.nu;
        if let Some(n) = as_integer(-w, 1e-12) {
            if n >= 0 {
                // the delta-corrected limit is the finite part at w = -n
                let m = n as usize + 2;
                let w = C64::new(-(n as f64), 0.0);
                let v1 = local_zeta_parts(f, 1, w, m, Some(n as usize), spec)?;
                let v2 = local_zeta_parts(f, -1, w, m, Some(n as usize), spec)?;
                return Ok(e_plus * v1 + e_minus * v2);
            }
        }
        let m = default_order(w);
        return Ok(
            e_plus * local_zeta(f, 1, w, m, spec)? + e_minus * local_zeta(f, -1, w, m, spec)?
        );
    }
    // continuation in nu: F(f_nu)(y) = (2 pi i y)^{-2m} F((D_{nu+m-1}...D_nu f)_{nu+m})(y)
    let spec_m = (-p.nu.re).ceil().max(-1.0) as i64 + 1;
    let m = spec_m.max((3.0 - p.nu.re).ceil() as i64).max(0) as usize;
    if 2 * m > MAX_DERIVATIVE_ORDER {
        return Err(Error::DerivativeOrderExceeded {
            needed: 2 * m,
            available: MAX_DERIVATIVE_ORDER,
        });
    }
    let mut g = f.clone();
    for k in 0..m {
        g = TestFn::DNu {
            inner: Box::new(g),
            nu: p.nu + k as f64,
        };
    }
    let nu_m = p.nu + m as f64;
    let flip_p = FlipParams { mu: p.mu, nu: nu_m };
    let decay = 2.0 * nu_m.re;
    let c = (PI * p.mu.im.abs() / 2.0).exp() * sup_abs(&g, a, b).max(1e-300);
    let pref = 1.0 / (C64::new(0.0, 2.0 * PI * y)).powu(2 * m as u32);
    // tail of both half-lines: 2 C X^{-decay} / decay, scaled by |pref|
    let target = spec.abs_tol / 4.0 / pref.norm().max(1e-300);
    let x_max = (2.0 * c / (decay * target)).powf(1.0 / decay);
    let flipped = |x: f64| -> C64 {
        if x == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let t = -1.0 / x;
        if t < a || t > b {
            return C64::new(0.0, 0.0);
        }
        aut_factor(flip_p, x)
            .map(|j| j * g.eval(t))
            .unwrap_or(C64::new(0.0, 0.0))
    };
    let mut total = C64::new(0.0, 0.0);
    let right_lo = if a < 0.0 { -1.0 / a } else { f64::INFINITY };
    let left_hi = if b > 0.0 { -1.0 / b } else { f64::NEG_INFINITY };
    let inner_spec = QuadratureSpec {
        abs_tol: target / 4.0,
        max_panels: spec.max_panels.max(1 << 16),
        ..*spec
    };
    if right_lo < x_max {
        total += oscillatory(&flipped, right_lo, x_max, y, &inner_spec)?;
    }
    if left_hi > -x_max {
        total += oscillatory(&flipped, -x_max, left_hi, y, &inner_spec)?;
    }
    let v = pref * total;
    crate::numerics::check(v, "twisted_fourier")
}

/// Default Maclaurin subtraction order ceil(-Re s) + 2.
pub fn default_order(s: C64) -> usize {
    ((-s.re).ceil() + 2.0).max(0.0) as usize
}

/// Phi_eps(f; s) continued to Re s > -m.
pub fn local_zeta(f: &TestFn, eps: i32, s: C64, m: usize, spec: &QuadratureSpec) -> Result<C64> {
    local_zeta_parts(f, eps, s, m, None, spec)
}

/// Continued local zeta; `skip = Some(n)` drops the pole term n (finite part at s = -n).
pub fn local_zeta_parts(
    f: &TestFn,
    eps: i32,
    s: C64,
    m: usize,
    skip: Option<usize>,
    spec: &QuadratureSpec,
) -> Result<C64> {
    if eps != 1 && eps != -1 {
        return Err(Error::InvalidInput("eps must be +1 or -1".into()));
    }
    if s.re <= -(m as f64) && skip.is_none() {
        return Err(Error::InvalidInput(format!("need Re s > -m (m = {m})")));
    }
    let (a, b) = bounded_support(f)?;
    let e = eps as f64;
    // t-range where f(eps t) may be nonzero
    let (tlo, thi) = if eps == 1 {
        (a.max(0.0), b)
    } else {
        ((-b).max(0.0), -a)
    };
    let g = |t: f64| f.eval(e * t);
    let pow = |t: f64| ((s - 1.0) * t.ln()).exp();
    let zero_inside = a < 0.0 && b > 0.0;
    if !zero_inside {
        if thi <= tlo {
            return Ok(C64::new(0.0, 0.0));
        }
        let mut v = C64::new(0.0, 0.0);
        let lo = tlo.max(1e-300);
        if lo < 1.0 {
            v += integrate_smooth(|t| g(t) * pow(t), lo, thi.min(1.0), spec)?;
        }
        if thi > 1.0 {
            v += integrate_smooth(|t| g(t) * pow(t), lo.max(1.0), thi, spec)?;
        }
        return crate::numerics::check(v, "local_zeta");
    }
    // Maclaurin data c_n = f^{(n)}(0) / n!
    let kmax = m + 40;
    let jet = f.jet(0.0, kmax)?;
    let c: Vec<C64> = jet
        .0
        .iter()
        .enumerate()
        .map(|(n, v)| v * e.powi(n as i32))
        .collect();
    let mut poles = C64::new(0.0, 0.0);
    for (n, cn) in c.iter().enumerate().take(m) {
        if skip == Some(n) {
            continue;
        }
        if cn.norm() == 0.0 {
            continue;
        }
        let den = s + n as f64;
        if den.norm() < 1e-14 {
            return Err(Error::PoleHit(s.re));
        }
        poles += cn / den;
    }
    let phi_plus = if thi > 1.0 {
        integrate_smooth(|t| g(t) * pow(t), 1.0, thi, spec)?
    } else {
        C64::new(0.0, 0.0)
    };
    // near 0 integrate the Taylor remainder term by term
    let mut t0 = 0.25f64.min(thi.max(1e-3));
    loop {
        let last =
            c[kmax].norm() * t0.powi(kmax as i32) + c[kmax - 1].norm() * t0.powi(kmax as i32 - 1);
        let first = c
            .iter()
            .take(m + 1)
            .map(|v| v.norm())
            .fold(0.0, f64::max)
            .max(1e-300);
        if last <= 1e-17 * first || t0 < 1e-3 {
            break;
        }
        t0 *= 0.5;
    }
    let mut series = C64::new(0.0, 0.0);
    for (k, ck) in c.iter().enumerate().skip(m) {
        let ks = s + k as f64;
        series += ck * ((ks) * t0.ln()).exp() / ks;
    }
    let taylor = |t: f64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for n in (0..m).rev() {
            acc = acc * t + c[n];
        }
        acc
    };
    let phi_minus = integrate_smooth(|t| (g(t) - taylor(t)) * pow(t), t0, 1.0, spec)? + series;
    crate::numerics::check(phi_plus + phi_minus + poles, "local_zeta")
}

/// Relative truncation level of the transform table used by `local_zeta_of_fourier`.
const LFE_TABLE_FLOOR: f64 = 1e-17;

/// Phi_eps(F f; s) = int_0^inf F f(eps y) y^{s-1} dy for 0 < Re s, f compactly supported
/// away from 0. The transform is tabulated by FFT; [0, 2^-40] is handled by the first two
/// Taylor terms of F f at 0.
pub fn local_zeta_of_fourier(f: &TestFn, eps: i32, s: C64, spec: &QuadratureSpec) -> Result<C64> {
    if eps != 1 && eps != -1 {
        return Err(Error::InvalidInput("eps must be +1 or -1".into()));
    }
    if s.re <= 0.0 {
        return Err(Error::InvalidInput(
            "local_zeta_of_fourier needs Re s > 0".into(),
        ));
    }
    let (a, b) = bounded_support(f)?;
    let e = eps as f64;
    let table = FourierTable::build(|x| f.eval(x), a, b, LFE_TABLE_FLOOR)?;
    let g = |y: f64| table.eval(e * y);
    let pow = |y: f64| ((s - 1.0) * y.ln()).exp();
    let (x, w) = gl16();
    let panel = |lo: f64, hi: f64| -> C64 {
        let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        x.iter()
            .zip(w)
            .map(|(xi, wi)| g(c + h * xi) * pow(c + h * xi) * (wi * h))
            .sum()
    };
    let mut total = C64::new(0.0, 0.0);
    // geometric panels toward 0
    let levels = 40;
    for j in 0..levels {
        total += panel(0.5f64.powi(j + 1), 0.5f64.powi(j));
    }
    let delta = 0.5f64.powi(levels);
    let m0 = integrate_smooth(|t| f.eval(t), a, b, spec)?;
    let m1 = integrate_smooth(|t| f.eval(t) * t, a, b, spec)? * C64::new(0.0, 2.0 * PI * e);
    total += m0 * (s * delta.ln()).exp() / s + m1 * ((s + 1.0) * delta.ln()).exp() / (s + 1.0);
    // oscillation of F f is bounded by the reach of the support
    let width = 0.5 / table.reach();
    let n = (((table.cutoff - 1.0) / width).ceil() as usize).max(1);
    let h = (table.cutoff - 1.0).max(0.0) / n as f64;
    for k in 0..n {
        let lo = 1.0 + k as f64 * h;
        total += panel(lo, lo + h);
    }
    crate::numerics::check(total, "local_zeta_of_fourier")
}

/// Relative residual of (Phi_1(F f; s), Phi_-1(F f; s)) = (2 pi)^{-s} Gamma(s) (Phi_1(f; 1 - s), Phi_-1(f; 1 - s)) E(s)
/// for f supported away from 0 and 0 < Re s.
pub fn local_fe_residual(f: &TestFn, s: C64, spec: &QuadratureSpec) -> Result<f64> {
    if !f.vanishes_near_zero() {
        return Err(Error::SupportTouchesZero);
    }
    let lhs = [
        local_zeta_of_fourier(f, 1, s, spec)?,
        local_zeta_of_fourier(f, -1, s, spec)?,
    ];
    let k = (-s * (2.0 * PI).ln()).exp() * complex_gamma(s)?;
    let m = default_order(1.0 - s);
    let phi = [
        local_zeta(f, 1, 1.0 - s, m, spec)? * k,
        local_zeta(f, -1, 1.0 - s, m, spec)? * k,
    ];
    let e = crate::zeta_engine::matrix_e(s);
    let rhs = [
        phi[0] * e[0][0] + phi[1] * e[1][0],
        phi[0] * e[0][1] + phi[1] * e[1][1],
    ];
    let diff = ((lhs[0] - rhs[0]).norm_sqr() + (lhs[1] - rhs[1]).norm_sqr()).sqrt();
    let scale = (rhs[0].norm_sqr() + rhs[1].norm_sqr()).sqrt().max(1e-300);
    Ok(diff / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::complex_gamma;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn bump_values() {
        assert_eq!(bump_delta(0.4), 1.0);
        assert_eq!(bump_delta(2.5), 0.0);
        assert!((bump_delta(1.0) - 0.5).abs() < 1e-15);
        for &t in &[0.6, 0.9, 1.3, 1.9, -0.7] {
            assert!((bump_delta(t) + bump_delta(-1.0 / t) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bump_jet_matches_finite_differences() {
        for &t in &[0.7, 1.2, 1.6, -1.1] {
            let j = bump_jet(t, 3);
            let h = 1e-4;
            let fd1 = (bump_delta(t + h) - bump_delta(t - h)) / (2.0 * h);
            let fd2 = (bump_delta(t + h) - 2.0 * bump_delta(t) + bump_delta(t - h)) / (h * h);
            assert!((j.derivative(1).re - fd1).abs() < 1e-6, "t={t}");
            assert!((j.derivative(2).re - fd2).abs() < 1e-4, "t={t}");
        }
    }

    #[test]
    fn test_function_values() {
        assert!((TestFn::test_function(c(0.0), 1).eval(3.0) - 1.0).norm() < 1e-15);
        assert!((TestFn::test_function(c(2.0), 1).eval(3.0) - 9.0).norm() < 1e-12);
        assert_eq!(
            TestFn::test_function(C64::new(0.3, 2.0), 1).eval(-2.0),
            c(0.0)
        );
        assert_eq!(TestFn::delta_m(0).eval(0.0), c(1.0));
        assert_eq!(TestFn::delta_m(1).eval(0.0), c(0.0));
        assert!((TestFn::delta_m(2).eval(1.0) - 0.5).norm() < 1e-15);
    }

    #[test]
    fn aut_factor_examples() {
        let j = aut_factor(FlipParams::new(c(0.0), c(0.0)), 2.0).unwrap();
        assert!((j - 0.5).norm() < 1e-15);
        let j = aut_factor(FlipParams::new(c(1.0), c(0.0)), 1.0).unwrap();
        assert!((j - C64::new(0.0, -1.0)).norm() < 1e-15);
        let nu = C64::new(0.3, 0.2);
        let a = aut_factor(FlipParams::new(c(2.0), nu), -1.7).unwrap();
        let b = aut_factor(FlipParams::new(c(0.0), nu), -1.7).unwrap();
        assert!((a + b).norm() < 1e-14);
        assert_eq!(
            aut_factor(FlipParams::new(c(0.0), c(0.0)), 0.0),
            Err(Error::ZeroArgument)
        );
    }

    #[test]
    fn flip_examples() {
        let p = FlipParams::new(C64::new(0.4, 0.1), C64::new(0.3, -0.2));
        let f = TestFn::test_function(c(0.0), 1);
        let ff = infinity_flip(&f, p).unwrap();
        let want = (C64::new(0.0, PI / 2.0) * p.mu).exp()
            * (C64::new(3.0f64.ln(), 0.0) * (2.0 * p.nu + 1.0)).exp();
        assert!((ff.eval(-1.0 / 3.0) - want).norm() < 1e-13);
        let (a, b) = ff.support().unwrap();
        assert!((a + 1.0).abs() < 1e-15 && (b + 0.2).abs() < 1e-15);
        assert_eq!(
            infinity_flip(&TestFn::delta_m(0), p),
            Err(Error::SupportTouchesZero)
        );
    }

    #[test]
    fn flip_jet_matches_values() {
        let p = FlipParams::new(c(0.5), c(0.25));
        let ff = infinity_flip(&TestFn::test_function(c(0.5), 1), p).unwrap();
        let x = -0.45;
        let j = ff.jet(x, 2).unwrap();
        let h = 1e-5;
        let fd = (ff.eval(x + h) - ff.eval(x - h)) / (2.0 * h);
        assert!((j.value() - ff.eval(x)).norm() < 1e-14);
        assert!((j.derivative(1) - fd).norm() < 1e-6 * fd.norm().max(1.0));
    }

    #[test]
    fn fourier_at_zero_is_integral() {
        let spec = QuadratureSpec::default();
        let f = TestFn::delta_m(0);
        let direct = integrate_smooth(|x| f.eval(x), -2.0, 2.0, &spec).unwrap();
        assert!((fourier(&f, 0.0, &spec).unwrap() - direct).norm() < 1e-12);
        let v = fourier(&f, 1.7, &spec).unwrap();
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn local_zeta_gaussian() {
        // Phi_1(e^{-pi x^2}; s) = pi^{-s/2} Gamma(s/2) / 2, truncated far out
        let spec = QuadratureSpec::default();
        let f = TestFn::Gaussian(PI).times(TestFn::Bump {
            a: 1.0 / 8.0,
            b: 0.0,
        });
        for &s in &[
            C64::new(0.7, 1.0),
            C64::new(-1.3, 0.4),
            C64::new(-2.5, -3.0),
            C64::new(2.0, 0.0),
        ] {
            let m = default_order(s);
            let v = local_zeta(&f, 1, s, m, &spec).unwrap();
            let want = (-s / 2.0 * PI.ln()).exp() * complex_gamma(s / 2.0).unwrap() / 2.0;
            assert!(
                (v - want).norm() < 1e-9 * want.norm().max(1.0),
                "s={s}: {v} vs {want}"
            );
        }
    }

    #[test]
    fn local_zeta_pole_detection() {
        let spec = QuadratureSpec::default();
        let f = TestFn::delta_m(0);
        assert!(matches!(
            local_zeta(&f, 1, c(0.0), 2, &spec),
            Err(Error::PoleHit(_))
        ));
        // delta'(f) = 0 for the even bump, so s = -1 is regular
        assert!(local_zeta(&f, 1, c(-1.0), 3, &spec).is_ok());
    }

    #[test]
    fn local_zeta_at_one() {
        let spec = QuadratureSpec::default();
        let f = TestFn::delta_m(0);
        let v = local_zeta(&f, 1, c(1.0), 0, &spec).unwrap();
        let direct = integrate_smooth(|x| f.eval(x), 0.0, 2.0, &spec).unwrap();
        assert!((v - direct).norm() < 1e-12);
    }
}
