//! Whittaker functions, Fourier expansions of Maass forms built from pair
//! data, the slash action and finite-difference Laplacian checks.

use crate::cover_group::{act, cocycle_j, to_real, IntMat, Mat, MultiplierSystem};
use crate::error::{Error, Result};
use crate::lattice::{as_integer, s_nu, Coefficients, DeltaVector, ShiftedLattice};
use crate::numerics::{
    cis, factorial, integrate_exp_sinh, ln_gamma, principal_arg, recip_gamma, QuadratureSpec, C64,
};
use std::f64::consts::PI;

/// |nu| below this counts as nu = 0.
pub const NU_ZERO_TOL: f64 = 1e-8;
/// Truncation target for the nonconstant part of an expansion.
pub const TAIL_TOL: f64 = 1e-10;
/// Smallest Im z accepted by the expansion evaluator.
pub const MIN_HEIGHT: f64 = 0.1;

const W_REL_TOL: f64 = 1e-13;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// W_{kappa,mu}(y) from the Laplace-type integral; needs Re(mu - kappa + 1/2) > 0.
fn whittaker_integral(kappa: C64, mu: C64, y: f64) -> Result<C64> {
    let a = mu - kappa + 0.5;
    let b = mu + kappa - 0.5;
    let pref = -0.5 * y + kappa * y.ln() - ln_gamma(a)?;
    let spec = QuadratureSpec {
        abs_tol: 0.0,
        rel_tol: W_REL_TOL,
        max_panels: 1,
    };
    integrate_exp_sinh(
        |t| (pref - t + (a - 1.0) * t.ln() + b * (t / y).ln_1p()).exp(),
        &spec,
    )
}

/// W_{kappa,mu}(y) using the given mu (no mu -> -mu swap). Parameters with
/// Re(mu - kappa + 1/2) < 1 are reached by the upward recurrence in kappa
/// W_{k+1} = (y - 2k) W_k - ((k - 1/2)^2 - mu^2) W_{k-1}.
pub fn whittaker_w_with(kappa: C64, mu: C64, y: f64) -> Result<C64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::InvalidInput(format!(
            "whittaker argument must be positive, got {y}"
        )));
    }
    if kappa.norm() > 10.0 || mu.re.abs() > 5.0 || mu.norm() > 10.0 {
        return Err(Error::ParameterOutOfRange(format!(
            "W_{{{kappa},{mu}}} outside |kappa| <= 10, |Re nu| <= 5"
        )));
    }
    let re_a = (mu - kappa + 0.5).re;
    if re_a >= 1.0 {
        return whittaker_integral(kappa, mu, y);
    }
    let m = (1.0 - re_a).ceil() as usize;
    let k0 = kappa - m as f64;
    let mut prev = whittaker_integral(k0 - 1.0, mu, y)?;
    let mut cur = whittaker_integral(k0, mu, y)?;
    for j in 0..m {
        let k = k0 + j as f64;
        let next = (y - 2.0 * k) * cur - ((k - 0.5) * (k - 0.5) - mu * mu) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Whittaker's function W_{kappa,nu}(y) for y > 0.
pub fn whittaker_w(kappa: C64, nu: C64, y: f64) -> Result<C64> {
    // W is even in nu; take the sign that needs fewer recurrence steps
    let mu = if (nu - kappa).re >= (-nu - kappa).re {
        nu
    } else {
        -nu
    };
    whittaker_w_with(kappa, mu, y)
}

/// d(n, kappa) = i^n prod_{j<n} (kappa + n - 1 - 2j).
pub fn dn_kappa(n: u32, kappa: f64) -> C64 {
    let prod: f64 = (0..n)
        .map(|j| kappa + n as f64 - 1.0 - 2.0 * j as f64)
        .product();
    C64::new(0.0, 1.0).powu(n) * prod
}

fn is_odd_integer(x: f64) -> bool {
    let r = x.round();
    (x - r).abs() < 1e-12 && (r as i64).rem_euclid(2) == 1
}

fn is_even_integer(x: f64) -> bool {
    let r = x.round();
    (x - r).abs() < 1e-9 && (r as i64).rem_euclid(2) == 0
}

/// j(kappa) = sum_{i>=0} (1/(2i+1-kappa) + 1/(2i+1+kappa) - 1/(i+1)) - log 2.
/// Direct summation to N, then an Euler-Maclaurin tail.
pub fn j_kappa(kappa: f64, tol: f64) -> Result<f64> {
    if is_odd_integer(kappa) {
        return Err(Error::OddIntegerKappa(kappa));
    }
    if !(tol > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidInput(
            "j_kappa needs tol > 0 and finite kappa".into(),
        ));
    }
    // remainder after the f''' term is O(N^-6)
    let mut n = 1000 + 2 * kappa.abs().ceil() as usize;
    while (n as f64).powi(-6) > tol && n < 1 << 20 {
        n *= 2;
    }
    let f =
        |x: f64| 1.0 / (2.0 * x + 1.0 - kappa) + 1.0 / (2.0 * x + 1.0 + kappa) - 1.0 / (x + 1.0);
    let f1 = |x: f64| {
        -2.0 / (2.0 * x + 1.0 - kappa).powi(2) - 2.0 / (2.0 * x + 1.0 + kappa).powi(2)
            + 1.0 / (x + 1.0).powi(2)
    };
    let f3 = |x: f64| {
        -48.0 / (2.0 * x + 1.0 - kappa).powi(4) - 48.0 / (2.0 * x + 1.0 + kappa).powi(4)
            + 6.0 / (x + 1.0).powi(4)
    };
    // sum from the small terms up
    let direct: f64 = (0..n).rev().map(|i| f(i as f64)).sum();
    let x = n as f64;
    let integral =
        2f64.ln() - 0.5 * ((2.0 * x + 1.0 - kappa) * (2.0 * x + 1.0 + kappa)).ln() + (x + 1.0).ln();
    let tail = integral + f(x) / 2.0 - f1(x) / 12.0 + f3(x) / 720.0;
    Ok(direct + tail - 2f64.ln())
}

fn sign_power(mu: f64, kappa: f64) -> Result<f64> {
    let k = (mu - kappa) / 2.0;
    let r = k.round();
    if (k - r).abs() > 1e-9 {
        return Err(Error::StructuralViolation(format!(
            "kappa = {kappa} is not in mu + 2Z for mu = {mu}"
        )));
    }
    Ok(if (r as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    })
}

fn neg_two_nu(nu: C64) -> Option<u32> {
    match as_integer(-2.0 * nu, NU_ZERO_TOL) {
        Some(n) if n >= 0 => Some(n as u32),
        _ => None,
    }
}

fn gamma_quotient_l0(nu: C64, kappa: f64) -> Result<C64> {
    let two_nu = 2.0 * nu;
    let g = ln_gamma(two_nu)?.exp();
    let p = ((1.0 - two_nu) * 2f64.ln()).exp();
    Ok(p * PI
        * g
        * recip_gamma((two_nu + 1.0 - kappa) / 2.0)?
        * recip_gamma((two_nu + 1.0 + kappa) / 2.0)?)
}

fn factorial_case(n: u32, kappa: f64) -> C64 {
    let k = kappa.abs();
    let top = ((k + n as f64 - 1.0) / 2.0).round() as usize;
    let bot = ((k - n as f64 - 1.0) / 2.0).round() as usize;
    let sign = if bot % 2 == 0 { 1.0 } else { -1.0 };
    C64::new(
        sign * 2f64.powi(n as i32) * PI * factorial(top) / (factorial(n as usize) * factorial(bot)),
        0.0,
    )
}

/// Parity of |kappa| - n + 1 when it is an even integer: Some(true) for > 0.
fn even_gap(kappa: f64, n: u32) -> Option<bool> {
    let g = kappa.abs() - n as f64 + 1.0;
    if is_even_integer(g) {
        Some(g > 0.5)
    } else {
        None
    }
}

/// Jacquet integral J_l(F_{nu,kappa}) in closed form. The returned value
/// omits the e^{pi i kappa/2} that the Poisson transform multiplies back in.
pub fn jacquet_value(l: f64, nu: C64, kappa: f64, mu: f64) -> Result<C64> {
    sign_power(mu, kappa)?;
    let phase = cis(-PI * kappa / 2.0);
    if l != 0.0 {
        let sg = l.signum();
        let w = whittaker_w(C64::new(sg * kappa / 2.0, 0.0), nu, 4.0 * PI * l.abs())?;
        let pw = ((nu + 0.5) * PI.ln() + (nu - 0.5) * l.abs().ln()).exp();
        return Ok(phase * pw * w * recip_gamma((2.0 * nu + 1.0 + sg * kappa) / 2.0)?);
    }
    let Some(n) = neg_two_nu(nu) else {
        return Ok(phase * gamma_quotient_l0(nu, kappa)?);
    };
    if n == 0 && !is_even_integer(mu - 1.0) {
        return Ok(phase * 2.0 * j_kappa(kappa, 1e-15)? * (PI * kappa / 2.0).cos());
    }
    match even_gap(kappa, n) {
        Some(true) => Ok(phase * factorial_case(n, kappa)),
        Some(false) => Ok(zero()),
        None => Err(Error::CaseNotCovered(format!(
            "l = 0, -2 nu = {n}, kappa = {kappa}, mu = {mu}"
        ))),
    }
}

/// Fourier expansion at infinity of the Maass form attached to (alpha, beta).
#[derive(Debug, Clone, PartialEq)]
pub struct MaassExpansion {
    pub lattice: ShiftedLattice,
    pub alpha: Coefficients,
    pub a0: C64,
    pub b0: C64,
    pub nu: C64,
    pub kappa: f64,
    /// b0 multiplies y^{1/2} log y instead of y^{nu + 1/2}
    pub log_branch: bool,
    pub notes: Vec<String>,
}

impl MaassExpansion {
    /// The expansion with every coefficient zero.
    pub fn zero(lattice: ShiftedLattice, nu: C64, kappa: f64) -> Self {
        MaassExpansion {
            lattice,
            alpha: Coefficients::zero(lattice),
            a0: zero(),
            b0: zero(),
            nu,
            kappa,
            log_branch: nu.norm() < NU_ZERO_TOL,
            notes: Vec::new(),
        }
    }

    /// a(l) for nonzero l.
    pub fn coefficient(&self, l: f64) -> Result<C64> {
        let al = self.alpha.eval(l);
        if l == 0.0 || al.norm() == 0.0 {
            return Ok(zero());
        }
        let nu = self.nu;
        let pw = ((nu + 0.5) * PI.ln() + (nu - 0.5) * l.abs().ln()).exp();
        Ok(pw * al * recip_gamma((2.0 * nu + 1.0 + l.signum() * self.kappa) / 2.0)?)
    }

    /// Cutoff X with the nonconstant tail beyond X below TAIL_TOL at height y.
    pub fn auto_cutoff(&self, y: f64) -> Result<f64> {
        let nu = self.nu;
        let g = [1.0, -1.0]
            .iter()
            .map(|s| recip_gamma((2.0 * nu + 1.0 + s * self.kappa) / 2.0).map(|v| v.norm()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let spacing = self.lattice.u2.abs();
        let c = self
            .alpha
            .growth_constant(64.0)
            .max(self.alpha.growth_constant(1.0))
            .max(1e-300);
        let r = self.alpha.growth;
        let bound = |x: f64| {
            let w = (-2.0 * PI * x * y).exp()
                * (1.0 + 4.0 * PI * x * y).powf(self.kappa.abs() / 2.0 + 1.0);
            c * x.powf(r + nu.re - 0.5).max(1.0) * PI.powf(nu.re + 0.5) * g * w
                / (1.0 - (-2.0 * PI * y * spacing).exp())
        };
        let mut x = spacing;
        while 2.0 * bound(x) > TAIL_TOL {
            x += spacing;
            if x > 1e6 {
                return Err(Error::ToleranceNotReached {
                    what: "auto_cutoff",
                    estimate: bound(x),
                });
            }
        }
        Ok(x)
    }
}

/// Expansion coefficients of the Poisson transform of (alpha, beta).
pub fn expansion_from_pair(
    alpha: &Coefficients,
    beta: &DeltaVector,
    mu: f64,
    nu: C64,
    kappa: f64,
) -> Result<MaassExpansion> {
    let sign = sign_power(mu, kappa)?;
    let lat = alpha.lattice;
    let mu_c = C64::new(mu, 0.0);
    if !crate::lattice::in_m0(alpha, mu_c, nu) {
        return Err(Error::StructuralViolation(
            "alpha is not in the admissible class M(L)^0".into(),
        ));
    }
    let allowed = s_nu(&lat, nu);
    if let Some(m) = beta.support().into_iter().find(|m| !allowed.contains(m)) {
        return Err(Error::StructuralViolation(format!(
            "beta({m}) != 0 outside S_nu(L) = {allowed:?}"
        )));
    }
    let mut notes = Vec::new();
    let log_branch = nu.norm() < NU_ZERO_TOL;
    if log_branch && nu.norm() > 0.0 {
        notes.push(format!("|nu| = {:e} treated as nu = 0", nu.norm()));
    }
    let has_zero = lat.contains_zero();
    let a_zero = alpha.zero_value();
    let n_opt = neg_two_nu(nu);
    let mut hits: Vec<(usize, C64)> = Vec::new();
    if has_zero {
        match n_opt {
            None => hits.push((1, gamma_quotient_l0(nu, kappa)? * a_zero)),
            Some(n) => {
                if even_gap(kappa, n) == Some(true) {
                    hits.push((
                        2,
                        factorial_case(n, kappa) * a_zero + sign * beta.get(n) * dn_kappa(n, kappa),
                    ));
                }
                if n > 0 && !is_even_integer(mu + n as f64 - 1.0) {
                    hits.push((3, sign * dn_kappa(n, kappa) * beta.get(n)));
                }
                if n == 0 && !is_even_integer(mu - 1.0) {
                    let j = j_kappa(kappa, 1e-15)?;
                    hits.push((
                        4,
                        2.0 * j * a_zero * (PI * kappa / 2.0).cos() + sign * beta.get(0),
                    ));
                }
            }
        }
    }
    if hits.len() > 1 {
        let ids: Vec<usize> = hits.iter().map(|h| h.0).collect();
        notes.push(format!(
            "non-generic parameters: constant-term cases {ids:?} all apply, using case {}",
            ids[0]
        ));
    }
    let a0 = hits.first().map(|h| h.1).unwrap_or(zero());
    let b0 = if !has_zero {
        zero()
    } else if log_branch {
        -2.0 * (PI * kappa / 2.0).cos() * a_zero
    } else {
        sign * beta.get(0)
    };
    Ok(MaassExpansion {
        lattice: lat,
        alpha: alpha.clone(),
        a0,
        b0,
        nu,
        kappa,
        log_branch,
        notes,
    })
}

/// phi(z) from its expansion, truncating at |l| <= X (automatic when None).
pub fn eval_maass(e: &MaassExpansion, z: C64, x_max: Option<f64>) -> Result<C64> {
    let (x, y) = (z.re, z.im);
    if !(y >= MIN_HEIGHT) {
        return Err(Error::ParameterOutOfRange(format!(
            "Im z = {y} below {MIN_HEIGHT}"
        )));
    }
    let cut = match x_max {
        Some(v) => v,
        None => e.auto_cutoff(y)?,
    };
    let mut total = zero();
    for (l, _) in e.alpha.support(cut) {
        let a = e.coefficient(l)?;
        if a.norm() == 0.0 {
            continue;
        }
        let w = whittaker_w(
            C64::new(l.signum() * e.kappa / 2.0, 0.0),
            e.nu,
            4.0 * PI * l.abs() * y,
        )?;
        total += a * w * cis(2.0 * PI * l * x);
    }
    let ly = y.ln();
    total += e.a0 * ((0.5 - e.nu) * ly).exp();
    total += if e.log_branch {
        e.b0 * y.sqrt() * ly
    } else {
        e.b0 * ((e.nu + 0.5) * ly).exp()
    };
    Ok(total)
}

/// (phi |_kappa g)(z) = (J(g, z) / |J(g, z)|)^{-kappa} phi(g z).
pub fn slash<F: Fn(C64) -> Result<C64>>(phi: F, kappa: f64, g: &Mat, z: C64) -> Result<C64> {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if (det - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnimodular(det));
    }
    if !(z.im > 0.0) {
        return Err(Error::InvalidInput("slash needs Im z > 0".into()));
    }
    let j = cocycle_j(g, z);
    Ok(cis(-kappa * principal_arg(j)) * phi(act(g, z))?)
}

/// |Omega_kappa phi(z) - (1/4 - nu^2) phi(z)| with central differences of step h,
/// Omega_kappa = -y^2 (d_xx + d_yy) + i kappa y d_x.
pub fn laplacian_residual<F: Fn(C64) -> Result<C64>>(
    phi: F,
    kappa: f64,
    nu: C64,
    z: C64,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) || h > 1e-2 * z.im {
        return Err(Error::InvalidInput(format!(
            "step h = {h} must lie in (0, Im z / 100]"
        )));
    }
    let f0 = phi(z)?;
    let fxp = phi(z + h)?;
    let fxm = phi(z - h)?;
    let fyp = phi(z + C64::new(0.0, h))?;
    let fym = phi(z - C64::new(0.0, h))?;
    let y = z.im;
    let lap = (fxp + fxm + fyp + fym - 4.0 * f0) / (h * h);
    let dx = (fxp - fxm) / (2.0 * h);
    let omega = -y * y * lap + C64::new(0.0, kappa * y) * dx;
    Ok((omega - (0.25 - nu * nu) * f0).norm())
}

/// Largest |(phi |_kappa gamma)(z) - v(gamma) phi(z)| over generators and samples.
pub fn automorphy_residual(
    e: &MaassExpansion,
    v: &MultiplierSystem,
    generators: &[IntMat],
    z_samples: &[C64],
    x_max: Option<f64>,
) -> Result<f64> {
    let phi = |z: C64| eval_maass(e, z, x_max);
    let mut worst: f64 = 0.0;
    for g in generators {
        let vg = v.eval(g)?;
        let gr = to_real(g);
        for &z in z_samples {
            if act(&gr, z).im < MIN_HEIGHT {
                return Err(Error::ParameterOutOfRange(format!(
                    "gamma z has Im below {MIN_HEIGHT}"
                )));
            }
            let lhs = slash(phi, e.kappa, &gr, z)?;
            worst = worst.max((lhs - vg * phi(z)?).norm());
        }
    }
    Ok(worst)
}
