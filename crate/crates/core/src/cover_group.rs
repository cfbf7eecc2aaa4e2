//! The universal covering group of SL(2, R) as pairs (g, theta), multiplier
//! systems on Gamma_0(N) and the lattices they determine.

use crate::error::{Error, Result};
use crate::lattice::ShiftedLattice;
use crate::numerics::{cis, principal_arg, C64};
use std::collections::BTreeMap;
use std::f64::consts::PI;

pub type Mat = [[f64; 2]; 2];
pub type IntMat = [[i64; 2]; 2];

const PHASE_TOL: f64 = 1e-10;

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub fn int_mul(a: &IntMat, b: &IntMat) -> IntMat {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub fn to_real(g: &IntMat) -> Mat {
    [
        [g[0][0] as f64, g[0][1] as f64],
        [g[1][0] as f64, g[1][1] as f64],
    ]
}

pub fn det(g: &Mat) -> f64 {
    g[0][0] * g[1][1] - g[0][1] * g[1][0]
}

/// Inverse of a determinant-one matrix.
pub fn mat_inv(g: &Mat) -> Mat {
    [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]]
}

/// J(g, z) = cz + d.
pub fn cocycle_j(g: &Mat, z: C64) -> C64 {
    g[1][0] * z + g[1][1]
}

/// Moebius action (az + b) / (cz + d).
pub fn act(g: &Mat, z: C64) -> C64 {
    (g[0][0] * z + g[0][1]) / cocycle_j(g, z)
}

fn i_unit() -> C64 {
    C64::new(0.0, 1.0)
}

/// Round theta to the nearest multiple of pi when it is within tolerance.
fn pi_multiple(theta: f64) -> Option<i64> {
    let m = (theta / PI).round();
    if (theta - m * PI).abs() <= PHASE_TOL * (1.0 + theta.abs()) {
        Some(m as i64)
    } else {
        None
    }
}

/// An element (g, theta) with J(g, i) e^{i theta} > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringElement {
    pub g: Mat,
    pub theta: f64,
}

impl CoveringElement {
    pub fn new(g: Mat, theta: f64) -> Result<Self> {
        let dt = det(&g);
        if (dt - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnimodular(dt));
        }
        let w = cocycle_j(&g, i_unit()) * cis(theta);
        if w.re <= 0.0 || w.im.abs() > PHASE_TOL * w.norm() * (1.0 + theta.abs()) {
            return Err(Error::NotInGroup(format!(
                "phase {theta} does not lift {g:?}"
            )));
        }
        Ok(CoveringElement { g, theta })
    }

    pub fn identity() -> Self {
        CoveringElement {
            g: [[1.0, 0.0], [0.0, 1.0]],
            theta: 0.0,
        }
    }

    pub fn u(x: f64) -> Self {
        CoveringElement {
            g: [[1.0, x], [0.0, 1.0]],
            theta: 0.0,
        }
    }

    pub fn a(y: f64) -> Self {
        let r = y.sqrt();
        CoveringElement {
            g: [[r, 0.0], [0.0, 1.0 / r]],
            theta: 0.0,
        }
    }

    /// k(theta) = [[cos, sin], [-sin, cos]] lifted with phase theta, so J(k, i) = e^{-i theta}.
    pub fn k(theta: f64) -> Self {
        let q = (2.0 * theta / PI).round();
        let (s, c) = match (2.0 * theta - q * PI).abs() <= 4.0 * f64::EPSILON * (1.0 + theta.abs())
        {
            true => [(0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)]
                [(q as i64).rem_euclid(4) as usize],
            false => theta.sin_cos(),
        };
        CoveringElement {
            g: [[c, s], [-s, c]],
            theta,
        }
    }

    pub fn w() -> Self {
        CoveringElement {
            g: [[0.0, -1.0], [1.0, 0.0]],
            theta: -PI / 2.0,
        }
    }

    /// Lift of the lower unipotent [[1, 0], [x, 1]].
    pub fn ubar(x: f64) -> Self {
        section(&[[1.0, 0.0], [x, 1.0]]).expect("unipotent")
    }

    pub fn inverse(&self) -> Self {
        let gi = mat_inv(&self.g);
        let theta =
            principal_arg(cocycle_j(&self.g, act(&gi, i_unit())) / cocycle_j(&self.g, i_unit()))
                - self.theta;
        CoveringElement { g: gi, theta }
    }

    /// Distance to another element: max entry difference plus phase difference.
    pub fn distance(&self, o: &CoveringElement) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.g[i][j] - o.g[i][j]).abs());
            }
        }
        m.max((self.theta - o.theta).abs())
    }
}

/// Group law with theta = theta_1 + theta_2 - arg(J(g1, g2 i) / J(g1, i)).
pub fn multiply(a: &CoveringElement, b: &CoveringElement) -> CoveringElement {
    let g = mat_mul(&a.g, &b.g);
    let corr = principal_arg(cocycle_j(&a.g, act(&b.g, i_unit())) / cocycle_j(&a.g, i_unit()));
    CoveringElement {
        g,
        theta: a.theta + b.theta - corr,
    }
}

/// The section g -> (g, -arg J(g, i)).
pub fn section(g: &Mat) -> Result<CoveringElement> {
    let dt = det(g);
    if (dt - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnimodular(dt));
    }
    Ok(CoveringElement {
        g: *g,
        theta: -principal_arg(cocycle_j(g, i_unit())),
    })
}

/// (x, y, theta) with a = u(x) a(y) k(theta).
pub fn iwasawa(a: &CoveringElement) -> (f64, f64, f64) {
    let z = act(&a.g, i_unit());
    (z.re, z.im, a.theta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bruhat {
    /// u(x) a(y) k(m pi) w u(t), for c != 0
    Big { x: f64, y: f64, m: i64, t: f64 },
    /// u(x) a(y) k(m pi), for c = 0
    Small { x: f64, y: f64, m: i64 },
}

pub fn bruhat(a: &CoveringElement) -> Result<Bruhat> {
    let [[ga, gb], [gc, gd]] = a.g;
    let scale = a.g.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if gc.abs() > 1e-14 * scale {
        let phase = a.theta + principal_arg(cocycle_j(&a.g, i_unit()) / gc);
        let m = pi_multiple(phase)
            .ok_or_else(|| Error::NotInGroup(format!("Bruhat phase {phase} not in pi Z")))?;
        Ok(Bruhat::Big {
            x: ga / gc,
            y: 1.0 / (gc * gc),
            m,
            t: gd / gc,
        })
    } else {
        let m = pi_multiple(a.theta)
            .ok_or_else(|| Error::NotInGroup(format!("Bruhat phase {} not in pi Z", a.theta)))?;
        Ok(Bruhat::Small {
            x: gb / gd,
            y: ga / gd,
            m,
        })
    }
}

impl Bruhat {
    pub fn compose(&self) -> CoveringElement {
        match *self {
            Bruhat::Big { x, y, m, t } => {
                let mut e = multiply(&CoveringElement::u(x), &CoveringElement::a(y));
                e = multiply(&e, &CoveringElement::k(m as f64 * PI));
                e = multiply(&e, &CoveringElement::w());
                multiply(&e, &CoveringElement::u(t))
            }
            Bruhat::Small { x, y, m } => {
                let e = multiply(&CoveringElement::u(x), &CoveringElement::a(y));
                multiply(&e, &CoveringElement::k(m as f64 * PI))
            }
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Dedekind sum s(h, k) for k > 0, gcd(h, k) = 1, via reciprocity.
pub fn dedekind_sum(h: i64, k: i64) -> f64 {
    assert!(k > 0, "dedekind_sum needs k > 0");
    let mut h = h.rem_euclid(k);
    let mut k = k;
    let mut sign = 1.0;
    let mut acc = 0.0;
    // s(h, k) + s(k, h) = (h/k + k/h + 1/(hk)) / 12 - 1/4
    while h != 0 {
        let (hf, kf) = (h as f64, k as f64);
        acc += sign * ((hf / kf + kf / hf + 1.0 / (hf * kf)) / 12.0 - 0.25);
        sign = -sign;
        let r = k.rem_euclid(h);
        k = h;
        h = r;
    }
    // s(0, 1) = 0
    acc
}

/// Jacobi symbol (a/n), n odd positive.
pub fn jacobi(a: i64, n: i64) -> i64 {
    assert!(n > 0 && n % 2 == 1, "jacobi needs odd n > 0");
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Extended quadratic residue symbol (c/d) for odd d, with (0/+-1) = 1 and
/// a sign flip when c < 0 and d < 0.
pub fn shimura_symbol(c: i64, d: i64) -> i64 {
    let base = jacobi(c, d.abs());
    if c < 0 && d < 0 {
        -base
    } else {
        base
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierKind {
    /// v = 1; weight must be an even integer
    Trivial,
    /// eta^{2 kappa} multiplier, restricted to Gamma_0(level)
    EtaPower,
    /// multiplier of sum_n e^{2 pi i n^2 z} on Gamma_0(4), weight 1/2
    Theta4,
    /// explicit values on listed matrices
    Table(BTreeMap<[i64; 4], (f64, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSystem {
    pub level: i64,
    pub kappa: f64,
    pub kind: MultiplierKind,
}

impl MultiplierSystem {
    pub fn trivial(level: i64, kappa: f64) -> Result<Self> {
        if (kappa / 2.0 - (kappa / 2.0).round()).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "trivial multiplier needs even weight, got {kappa}"
            )));
        }
        MultiplierSystem::checked(level, kappa, MultiplierKind::Trivial)
    }

    pub fn eta_power(level: i64, kappa: f64) -> Result<Self> {
        MultiplierSystem::checked(level, kappa, MultiplierKind::EtaPower)
    }

    pub fn theta4() -> Self {
        MultiplierSystem {
            level: 4,
            kappa: 0.5,
            kind: MultiplierKind::Theta4,
        }
    }

    pub fn table(level: i64, kappa: f64, entries: BTreeMap<[i64; 4], (f64, f64)>) -> Result<Self> {
        MultiplierSystem::checked(level, kappa, MultiplierKind::Table(entries))
    }

    fn checked(level: i64, kappa: f64, kind: MultiplierKind) -> Result<Self> {
        if level < 1 || !kappa.is_finite() {
            return Err(Error::InvalidInput(
                "multiplier needs level >= 1 and finite weight".into(),
            ));
        }
        Ok(MultiplierSystem { level, kappa, kind })
    }

    pub fn in_group(&self, g: &IntMat) -> bool {
        g[0][0] * g[1][1] - g[0][1] * g[1][0] == 1 && g[1][0].rem_euclid(self.level) == 0
    }

    pub fn eval(&self, g: &IntMat) -> Result<C64> {
        if !self.in_group(g) {
            return Err(Error::NotInGroup(format!(
                "{g:?} is not in Gamma_0({})",
                self.level
            )));
        }
        match &self.kind {
            MultiplierKind::Trivial => Ok(C64::new(1.0, 0.0)),
            MultiplierKind::EtaPower => Ok(eta_power_value(self.kappa, g)),
            MultiplierKind::Theta4 => {
                let [[_, _], [c, d]] = *g;
                let eps_inv = if d.rem_euclid(4) == 1 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, -1.0)
                };
                let sym = if c == 0 { 1 } else { shimura_symbol(c, d) };
                Ok(eps_inv * sym as f64)
            }
            MultiplierKind::Table(t) => t
                .get(&[g[0][0], g[0][1], g[1][0], g[1][1]])
                .map(|(re, im)| C64::new(*re, *im))
                .ok_or_else(|| Error::NotInGroup(format!("{g:?} not in the multiplier table"))),
        }
    }

    /// v(g1 g2) / (v(g1) v(g2) J(g1, g2 z)^k J(g2, z)^k / J(g1 g2, z)^k) - 1 at z.
    pub fn consistency_defect(&self, g1: &IntMat, g2: &IntMat, z: C64) -> Result<f64> {
        let k = C64::new(self.kappa, 0.0);
        let (r1, r2) = (to_real(g1), to_real(g2));
        let g12 = int_mul(g1, g2);
        let r12 = to_real(&g12);
        let pw = |w: C64| crate::numerics::principal_power(w, k);
        let rhs = self.eval(g1)?
            * self.eval(g2)?
            * pw(cocycle_j(&r1, act(&r2, z)))?
            * pw(cocycle_j(&r2, z))?
            / pw(cocycle_j(&r12, z))?;
        Ok((self.eval(&g12)? - rhs).norm())
    }
}

fn eta_power_value(kappa: f64, g: &IntMat) -> C64 {
    let [[a, b], [c, d]] = *g;
    if c > 0 {
        let e = (a + d) as f64 / (12.0 * c as f64) - dedekind_sum(d, c) - 0.25;
        cis(2.0 * kappa * PI * e)
    } else if c < 0 {
        // v(-g) = e^{pi i kappa} v(g') with g' = -g having c' > 0
        cis(PI * kappa) * eta_power_value(kappa, &[[-a, -b], [-c, -d]])
    } else if d == 1 {
        cis(PI * kappa * b as f64 / 6.0)
    } else {
        // -u(-b)
        cis(-PI * kappa) * cis(-PI * kappa * b as f64 / 6.0)
    }
}

/// chi(gamma, theta) = v(gamma) e^{i kappa (theta + arg J(gamma, i))}.
pub fn chi_tilde(v: &MultiplierSystem, a: &CoveringElement) -> Result<C64> {
    let mut g = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let x = a.g[i][j];
            if (x - x.round()).abs() > 1e-9 {
                return Err(Error::NotInGroup(format!("{:?} is not integral", a.g)));
            }
            g[i][j] = x.round() as i64;
        }
    }
    let val = v.eval(&g)?;
    Ok(val * cis(v.kappa * (a.theta + principal_arg(cocycle_j(&a.g, i_unit())))))
}

/// L = u + Z and Lhat = N^{-1}(uhat + Z) from v(u(1)) = e^{2 pi i u}, v(ubar(-N)) = e^{2 pi i uhat}.
pub fn lattices_from_multiplier(v: &MultiplierSystem) -> Result<(ShiftedLattice, ShiftedLattice)> {
    let frac = |z: C64| {
        let t = principal_arg(z) / (2.0 * PI);
        let f = t.rem_euclid(1.0);
        if (1.0 - f) < 1e-12 {
            0.0
        } else {
            f
        }
    };
    let u = frac(v.eval(&[[1, 1], [0, 1]])?);
    let n = v.level;
    let uhat = frac(v.eval(&[[1, 0], [-n, 1]])?);
    Ok((
        ShiftedLattice::new(u, 1.0)?,
        ShiftedLattice::new(uhat / n as f64, 1.0 / n as f64)?,
    ))
}

/// Smallest-|b| completion (a, b) with a d - N b c = 1.
pub fn complete_row(n: i64, c: i64, d: i64) -> Result<(i64, i64)> {
    let nc = n * c;
    if gcd(nc, d) != 1 {
        return Err(Error::CompletionFailure { c, d });
    }
    // x d + y nc = 1
    let (mut r0, mut r1) = (d, nc);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    // r0 = +-1
    let (mut a, mut b) = (x0 * r0, -y0 * r0);
    if d != 0 {
        // shift (a, b) -> (a + k N c, b + k d) to minimize |b|
        let k = (-(b as f64) / d as f64).round() as i64;
        a += k * nc;
        b += k * d;
    }
    debug_assert_eq!(a * d - b * nc, 1);
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedekind_examples() {
        assert!(dedekind_sum(1, 2).abs() < 1e-15);
        assert!((dedekind_sum(1, 3) - 1.0 / 18.0).abs() < 1e-15);
        // brute force against the sawtooth definition
        let saw = |x: f64| {
            if (x - x.round()).abs() < 1e-12 {
                0.0
            } else {
                x - x.floor() - 0.5
            }
        };
        for k in 1..40i64 {
            for h in -20..20i64 {
                if gcd(h, k) != 1 {
                    continue;
                }
                let b: f64 = (1..k)
                    .map(|r| saw(r as f64 / k as f64) * saw((h * r) as f64 / k as f64))
                    .sum();
                assert!((dedekind_sum(h, k) - b).abs() < 1e-12, "s({h},{k})");
            }
        }
    }

    #[test]
    fn covering_examples() {
        let w = section(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert!(w.distance(&CoveringElement::w()) < 1e-15);
        let w2 = multiply(&w, &w);
        assert!(w2.distance(&CoveringElement::k(-PI)) < 1e-12);
        let kk = multiply(&CoveringElement::k(PI), &CoveringElement::k(PI));
        assert!(kk.distance(&CoveringElement::k(2.0 * PI)) < 1e-12);
        assert!(kk.distance(&CoveringElement::identity()) > 6.0);
        assert_eq!(iwasawa(&CoveringElement::k(5.0 * PI)).2, 5.0 * PI);
        let ub = CoveringElement::ubar(2.0);
        assert!((ub.theta + 2f64.atan()).abs() < 1e-15);
        match bruhat(&ub).unwrap() {
            Bruhat::Big { x, y, t, .. } => {
                assert!(
                    (x - 0.5).abs() < 1e-15 && (y - 0.25).abs() < 1e-15 && (t - 0.5).abs() < 1e-15
                )
            }
            _ => panic!("expected c != 0 branch"),
        }
        assert_eq!(
            bruhat(&CoveringElement::u(3.0)).unwrap(),
            Bruhat::Small {
                x: 3.0,
                y: 1.0,
                m: 0
            }
        );
        assert!(matches!(
            CoveringElement::new([[2.0, 0.0], [0.0, 2.0]], 0.0),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn jacobi_values() {
        assert_eq!(jacobi(2, 7), 1);
        assert_eq!(jacobi(3, 7), -1);
        assert_eq!(jacobi(-1, 7), -1);
        assert_eq!(jacobi(0, 1), 1);
        assert_eq!(jacobi(6, 9), 0);
        assert_eq!(shimura_symbol(-4, -1), -1);
    }

    #[test]
    fn eta_translation_gives_shifted_lattice() {
        let v = MultiplierSystem::eta_power(1, 0.5).unwrap();
        let (l, lh) = lattices_from_multiplier(&v).unwrap();
        assert!((l.u1 - 1.0 / 24.0).abs() < 1e-14 && l.u2 == 1.0);
        assert!((lh.u1 - l.u1).abs() < 1e-14 && lh.u2 == 1.0);
        let th = MultiplierSystem::theta4();
        let (l, lh) = lattices_from_multiplier(&th).unwrap();
        assert_eq!(l, ShiftedLattice::integers());
        assert!(lh.u1 == 0.0 && lh.u2 == 0.25);
        assert!((v.eval(&[[-1, 0], [0, -1]]).unwrap() - cis(-PI * 0.5)).norm() < 1e-15);
    }

    #[test]
    fn completion_solves_row() {
        for (n, c, d) in [(4, 1, 3), (4, 2, 5), (4, -3, 7), (1, 5, 7), (15, 1, 7)] {
            let (a, b) = complete_row(n, c, d).unwrap();
            assert_eq!(a * d - b * n * c, 1);
            assert!(b.abs() <= d.abs());
        }
        assert!(complete_row(4, 1, 2).is_err());
    }
}
