//! Shifted lattices L = u1 + u2 Z, coefficient functions on them, and the
//! structural predicates used by the pole and delta-term checks.

use crate::error::{Error, Result};
use crate::numerics::{cis, C64};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Relative tolerance for lattice membership, scaled by |u2|.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Returns n when z is within `tol` of the integer n.
pub fn as_integer(z: C64, tol: f64) -> Option<i64> {
    let n = z.re.round();
    if (z.re - n).abs() <= tol && z.im.abs() <= tol {
        Some(n as i64)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedLattice {
    pub u1: f64,
    pub u2: f64,
}

impl ShiftedLattice {
    pub fn new(u1: f64, u2: f64) -> Result<Self> {
        if u2 == 0.0 || !u2.is_finite() || !u1.is_finite() {
            return Err(Error::InvalidInput(format!(
                "lattice spacing must be finite and nonzero, got {u2}"
            )));
        }
        Ok(ShiftedLattice { u1, u2 })
    }

    pub fn integers() -> Self {
        ShiftedLattice { u1: 0.0, u2: 1.0 }
    }

    pub fn dual_spacing(&self) -> f64 {
        1.0 / self.u2
    }

    /// Index k with x = u1 + k u2, if x lies on the lattice.
    pub fn index_of(&self, x: f64) -> Option<i64> {
        let k = ((x - self.u1) / self.u2).round();
        if (x - self.u1 - k * self.u2).abs() <= MEMBERSHIP_TOL * self.u2.abs() {
            Some(k as i64)
        } else {
            None
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.index_of(x).is_some()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn point(&self, k: i64) -> f64 {
        self.u1 + k as f64 * self.u2
    }

    /// The character t -> e^{2 pi i u1 t} on the dual lattice.
    pub fn omega(&self, t: f64) -> Result<C64> {
        let k = t * self.u2;
        if (k - k.round()).abs() > 1e-12 {
            return Err(Error::NotInDualLattice(t));
        }
        Ok(cis(2.0 * PI * self.u1 * t))
    }

    /// Points with 0 < |l| <= x, plus 0 when it lies on L, sorted by |l|.
    pub fn enumerate(&self, x: f64) -> Vec<f64> {
        let h = self.u2.abs();
        let tol = MEMBERSHIP_TOL * h;
        let kmin = ((-x - self.u1) / self.u2)
            .min((x - self.u1) / self.u2)
            .floor() as i64
            - 1;
        let kmax = ((-x - self.u1) / self.u2)
            .max((x - self.u1) / self.u2)
            .ceil() as i64
            + 1;
        let mut pts: Vec<f64> = (kmin..=kmax)
            .map(|k| self.point(k))
            .filter(|l| l.abs() <= x + tol)
            .map(|l| if l.abs() <= tol { 0.0 } else { l })
            .collect();
        pts.sort_by(|a, b| {
            a.abs()
                .partial_cmp(&b.abs())
                .unwrap()
                .then(a.partial_cmp(b).unwrap())
        });
        pts
    }
}

/// sigma_a(n) for every n <= nmax, by a divisor sieve. Index 0 is unused.
pub fn divisor_sigma_table(a: C64, nmax: usize) -> Vec<C64> {
    let mut t = vec![C64::new(0.0, 0.0); nmax + 1];
    for d in 1..=nmax {
        let v = (a * (d as f64).ln()).exp();
        let mut m = d;
        while m <= nmax {
            t[m] += v;
            m += d;
        }
    }
    t
}

pub fn divisor_sigma(a: C64, n: u64) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += (a * (d as f64).ln()).exp();
            let e = n / d;
            if e != d {
                s += (a * (e as f64).ln()).exp();
            }
        }
        d += 1;
    }
    s
}

/// How the nonzero values of a coefficient function are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Zero,
    /// the same value at every nonzero lattice point
    Constant(C64),
    /// sigma_a(|l|) on Z
    Divisor {
        a: C64,
    },
    /// `value` at l = q n^2 for n >= 1, zero elsewhere
    Squares {
        q: f64,
        value: C64,
    },
    /// explicit values up to `cutoff`; beyond it `beyond` (or zero)
    Table {
        entries: Vec<(f64, C64)>,
        cutoff: f64,
        beyond: Option<Box<Family>>,
    },
    Scaled {
        factor: C64,
        base: Box<Family>,
    },
    Override {
        base: Box<Family>,
        at: f64,
        value: C64,
    },
    /// l -> tau[(l - shift) mod d] * base(l)
    Twisted {
        base: Box<Family>,
        tau: Vec<C64>,
        shift: f64,
    },
    /// p -> pref * tau[(level * d^2 p - shift) mod d] * base(d^2 p), base living on `base_lattice`
    HatTwisted {
        base: Box<Family>,
        base_lattice: ShiftedLattice,
        tau: Vec<C64>,
        level: i64,
        shift: f64,
        pref: C64,
    },
}

fn residue_index(x: f64, d: usize) -> Option<usize> {
    let n = x.round();
    if (x - n).abs() > 1e-8 {
        return None;
    }
    Some((n as i64).rem_euclid(d as i64) as usize)
}

impl Family {
    /// Value at a nonzero lattice point l of `lat`.
    pub fn eval(&self, lat: &ShiftedLattice, l: f64) -> C64 {
        let zero = C64::new(0.0, 0.0);
        match self {
            Family::Zero => zero,
            Family::Constant(c) => *c,
            Family::Divisor { a } => match as_integer(C64::new(l, 0.0), 1e-9) {
                Some(n) if n != 0 => divisor_sigma(*a, n.unsigned_abs()),
                _ => zero,
            },
            Family::Squares { q, value } => {
                if l <= 0.0 {
                    return zero;
                }
                let n = (l / q).sqrt().round();
                if n >= 1.0 && (q * n * n - l).abs() <= 1e-10 * l.abs().max(1.0) {
                    *value
                } else {
                    zero
                }
            }
            Family::Table {
                entries,
                cutoff,
                beyond,
            } => {
                if l.abs() <= *cutoff {
                    let tol = MEMBERSHIP_TOL * lat.u2.abs() * 10.0;
                    entries
                        .iter()
                        .find(|(x, _)| (x - l).abs() <= tol)
                        .map(|e| e.1)
                        .unwrap_or(zero)
                } else {
                    beyond.as_ref().map(|b| b.eval(lat, l)).unwrap_or(zero)
                }
            }
            Family::Scaled { factor, base } => factor * base.eval(lat, l),
            Family::Override { base, at, value } => {
                if (l - at).abs() <= MEMBERSHIP_TOL * lat.u2.abs() * 10.0 {
                    *value
                } else {
                    base.eval(lat, l)
                }
            }
            Family::Twisted { base, tau, shift } => match residue_index(l - shift, tau.len()) {
                Some(i) => tau[i] * base.eval(lat, l),
                None => zero,
            },
            Family::HatTwisted {
                base,
                base_lattice,
                tau,
                level,
                shift,
                pref,
            } => {
                let d = tau.len() as f64;
                let lb = l * d * d;
                if lb.abs() < 1e-12 {
                    return zero;
                }
                match residue_index(*level as f64 * lb - shift, tau.len()) {
                    Some(i) => pref * tau[i] * base.eval(base_lattice, lb),
                    None => zero,
                }
            }
        }
    }

    /// Nonzero values with 0 < |l| <= x, sorted by |l|.
    pub fn support(&self, lat: &ShiftedLattice, x: f64) -> Vec<(f64, C64)> {
        let mut out: Vec<(f64, C64)> = match self {
            Family::Zero => Vec::new(),
            Family::Constant(c) => lat
                .enumerate(x)
                .into_iter()
                .filter(|l| *l != 0.0)
                .map(|l| (l, *c))
                .collect(),
            Family::Divisor { a } => {
                let n = x.floor().max(0.0) as usize;
                let t = divisor_sigma_table(*a, n);
                (1..=n)
                    .flat_map(|k| [(k as f64, t[k]), (-(k as f64), t[k])])
                    .collect()
            }
            Family::Squares { q, value } => {
                let mut v = Vec::new();
                let mut n = 1.0;
                while q * n * n <= x * (1.0 + 1e-14) {
                    v.push((q * n * n, *value));
                    n += 1.0;
                }
                v
            }
            Family::Table {
                entries,
                cutoff,
                beyond,
            } => {
                let mut v: Vec<(f64, C64)> = entries
                    .iter()
                    .filter(|(l, _)| l.abs() <= x.min(*cutoff) && *l != 0.0)
                    .cloned()
                    .collect();
                if let Some(b) = beyond {
                    if x > *cutoff {
                        v.extend(
                            b.support(lat, x)
                                .into_iter()
                                .filter(|(l, _)| l.abs() > *cutoff),
                        );
                    }
                }
                v
            }
            Family::Scaled { factor, base } => base
                .support(lat, x)
                .into_iter()
                .map(|(l, v)| (l, factor * v))
                .collect(),
            Family::Override { base, at, value } => {
                let tol = MEMBERSHIP_TOL * lat.u2.abs() * 10.0;
                let mut v: Vec<(f64, C64)> = base
                    .support(lat, x)
                    .into_iter()
                    .filter(|(l, _)| (l - at).abs() > tol)
                    .collect();
                if at.abs() <= x && *at != 0.0 {
                    v.push((*at, *value));
                }
                v
            }
            Family::Twisted { base, tau, shift } => base
                .support(lat, x)
                .into_iter()
                .filter_map(|(l, v)| residue_index(l - shift, tau.len()).map(|i| (l, tau[i] * v)))
                .collect(),
            Family::HatTwisted {
                base,
                base_lattice,
                tau,
                level,
                shift,
                pref,
            } => {
                let d2 = (tau.len() * tau.len()) as f64;
                base.support(base_lattice, x * d2)
                    .into_iter()
                    .filter_map(|(lb, v)| {
                        residue_index(*level as f64 * lb - shift, tau.len())
                            .map(|i| (lb / d2, pref * tau[i] * v))
                    })
                    .collect()
            }
        };
        out.retain(|(_, v)| v.norm() > 0.0);
        out.sort_by(|a, b| {
            a.0.abs()
                .partial_cmp(&b.0.abs())
                .unwrap()
                .then(a.0.partial_cmp(&b.0).unwrap())
        });
        out
    }
}

/// A coefficient function on a shifted lattice with declared growth |alpha(l)| <= C |l|^r.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub lattice: ShiftedLattice,
    pub family: Family,
    pub growth: f64,
    zero_value: C64,
}

impl Coefficients {
    pub fn new(
        lattice: ShiftedLattice,
        family: Family,
        growth: f64,
        zero_value: C64,
    ) -> Result<Self> {
        if !growth.is_finite() {
            return Err(Error::InvalidInput("growth exponent must be finite".into()));
        }
        if let Family::Divisor { .. } = family {
            if !lattice.contains_zero() || (lattice.u2.abs() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput("divisor coefficients live on Z".into()));
            }
        }
        let zero_value = if lattice.contains_zero() {
            zero_value
        } else {
            C64::new(0.0, 0.0)
        };
        Ok(Coefficients {
            lattice,
            family,
            growth,
            zero_value,
        })
    }

    pub fn zero(lattice: ShiftedLattice) -> Self {
        Coefficients {
            lattice,
            family: Family::Zero,
            growth: 0.0,
            zero_value: C64::new(0.0, 0.0),
        }
    }

    pub fn zero_value(&self) -> C64 {
        self.zero_value
    }

    /// alpha(l); zero off the lattice, the stored zero value at l = 0.
    pub fn eval(&self, l: f64) -> C64 {
        if !self.lattice.contains(l) {
            return C64::new(0.0, 0.0);
        }
        if l.abs() <= MEMBERSHIP_TOL * self.lattice.u2.abs() {
            return self.zero_value;
        }
        self.family.eval(&self.lattice, l)
    }

    /// Nonzero (l, alpha(l)) with 0 < |l| <= x, sorted by |l|.
    pub fn support(&self, x: f64) -> Vec<(f64, C64)> {
        self.family.support(&self.lattice, x)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Coefficients {
            lattice: self.lattice,
            family: Family::Scaled {
                factor,
                base: Box::new(self.family.clone()),
            },
            growth: self.growth,
            zero_value: self.zero_value * factor,
        }
    }

    /// Same data with alpha(at) replaced; `at = 0` replaces the zero value.
    pub fn with_value(&self, at: f64, value: C64) -> Self {
        let mut c = self.clone();
        if at == 0.0 {
            if c.lattice.contains_zero() {
                c.zero_value = value;
            }
            return c;
        }
        c.family = Family::Override {
            base: Box::new(self.family.clone()),
            at,
            value,
        };
        c
    }

    pub fn with_zero_value(&self, value: C64) -> Self {
        self.with_value(0.0, value)
    }

    /// Smallest C with |alpha(l)| <= C |l|^r over 0 < |l| <= x.
    pub fn growth_constant(&self, x: f64) -> f64 {
        self.support(x)
            .iter()
            .map(|(l, v)| v.norm() / l.abs().powf(self.growth))
            .fold(0.0, f64::max)
    }
}

/// sigma_a(|l|) on Z with growth exponent max(Re a, 0) + 1e-3.
pub fn divisor_coefficients(a: C64, zero_value: C64) -> Coefficients {
    Coefficients {
        lattice: ShiftedLattice::integers(),
        family: Family::Divisor { a },
        growth: a.re.max(0.0) + 1e-3,
        zero_value,
    }
}

/// Finitely supported beta: m -> beta(m) for m >= 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeltaVector {
    pub entries: BTreeMap<u32, C64>,
}

impl DeltaVector {
    pub fn new() -> Self {
        DeltaVector::default()
    }

    pub fn from_pairs(pairs: &[(u32, C64)]) -> Self {
        let mut d = DeltaVector::new();
        for (m, v) in pairs {
            d.set(*m, *v);
        }
        d
    }

    pub fn get(&self, m: u32) -> C64 {
        self.entries.get(&m).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn set(&mut self, m: u32, v: C64) {
        if v.norm() == 0.0 {
            self.entries.remove(&m);
        } else {
            self.entries.insert(m, v);
        }
    }

    /// Indices with nonzero entries.
    pub fn support(&self) -> Vec<u32> {
        self.entries
            .iter()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(m, _)| *m)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }

    pub fn scaled(&self, c: C64) -> Self {
        DeltaVector {
            entries: self.entries.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }
}

/// Fourier data (alpha_i, beta_i) on L_i of a candidate pair, with (mu, nu).
#[derive(Debug, Clone, PartialEq)]
pub struct PairSpec {
    pub l1: ShiftedLattice,
    pub l2: ShiftedLattice,
    pub alpha1: Coefficients,
    pub alpha2: Coefficients,
    pub beta1: DeltaVector,
    pub beta2: DeltaVector,
    pub mu: C64,
    pub nu: C64,
}

impl PairSpec {
    pub fn new(
        alpha1: Coefficients,
        alpha2: Coefficients,
        beta1: DeltaVector,
        beta2: DeltaVector,
        mu: C64,
        nu: C64,
    ) -> Result<Self> {
        let s = PairSpec {
            l1: alpha1.lattice,
            l2: alpha2.lattice,
            alpha1,
            alpha2,
            beta1,
            beta2,
            mu,
            nu,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha1.lattice != self.l1 || self.alpha2.lattice != self.l2 {
            return Err(Error::InvalidInput("alpha_i must live on L_i".into()));
        }
        for v in [self.mu, self.nu] {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite("PairSpec"));
            }
        }
        Ok(())
    }

    /// (L2, alpha2, beta2, L1, alpha1, beta1) with the same (mu, nu).
    pub fn swapped(&self) -> Self {
        PairSpec {
            l1: self.l2,
            l2: self.l1,
            alpha1: self.alpha2.clone(),
            alpha2: self.alpha1.clone(),
            beta1: self.beta2.clone(),
            beta2: self.beta1.clone(),
            mu: self.mu,
            nu: self.nu,
        }
    }

    /// Largest declared growth exponent.
    pub fn growth(&self) -> f64 {
        self.alpha1.growth.max(self.alpha2.growth)
    }
}

/// False exactly when 0 in L, -2 nu in Z_{>0}, mu - 2 nu - 1 not in 2Z and alpha(0) != 0.
pub fn in_m0(alpha: &Coefficients, mu: C64, nu: C64) -> bool {
    if !alpha.lattice.contains_zero() {
        return true;
    }
    if !matches!(as_integer(-2.0 * nu, 1e-9), Some(n) if n > 0) {
        return true;
    }
    let parity_even = matches!(as_integer(mu - 2.0 * nu - 1.0, 1e-9), Some(k) if k % 2 == 0);
    parity_even || alpha.zero_value().norm() == 0.0
}

/// S_nu(L): empty when 0 is not in L, otherwise {0} together with -2 nu if it is a nonnegative integer.
pub fn s_nu(lat: &ShiftedLattice, nu: C64) -> Vec<u32> {
    if !lat.contains_zero() {
        return Vec::new();
    }
    let mut v = vec![0u32];
    if let Some(n) = as_integer(-2.0 * nu, 1e-9) {
        if n > 0 {
            v.push(n as u32);
        }
    }
    v
}
