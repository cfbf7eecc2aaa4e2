//! Dirichlet characters, the character sums tau_psi and tau_hat_{psi,v},
//! and twisted coefficient data.

use crate::cover_group::{complete_row, MultiplierSystem};
use crate::error::{Error, Result};
use crate::lattice::{Coefficients, DeltaVector, Family, ShiftedLattice};
use crate::numerics::{cis, C64};
use std::collections::HashMap;
use std::f64::consts::PI;

/// Completion-independence tolerance for tau_hat.
pub const COMPLETION_TOL: f64 = 1e-9;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn multiplicative_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * g % m;
        k += 1;
    }
    k
}

/// Generators (mod p^k) with their orders, for the unit group mod p^k.
fn local_generators(p: u64, k: u32) -> Vec<(u64, u64)> {
    let q = p.pow(k);
    if p == 2 {
        return match k {
            1 => vec![],
            2 => vec![(3, 2)],
            _ => vec![(q - 1, 2), (5, q / 4)],
        };
    }
    let phi = q / p * (p - 1);
    let g = (2..q)
        .find(|&g| g % p != 0 && multiplicative_order(g, q) == phi)
        .expect("primitive root");
    vec![(g, phi)]
}

/// x = r mod m, x = 1 mod (n / m).
fn crt_lift(r: u64, m: u64, n: u64) -> u64 {
    (0..n)
        .find(|x| x % m == r % m && x % (n / m) == 1 % (n / m))
        .expect("crt")
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    pub modulus: u64,
    /// psi(n) for n = 0..d-1; zero off the units
    pub values: Vec<C64>,
    /// exponents on the generators, for labeling
    pub label: Vec<u64>,
}

impl DirichletCharacter {
    pub fn eval(&self, n: i64) -> C64 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn is_principal(&self) -> bool {
        self.label.iter().all(|&e| e == 0)
    }
}

/// All phi(d) characters modulo d.
pub fn characters_mod(d: u64) -> Result<Vec<DirichletCharacter>> {
    if d == 0 {
        return Err(Error::InvalidInput("modulus must be >= 1".into()));
    }
    let mut gens: Vec<(u64, u64)> = Vec::new();
    for (p, k) in factorize(d) {
        let q = p.pow(k);
        for (g, ord) in local_generators(p, k) {
            gens.push((crt_lift(g, q, d), ord));
        }
    }
    // discrete logs by walking the group
    let mut logs: HashMap<u64, Vec<u64>> = HashMap::new();
    logs.insert(1 % d, vec![0; gens.len()]);
    for (i, (g, ord)) in gens.iter().enumerate() {
        let current: Vec<(u64, Vec<u64>)> = logs.iter().map(|(k, v)| (*k, v.clone())).collect();
        for (x, e) in current {
            let mut y = x;
            for j in 1..*ord {
                y = y * g % d;
                let mut ee = e.clone();
                ee[i] = j;
                logs.insert(y, ee);
            }
        }
    }
    let mut labels: Vec<Vec<u64>> = vec![vec![]];
    for (_, ord) in &gens {
        labels = labels
            .into_iter()
            .flat_map(|l| (0..*ord).map(move |j| [l.clone(), vec![j]].concat()))
            .collect();
    }
    let mut out = Vec::with_capacity(labels.len());
    for label in labels {
        let mut values = vec![C64::new(0.0, 0.0); d as usize];
        for (x, e) in &logs {
            let phase: f64 = e
                .iter()
                .zip(&label)
                .zip(&gens)
                .map(|((ei, li), (_, ord))| (ei * li) as f64 / *ord as f64)
                .sum();
            values[*x as usize] = cis(2.0 * PI * phase);
        }
        if d == 1 {
            values[0] = C64::new(1.0, 0.0);
        }
        out.push(DirichletCharacter {
            modulus: d,
            values,
            label,
        });
    }
    Ok(out)
}

/// tau_psi(m) = sum over units c mod d of psi(c) e^{2 pi i m c / d}.
pub fn tau_psi(psi: &DirichletCharacter, m: i64) -> C64 {
    let d = psi.modulus as i64;
    (0..d)
        .filter(|c| gcd(*c, d) == 1)
        .map(|c| psi.eval(c) * cis(2.0 * PI * ((m.rem_euclid(d) * c) % d) as f64 / d as f64))
        .sum()
}

fn tau_hat_term(
    psi: &DirichletCharacter,
    v: &MultiplierSystem,
    m: i64,
    u: f64,
    uhat: f64,
    c: i64,
    a: i64,
    b: i64,
) -> Result<C64> {
    let d = psi.modulus as i64;
    let n = v.level;
    let g = [[a, b], [n * c, d]];
    let phase = 2.0 * PI * ((m as f64 + uhat) * c as f64 - u * b as f64) / d as f64;
    Ok(psi.eval(c).conj() * v.eval(&g)? * cis(phase))
}

/// tau_hat_{psi,v}(m) over the residue system c = c0 + k d, c0 in [0, d).
pub fn tau_hat_shifted(
    psi: &DirichletCharacter,
    v: &MultiplierSystem,
    m: i64,
    u: f64,
    uhat: f64,
    shift: i64,
) -> Result<C64> {
    let d = psi.modulus as i64;
    let n = v.level;
    if gcd(d, n) != 1 {
        return Err(Error::InvalidInput(format!(
            "modulus {d} is not coprime to the level {n}"
        )));
    }
    let mut sum = C64::new(0.0, 0.0);
    for c0 in 0..d {
        if gcd(c0, d) != 1 {
            continue;
        }
        let c = c0 + shift * d;
        let (a, b) = complete_row(n, c, d)?;
        let t1 = tau_hat_term(psi, v, m, u, uhat, c, a, b)?;
        // second completion: u(1) gamma
        let t2 = tau_hat_term(psi, v, m, u, uhat, c, a + n * c, b + d)?;
        let diff = (t1 - t2).norm();
        if diff > COMPLETION_TOL {
            return Err(Error::CompletionAmbiguity { c, d, diff });
        }
        sum += t1;
    }
    Ok(sum)
}

/// tau_hat_{psi,v}(m) = sum_c conj(psi(c)) v(gamma) e^{2 pi i (m c + uhat c - u b) / d},
/// gamma = [[a, b], [N c, d]].
pub fn tau_hat(
    psi: &DirichletCharacter,
    v: &MultiplierSystem,
    m: i64,
    u: f64,
    uhat: f64,
) -> Result<C64> {
    tau_hat_shifted(psi, v, m, u, uhat, 0)
}

/// (alpha_psi, beta_psi) with alpha_psi(l) = tau_psi(l - u) alpha(l), beta_psi = tau_psi(0) beta.
pub fn twist_coefficients(
    alpha: &Coefficients,
    beta: &DeltaVector,
    psi: &DirichletCharacter,
) -> Result<(Coefficients, DeltaVector)> {
    let lat = alpha.lattice;
    if (lat.u2.abs() - 1.0).abs() > 1e-12 {
        return Err(Error::SpacingMismatch(lat.u2));
    }
    let d = psi.modulus as i64;
    let tau: Vec<C64> = (0..d).map(|j| tau_psi(psi, j)).collect();
    let t0 = tau[0];
    if d == 1 {
        return Ok((alpha.clone(), beta.clone()));
    }
    let family = Family::Twisted {
        base: Box::new(alpha.family.clone()),
        tau,
        shift: lat.u1,
    };
    let zero = if lat.contains_zero() {
        t0 * alpha.zero_value()
    } else {
        C64::new(0.0, 0.0)
    };
    let a = Coefficients::new(lat, family, alpha.growth, zero)?;
    Ok((a, beta.scaled(t0)))
}

/// Twisted data on d^{-2} Lhat:
/// alpha(l / d^2) = conj(psi(-N)) tau_hat(N l - uhat) d^{2 nu - 1} alpha_hat(l), and the beta rule
/// with the logarithmic correction at m = nu = 0.
#[allow(clippy::too_many_arguments)]
pub fn twist_hat_coefficients(
    alpha_hat: &Coefficients,
    beta_hat: &DeltaVector,
    psi: &DirichletCharacter,
    v: &MultiplierSystem,
    mu: C64,
    nu: C64,
    u: f64,
    uhat: f64,
) -> Result<(Coefficients, DeltaVector)> {
    let d = psi.modulus as i64;
    let n = v.level;
    let df = d as f64;
    let lat_hat = alpha_hat.lattice;
    let tau: Vec<C64> = (0..d)
        .map(|j| tau_hat(psi, v, j, u, uhat))
        .collect::<Result<_>>()?;
    let chi = psi.eval(-n).conj();
    let pref = chi * ((2.0 * nu - 1.0) * df.ln()).exp();
    let new_lat = ShiftedLattice::new(lat_hat.u1 / (df * df), lat_hat.u2 / (df * df))?;
    let zero = if lat_hat.contains_zero() {
        // N * 0 - uhat = -uhat, an integer when 0 lies on Lhat
        let k = (-uhat).round() as i64;
        pref * tau[k.rem_euclid(d) as usize] * alpha_hat.zero_value()
    } else {
        C64::new(0.0, 0.0)
    };
    let family = if d == 1 && (pref - 1.0).norm() == 0.0 && (tau[0] - 1.0).norm() == 0.0 {
        alpha_hat.family.clone()
    } else {
        Family::HatTwisted {
            base: Box::new(alpha_hat.family.clone()),
            base_lattice: lat_hat,
            tau: tau.clone(),
            level: n,
            shift: uhat,
            pref,
        }
    };
    let new_alpha = Coefficients::new(new_lat, family, alpha_hat.growth, zero)?;
    let mut new_beta = DeltaVector::new();
    let log_branch = lat_hat.contains_zero() && nu.norm() == 0.0;
    let mut ms = beta_hat.support();
    if log_branch && !ms.contains(&0) {
        ms.insert(0, 0);
    }
    for m in ms {
        let base = if log_branch && m == 0 {
            beta_hat.get(0) + 4.0 * (mu * PI / 2.0).cos() * alpha_hat.zero_value() * df.ln()
        } else {
            beta_hat.get(m)
        };
        let factor = chi * tau[0] * ((-2.0 * nu - 2.0 * m as f64 - 1.0) * df.ln()).exp();
        new_beta.set(m, factor * base);
    }
    Ok((new_alpha, new_beta))
}

/// Odd primes p <= bound with p not dividing N.
pub fn primes_pn(n: u64, bound: u64) -> Result<Vec<u64>> {
    if bound < 3 {
        return Err(Error::InvalidInput("bound must be >= 3".into()));
    }
    let b = bound as usize;
    let mut sieve = vec![true; b + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= b {
        if sieve[i] {
            let mut j = i * i;
            while j <= b {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    Ok((3..=b)
        .filter(|&p| sieve[p] && n % p as u64 != 0)
        .map(|p| p as u64)
        .collect())
}
