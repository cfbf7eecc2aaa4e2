//! Numerical verdicts for the functional equation, growth, residue and
//! entireness conditions on the Dirichlet series of a pair, plus the
//! structural beta constraints and the twisted (converse theorem) checks.

use crate::cover_group::{lattices_from_multiplier, MultiplierSystem};
use crate::error::{Error, Result};
use crate::lattice::{as_integer, in_m0, s_nu, PairSpec, ShiftedLattice};
use crate::numerics::{complex_gamma, contour_laurent_multi, factorial, recip_gamma, C64};
use crate::twists::{characters_mod, primes_pn, twist_coefficients, twist_hat_coefficients};
use crate::zeta_engine::{mat_mul, mat_vec, matrix_e, matrix_sigma, Mat2, PairEngine};
use serde::Serialize;
use std::f64::consts::PI;

/// Minimum distance between a sample and a pole; closer poles are merged into one contour.
pub const POLE_SEPARATION: f64 = 0.15;
/// Nodes per contour.
pub const CONTOUR_NODES: usize = 32;
/// Highest |Im s| accepted by the growth check.
pub const MAX_HEIGHT: f64 = 100.0;
/// Ratio by which late samples may exceed the envelope fitted on early ones.
pub const D2_MARGIN: f64 = 10.0;

const HEURISTIC_NOTE: &str = "heuristic: finite sampling cannot prove an asymptotic bound";
const SCAN_NOTE: &str = "entireness is checked only at the scanned points";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    D1,
    #[serde(rename = "D2_1")]
    D21,
    #[serde(rename = "D2_2")]
    D22,
    D3,
    D4,
    W1,
    W2,
    QADbeta,
    PoleProfile,
    #[serde(rename = "pairRelation")]
    PairRelation,
    #[serde(rename = "maassEval")]
    MaassEval,
    #[serde(rename = "laplacian")]
    Laplacian,
    #[serde(rename = "automorphy")]
    Automorphy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::D1 => "D1",
            Condition::D21 => "D2_1",
            Condition::D22 => "D2_2",
            Condition::D3 => "D3",
            Condition::D4 => "D4",
            Condition::W1 => "W1",
            Condition::W2 => "W2",
            Condition::QADbeta => "QADbeta",
            Condition::PoleProfile => "PoleProfile",
            Condition::PairRelation => "pairRelation",
            Condition::MaassEval => "maassEval",
            Condition::Laplacian => "laplacian",
            Condition::Automorphy => "automorphy",
        }
    }
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Verdict {
    pub fn worst(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplePoint {
    pub s: (f64, f64),
    pub residual: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConditionReport {
    pub condition: Condition,
    pub points: Vec<SamplePoint>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn new(condition: Condition, tolerance: f64) -> Self {
        ConditionReport {
            condition,
            points: Vec::new(),
            max_residual: 0.0,
            tolerance,
            verdict: Verdict::Pass,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, s: C64, residual: f64, label: impl Into<String>) {
        let r = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        self.max_residual = self.max_residual.max(r);
        self.points.push(SamplePoint {
            s: (s.re, s.im),
            residual: r,
            label: label.into(),
        });
    }

    pub fn note(&mut self, n: String) {
        if !self.notes.contains(&n) {
            self.notes.push(n);
        }
    }

    /// Pass iff every residual is within the tolerance.
    pub fn grade(mut self) -> Self {
        self.verdict = if self.max_residual <= self.tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self
    }

    /// Merges a sub-report. Growth ratios are graded on their own scale and stay out of max_residual.
    fn absorb(&mut self, prefix: &str, other: ConditionReport) {
        let growth = matches!(other.condition, Condition::D21 | Condition::D22);
        let tag = format!("{prefix} {}", other.condition);
        for p in other.points {
            if !growth {
                self.max_residual = self.max_residual.max(p.residual);
            }
            self.points.push(SamplePoint {
                label: format!("{tag} {}", p.label),
                ..p
            });
        }
        self.verdict = self.verdict.worst(other.verdict);
        for n in other.notes {
            let generic = n == HEURISTIC_NOTE || n == SCAN_NOTE;
            let n = if generic { n } else { format!("{tag}: {n}") };
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthMode {
    Strict,
    Weak,
}

fn norm2(v: [C64; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

fn abs_mat_vec(m: &Mat2, v: [C64; 2]) -> f64 {
    (0..2)
        .map(|i| {
            (0..2)
                .map(|j| m[i][j].norm() * v[j].norm())
                .sum::<f64>()
                .powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

fn ones() -> [C64; 2] {
    [C64::new(1.0, 0.0); 2]
}

/// Default functional-equation samples: 12 on the center line and 8 off it.
pub fn default_d1_samples(nu: C64) -> Vec<C64> {
    let center = 0.5 - nu.re;
    let mut v: Vec<C64> = [1.0, 3.0, 7.0, 13.0, 21.0, 31.0]
        .iter()
        .flat_map(|&t| [C64::new(center, t), C64::new(center, -t)])
        .collect();
    for (dx, t) in [
        (-0.9, 2.5),
        (1.4, -4.2),
        (2.1, 8.0),
        (-1.5, -11.0),
        (0.7, 17.5),
        (-0.6, -1.4),
        (1.1, 26.0),
        (-1.2, 5.5),
    ] {
        v.push(C64::new(center + dx, t));
    }
    v
}

/// A contour around a set of nearby candidate poles.
struct Cluster {
    center: C64,
    radius: f64,
    members: Vec<C64>,
}

/// Circle around `center` enclosing every candidate within POLE_SEPARATION and
/// staying clear of the rest. Candidates are the possible singularities.
fn cluster(center: C64, candidates: &[C64]) -> Cluster {
    let mut members = vec![center];
    let mut r_in: f64 = 0.0;
    let mut d_out = f64::INFINITY;
    for &p in candidates {
        let d = (p - center).norm();
        if d < 1e-12 {
            continue;
        }
        if d < POLE_SEPARATION {
            r_in = r_in.max(d);
            members.push(p);
        } else {
            d_out = d_out.min(d);
        }
    }
    let radius = (r_in + 0.3).min(0.5 * (r_in + d_out));
    Cluster {
        center,
        radius,
        members,
    }
}

/// Integers in [lo, hi] as candidate poles, plus extras.
fn integer_candidates(center: C64, extra: &[C64]) -> Vec<C64> {
    let n = center.re.round() as i64;
    let mut v: Vec<C64> = (n - 2..=n + 2).map(|k| C64::new(k as f64, 0.0)).collect();
    v.extend_from_slice(extra);
    v
}

fn sign_residue_generic(nu: C64, mu: C64, sign: f64, alpha0: C64) -> Result<C64> {
    // 2 Gamma(2 nu) cos(pi (2 nu -+ mu) / 2) alpha_2(0) / (2 pi)^{2 nu}
    let g = complex_gamma(2.0 * nu)?;
    let c = (PI * (2.0 * nu - sign * mu) / 2.0).cos();
    Ok(2.0 * g * c * alpha0 * (-2.0 * nu * (2.0 * PI).ln()).exp())
}

fn neg_two_nu(nu: C64) -> Option<u32> {
    match as_integer(-2.0 * nu, 1e-9) {
        Some(n) if n >= 0 => Some(n as u32),
        _ => None,
    }
}

/// Evaluates the conditions for one pair, sharing the engine's plan cache.
pub struct Checker {
    engine: PairEngine,
    pub nodes: usize,
}

impl Checker {
    pub fn new(spec: PairSpec) -> Self {
        Checker {
            engine: PairEngine::new(spec),
            nodes: CONTOUR_NODES,
        }
    }

    pub fn from_engine(engine: PairEngine) -> Self {
        Checker {
            engine,
            nodes: CONTOUR_NODES,
        }
    }

    pub fn spec(&self) -> &PairSpec {
        self.engine.spec()
    }

    pub fn engine(&self) -> &PairEngine {
        &self.engine
    }

    fn pole_b(&self) -> C64 {
        1.0 - 2.0 * self.spec().nu
    }

    fn alpha_zero(&self, which: u8) -> C64 {
        let spec = self.spec();
        if which == 1 {
            spec.alpha1.zero_value()
        } else {
            spec.alpha2.zero_value()
        }
    }

    fn beta(&self, which: u8) -> &crate::lattice::DeltaVector {
        if which == 1 {
            &self.spec().beta1
        } else {
            &self.spec().beta2
        }
    }

    fn lattice(&self, which: u8) -> ShiftedLattice {
        if which == 1 {
            self.spec().l1
        } else {
            self.spec().l2
        }
    }

    fn completed(&self, which: u8, s: C64) -> Result<[C64; 2]> {
        Ok(self.engine.completed_unchecked(which, s)?.as_array())
    }

    /// (xi_+, xi_-)(alpha_which; s) = (2 pi)^s / Gamma(s) (Xi_+, Xi_-).
    fn raw(&self, which: u8, s: C64) -> Result<[C64; 2]> {
        let x = self.completed(which, s)?;
        let f = (s * (2.0 * PI).ln()).exp() * recip_gamma(s)?;
        Ok([x[0] * f, x[1] * f])
    }

    fn laurent<F>(&self, c: &Cluster, ks: &[i32], mut f: F) -> Result<Vec<Vec<C64>>>
    where
        F: FnMut(C64) -> Result<Vec<C64>>,
    {
        contour_laurent_multi(&mut f, c.center, ks, c.radius, self.nodes)
    }

    fn check_separation(&self, s: C64) -> Result<()> {
        for pole in [C64::new(0.0, 0.0), self.pole_b()] {
            if (s - pole).norm() < POLE_SEPARATION {
                return Err(Error::PoleProximity {
                    s: (s.re, s.im),
                    pole: (pole.re, pole.im),
                });
            }
        }
        Ok(())
    }

    /// Functional equation at each sample and the principal parts of E(s) Xi at 0 and 1 - 2 nu.
    pub fn d1(&self, samples: &[C64], tol: f64) -> Result<ConditionReport> {
        let spec = self.spec();
        let (mu, nu) = (spec.mu, spec.nu);
        let sigma = matrix_sigma(mu);
        let mut rep = ConditionReport::new(Condition::D1, tol);
        for &s in samples {
            self.check_separation(s)?;
            let sp = 1.0 - 2.0 * nu - s;
            let x1 = self.completed(1, s)?;
            let x2 = self.completed(2, sp)?;
            let e = matrix_e(s);
            let m = mat_mul(&sigma, &matrix_e(sp));
            let lhs = mat_vec(&e, x1);
            let rhs = mat_vec(&m, x2);
            let scale = abs_mat_vec(&e, x1).max(abs_mat_vec(&m, x2));
            let d = norm2([lhs[0] - rhs[0], lhs[1] - rhs[1]]);
            let r = if scale > 0.0 { d / scale } else { d };
            rep.push(s, r, "functional equation (relative)");
        }
        let a1 = spec.alpha1.zero_value();
        let a2 = spec.alpha2.zero_value();
        let at_zero = [-a1, -a1];
        let sig1 = mat_vec(&sigma, ones());
        let at_b = [a2 * sig1[0], a2 * sig1[1]];
        let p0 = C64::new(0.0, 0.0);
        let pb = self.pole_b();
        let candidates = integer_candidates(p0, &[pb]);
        let c0 = cluster(p0, &candidates);
        let merged = c0
            .members
            .iter()
            .any(|p| (p - pb).norm() < 1e-12 || (*p - pb).norm() < POLE_SEPARATION);
        let mut targets = vec![(
            c0,
            if merged {
                [at_zero[0] + at_b[0], at_zero[1] + at_b[1]]
            } else {
                at_zero
            },
            "s = 0",
        )];
        if merged {
            rep.notes
                .push("0 and 1 - 2 nu closer than the pole separation; one merged contour".into());
        } else {
            targets.push((
                cluster(pb, &integer_candidates(pb, &[p0])),
                at_b,
                "s = 1 - 2 nu",
            ));
        }
        for (c, expected, label) in targets {
            let coef = self.laurent(&c, &[1], |s| {
                let x = self.completed(1, s)?;
                Ok(mat_vec(&matrix_e(s), x).to_vec())
            })?;
            let got = [coef[0][0], coef[0][1]];
            let d = norm2([got[0] - expected[0], got[1] - expected[1]]);
            rep.push(
                c.center,
                d / norm2(expected).max(1.0),
                format!("residue of E(s) Xi at {label}"),
            );
        }
        Ok(rep.grade())
    }

    /// Growth of Xi_+- (alpha_1) on a vertical strip, sampled at the given heights.
    pub fn d2(
        &self,
        strip: (f64, f64),
        heights: &[f64],
        mode: GrowthMode,
    ) -> Result<ConditionReport> {
        let (s1, s2) = strip;
        if !(s1 < s2) {
            return Err(Error::InvalidInput("strip needs sigma_1 < sigma_2".into()));
        }
        if let Some(h) = heights.iter().find(|h| !(h.abs() <= MAX_HEIGHT)) {
            return Err(Error::InvalidInput(format!(
                "height {h} beyond {MAX_HEIGHT}"
            )));
        }
        let mut hs: Vec<f64> = heights
            .iter()
            .map(|h| h.abs())
            .filter(|h| *h >= POLE_SEPARATION)
            .collect();
        hs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        hs.dedup();
        let sigmas = [s1, 0.5 * (s1 + s2), s2];
        // per height: largest |Xi| and the |s| where it occurs
        let mut peaks = Vec::with_capacity(hs.len());
        for &h in &hs {
            let mut best = (0.0f64, C64::new(s1, h));
            for &sg in &sigmas {
                for t in [h, -h] {
                    let s = C64::new(sg, t);
                    let x = self.completed(1, s)?;
                    let m = x[0].norm().max(x[1].norm());
                    if m >= best.0 {
                        best = (m, s);
                    }
                }
            }
            peaks.push(best);
        }
        Ok(grade_growth(&peaks, mode))
    }

    /// Residues of xi_+ + (-1)^m xi_- at s = m + 1 against 2 (2 pi i)^m beta_{3-i}(m).
    pub fn d3(&self, m_max: u32, tol: f64) -> Result<ConditionReport> {
        let spec = self.spec();
        let (mu, nu) = (spec.mu, spec.nu);
        let pb = self.pole_b();
        let mut rep = ConditionReport::new(Condition::D3, tol);
        for which in [1u8, 2] {
            let other = 3 - which;
            for m in 0..=m_max {
                let center = C64::new(m as f64 + 1.0, 0.0);
                let c = cluster(center, &integer_candidates(center, &[pb]));
                let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
                let mut expected = 2.0 * C64::new(0.0, 2.0 * PI).powu(m) * self.beta(other).get(m);
                let dist = (center - pb).norm();
                if dist < POLE_SEPARATION {
                    if dist < 1e-9 {
                        rep.note(format!(
                            "s = {}: 1 - 2 nu coincides; double-pole profile",
                            m + 1
                        ));
                    } else {
                        let a0 = self.alpha_zero(other);
                        expected += sign_residue_generic(nu, mu, 1.0, a0)?
                            + sgn * sign_residue_generic(nu, mu, -1.0, a0)?;
                        rep.note(format!(
                            "s = {}: 1 - 2 nu within {POLE_SEPARATION}; merged contour",
                            m + 1
                        ));
                    }
                }
                let coef = self.laurent(&c, &[1], |s| {
                    let x = self.raw(which, s)?;
                    Ok(vec![x[0] + sgn * x[1]])
                })?;
                let r = (coef[0][0] - expected).norm();
                rep.push(center, r, format!("i = {which}, m = {m}"));
            }
        }
        Ok(rep.grade())
    }

    /// Scans candidate poles of xi_+-(alpha_i) and requires (s - 1)(s + 2 nu - 1) xi_+- (when 0 is
    /// in L_{3-i}) or xi_+- itself (otherwise) to have no principal part there.
    pub fn d4(&self, m_max: u32, extras: &[C64], tol: f64) -> Result<ConditionReport> {
        let pb = self.pole_b();
        let mut rep = ConditionReport::new(Condition::D4, tol);
        rep.notes.push(SCAN_NOTE.into());
        for which in [1u8, 2] {
            let other = 3 - which;
            let zero_in = self.lattice(other).contains_zero();
            let mut pts: Vec<C64> = vec![C64::new(1.0, 0.0), pb];
            pts.extend((0..=m_max).map(|m| C64::new(m as f64 + 1.0, 0.0)));
            pts.extend(
                self.beta(other)
                    .support()
                    .iter()
                    .map(|m| C64::new(*m as f64 + 1.0, 0.0)),
            );
            pts.extend_from_slice(extras);
            // one contour per cluster of nearby points
            let mut centers: Vec<C64> = Vec::new();
            for p in pts {
                if centers.iter().all(|c| (c - p).norm() >= POLE_SEPARATION) {
                    centers.push(p);
                }
            }
            for center in centers {
                let c = cluster(center, &integer_candidates(center, &[pb]));
                let coef = self.laurent(&c, &[1, 2], |s| {
                    let x = self.raw(which, s)?;
                    let w = if zero_in {
                        (s - 1.0) * (s - pb)
                    } else {
                        C64::new(1.0, 0.0)
                    };
                    Ok(vec![x[0] * w, x[1] * w])
                })?;
                for (k, row) in coef.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        let tag = if j == 0 { "+" } else { "-" };
                        rep.push(
                            center,
                            v.norm(),
                            format!("i = {which}, xi_{tag}, a_-{}", k + 1),
                        );
                    }
                }
            }
        }
        Ok(rep.grade())
    }

    /// Predicted principal parts of xi_sign(alpha_1) subtracted at the scanned poles.
    pub fn pole_profile(&self, sign: i32, m_max: u32, tol: f64) -> Result<ConditionReport> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidInput("sign must be +1 or -1".into()));
        }
        let spec = self.spec();
        let (mu, nu) = (spec.mu, spec.nu);
        let sg = sign as f64;
        let pb = self.pole_b();
        let a2 = spec.alpha2.zero_value();
        let beta2 = spec.beta2.clone();
        let ms: Vec<u32> = {
            let mut v: Vec<u32> = (0..=m_max).collect();
            v.extend(beta2.support());
            v.sort();
            v.dedup();
            v
        };
        let twopi_i = C64::new(0.0, sg * 2.0 * PI);
        let n_opt = neg_two_nu(nu);
        let mut rep = ConditionReport::new(Condition::PoleProfile, tol);
        // principal part as a function of s
        let generic = match n_opt {
            None => Some(sign_residue_generic(nu, mu, sg, a2)?),
            Some(_) => None,
        };
        let principal = |s: C64| -> C64 {
            let mut v = C64::new(0.0, 0.0);
            for &m in &ms {
                v += twopi_i.powu(m) * beta2.get(m) / (s - (m as f64 + 1.0));
            }
            match (generic, n_opt) {
                (Some(g), _) => v += g / (s - pb),
                (None, Some(n)) => {
                    let nf = n as f64;
                    let p = (2.0 * PI).powi(n as i32) / factorial(n as usize);
                    let d = s - (nf + 1.0);
                    v -= PI * p * (PI * (nf - sg * mu) / 2.0).sin() * a2 / d;
                    v -= 2.0 * p * (PI * (nf - sg * mu) / 2.0).cos() * a2 / (d * d);
                }
                _ => {}
            }
            v
        };
        match (generic, n_opt) {
            (Some(g), _) => rep
                .notes
                .push(format!("predicted residue at 1 - 2 nu: {g}")),
            (None, Some(n)) => {
                let p = (2.0 * PI).powi(n as i32) / factorial(n as usize);
                let a_m2 = -2.0 * p * (PI * (n as f64 - sg * mu) / 2.0).cos() * a2;
                rep.notes.push(format!(
                    "-2 nu = {n}: predicted a_-2 at s = {} is {a_m2}",
                    n + 1
                ));
            }
            _ => {}
        }
        let idx = if sign == 1 { 0 } else { 1 };
        let mut pts: Vec<C64> = ms.iter().map(|m| C64::new(*m as f64 + 1.0, 0.0)).collect();
        pts.push(pb);
        let mut centers: Vec<C64> = Vec::new();
        for p in pts {
            if centers.iter().all(|c| (c - p).norm() >= POLE_SEPARATION) {
                centers.push(p);
            }
        }
        for center in centers {
            let c = cluster(center, &integer_candidates(center, &[pb]));
            let coef = self.laurent(&c, &[1, 2], |s| {
                Ok(vec![self.raw(1, s)?[idx] - principal(s)])
            })?;
            let scale = 1.0;
            rep.push(
                center,
                coef[0][0].norm() / scale,
                "a_-1 after subtracting the prediction",
            );
            rep.push(
                center,
                coef[1][0].norm() / scale,
                "a_-2 after subtracting the prediction",
            );
        }
        Ok(rep.grade())
    }
}

/// Growth verdict from the largest |Xi| per height, in increasing height order.
/// The envelope (strict) or the apparent order (weak) is fitted on the lower half of
/// the heights; the check fails when a later sample exceeds it by more than D2_MARGIN.
pub fn grade_growth(peaks: &[(f64, C64)], mode: GrowthMode) -> ConditionReport {
    let cond = if mode == GrowthMode::Strict {
        Condition::D21
    } else {
        Condition::D22
    };
    let mut rep = ConditionReport::new(cond, D2_MARGIN);
    rep.notes.push(HEURISTIC_NOTE.into());
    if peaks.len() < 3 {
        rep.notes.push(format!(
            "only {} usable heights; need at least 3",
            peaks.len()
        ));
        rep.verdict = Verdict::Inconclusive;
        return rep;
    }
    let half = peaks.len().div_ceil(2);
    match mode {
        GrowthMode::Strict => {
            // |Xi| / e^{-pi |t| / 2 + sqrt |t|} should stay bounded
            let g: Vec<f64> = peaks
                .iter()
                .map(|(m, s)| {
                    let h = s.im.abs();
                    m / (-PI * h / 2.0 + h.sqrt()).exp()
                })
                .collect();
            let c = g[..half].iter().cloned().fold(0.0, f64::max).max(1e-300);
            rep.notes.push(format!(
                "envelope constant fitted on the lowest {half} heights: {c:e}"
            ));
            for ((_, s), gi) in peaks.iter().zip(&g) {
                rep.push(*s, gi / c, "|Xi| / (C e^{-pi|t|/2 + sqrt|t|})");
            }
        }
        GrowthMode::Weak => {
            // apparent order log log |Xi| / log |s|
            let order =
                |m: f64, s: C64| m.max(std::f64::consts::E).ln().ln() / s.norm().max(2.0).ln();
            let rho: Vec<f64> = peaks.iter().map(|(m, s)| order(*m, *s)).collect();
            let c0 = rho[..half].iter().cloned().fold(0.0, f64::max) + 0.5;
            rep.notes.push(format!("fitted order c0 = {c0:.3}"));
            for ((m, s), r) in peaks.iter().zip(&rho) {
                // log |Xi| against |s|^{c0}, and the order against c0
                let excess = m.max(1.0).ln() / s.norm().powf(c0).max(1.0);
                rep.push(*s, excess.max(r / c0), "log|Xi| / |s|^{c0}");
            }
        }
    }
    rep.grade()
}

/// Functional equation and principal parts at 0 and 1 - 2 nu.
pub fn check_d1(spec: &PairSpec, samples: &[C64], tol: f64) -> Result<ConditionReport> {
    Checker::new(spec.clone()).d1(samples, tol)
}

pub fn check_d2(
    spec: &PairSpec,
    strip: (f64, f64),
    heights: &[f64],
    mode: GrowthMode,
) -> Result<ConditionReport> {
    Checker::new(spec.clone()).d2(strip, heights, mode)
}

pub fn check_d3(spec: &PairSpec, m_max: u32, tol: f64) -> Result<ConditionReport> {
    Checker::new(spec.clone()).d3(m_max, tol)
}

pub fn check_d4(spec: &PairSpec, m_max: u32, tol: f64) -> Result<ConditionReport> {
    Checker::new(spec.clone()).d4(m_max, &[], tol)
}

pub fn pole_profile(spec: &PairSpec, sign: i32, m_max: u32, tol: f64) -> Result<ConditionReport> {
    Checker::new(spec.clone()).pole_profile(sign, m_max, tol)
}

/// Structural constraints on (alpha_i, beta_i): admissibility, beta supported in S_nu(L_i),
/// and beta_i(0) = 0 when -2 nu > 0 is an integer, mu - 2 nu - 1 is even and
/// (0 is not in L_{3-i} or -2 nu > 1).
pub fn check_qad_beta(spec: &PairSpec) -> ConditionReport {
    let mut rep = ConditionReport::new(Condition::QADbeta, 0.0);
    let (mu, nu) = (spec.mu, spec.nu);
    let sides = [
        (1, &spec.alpha1, &spec.beta1, spec.l2),
        (2, &spec.alpha2, &spec.beta2, spec.l1),
    ];
    let origin = C64::new(0.0, 0.0);
    for (i, alpha, beta, other) in sides {
        let ok = in_m0(alpha, mu, nu);
        rep.push(
            origin,
            if ok {
                0.0
            } else {
                alpha.zero_value().norm().max(1.0)
            },
            format!("alpha_{i} admissible"),
        );
        let allowed = s_nu(&alpha.lattice, nu);
        let outside: f64 = beta
            .support()
            .iter()
            .filter(|m| !allowed.contains(m))
            .map(|m| beta.get(*m).norm())
            .sum();
        rep.push(
            origin,
            outside,
            format!("beta_{i} supported in S_nu(L_{i}) = {allowed:?}"),
        );
        let n = as_integer(-2.0 * nu, 1e-9);
        let parity = matches!(as_integer(mu - 2.0 * nu - 1.0, 1e-9), Some(k) if k % 2 == 0);
        if matches!(n, Some(k) if k > 0) && parity && (!other.contains_zero() || n.unwrap() > 1) {
            rep.push(
                origin,
                beta.get(0).norm(),
                format!("beta_{i}(0) = 0 required"),
            );
        }
    }
    rep.grade()
}

/// Sampling choices for the twisted checks.
#[derive(Debug, Clone)]
pub struct WOptions {
    pub d1_samples: Vec<C64>,
    pub strip: (f64, f64),
    pub heights: Vec<f64>,
    pub mode: GrowthMode,
    pub m_max: u32,
}

impl WOptions {
    pub fn defaults(nu: C64) -> Self {
        WOptions {
            d1_samples: default_d1_samples(nu),
            strip: (-1.0, 2.0),
            heights: vec![5.0, 10.0, 20.0, 40.0],
            mode: GrowthMode::Weak,
            m_max: 2,
        }
    }
}

fn same_lattice(a: &ShiftedLattice, b: &ShiftedLattice) -> bool {
    (a.u2.abs() - b.u2.abs()).abs() < 1e-12 && b.contains(a.u1)
}

fn all_conditions(spec: PairSpec, opts: &WOptions, tol: f64) -> Result<Vec<ConditionReport>> {
    let ch = Checker::new(spec);
    Ok(vec![
        ch.d1(&opts.d1_samples, tol)?,
        ch.d2(opts.strip, &opts.heights, opts.mode)?,
        ch.d3(opts.m_max, tol)?,
        ch.d4(opts.m_max, &[], tol)?,
    ])
}

/// The untwisted conditions and, for every d in `d_list` and each character mod d
/// (only the non-principal ones unless `psi_all`), the same conditions on the twisted data.
pub fn check_w(
    spec: &PairSpec,
    v: &MultiplierSystem,
    n: i64,
    d_list: &[u64],
    psi_all: bool,
    tol: f64,
    opts: &WOptions,
) -> Result<ConditionReport> {
    if n <= 1 || v.level != n {
        return Err(Error::InvalidInput(format!(
            "level N = {n} must exceed 1 and match the multiplier"
        )));
    }
    let (l, lhat) = lattices_from_multiplier(v)?;
    if !same_lattice(&spec.l1, &l) || !same_lattice(&spec.l2, &lhat) {
        return Err(Error::InvalidInput(
            "L_1, L_2 do not match the lattices of the multiplier system".into(),
        ));
    }
    if let Some(&dmax) = d_list.iter().max() {
        let allowed = primes_pn(n as u64, dmax.max(3))?;
        if let Some(d) = d_list.iter().find(|d| !allowed.contains(d)) {
            return Err(Error::InvalidInput(format!(
                "{d} is not an odd prime coprime to N = {n}"
            )));
        }
    }
    let cond = if d_list.is_empty() {
        Condition::W1
    } else {
        Condition::W2
    };
    let mut rep = ConditionReport::new(cond, tol);
    for sub in all_conditions(spec.clone(), opts, tol)? {
        rep.absorb("untwisted", sub);
    }
    if d_list.is_empty() {
        rep.notes.push("partial: no twists checked".into());
    } else {
        rep.notes.push(
            "finite check: the converse statement quantifies over every prime of P_N and every character mod d".into(),
        );
    }
    let u = l.u1.rem_euclid(1.0);
    let uhat = (lhat.u1 * n as f64).rem_euclid(1.0);
    for &d in d_list {
        for psi in characters_mod(d)? {
            if !psi_all && psi.is_principal() {
                continue;
            }
            let (a, b) = twist_coefficients(&spec.alpha1, &spec.beta1, &psi)?;
            let (ah, bh) = twist_hat_coefficients(
                &spec.alpha2,
                &spec.beta2,
                &psi,
                v,
                spec.mu,
                spec.nu,
                u,
                uhat,
            )?;
            let twisted = PairSpec::new(a, ah, b, bh, spec.mu, spec.nu)?;
            for sub in all_conditions(twisted, opts, tol)? {
                rep.absorb(&format!("d = {d}, psi = {:?}", psi.label), sub);
            }
        }
    }
    Ok(rep)
}
