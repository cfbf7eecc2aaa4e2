//! JSON run configuration and its conversion into library values.

use crate::error::CliError;
use pairzeta::builtins;
use pairzeta::conditions::GrowthMode;
use pairzeta::cover_group::{IntMat, MultiplierSystem};
use pairzeta::lattice::{
    divisor_coefficients, Coefficients, DeltaVector, Family, PairSpec, ShiftedLattice,
};
use pairzeta::C64;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

/// Smallest allowed gap between colliding pole families.
pub const POLE_SEPARATION: f64 = 0.15;

/// A complex number written as `1.5` or `[1.5, -2]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum CValue {
    Real(f64),
    Pair([f64; 2]),
}

impl CValue {
    pub fn get(self) -> C64 {
        match self {
            CValue::Real(x) => C64::new(x, 0.0),
            CValue::Pair([re, im]) => C64::new(re, im),
        }
    }
}

impl Default for CValue {
    fn default() -> Self {
        CValue::Real(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CheckKind {
    D1,
    D2,
    D3,
    D4,
    W,
    PairRelation,
    MaassEval,
    Laplacian,
    Automorphy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    Eisenstein,
    Theta4,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub u1: f64,
    pub u2: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilyConfig {
    Zero,
    Constant {
        value: CValue,
    },
    Divisor {
        a: CValue,
    },
    Squares {
        q: f64,
        value: CValue,
    },
    Table {
        entries: Vec<(f64, CValue)>,
        #[serde(default)]
        cutoff: Option<f64>,
        #[serde(default)]
        beyond: Option<Box<FamilyConfig>>,
    },
}

impl FamilyConfig {
    fn build(&self) -> Family {
        match self {
            FamilyConfig::Zero => Family::Zero,
            FamilyConfig::Constant { value } => Family::Constant(value.get()),
            FamilyConfig::Divisor { a } => Family::Divisor { a: a.get() },
            FamilyConfig::Squares { q, value } => Family::Squares {
                q: *q,
                value: value.get(),
            },
            FamilyConfig::Table {
                entries,
                cutoff,
                beyond,
            } => {
                let reach = entries.iter().map(|e| e.0.abs()).fold(0.0, f64::max);
                Family::Table {
                    entries: entries.iter().map(|(l, v)| (*l, v.get())).collect(),
                    cutoff: cutoff.unwrap_or(reach),
                    beyond: beyond.as_ref().map(|b| Box::new(b.build())),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsConfig {
    pub lattice: LatticeConfig,
    pub family: FamilyConfig,
    /// Growth exponent; divisor families default to max(Re a, 0) + 1e-3, others to 0.
    #[serde(default)]
    pub growth: Option<f64>,
    /// alpha(0), used only when 0 is in the lattice.
    #[serde(default)]
    pub zero: CValue,
}

impl CoefficientsConfig {
    fn build(&self, field: &str) -> Result<Coefficients, CliError> {
        let lat = ShiftedLattice::new(self.lattice.u1, self.lattice.u2)
            .map_err(|e| CliError::config(format!("{field}.lattice"), e.to_string()))?;
        let family = self.family.build();
        let growth = match (self.growth, &family) {
            (Some(g), _) => g,
            (None, Family::Divisor { a }) => divisor_coefficients(*a, C64::new(0.0, 0.0)).growth,
            (None, _) => 0.0,
        };
        if let FamilyConfig::Table { entries, .. } = &self.family {
            if let Some((l, _)) = entries.iter().find(|(l, _)| !lat.contains(*l)) {
                return Err(CliError::config(
                    format!("{field}.family.entries"),
                    format!("{l} is not in the lattice"),
                ));
            }
        }
        Coefficients::new(lat, family, growth, self.zero.get())
            .map_err(|e| CliError::config(field, e.to_string()))
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    #[serde(default)]
    pub builtin: Option<Builtin>,
    #[serde(default)]
    pub mu: Option<CValue>,
    #[serde(default)]
    pub nu: Option<CValue>,
    #[serde(default)]
    pub alpha1: Option<CoefficientsConfig>,
    #[serde(default)]
    pub alpha2: Option<CoefficientsConfig>,
    #[serde(default)]
    pub beta1: Vec<(u32, CValue)>,
    #[serde(default)]
    pub beta2: Vec<(u32, CValue)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub matrix: [i64; 4],
    pub value: CValue,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MultiplierConfig {
    Trivial {
        level: i64,
        kappa: f64,
    },
    EtaPower {
        level: i64,
        kappa: f64,
    },
    Theta4,
    Table {
        level: i64,
        kappa: f64,
        entries: Vec<TableEntry>,
    },
}

/// Per-check tolerances. A check uses its own entry, then `default`, then its built-in value.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Tolerances {
    pub default: Option<f64>,
    pub d1: Option<f64>,
    pub d3: Option<f64>,
    pub d4: Option<f64>,
    pub w: Option<f64>,
    pub pair_relation: Option<f64>,
    pub laplacian: Option<f64>,
    pub automorphy: Option<f64>,
}

impl Tolerances {
    pub fn for_check(&self, c: CheckKind) -> f64 {
        let (own, builtin) = match c {
            CheckKind::D1 => (self.d1, 1e-7),
            CheckKind::D3 => (self.d3, 1e-7),
            CheckKind::D4 => (self.d4, 1e-7),
            CheckKind::W => (self.w, 1e-6),
            CheckKind::PairRelation => (self.pair_relation, 1e-6),
            CheckKind::Laplacian => (self.laplacian, 1e-4),
            CheckKind::Automorphy => (self.automorphy, 1e-6),
            CheckKind::D2 | CheckKind::MaassEval => (None, 0.0),
        };
        own.or(self.default).unwrap_or(builtin)
    }

    /// Every tolerance set to `tol`.
    pub fn overridden(tol: f64) -> Self {
        Tolerances {
            default: Some(tol),
            ..Tolerances::default()
        }
    }

    fn all(&self) -> [Option<f64>; 8] {
        [
            self.default,
            self.d1,
            self.d3,
            self.d4,
            self.w,
            self.pair_relation,
            self.laplacian,
            self.automorphy,
        ]
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthModeConfig {
    Strict,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsiSelector {
    /// every character mod d
    All,
    /// non-principal characters (the primitive ones for prime d)
    Primitive,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFnConfig {
    pub s0: CValue,
    pub eps: i32,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        if self.n <= 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n).map(|k| self.min + step * k as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaassGrid {
    pub x: Axis,
    pub y: Axis,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Grids {
    /// Sample points for the functional equation; defaults to 20 points around the center line.
    pub d1_samples: Option<Vec<CValue>>,
    pub strip: Option<(f64, f64)>,
    pub heights: Option<Vec<f64>>,
    pub growth_mode: Option<GrowthModeConfig>,
    pub m_max: Option<u32>,
    #[serde(default)]
    pub d_list: Vec<u64>,
    pub psi: Option<PsiSelector>,
    pub pair_relation: Option<Vec<TestFnConfig>>,
    pub maass: Option<MaassGrid>,
    /// Truncation |l| <= X for Maass evaluation; automatic when absent.
    pub cutoff: Option<f64>,
    pub laplacian_points: Option<Vec<CValue>>,
    pub laplacian_step: Option<f64>,
    pub automorphy_points: Option<Vec<CValue>>,
    /// Matrices [a, b, c, d]; defaults to generators of Gamma_0(N).
    pub generators: Option<Vec<[i64; 4]>>,
}

impl Default for Grids {
    fn default() -> Self {
        serde_json::from_str("{}").unwrap()
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub pair: PairConfig,
    #[serde(default)]
    pub multiplier: Option<MultiplierConfig>,
    #[serde(default)]
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Parses a config, reporting the failing field path with line and column.
pub fn parse(text: &str) -> Result<RunConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::config(path, format!("{inner}"))
    })
}

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

/// Everything a run needs, resolved and validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub spec: PairSpec,
    pub multiplier: Option<MultiplierSystem>,
}

fn delta_vector(pairs: &[(u32, CValue)]) -> DeltaVector {
    let v: Vec<(u32, C64)> = pairs.iter().map(|(m, c)| (*m, c.get())).collect();
    DeltaVector::from_pairs(&v)
}

fn pair_spec(p: &PairConfig) -> Result<(PairSpec, Option<MultiplierSystem>), CliError> {
    match p.builtin {
        Some(b) => {
            if p.alpha1.is_some()
                || p.alpha2.is_some()
                || p.mu.is_some()
                || !p.beta1.is_empty()
                || !p.beta2.is_empty()
            {
                return Err(CliError::config(
                    "pair",
                    "a builtin pair takes no explicit coefficients",
                ));
            }
            match b {
                Builtin::Eisenstein => {
                    let nu = p
                        .nu
                        .ok_or_else(|| CliError::config("pair.nu", "the Eisenstein pair needs nu"))?
                        .get();
                    if nu.im != 0.0 {
                        return Err(CliError::config(
                            "pair.nu",
                            "the Eisenstein builtin takes a real nu",
                        ));
                    }
                    pole_policy(nu, true)?;
                    let spec = builtins::eisenstein(nu.re)
                        .map_err(|e| CliError::config("pair.nu", e.to_string()))?;
                    Ok((spec, None))
                }
                Builtin::Theta4 => {
                    if p.nu.is_some() {
                        return Err(CliError::config("pair.nu", "theta4 has fixed nu = 1/4"));
                    }
                    let (spec, v) = builtins::theta4().map_err(CliError::Core)?;
                    Ok((spec, Some(v)))
                }
            }
        }
        None => {
            let need = |o: &Option<CoefficientsConfig>, f: &str| {
                o.clone()
                    .ok_or_else(|| CliError::config(format!("pair.{f}"), "missing field"))
            };
            let a1 = need(&p.alpha1, "alpha1")?.build("pair.alpha1")?;
            let a2 = need(&p.alpha2, "alpha2")?.build("pair.alpha2")?;
            let mu =
                p.mu.ok_or_else(|| CliError::config("pair.mu", "missing field"))?
                    .get();
            let nu =
                p.nu.ok_or_else(|| CliError::config("pair.nu", "missing field"))?
                    .get();
            let spec = PairSpec::new(
                a1,
                a2,
                delta_vector(&p.beta1),
                delta_vector(&p.beta2),
                mu,
                nu,
            )
            .map_err(|e| CliError::config("pair", e.to_string()))?;
            Ok((spec, None))
        }
    }
}

fn multiplier(m: &MultiplierConfig) -> Result<MultiplierSystem, CliError> {
    let wrap = |e: pairzeta::Error| CliError::config("multiplier", e.to_string());
    match m {
        MultiplierConfig::Trivial { level, kappa } => {
            MultiplierSystem::trivial(*level, *kappa).map_err(wrap)
        }
        MultiplierConfig::EtaPower { level, kappa } => {
            MultiplierSystem::eta_power(*level, *kappa).map_err(wrap)
        }
        MultiplierConfig::Theta4 => Ok(MultiplierSystem::theta4()),
        MultiplierConfig::Table {
            level,
            kappa,
            entries,
        } => {
            let mut t = BTreeMap::new();
            for (i, e) in entries.iter().enumerate() {
                let v = e.value.get();
                if t.insert(e.matrix, (v.re, v.im)).is_some() {
                    return Err(CliError::config(
                        format!("multiplier.entries[{i}]"),
                        "duplicate matrix",
                    ));
                }
            }
            let v = MultiplierSystem::table(*level, *kappa, t).map_err(wrap)?;
            for (i, e) in entries.iter().enumerate() {
                let [a, b, c, d] = e.matrix;
                if !v.in_group(&[[a, b], [c, d]]) {
                    return Err(CliError::config(
                        format!("multiplier.entries[{i}].matrix"),
                        format!("{:?} is not in Gamma_0({level})", e.matrix),
                    ));
                }
            }
            Ok(v)
        }
    }
}

/// Rejects nu whose pole families sit closer than POLE_SEPARATION without coinciding,
/// and nu = 1/2 type collisions with 0 in a lattice.
pub fn pole_separation(spec: &PairSpec) -> Result<(), CliError> {
    pole_policy(spec.nu, spec.l1.contains_zero() || spec.l2.contains_zero())
}

fn pole_policy(nu: C64, zero_in: bool) -> Result<(), CliError> {
    let w = 1.0 - 2.0 * nu;
    if zero_in && w.norm() < POLE_SEPARATION {
        return Err(CliError::config(
            "pair.nu",
            format!(
                "pole-separation policy: 1 - 2 nu = {w} collides with the pole at 0 (needs |1 - 2 nu| >= {POLE_SEPARATION} when 0 is in a lattice)"
            ),
        ));
    }
    let k = w.re.round().max(1.0);
    let gap = (w - k).norm();
    if gap > 0.0 && gap < POLE_SEPARATION {
        return Err(CliError::config(
            "pair.nu",
            format!("pole-separation policy: 1 - 2 nu = {w} lies within {gap:.3} of the integer {k} (minimum {POLE_SEPARATION})"),
        ));
    }
    Ok(())
}

impl RunConfig {
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let (spec, builtin_v) = pair_spec(&self.pair)?;
        let multiplier = match (&self.multiplier, builtin_v) {
            (Some(m), _) => Some(multiplier(m)?),
            (None, v) => v,
        };
        pole_separation(&spec)?;
        if let Some(t) = self.tolerances_invalid() {
            return Err(CliError::config("tolerances", t));
        }
        Ok(Resolved { spec, multiplier })
    }

    fn tolerances_invalid(&self) -> Option<String> {
        self.tolerances
            .all()
            .iter()
            .flatten()
            .find(|x| !(**x > 0.0 && x.is_finite()))
            .map(|x| format!("tolerance {x} must be positive"))
    }

    pub fn growth_mode(&self) -> GrowthMode {
        match self.grids.growth_mode {
            Some(GrowthModeConfig::Strict) => GrowthMode::Strict,
            _ => GrowthMode::Weak,
        }
    }
}

/// Default generators of Gamma_0(N): T and either S (N = 1) or [[1, 0], [N, 1]].
pub fn default_generators(level: i64) -> Vec<IntMat> {
    let t = [[1, 1], [0, 1]];
    if level == 1 {
        vec![t, [[0, -1], [1, 0]]]
    } else {
        vec![t, [[1, 0], [level, 1]]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eis(nu: &str) -> String {
        format!(r#"{{"pair": {{"builtin": "eisenstein", "nu": {nu}}}}}"#)
    }

    #[test]
    fn complex_values() {
        let c: CValue = serde_json::from_str("[1.5, -2]").unwrap();
        assert_eq!(c.get(), C64::new(1.5, -2.0));
        let c: CValue = serde_json::from_str("3").unwrap();
        assert_eq!(c.get(), C64::new(3.0, 0.0));
    }

    #[test]
    fn pole_policy() {
        assert!(parse(&eis("0.3")).unwrap().resolve().is_ok());
        for bad in ["0.5", "0.45", "0.04", "-0.47"] {
            let err = parse(&eis(bad)).unwrap().resolve().unwrap_err();
            assert!(err.to_string().contains("pole-separation"), "{bad}: {err}");
        }
        // exact coincidence with an integer is a double pole, not a near collision
        assert!(parse(&eis("-0.5")).unwrap().resolve().is_ok());
    }

    #[test]
    fn field_paths_in_errors() {
        let err = parse(r#"{"pair": {"builtin": "eisenstein", "nu": 0.3}, "checks": ["d9"]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("checks"), "{err}");
        let err = parse(r#"{"pair": {"mu": 0, "nu": 0.3, "alpha1": {"lattice": {"u1": 0}}}}"#)
            .unwrap_err();
        assert!(err.to_string().contains("pair.alpha1.lattice"), "{err}");
        let err = parse(r#"{"pair": {"mu": 0, "nu": 0.3}}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(err.to_string().contains("pair.alpha1"), "{err}");
    }

    #[test]
    fn explicit_pair_matches_builtin() {
        let text = r#"{"pair": {"mu": 0, "nu": 0.3,
            "alpha1": {"lattice": {"u1": 0, "u2": 1}, "family": {"kind": "divisor", "a": -0.6}, "zero": 1.0},
            "alpha2": {"lattice": {"u1": 0, "u2": 1}, "family": {"kind": "divisor", "a": -0.6}, "zero": 1.0},
            "beta1": [[0, 2.0]], "beta2": [[0, 2.0]]}}"#;
        let r = parse(text).unwrap().resolve().unwrap();
        let b = builtins::eisenstein(0.3).unwrap();
        assert_eq!(r.spec.alpha1.eval(6.0), b.alpha1.eval(6.0));
        assert_eq!(r.spec.alpha1.growth, b.alpha1.growth);
        assert_eq!(r.spec.beta2.get(0), C64::new(2.0, 0.0));
    }

    #[test]
    fn table_multiplier_validation() {
        let text = r#"{"pair": {"builtin": "theta4"}, "multiplier": {"kind": "table", "level": 4, "kappa": 0.5,
            "entries": [{"matrix": [1, 1, 0, 1], "value": 1}, {"matrix": [1, 0, 3, 1], "value": 1}]}}"#;
        let err = parse(text).unwrap().resolve().unwrap_err();
        assert!(
            err.to_string().contains("multiplier.entries[1].matrix"),
            "{err}"
        );
    }

    #[test]
    fn axis_points() {
        let a = Axis {
            min: -0.5,
            max: 0.5,
            n: 5,
        };
        assert_eq!(a.points(), vec![-0.5, -0.25, 0.0, 0.25, 0.5]);
    }
}
