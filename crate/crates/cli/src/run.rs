//! Check orchestration and output files.

use crate::config::{
    default_generators, CValue, CheckKind, MaassGrid, PsiSelector, Resolved, RunConfig, Tolerances,
};
use crate::error::CliError;
use pairzeta::conditions::{
    check_w, default_d1_samples, Checker, Condition, ConditionReport, Verdict, WOptions,
};
use pairzeta::cover_group::{int_mul, IntMat, MultiplierKind, MultiplierSystem};
use pairzeta::maass::{
    automorphy_residual, eval_maass, expansion_from_pair, laplacian_residual, MaassExpansion,
};
use pairzeta::testfn::TestFn;
use pairzeta::zeta_engine::{pair_relation_residual, PairEngine};
use pairzeta::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::PathBuf;

pub const REPORT_FILE: &str = "report.json";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const MAASS_FILE: &str = "maass_grid.csv";

/// Largest accepted defect of a multiplier table in the consistency relation.
pub const TABLE_DEFECT_TOL: f64 = 1e-8;

/// Command-line overrides shared by all subcommands.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

/// A validated configuration with the overrides applied.
pub struct Job {
    pub cfg: RunConfig,
    pub res: Resolved,
    pub tol: Tolerances,
    pub out: PathBuf,
    pub seed: Option<u64>,
}

impl Job {
    pub fn new(cfg: RunConfig, ov: &Overrides) -> Result<Self, CliError> {
        if let Some(t) = ov.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!("--tol {t} must be positive")));
            }
        }
        let res = cfg.resolve()?;
        let seed = ov.seed.or(cfg.seed);
        if let Some(v) = &res.multiplier {
            check_table_consistency(v, seed)?;
        }
        let tol = match ov.tol {
            Some(t) => Tolerances::overridden(t),
            None => cfg.tolerances.clone(),
        };
        let out = ov
            .out
            .clone()
            .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| ".".into());
        Ok(Job {
            cfg,
            res,
            tol,
            out,
            seed,
        })
    }

    fn out_file(&self, name: &str) -> Result<PathBuf, CliError> {
        std::fs::create_dir_all(&self.out)
            .map_err(|e| CliError::Io(format!("{}: {e}", self.out.display())))?;
        Ok(self.out.join(name))
    }

    fn kappa(&self) -> f64 {
        self.res.multiplier.as_ref().map(|v| v.kappa).unwrap_or(0.0)
    }

    fn w_options(&self) -> WOptions {
        let g = &self.cfg.grids;
        let mut o = WOptions::defaults(self.res.spec.nu);
        if let Some(s) = &g.d1_samples {
            o.d1_samples = s.iter().map(|c| c.get()).collect();
        }
        if let Some(s) = g.strip {
            o.strip = s;
        }
        if let Some(h) = &g.heights {
            o.heights = h.clone();
        }
        if let Some(m) = g.m_max {
            o.m_max = m;
        }
        o.mode = self.cfg.growth_mode();
        o
    }

    /// Maass expansion of (alpha_1, beta_1) with the multiplier weight.
    pub fn expansion(&self) -> Result<MaassExpansion, CliError> {
        let s = &self.res.spec;
        if s.mu.im != 0.0 {
            return Err(CliError::config(
                "pair.mu",
                "Maass evaluation needs a real mu",
            ));
        }
        Ok(expansion_from_pair(
            &s.alpha1,
            &s.beta1,
            s.mu.re,
            s.nu,
            self.kappa(),
        )?)
    }
}

/// Verifies the consistency relation of a table multiplier on every pair of listed
/// matrices whose product is listed too. Sample points are fixed unless a seed is given.
pub fn check_table_consistency(v: &MultiplierSystem, seed: Option<u64>) -> Result<(), CliError> {
    let MultiplierKind::Table(t) = &v.kind else {
        return Ok(());
    };
    let zs: Vec<C64> = match seed {
        None => vec![C64::new(0.1, 1.1), C64::new(-0.3, 0.7)],
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..4)
                .map(|_| C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.3..2.0)))
                .collect()
        }
    };
    let mats: Vec<IntMat> = t.keys().map(|[a, b, c, d]| [[*a, *b], [*c, *d]]).collect();
    for g1 in &mats {
        for g2 in &mats {
            let p = int_mul(g1, g2);
            if !t.contains_key(&[p[0][0], p[0][1], p[1][0], p[1][1]]) {
                continue;
            }
            for &z in &zs {
                let d = v.consistency_defect(g1, g2, z)?;
                if !(d <= TABLE_DEFECT_TOL) {
                    return Err(CliError::config(
                        "multiplier.entries",
                        format!("consistency relation fails for {g1:?} * {g2:?} at z = {z}: defect {d:.3e}"),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn condition_of(c: CheckKind) -> Condition {
    match c {
        CheckKind::D1 => Condition::D1,
        CheckKind::D2 => Condition::D21,
        CheckKind::D3 => Condition::D3,
        CheckKind::D4 => Condition::D4,
        CheckKind::W => Condition::W2,
        CheckKind::PairRelation => Condition::PairRelation,
        CheckKind::MaassEval => Condition::MaassEval,
        CheckKind::Laplacian => Condition::Laplacian,
        CheckKind::Automorphy => Condition::Automorphy,
    }
}

/// Runs the configured checks, one thread each, returning reports in request order.
pub fn verify(job: &Job) -> Result<Vec<ConditionReport>, CliError> {
    let checks = &job.cfg.checks;
    if checks.contains(&CheckKind::W) {
        w_preconditions(job, &job.cfg.grids.d_list, "grids.dList")?;
    }
    let checker = Checker::new(job.res.spec.clone());
    let ch = &checker;
    let results: Vec<Result<ConditionReport, CliError>> = std::thread::scope(|sc| {
        let handles: Vec<_> = checks
            .iter()
            .map(|&c| sc.spawn(move || run_check(job, ch, c)))
            .collect();
        handles
            .into_iter()
            .zip(checks)
            .map(|(h, &c)| {
                h.join().unwrap_or_else(|_| {
                    Err(CliError::Io(format!("check {} panicked", condition_of(c))))
                })
            })
            .collect()
    });
    results.into_iter().collect()
}

fn run_check(job: &Job, ch: &Checker, c: CheckKind) -> Result<ConditionReport, CliError> {
    let g = &job.cfg.grids;
    let tol = job.tol.for_check(c);
    let nu = job.res.spec.nu;
    let m_max = g.m_max.unwrap_or(2);
    match c {
        CheckKind::D1 => {
            let samples = match &g.d1_samples {
                Some(v) => v.iter().map(|c| c.get()).collect(),
                None => default_d1_samples(nu),
            };
            Ok(ch.d1(&samples, tol)?)
        }
        CheckKind::D2 => {
            let o = job.w_options();
            Ok(ch.d2(o.strip, &o.heights, o.mode)?)
        }
        CheckKind::D3 => Ok(ch.d3(m_max, tol)?),
        CheckKind::D4 => Ok(ch.d4(m_max, &[], tol)?),
        CheckKind::W => {
            let psi_all = g.psi == Some(PsiSelector::All);
            run_w(job, &g.d_list, "grids.dList", psi_all, tol)
        }
        CheckKind::PairRelation => pair_relation(job, tol),
        CheckKind::MaassEval => {
            let grid = g.maass.unwrap_or_else(default_maass_grid);
            let (rep, _) = maass_grid(job, &grid)?;
            Ok(rep)
        }
        CheckKind::Laplacian => laplacian(job, tol),
        CheckKind::Automorphy => automorphy(job, tol),
    }
}

fn w_preconditions<'a>(
    job: &'a Job,
    d_list: &[u64],
    field: &str,
) -> Result<&'a MultiplierSystem, CliError> {
    let v = job.res.multiplier.as_ref().ok_or_else(|| {
        CliError::config("multiplier", "the twisted check needs a multiplier system")
    })?;
    let mut distinct = d_list.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(CliError::config(
            field,
            "the twisted check needs at least two primes",
        ));
    }
    Ok(v)
}

/// The twisted conditions for the given primes; `field` names their source in errors.
pub fn run_w(
    job: &Job,
    d_list: &[u64],
    field: &str,
    psi_all: bool,
    tol: f64,
) -> Result<ConditionReport, CliError> {
    let v = w_preconditions(job, d_list, field)?;
    let mut rep = check_w(
        &job.res.spec,
        v,
        v.level,
        d_list,
        psi_all,
        tol,
        &job.w_options(),
    )?;
    rep.note(format!("P_N tested: {d_list:?}"));
    Ok(rep)
}

fn pair_relation(job: &Job, tol: f64) -> Result<ConditionReport, CliError> {
    let fns: Vec<(C64, i32)> = match &job.cfg.grids.pair_relation {
        Some(v) => v.iter().map(|t| (t.s0.get(), t.eps)).collect(),
        None => vec![(C64::new(0.0, 0.0), 1), (C64::new(2.0, 0.0), -1)],
    };
    let mut rep = ConditionReport::new(Condition::PairRelation, tol);
    for (i, (s0, eps)) in fns.into_iter().enumerate() {
        if eps != 1 && eps != -1 {
            return Err(CliError::config(
                format!("grids.pairRelation[{i}].eps"),
                "eps must be 1 or -1",
            ));
        }
        let r = pair_relation_residual(&job.res.spec, &TestFn::test_function(s0, eps), tol)?;
        rep.push(s0, r, format!("test function s0 = {s0}, eps = {eps}"));
    }
    Ok(rep.grade())
}

pub fn default_maass_grid() -> MaassGrid {
    serde_json::from_str(
        r#"{"x": {"min": -0.5, "max": 0.5, "n": 11}, "y": {"min": 0.8, "max": 2.0, "n": 7}}"#,
    )
    .unwrap()
}

#[derive(Debug, Clone, Serialize)]
pub struct GridRow {
    pub x: f64,
    pub y: f64,
    pub re_phi: f64,
    pub im_phi: f64,
}

/// Evaluates the expansion on a grid (rows in parallel) and writes the CSV.
pub fn maass_grid(job: &Job, grid: &MaassGrid) -> Result<(ConditionReport, PathBuf), CliError> {
    let e = job.expansion()?;
    let xs = grid.x.points();
    let ys = grid.y.points();
    let cutoff = job.cfg.grids.cutoff;
    let rows: Vec<Result<Vec<GridRow>, CliError>> = std::thread::scope(|sc| {
        let handles: Vec<_> = ys
            .iter()
            .map(|&y| {
                let (e, xs) = (&e, &xs);
                sc.spawn(move || {
                    xs.iter()
                        .map(|&x| {
                            let v = eval_maass(e, C64::new(x, y), cutoff)?;
                            Ok(GridRow {
                                x,
                                y,
                                re_phi: v.re,
                                im_phi: v.im,
                            })
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(CliError::Io("grid row panicked".into())))
            })
            .collect()
    });
    let path = job.out_file(MAASS_FILE)?;
    let mut w = csv::Writer::from_path(&path)?;
    let mut rep = ConditionReport::new(Condition::MaassEval, 0.0);
    for row in rows {
        for r in row? {
            let finite = r.re_phi.is_finite() && r.im_phi.is_finite();
            rep.push(
                C64::new(r.x, r.y),
                if finite { 0.0 } else { f64::INFINITY },
                "value is finite",
            );
            w.serialize(&r)?;
        }
    }
    w.flush()?;
    for n in &e.notes {
        rep.note(n.clone());
    }
    rep.note(format!("values written to {}", path.display()));
    Ok((rep.grade(), path))
}

fn points(v: &Option<Vec<CValue>>, default: &[(f64, f64)]) -> Vec<C64> {
    match v {
        Some(p) => p.iter().map(|c| c.get()).collect(),
        None => default.iter().map(|&(x, y)| C64::new(x, y)).collect(),
    }
}

fn laplacian(job: &Job, tol: f64) -> Result<ConditionReport, CliError> {
    let e = job.expansion()?;
    let zs = points(
        &job.cfg.grids.laplacian_points,
        &[(-0.3, 1.0), (0.1, 1.3), (0.4, 0.9), (0.0, 1.7), (-0.2, 2.2)],
    );
    let h = job.cfg.grids.laplacian_step.unwrap_or(1e-3);
    let mut rep = ConditionReport::new(Condition::Laplacian, tol);
    for z in zs {
        // one truncation for the whole stencil keeps the finite sum an exact eigenfunction
        let cut = match job.cfg.grids.cutoff {
            Some(c) => c,
            None => e.auto_cutoff(z.im - h)?,
        };
        let phi = |w: C64| eval_maass(&e, w, Some(cut));
        let r = laplacian_residual(phi, e.kappa, e.nu, z, h)?;
        let scale = phi(z)?.norm().max(f64::MIN_POSITIVE);
        rep.push(z, r / scale, format!("relative residual, h = {h}"));
    }
    Ok(rep.grade())
}

fn automorphy(job: &Job, tol: f64) -> Result<ConditionReport, CliError> {
    let e = job.expansion()?;
    let v = match &job.res.multiplier {
        Some(v) => v.clone(),
        None => MultiplierSystem::trivial(1, 0.0)?,
    };
    let gens: Vec<IntMat> = match &job.cfg.grids.generators {
        Some(g) => g.iter().map(|[a, b, c, d]| [[*a, *b], [*c, *d]]).collect(),
        None => default_generators(v.level),
    };
    let n = v.level as f64;
    let default: Vec<(f64, f64)> = if v.level == 1 {
        vec![(0.2, 1.3), (-0.3, 0.95), (0.45, 1.1)]
    } else {
        vec![
            (-1.0 / n, 1.0 / n),
            (-1.0 / n + 0.03, 1.2 / n),
            (-1.0 / n - 0.02, 0.9 / n),
        ]
    };
    let zs = points(&job.cfg.grids.automorphy_points, &default);
    let cutoff = job.cfg.grids.cutoff;
    let mut scale: f64 = f64::MIN_POSITIVE;
    for &z in &zs {
        scale = scale.max(eval_maass(&e, z, cutoff)?.norm());
    }
    let mut rep = ConditionReport::new(Condition::Automorphy, tol);
    for g in &gens {
        for &z in &zs {
            let r = automorphy_residual(&e, &v, &[*g], &[z], cutoff)?;
            rep.push(
                z,
                r / scale,
                format!("gamma = {g:?}, relative to max |phi|"),
            );
        }
    }
    Ok(rep.grade())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub re_s: f64,
    pub im_s: f64,
    pub re_xi_plus: f64,
    pub im_xi_plus: f64,
    pub re_xi_minus: f64,
    pub im_xi_minus: f64,
    pub error_estimate: f64,
}

/// A vertical line `re=sigma,tmin,tmax,step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub sigma: f64,
    pub tmin: f64,
    pub tmax: f64,
    pub step: f64,
}

impl std::str::FromStr for Line {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let rest = s
            .strip_prefix("re=")
            .ok_or_else(|| format!("expected re=sigma,tmin,tmax,step, got {s}"))?;
        let v: Vec<f64> = rest
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p}: {e}")))
            .collect::<Result<_, _>>()?;
        match v[..] {
            [sigma, tmin, tmax, step] if step > 0.0 && tmax >= tmin => Ok(Line {
                sigma,
                tmin,
                tmax,
                step,
            }),
            [_, _, _, _] => Err("need step > 0 and tmax >= tmin".into()),
            _ => Err(format!("expected four numbers, got {}", v.len())),
        }
    }
}

/// Ξ along a vertical line for distribution `which`, written as CSV.
pub fn sweep(job: &Job, line: Line, which: u8) -> Result<(Vec<SweepRow>, PathBuf), CliError> {
    let engine = PairEngine::new(job.res.spec.clone());
    let vals = engine.sweep(which, line.sigma, line.tmin, line.tmax, line.step)?;
    let mut rows = Vec::with_capacity(vals.len());
    for v in vals {
        let v = v?;
        rows.push(SweepRow {
            re_s: v.at.re,
            im_s: v.at.im,
            re_xi_plus: v.xi_plus.re,
            im_xi_plus: v.xi_plus.im,
            re_xi_minus: v.xi_minus.re,
            im_xi_minus: v.xi_minus.im,
            error_estimate: v.error_estimate,
        });
    }
    let path = job.out_file(SWEEP_FILE)?;
    let mut w = csv::Writer::from_path(&path)?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok((rows, path))
}

pub fn write_report(job: &Job, reports: &[ConditionReport]) -> Result<PathBuf, CliError> {
    let path = job.out_file(REPORT_FILE)?;
    let text = serde_json::to_string_pretty(reports)?;
    std::fs::write(&path, text + "\n")
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// 0 when every verdict passes (or there are none), 1 on any failure, 2 when the worst is inconclusive.
pub fn exit_code(reports: &[ConditionReport]) -> i32 {
    match reports.iter().map(|r| r.verdict).max() {
        None | Some(Verdict::Pass) => 0,
        Some(Verdict::Fail) => 1,
        Some(Verdict::Inconclusive) => 2,
    }
}

pub fn summary_line(r: &ConditionReport) -> String {
    let v = match r.verdict {
        Verdict::Pass => "PASS",
        Verdict::Inconclusive => "INCONCLUSIVE",
        Verdict::Fail => "FAIL",
    };
    format!(
        "{v:<12} {:<13} max residual {:.3e} (tol {:.1e}, {} points)",
        r.condition.as_str(),
        r.max_residual,
        r.tolerance,
        r.points.len()
    )
}
