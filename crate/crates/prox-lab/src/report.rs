//! Scenario configuration, suite execution, and the JSON report emitted by
//! the command-line front end.
//!
//! A config is one JSON document listing scenarios; each scenario names a
//! geometry and a φ entry from the catalogs, a point source (seeded count or
//! explicit list), optional tolerance overrides, and the suites to run.
//! Reports are deterministic for a fixed config and seed: the timestamp
//! lives in a separate `metadata` field so the `report` subtree is
//! byte-stable.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::convex::{ConeSpec, ConvexFunction};
use crate::decomposition::{
    decompose, sample_admissible, verify_hilbert_special_cases, verify_resolvent,
    DecompositionReport,
};
use crate::error::{ProxError, Result};
use crate::frames::{frame_decompose, FrameSystem};
use crate::legendre::LegendreFunction;
use crate::prox::{auto_certify, bprox, PairingLedger};
use crate::solvers::{brute_force_min, oracle_accuracy, GridBox, DEFAULT_MAX_ITER};
use crate::space::{pair, PrimalVector, Sampler, ToleranceProfile};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhiConfig {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSource {
    Seeded { count: usize, seed: u64 },
    List { list: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ToleranceOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: &ToleranceProfile) -> ToleranceProfile {
        ToleranceProfile {
            value_tol: self.value_tol.unwrap_or(base.value_tol),
            vector_tol: self.vector_tol.unwrap_or(base.vector_tol),
            fd_step: self.fd_step.unwrap_or(base.fd_step),
            gap_tol: self.gap_tol.unwrap_or(base.gap_tol),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem,
    Hilbert,
    Cone,
    Frame,
    Resolvent,
    Oracle,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub geometry: GeometryConfig,
    pub phi: PhiConfig,
    pub dim: usize,
    pub points: PointSource,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    pub suites: Vec<Suite>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenarios: Vec<ScenarioConfig>,
}

/// Options forwarded from the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed_override: Option<u64>,
    pub tol_overrides: Vec<(String, f64)>,
    pub frame: Option<FrameSystem>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub index: usize,
    pub geometry: String,
    pub phi: String,
    pub dim: usize,
    pub seed: u64,
    pub suites: Vec<SuiteOutcome>,
    pub decompositions: Vec<DecompositionReport>,
    /// max over points of residual_i..iv
    pub max_residuals: [f64; 4],
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportBody {
    pub tool_version: String,
    pub seed: u64,
    pub scenarios: Vec<ScenarioReport>,
    pub suites_passed: usize,
    pub suites_failed: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMetadata {
    pub timestamp_unix: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub metadata: RunMetadata,
    pub report: ReportBody,
}

pub fn resolve_geometry(cfg: &GeometryConfig, dim: usize) -> Result<LegendreFunction> {
    match cfg.name.as_str() {
        "euclidean" => Ok(LegendreFunction::euclidean(dim)),
        "pnorm_energy" => {
            let p = cfg
                .p
                .ok_or_else(|| ProxError::Config("pnorm_energy requires \"p\"".into()))?;
            LegendreFunction::pnorm_energy(dim, p)
        }
        "quadratic_spd" => {
            let rows = cfg.matrix.as_ref().ok_or_else(|| {
                ProxError::Config("quadratic_spd requires \"matrix\"".into())
            })?;
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(ProxError::Config("matrix shape must match dim".into()));
            }
            let m = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
            LegendreFunction::quadratic_spd(m)
        }
        "shannon_entropy" => Ok(LegendreFunction::shannon_entropy(dim)),
        "exp_sum" => Ok(LegendreFunction::exp_sum(dim)),
        other => Err(ProxError::Config(format!("unknown geometry \"{other}\""))),
    }
}

pub fn resolve_phi(cfg: &PhiConfig, dim: usize) -> Result<ConvexFunction> {
    match cfg.name.as_str() {
        "zero" => Ok(ConvexFunction::zero(dim)),
        "linear" => {
            let c = cfg
                .c
                .clone()
                .ok_or_else(|| ProxError::Config("linear requires \"c\"".into()))?;
            if c.len() != dim {
                return Err(ProxError::Config("\"c\" length must match dim".into()));
            }
            Ok(ConvexFunction::linear(crate::space::DualVector::new(c)?))
        }
        "l1" => {
            let lambda = cfg
                .lambda
                .ok_or_else(|| ProxError::Config("l1 requires \"lambda\"".into()))?;
            ConvexFunction::l1(dim, lambda)
        }
        "indicator_orthant" => Ok(ConvexFunction::indicator_orthant(dim)),
        "indicator_box" => {
            let lower = cfg
                .lower
                .clone()
                .ok_or_else(|| ProxError::Config("indicator_box requires \"lower\"".into()))?;
            let upper = cfg
                .upper
                .clone()
                .ok_or_else(|| ProxError::Config("indicator_box requires \"upper\"".into()))?;
            ConvexFunction::indicator_box(lower, upper)
        }
        "support_box" => {
            let lower = cfg
                .lower
                .clone()
                .ok_or_else(|| ProxError::Config("support_box requires \"lower\"".into()))?;
            let upper = cfg
                .upper
                .clone()
                .ok_or_else(|| ProxError::Config("support_box requires \"upper\"".into()))?;
            ConvexFunction::support_box(lower, upper)
        }
        "indicator_cone" => {
            let cone = match cfg.cone.as_deref() {
                Some("orthant") | None => ConeSpec::nonneg_orthant(dim),
                Some("second_order") => ConeSpec::second_order(dim)?,
                Some(other) => {
                    return Err(ProxError::Config(format!("unknown cone \"{other}\"")))
                }
            };
            Ok(ConvexFunction::indicator_cone(cone))
        }
        other => Err(ProxError::Config(format!("unknown phi \"{other}\""))),
    }
}

fn scenario_points(
    f: &LegendreFunction,
    phi: &ConvexFunction,
    source: &PointSource,
    seed_override: Option<u64>,
) -> Result<(Vec<PrimalVector>, u64)> {
    match source {
        PointSource::Seeded { count, seed } => {
            let seed = seed_override.unwrap_or(*seed);
            let mut sampler = Sampler::new(seed);
            let pts = (0..*count)
                .map(|_| sample_admissible(f, phi, &mut sampler, 1.5))
                .collect();
            Ok((pts, seed))
        }
        PointSource::List { list } => {
            let pts = list
                .iter()
                .map(|c| PrimalVector::new(c.clone()))
                .collect::<Result<Vec<_>>>()?;
            Ok((pts, seed_override.unwrap_or(0)))
        }
    }
}

fn theorem_suite(
    reports: &[DecompositionReport],
    f: &LegendreFunction,
    tol: &ToleranceProfile,
) -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut max_res = 0.0_f64;
    for (i, r) in reports.iter().enumerate() {
        let fx = f.eval_f(&r.x).abs();
        let nx = r.x.norm2();
        let bounds = [
            (r.residual_i, tol.value_tol * (1.0 + fx), "i"),
            (r.residual_ii, tol.vector_tol * (1.0 + nx), "ii"),
            (r.residual_iii, tol.gap_tol, "iii"),
            (r.residual_iv, tol.gap_tol, "iv"),
        ];
        for (res, bound, label) in bounds {
            max_res = max_res.max(res);
            if !(res <= bound) {
                failures.push(format!("point {i}: residual_{label} = {res:.3e} > {bound:.3e}"));
            }
        }
    }
    SuiteOutcome {
        suite: Suite::Theorem,
        passed: failures.is_empty(),
        checks: reports.len() * 4,
        failures,
        max_residual: max_res,
    }
}

fn cone_suite(
    reports: &[DecompositionReport],
    phi: &ConvexFunction,
    tol: &ToleranceProfile,
) -> Result<SuiteOutcome> {
    if phi.cone().is_none() {
        return Err(ProxError::Config(format!(
            "cone suite requires an indicator-of-cone phi, got \"{}\"",
            phi.name
        )));
    }
    let mut failures = Vec::new();
    let mut max_res = 0.0_f64;
    for (i, r) in reports.iter().enumerate() {
        let inner = pair(&r.p, &r.dstar)?.abs();
        max_res = max_res.max(inner).max(r.residual_ii);
        if inner > tol.gap_tol {
            failures.push(format!("point {i}: <p, d*> = {inner:.3e}"));
        }
        if r.residual_ii > tol.vector_tol * (1.0 + r.x.norm2()) {
            failures.push(format!("point {i}: conic reconstruction {:.3e}", r.residual_ii));
        }
    }
    Ok(SuiteOutcome {
        suite: Suite::Cone,
        passed: failures.is_empty(),
        checks: reports.len() * 2,
        failures,
        max_residual: max_res,
    })
}

fn resolvent_suite(
    f: &LegendreFunction,
    phi: &ConvexFunction,
    points: &[PrimalVector],
    ledger: &PairingLedger,
    tol: &ToleranceProfile,
) -> Result<SuiteOutcome> {
    let mut failures = Vec::new();
    let mut max_res = 0.0_f64;
    for (i, x) in points.iter().enumerate() {
        let r = verify_resolvent(f, phi, x, ledger, tol)?;
        max_res = max_res
            .max(r.first_inclusion)
            .max(r.second_inclusion)
            .max(r.sum_residual);
        if r.first_inclusion > tol.gap_tol || r.second_inclusion > tol.gap_tol {
            failures.push(format!("point {i}: resolvent inclusion residual"));
        }
        if r.sum_residual > tol.vector_tol * (1.0 + x.norm2()) {
            failures.push(format!("point {i}: resolvent sum {:.3e}", r.sum_residual));
        }
        if let Some(e) = r.euclid_pointwise {
            max_res = max_res.max(e);
            if e > tol.value_tol * (1.0 + x.norm2()) {
                failures.push(format!("point {i}: euclidean prox sum {e:.3e}"));
            }
        }
    }
    Ok(SuiteOutcome {
        suite: Suite::Resolvent,
        passed: failures.is_empty(),
        checks: points.len() * 3,
        failures,
        max_residual: max_res,
    })
}

/// Search boxes for the oracle suite, wide enough to contain the solution.
/// The aprox variable satisfies x − y ∈ dom f (so y_i ≤ x_i over an orthant
/// domain) while the bprox variable lives in dom f itself.
fn oracle_boxes(f: &LegendreFunction, x: &PrimalVector) -> (GridBox, GridBox) {
    let r = 1.0 + 2.0 * x.norm2();
    let full = f.dom_f.contains_interior(&vec![-1.0; f.dim]);
    let aprox_bounds = x
        .coords()
        .iter()
        .map(|&xi| if full { (xi - r, xi + r) } else { (xi - r, xi) })
        .collect();
    let bprox_bounds = x
        .coords()
        .iter()
        .map(|&xi| {
            if full {
                (xi - r, xi + r)
            } else {
                (0.0, xi.max(0.0) + r)
            }
        })
        .collect();
    (GridBox { bounds: aprox_bounds }, GridBox { bounds: bprox_bounds })
}

fn oracle_suite(
    f: &LegendreFunction,
    phi: &ConvexFunction,
    points: &[PrimalVector],
    reports: &[DecompositionReport],
    ledger: &PairingLedger,
    tol: &ToleranceProfile,
) -> Result<SuiteOutcome> {
    if f.dim > 3 {
        return Err(ProxError::Config(
            "oracle suite requires dim <= 3 (grid oracle limit)".into(),
        ));
    }
    let resolution = 201;
    let mut failures = Vec::new();
    let mut max_res = 0.0_f64;
    // grid scans are expensive; a handful of points is enough evidence
    for (i, (x, rep)) in points.iter().zip(reports).take(5).enumerate() {
        let (abx, bbx) = oracle_boxes(f, x);
        let acc = oracle_accuracy(&abx, resolution).max(oracle_accuracy(&bbx, resolution));

        let a_obj = |y: &PrimalVector| phi.eval_phi(y) + f.eval_f(&x.sub(y));
        let a_grid = brute_force_min(a_obj, &abx, resolution)?;
        let a_delta = rep.p.sub(&a_grid).norm_inf();
        max_res = max_res.max(a_delta);
        if a_delta > acc + tol.vector_tol {
            failures.push(format!("point {i}: aprox oracle delta {a_delta:.3e} > {acc:.3e}"));
        }

        let xstar = f.grad_f(x)?;
        let b_obj =
            |y: &PrimalVector| phi.eval_phi(y) + f.eval_f(y) - pair(y, &xstar).unwrap_or(f64::NAN);
        let b_grid = brute_force_min(b_obj, &bbx, resolution)?;
        let b_point = bprox(f, phi, x, ledger, tol, DEFAULT_MAX_ITER)?.point;
        let b_delta = b_point.sub(&b_grid).norm_inf();
        max_res = max_res.max(b_delta);
        if b_delta > acc + tol.vector_tol {
            failures.push(format!("point {i}: bprox oracle delta {b_delta:.3e} > {acc:.3e}"));
        }
    }
    Ok(SuiteOutcome {
        suite: Suite::Oracle,
        passed: failures.is_empty(),
        checks: points.len().min(5) * 2,
        failures,
        max_residual: max_res,
    })
}

fn frame_suite(
    fs: &FrameSystem,
    phi: &ConvexFunction,
    points: &[PrimalVector],
    tol: &ToleranceProfile,
) -> Result<SuiteOutcome> {
    let mut failures = Vec::new();
    let mut max_res = 0.0_f64;
    for (i, x) in points.iter().enumerate() {
        let d = frame_decompose(fs, phi, x, tol)?;
        max_res = max_res.max(d.reconstruction_residual).max(d.synthesis_residual);
        if d.reconstruction_residual > tol.vector_tol * (1.0 + x.norm2()) {
            failures.push(format!(
                "point {i}: frame reconstruction {:.3e}",
                d.reconstruction_residual
            ));
        }
        if d.synthesis_residual > tol.vector_tol {
            failures.push(format!("point {i}: dual synthesis {:.3e}", d.synthesis_residual));
        }
    }
    Ok(SuiteOutcome {
        suite: Suite::Frame,
        passed: failures.is_empty(),
        checks: points.len() * 2,
        failures,
        max_residual: max_res,
    })
}

fn apply_cli_tol_overrides(
    tol: &ToleranceProfile,
    overrides: &[(String, f64)],
) -> Result<ToleranceProfile> {
    let mut t = *tol;
    for (key, value) in overrides {
        match key.as_str() {
            "value_tol" => t.value_tol = *value,
            "vector_tol" => t.vector_tol = *value,
            "fd_step" => t.fd_step = *value,
            "gap_tol" => t.gap_tol = *value,
            other => {
                return Err(ProxError::Config(format!(
                    "unknown tolerance key \"{other}\""
                )))
            }
        }
    }
    t.validate()?;
    Ok(t)
}

fn run_scenario(
    index: usize,
    sc: &ScenarioConfig,
    opts: &RunOptions,
) -> Result<ScenarioReport> {
    let f = resolve_geometry(&sc.geometry, sc.dim)?;
    let phi = resolve_phi(&sc.phi, sc.dim)?;
    let tol = apply_cli_tol_overrides(&sc.tolerances.apply(&ToleranceProfile::default()), &opts.tol_overrides)?;
    tol.validate()?;
    let ledger = PairingLedger::default();
    let cert = ledger.certify(&f, &phi);
    if !cert.cq_dual {
        return Err(ProxError::Config(format!(
            "pairing ({}, {}) is not certifiable",
            f.name, phi.name
        )));
    }
    let (points, seed) = scenario_points(&f, &phi, &sc.points, opts.seed_override)?;

    let needs_decompositions = sc
        .suites
        .iter()
        .any(|s| matches!(s, Suite::Theorem | Suite::Cone | Suite::Oracle));
    let decompositions = if needs_decompositions {
        points
            .iter()
            .map(|x| decompose(&f, &phi, x, &ledger, &tol, seed))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    let mut suites = Vec::new();
    for suite in &sc.suites {
        let outcome = match suite {
            Suite::Theorem => theorem_suite(&decompositions, &f, &tol),
            Suite::Hilbert => {
                let h = verify_hilbert_special_cases(seed, 100, &tol)?;
                SuiteOutcome {
                    suite: Suite::Hilbert,
                    passed: h.passed(),
                    checks: h.samples * 3,
                    failures: h.failures,
                    max_residual: h.max_pythagoras.max(h.max_sum).max(h.max_orthogonality),
                }
            }
            Suite::Cone => cone_suite(&decompositions, &phi, &tol)?,
            Suite::Resolvent => resolvent_suite(&f, &phi, &points, &ledger, &tol)?,
            Suite::Oracle => oracle_suite(&f, &phi, &points, &decompositions, &ledger, &tol)?,
            Suite::Frame => {
                let fs = opts.frame.as_ref().ok_or_else(|| {
                    ProxError::Config("frame suite requires frame vectors (frame subcommand)".into())
                })?;
                frame_suite(fs, &phi, &points, &tol)?
            }
        };
        suites.push(outcome);
    }

    let mut max_residuals = [0.0_f64; 4];
    for r in &decompositions {
        max_residuals[0] = max_residuals[0].max(r.residual_i);
        max_residuals[1] = max_residuals[1].max(r.residual_ii);
        max_residuals[2] = max_residuals[2].max(r.residual_iii);
        max_residuals[3] = max_residuals[3].max(r.residual_iv);
    }
    let passed = suites.iter().all(|s| s.passed);
    Ok(ScenarioReport {
        index,
        geometry: f.name.clone(),
        phi: phi.name.clone(),
        dim: sc.dim,
        seed,
        suites,
        decompositions,
        max_residuals,
        passed,
    })
}

pub fn run_config(cfg: &RunConfig, opts: &RunOptions) -> Result<RunReport> {
    if cfg.scenarios.is_empty() {
        return Err(ProxError::Config("config lists no scenarios".into()));
    }
    let mut scenarios = Vec::new();
    for (i, sc) in cfg.scenarios.iter().enumerate() {
        scenarios.push(run_scenario(i, sc, opts)?);
    }
    let suites_passed = scenarios
        .iter()
        .flat_map(|s| &s.suites)
        .filter(|s| s.passed)
        .count();
    let suites_failed = scenarios
        .iter()
        .flat_map(|s| &s.suites)
        .filter(|s| !s.passed)
        .count();
    let passed = suites_failed == 0;
    let seed = opts
        .seed_override
        .or_else(|| scenarios.first().map(|s| s.seed))
        .unwrap_or(0);
    let timestamp_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(RunReport {
        schema: SCHEMA_VERSION.to_string(),
        metadata: RunMetadata { timestamp_unix },
        report: ReportBody {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            scenarios,
            suites_passed,
            suites_failed,
            passed,
        },
    })
}

pub fn run_config_file(path: &Path, opts: &RunOptions) -> Result<RunReport> {
    let text = std::fs::read_to_string(path)?;
    let cfg: RunConfig = serde_json::from_str(&text)?;
    run_config(&cfg, opts)
}

/// Load frame vectors from a CSV file: one vector per row, comma separated,
/// no header.
pub fn load_frame_csv(path: &Path) -> Result<Vec<PrimalVector>> {
    let text = std::fs::read_to_string(path)?;
    let mut vectors = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let coords = line
            .split(',')
            .map(|t| {
                t.trim().parse::<f64>().map_err(|_| {
                    ProxError::Config(format!("bad number at line {}: \"{t}\"", lineno + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        vectors.push(PrimalVector::new(coords)?);
    }
    if vectors.is_empty() {
        return Err(ProxError::Config("frame CSV contains no vectors".into()));
    }
    Ok(vectors)
}

/// Write the per-point residual table: scenario, point, residual_i..iv.
pub fn write_residual_csv(report: &RunReport, path: &Path) -> Result<()> {
    let mut out = String::new();
    for s in &report.report.scenarios {
        for (i, d) in s.decompositions.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                s.index, i, d.residual_i, d.residual_ii, d.residual_iii, d.residual_iv
            ));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Enumerate the geometry catalog, the φ catalog, and the auto-certified CQ
/// flags of the standard pairings, as a JSON document.
pub fn list_catalog() -> serde_json::Value {
    let n = 2;
    let geometries: Vec<_> = [
        LegendreFunction::euclidean(n),
        LegendreFunction::quadratic_spd(DMatrix::identity(n, n)).expect("identity is spd"),
        LegendreFunction::pnorm_energy(n, 1.5).expect("valid exponent"),
        LegendreFunction::pnorm_energy(n, 3.0).expect("valid exponent"),
        LegendreFunction::pnorm_energy(n, 4.0).expect("valid exponent"),
        LegendreFunction::shannon_entropy(n),
        LegendreFunction::exp_sum(n),
    ]
    .iter()
    .map(|f| {
        serde_json::json!({
            "name": f.name,
            "supercoercive": f.supercoercive,
            "conjugate": f.conjugate().name,
        })
    })
    .collect();

    let phis: Vec<_> = [
        ConvexFunction::zero(n),
        ConvexFunction::linear(crate::space::DualVector::new(vec![1.0, 0.0]).expect("finite")),
        ConvexFunction::l1(n, 1.0).expect("positive weight"),
        ConvexFunction::indicator_orthant(n),
        ConvexFunction::indicator_cone(ConeSpec::second_order(n).expect("dim >= 2")),
        ConvexFunction::indicator_box(vec![0.5; n], vec![2.0; n]).expect("valid box"),
        ConvexFunction::support_box(vec![-1.0; n], vec![1.0; n]).expect("valid box"),
    ]
    .iter()
    .map(|phi| {
        serde_json::json!({
            "name": phi.name,
            "bounded_below": phi.bounded_below,
            "conjugate": phi.conjugate().map(|c| c.name).unwrap_or_else(|_| "-".into()),
        })
    })
    .collect();

    let mut pairings = Vec::new();
    let standard: Vec<(LegendreFunction, ConvexFunction)> = vec![
        (
            LegendreFunction::euclidean(n),
            ConvexFunction::l1(n, 1.0).expect("positive weight"),
        ),
        (
            LegendreFunction::euclidean(n),
            ConvexFunction::indicator_orthant(n),
        ),
        (
            LegendreFunction::pnorm_energy(n, 4.0).expect("valid exponent"),
            ConvexFunction::indicator_orthant(n),
        ),
        (
            LegendreFunction::shannon_entropy(n),
            ConvexFunction::linear(
                crate::space::DualVector::new(vec![1.0, 0.0]).expect("finite"),
            ),
        ),
        (
            LegendreFunction::shannon_entropy(n),
            ConvexFunction::indicator_box(vec![0.5; n], vec![2.0; n]).expect("valid box"),
        ),
    ];
    for (f, phi) in &standard {
        let cert = auto_certify(f, phi);
        pairings.push(serde_json::json!({
            "geometry": cert.f_name,
            "phi": cert.phi_name,
            "cq_primal": cert.cq_primal,
            "cq_dual": cert.cq_dual,
            "justification": cert.justification,
        }));
    }

    let mut doc = BTreeMap::new();
    doc.insert("geometries", serde_json::Value::Array(geometries));
    doc.insert("phi_entries", serde_json::Value::Array(phis));
    doc.insert("pairings", serde_json::Value::Array(pairings));
    serde_json::to_value(doc).expect("valid JSON")
}
