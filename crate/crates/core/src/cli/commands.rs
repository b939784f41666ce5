use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::config::{
    default_degree, resolve_grid, DosConfig, ExactConfig, GenConfig, OutputFormat, RunConfig, TraceConfig,
};
use super::output::{
    provenance_value, read_csv, rows, rows_to_result, sidecar_path, to_csv, to_json, write_file, Row,
};
use crate::estimators::{dense_eigenvalues, estimate_dos, exact_dos, rel_l1_error, DosResult};
use crate::operator::{gen_modes3d, save_matrix_market, spectral_transform, Modes3dParams};
use crate::tracefn::{trace_of_function, ScalarFunction, TraceParams, TracePlan, WindowParams};
use crate::{Error, LinearOperator, Result, SpectralBounds};

/// What `gen` wrote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenReport {
    pub matrix: PathBuf,
    pub metadata: PathBuf,
    pub dim: usize,
    pub nnz: usize,
    pub sha256: String,
}

#[derive(Serialize, Deserialize)]
struct GenMetadata {
    dim: usize,
    nnz: usize,
    params: Modes3dParams,
    sha256: String,
    config: RunConfig,
}

/// `<path>.meta.json`.
pub fn metadata_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn cmd_gen(cfg: &GenConfig) -> Result<GenReport> {
    let m = gen_modes3d(&cfg.params)?;
    save_matrix_market(&cfg.output, &m)?;
    let bytes = std::fs::read(&cfg.output).map_err(|e| Error::io(&cfg.output, e))?;
    let sha256 = hex(&Sha256::digest(&bytes));
    let meta = GenMetadata {
        dim: m.dim(),
        nnz: m.nnz(),
        params: cfg.params,
        sha256: sha256.clone(),
        config: RunConfig::Gen(cfg.clone()),
    };
    let metadata = metadata_path(&cfg.output);
    write_file(&metadata, &to_json(&meta))?;
    Ok(GenReport {
        matrix: cfg.output.clone(),
        metadata,
        dim: m.dim(),
        nnz: m.nnz(),
        sha256,
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Spectral map recorded next to every scaled-unit result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledMap {
    pub bounds: SpectralBounds,
    pub shift: f64,
    pub scale: f64,
}

/// What `dos` or `exact` wrote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DosReport {
    pub output: PathBuf,
    pub provenance_file: Option<PathBuf>,
    pub method: String,
    pub rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_l1_error: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct ResultDocument {
    config: RunConfig,
    map: ScaledMap,
    provenance: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<Row>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Comparison {
    against: PathBuf,
    rel_l1_error: f64,
}

fn write_result(
    config: RunConfig,
    output: &Path,
    format: OutputFormat,
    map: ScaledMap,
    res: &DosResult,
    record_timing: bool,
    comparison: Option<Comparison>,
) -> Result<DosReport> {
    let rel_l1_error = comparison.as_ref().map(|c| c.rel_l1_error);
    let mut doc = ResultDocument {
        config,
        map,
        provenance: provenance_value(&res.provenance, record_timing),
        comparison,
        rows: None,
    };
    let provenance_file = match format {
        OutputFormat::Csv => {
            write_file(output, &to_csv(&rows(res)))?;
            let side = sidecar_path(output);
            write_file(&side, &to_json(&doc))?;
            Some(side)
        }
        OutputFormat::Json => {
            doc.rows = Some(rows(res));
            write_file(output, &to_json(&doc))?;
            None
        }
    };
    Ok(DosReport {
        output: output.to_path_buf(),
        provenance_file,
        method: res.provenance.method.clone(),
        rows: res.len(),
        rel_l1_error,
    })
}

pub fn cmd_dos(cfg: &DosConfig) -> Result<DosReport> {
    let a = cfg.input.load()?;
    let mut cfg = cfg.clone();
    if cfg.estimator.degree == 0 {
        cfg.estimator.degree = default_degree(cfg.estimator.method, cfg.sigma);
    }
    let bounds = cfg.bounds.resolve(&a, cfg.estimator.seed)?;
    let op = spectral_transform(&a, &bounds)?;
    let grid = resolve_grid(&cfg.grid, &op, &bounds)?;
    let res = estimate_dos(&op, &cfg.estimator.request(grid, cfg.sigma))?;
    let map = ScaledMap { bounds, shift: op.shift(), scale: op.scale() };
    write_result(RunConfig::Dos(cfg.clone()), &cfg.output, cfg.format, map, &res, cfg.record_timing, None)
}

pub fn cmd_exact(cfg: &ExactConfig) -> Result<DosReport> {
    let start = std::time::Instant::now();
    let a = cfg.input.load()?;
    let eigs = dense_eigenvalues(&a)?;
    let bounds = cfg.bounds.resolve(&a, cfg.seed)?;
    let op = spectral_transform(&a, &bounds)?;
    let against = match &cfg.against {
        Some(p) => Some((p.clone(), read_csv(p)?)),
        None => None,
    };
    let grid = match &against {
        Some((_, r)) => r.iter().map(|r| r.t).collect(),
        None => resolve_grid(&cfg.grid, &op, &bounds)?,
    };
    let scaled: Vec<f64> = eigs.iter().map(|&l| op.to_scaled(l)).collect();
    let mut res = exact_dos(&scaled, &grid, cfg.sigma)?;
    res.provenance.wall_time_secs = start.elapsed().as_secs_f64();
    let comparison = match against {
        Some((path, r)) => {
            let approx = rows_to_result(&r, res.provenance.clone());
            Some(Comparison { against: path, rel_l1_error: rel_l1_error(&approx, &res)? })
        }
        None => None,
    };
    let map = ScaledMap { bounds, shift: op.shift(), scale: op.scale() };
    write_result(RunConfig::Exact(cfg.clone()), &cfg.output, cfg.format, map, &res, cfg.record_timing, comparison)
}

/// JSON report of `trace`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub estimate: f64,
    pub method: String,
    pub function: String,
    pub zeroed_modes: usize,
    pub n_points: usize,
    pub sigma: f64,
    pub sigma_scaled: f64,
    pub degree: usize,
    pub map: ScaledMap,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
}

pub fn cmd_trace(cfg: &TraceConfig) -> Result<TraceReport> {
    let function: ScalarFunction = cfg.function.parse()?;
    let a = cfg.input.load()?;
    let mut cfg = cfg.clone();
    let bounds = cfg.bounds.resolve(&a, cfg.estimator.seed)?;
    let window = WindowParams::new(cfg.window, cfg.sigma_tilde)?;
    let params = TraceParams { sigma: cfg.sigma, window, n_points: cfg.n_points };
    let plan = TracePlan::new(&a, &bounds, cfg.sigma, window, cfg.n_points)?;
    if cfg.estimator.degree == 0 {
        cfg.estimator.degree = default_degree(cfg.estimator.method, plan.sigma_scaled());
    }
    let req = cfg.estimator.request(Vec::new(), 1.0);
    let est = trace_of_function(&a, &bounds, &|t| function.eval(t), &params, &req)?;
    let report = TraceReport {
        estimate: est.estimate,
        method: cfg.estimator.method.to_string(),
        function: function.to_string(),
        zeroed_modes: est.zeroed_modes,
        n_points: est.n_points,
        sigma: cfg.sigma,
        sigma_scaled: est.sigma_scaled,
        degree: cfg.estimator.degree,
        map: ScaledMap { bounds, shift: plan.operator().shift(), scale: plan.operator().scale() },
        config: RunConfig::Trace(cfg.clone()),
        wall_time_secs: cfg.record_timing.then_some(est.wall_time_secs),
    };
    if let Some(path) = &cfg.output {
        write_file(path, &to_json(&report))?;
    }
    Ok(report)
}

/// The resolved configuration stored in a provenance file: a `.prov.json`
/// sidecar, a JSON result, a trace report or a `.meta.json`.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse { line: e.line(), msg: format!("{}: {e}", path.display()) })?;
    let cfg = v
        .get("config")
        .ok_or_else(|| Error::param(format!("{} has no 'config' entry", path.display())))?;
    serde_json::from_value(cfg.clone()).map_err(|e| Error::param(format!("{}: bad config: {e}", path.display())))
}

/// Outcome of any command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum Report {
    Gen(GenReport),
    Dos(DosReport),
    Trace(TraceReport),
}

pub fn execute(cfg: &RunConfig) -> Result<Report> {
    match cfg {
        RunConfig::Gen(c) => cmd_gen(c).map(Report::Gen),
        RunConfig::Dos(c) => cmd_dos(c).map(Report::Dos),
        RunConfig::Exact(c) => cmd_exact(c).map(Report::Dos),
        RunConfig::Trace(c) => cmd_trace(c).map(Report::Trace),
    }
}

/// `cfg` with its output redirected to `output`.
pub fn redirect(cfg: &RunConfig, output: PathBuf) -> RunConfig {
    let mut cfg = cfg.clone();
    match &mut cfg {
        RunConfig::Gen(c) => c.output = output,
        RunConfig::Dos(c) => c.output = output,
        RunConfig::Exact(c) => c.output = output,
        RunConfig::Trace(c) => c.output = Some(output),
    }
    cfg
}
