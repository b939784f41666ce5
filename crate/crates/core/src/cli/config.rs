use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::estimators::{DosRequest, Method, ProbeKind, DEFAULT_MEMORY_CAP};
use crate::operator::{
    estimate_bounds, gen_modes3d, load_matrix_market, Modes3dParams, ScaledOperator, DEFAULT_MARGIN,
};
use crate::tracefn::{DEFAULT_SIGMA_TILDE, DEFAULT_WINDOW};
use crate::{Error, Result, SparseSymMatrix, SpectralBounds};

/// Power steps used when the bounds are estimated rather than given.
pub const BOUNDS_ITERS: usize = 200;

/// Grid size when none is given.
pub const DEFAULT_GRID_POINTS: usize = 100;

/// Where the matrix comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatrixSource {
    File { path: PathBuf },
    Modes3d { params: Modes3dParams },
}

impl MatrixSource {
    pub fn load(&self) -> Result<SparseSymMatrix> {
        match self {
            MatrixSource::File { path } => load_matrix_market(path),
            MatrixSource::Modes3d { params } => gen_modes3d(params),
        }
    }
}

/// Output encoding of `dos` and `exact`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Evaluation grid in scaled units. `None` ends span the scaled image of the
/// estimated spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub count: usize,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            count: DEFAULT_GRID_POINTS,
            lo: None,
            hi: None,
        }
    }
}

/// Estimator settings shared by `dos` and `trace`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub method: Method,
    pub degree: usize,
    pub n_v: usize,
    pub tilde_n_v: usize,
    pub tau: f64,
    pub seed: u64,
    pub probe: ProbeKind,
    pub n_theta: Option<usize>,
    pub range_slack: f64,
    pub memory_cap: u64,
}

impl EstimatorConfig {
    pub fn request(&self, grid: Vec<f64>, sigma: f64) -> DosRequest {
        DosRequest {
            method: self.method,
            grid,
            sigma,
            degree: self.degree,
            n_v: self.n_v,
            tilde_n_v: if self.method == Method::RessDgc { self.tilde_n_v } else { 0 },
            seed: self.seed,
            tau: self.tau,
            probe: self.probe,
            n_theta: self.n_theta,
            range_slack: self.range_slack,
            memory_cap: self.memory_cap,
        }
    }
}

/// Degree for a Gaussian of scaled width `sigma`: `⌈8/σ⌉`, doubled for RESS
/// (its `K_W` uses only the lower half), rounded up to even.
pub fn default_degree(method: Method, sigma: f64) -> usize {
    let base = (8.0 / sigma).ceil() as usize;
    let m = if method == Method::RessDgc { 2 * base } else { base };
    m + m % 2
}

pub(crate) fn estimator_defaults(method: Method) -> EstimatorConfig {
    EstimatorConfig {
        method,
        degree: 0,
        n_v: 40,
        tilde_n_v: 40,
        tau: crate::dense::DEFAULT_TAU,
        seed: 0,
        probe: ProbeKind::Gaussian,
        n_theta: None,
        range_slack: 1.0,
        memory_cap: DEFAULT_MEMORY_CAP,
    }
}

/// Spectral interval: given explicitly, or estimated from the matrix with `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsSpec {
    pub given: Option<(f64, f64)>,
    pub margin: f64,
}

impl Default for BoundsSpec {
    fn default() -> Self {
        Self {
            given: None,
            margin: DEFAULT_MARGIN,
        }
    }
}

impl BoundsSpec {
    pub fn resolve(&self, a: &SparseSymMatrix, seed: u64) -> Result<SpectralBounds> {
        match self.given {
            Some((lo, hi)) => SpectralBounds::new(lo, hi, self.margin),
            None => {
                let est = estimate_bounds(a, BOUNDS_ITERS, seed)?;
                SpectralBounds::new(est.a, est.b, self.margin)
            }
        }
    }
}

/// Resolved `dos` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DosConfig {
    pub input: MatrixSource,
    pub estimator: EstimatorConfig,
    /// Scaled units.
    pub sigma: f64,
    pub grid: GridSpec,
    pub bounds: BoundsSpec,
    pub output: PathBuf,
    pub format: OutputFormat,
    pub record_timing: bool,
}

/// Resolved `exact` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactConfig {
    pub input: MatrixSource,
    pub sigma: f64,
    pub grid: GridSpec,
    pub bounds: BoundsSpec,
    /// Seed of the bounds estimate; match the `dos` run being compared.
    pub seed: u64,
    pub output: PathBuf,
    pub format: OutputFormat,
    pub against: Option<PathBuf>,
    pub record_timing: bool,
}

/// Resolved `trace` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub input: MatrixSource,
    pub function: String,
    pub estimator: EstimatorConfig,
    /// Original units of the matrix.
    pub sigma: f64,
    pub window: f64,
    pub sigma_tilde: f64,
    pub n_points: Option<usize>,
    pub bounds: BoundsSpec,
    pub output: Option<PathBuf>,
    pub record_timing: bool,
}

impl TraceConfig {
    pub(crate) fn defaults(input: MatrixSource, function: String, sigma: f64) -> Self {
        Self {
            input,
            function,
            estimator: estimator_defaults(Method::RessDgc),
            sigma,
            window: DEFAULT_WINDOW,
            sigma_tilde: DEFAULT_SIGMA_TILDE,
            n_points: None,
            bounds: BoundsSpec::default(),
            output: None,
            record_timing: false,
        }
    }
}

/// Resolved `gen` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub params: Modes3dParams,
    pub output: PathBuf,
}

/// Any fully resolved command. This is what provenance files record and what
/// `rerun` reads back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum RunConfig {
    Gen(GenConfig),
    Dos(DosConfig),
    Exact(ExactConfig),
    Trace(TraceConfig),
}

/// Scaled evaluation grid for a spectral map.
pub(crate) fn resolve_grid(spec: &GridSpec, op: &ScaledOperator<'_>, bounds: &SpectralBounds) -> Result<Vec<f64>> {
    if spec.count == 0 {
        return Err(Error::param("grid needs at least one point"));
    }
    let lo = spec.lo.unwrap_or_else(|| op.to_scaled(bounds.a));
    let hi = spec.hi.unwrap_or_else(|| op.to_scaled(bounds.b));
    if !(lo < hi) && spec.count > 1 {
        return Err(Error::param(format!("grid range needs lo < hi, got [{lo}, {hi}]")));
    }
    Ok(crate::estimators::uniform_grid(lo, hi, spec.count))
}
