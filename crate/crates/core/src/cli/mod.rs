//! Command-line driver.
//!
//! Every command resolves its flags into a [`RunConfig`] first; that value is
//! written into each output's provenance so `rerun` can repeat the run.
//!
//! Exit codes: 0 ok, 1 other failure, 2 configuration, 3 memory guard,
//! 4 dense oracle cap, 5 function specification.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    cmd_dos, cmd_exact, cmd_gen, cmd_trace, execute, load_config, metadata_path, redirect, DosReport, GenReport,
    Report, ScaledMap, TraceReport,
};
pub use config::{
    default_degree, BoundsSpec, DosConfig, EstimatorConfig, ExactConfig, GenConfig, GridSpec, MatrixSource,
    OutputFormat, RunConfig, TraceConfig, BOUNDS_ITERS, DEFAULT_GRID_POINTS,
};
pub use output::{parse_csv, read_csv, sidecar_path, to_csv, Row, CSV_HEADER};

use crate::estimators::{Method, ProbeKind};
use crate::operator::Modes3dParams;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_MEMORY_GUARD: i32 = 3;
pub const EXIT_ORACLE_CAP: i32 = 4;
pub const EXIT_FUNCTION_SPEC: i32 = 5;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::DimensionMismatch(_) => EXIT_CONFIG,
        Error::MemoryGuard(_) => EXIT_MEMORY_GUARD,
        Error::OracleCap { .. } => EXIT_ORACLE_CAP,
        Error::FunctionSpec(_) => EXIT_FUNCTION_SPEC,
        _ => EXIT_OTHER,
    }
}

#[derive(Debug, Parser)]
#[command(name = "specsweep", version, about = "Spectral density and matrix-function traces of sparse symmetric matrices")]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "SPECSWEEP_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a ModES3D Hamiltonian as Matrix Market plus a metadata sidecar.
    Gen(GenArgs),
    /// Estimate the smeared DOS on a grid (scaled units).
    Dos(DosArgs),
    /// Dense-eigenvalue DOS on the same grid, optionally compared to an estimate.
    Exact(ExactArgs),
    /// Estimate Tr f(A).
    Trace(TraceArgs),
    /// Repeat a run from a provenance file.
    Rerun(RerunArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Unit cells per dimension.
    #[arg(long, default_value_t = 1)]
    pub cells: usize,
    /// Unit-cell edge.
    #[arg(long = "L", default_value_t = 6.0)]
    pub length: f64,
    /// Grid spacing; L/h must be an integer.
    #[arg(long = "h", default_value_t = 0.6)]
    pub spacing: f64,
    #[arg(long, default_value_t = Modes3dParams::default().potential_depth, allow_hyphen_values = true)]
    pub depth: f64,
    #[arg(long, default_value_t = Modes3dParams::default().potential_width)]
    pub width: f64,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Matrix Market file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Generate ModES3D with this many cells per dimension instead of reading a file.
    #[arg(long)]
    pub modes3d: Option<usize>,
}

impl InputArgs {
    fn source(&self) -> MatrixSource {
        match (&self.input, self.modes3d) {
            (Some(p), _) => MatrixSource::File { path: p.clone() },
            (None, Some(c)) => MatrixSource::Modes3d { params: Modes3dParams::with_cells(c) },
            (None, None) => unreachable!("clap enforces one input"),
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Spectral interval `LO,HI` in original units; estimated when absent.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub bounds: Option<(f64, f64)>,
    /// Widening fraction of the interval.
    #[arg(long, default_value_t = crate::operator::DEFAULT_MARGIN)]
    pub margin: f64,
}

impl BoundsArgs {
    fn spec(&self) -> BoundsSpec {
        BoundsSpec { given: self.bounds, margin: self.margin }
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected LO,HI, got '{s}'"))?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
    Ok((p(a)?, p(b)?))
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// Scaled units; defaults to the image of the lower bound.
    #[arg(long, allow_hyphen_values = true)]
    pub grid_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_hi: Option<f64>,
}

impl GridArgs {
    fn spec(&self) -> GridSpec {
        GridSpec { count: self.grid_points, lo: self.grid_lo, hi: self.grid_hi }
    }
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    /// `dgc`, `ss` or `ress` [default: ress].
    #[arg(long)]
    pub method: Option<Method>,
    /// Chebyshev degree; default ⌈8/σ_scaled⌉, doubled for ress.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Probe vectors in the main block.
    #[arg(long, default_value_t = 40)]
    pub nv: usize,
    /// Correction probes for ress; defaults to --nv.
    #[arg(long)]
    pub tilde_nv: Option<usize>,
    /// Relative truncation threshold for the probe Gram matrix.
    #[arg(long, default_value_t = crate::dense::DEFAULT_TAU)]
    pub tau: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `gaussian` or `rademacher`.
    #[arg(long, default_value_t = ProbeKind::Gaussian)]
    pub probe: ProbeKind,
    /// FFT length for the coefficients; default 2(M + 1) rounded up to a power of two.
    #[arg(long)]
    pub n_theta: Option<usize>,
    /// Multiplier on the upper end of the accepted eigenvalue range.
    #[arg(long, default_value_t = 1.0)]
    pub range_slack: f64,
    /// Byte cap on the ss accumulators.
    #[arg(long, default_value_t = crate::estimators::DEFAULT_MEMORY_CAP)]
    pub memory_cap: u64,
}

impl EstimatorArgs {
    fn config(&self, default_method: Method) -> EstimatorConfig {
        EstimatorConfig {
            method: self.method.unwrap_or(default_method),
            degree: self.degree.unwrap_or(0),
            n_v: self.nv,
            tilde_n_v: self.tilde_nv.unwrap_or(self.nv),
            tau: self.tau,
            seed: self.seed,
            probe: self.probe,
            n_theta: self.n_theta,
            range_slack: self.range_slack,
            memory_cap: self.memory_cap,
        }
    }
}

#[derive(Debug, Args)]
pub struct DosArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// Smearing width in scaled units.
    #[arg(long, default_value_t = 0.05)]
    pub sigma: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Record wall-clock time (makes outputs differ between runs).
    #[arg(long)]
    pub record_timing: bool,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Smearing width in scaled units.
    #[arg(long, default_value_t = 0.05)]
    pub sigma: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    /// Seed of the bounds estimate.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// CSV estimate to compare with; its grid is used.
    #[arg(long)]
    pub against: Option<PathBuf>,
    /// Record wall-clock time (makes outputs differ between runs).
    #[arg(long)]
    pub record_timing: bool,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// `fermi-dirac(BETA,MU)`, `identity`, `constant(C)`, `gaussian(C,W)` or `table:PATH`.
    #[arg(long, allow_hyphen_values = true)]
    pub function: String,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// Smearing width in the matrix's own units.
    #[arg(long, default_value_t = 0.05)]
    pub sigma: f64,
    /// Half-width the spectrum is mapped onto.
    #[arg(long, default_value_t = crate::tracefn::DEFAULT_WINDOW)]
    pub window: f64,
    #[arg(long, default_value_t = crate::tracefn::DEFAULT_SIGMA_TILDE)]
    pub sigma_tilde: f64,
    /// Periodic grid size; default is the smallest power of two resolving σ.
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    /// Report file; the report is always printed.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time (makes outputs differ between runs).
    #[arg(long)]
    pub record_timing: bool,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    /// A `.prov.json`, JSON result, trace report or `.meta.json`.
    pub provenance: PathBuf,
    /// Write here instead of the recorded output path.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl Command {
    /// The resolved configuration this command line describes.
    pub fn resolve(&self) -> crate::Result<RunConfig> {
        Ok(match self {
            Command::Gen(g) => {
                let params = Modes3dParams {
                    cells_per_dim: g.cells,
                    length: g.length,
                    spacing: g.spacing,
                    potential_depth: g.depth,
                    potential_width: g.width,
                };
                params.points_per_cell().map_err(|e| {
                    Error::param(format!("invalid value '{}' for '--h': {}", g.spacing, strip(&e)))
                })?;
                RunConfig::Gen(GenConfig { params, output: g.out.clone() })
            }
            Command::Dos(d) => RunConfig::Dos(DosConfig {
                input: d.input.source(),
                estimator: d.estimator.config(Method::RessDgc),
                sigma: d.sigma,
                grid: d.grid.spec(),
                bounds: d.bounds.spec(),
                output: d.out.clone(),
                format: d.format,
                record_timing: d.record_timing,
            }),
            Command::Exact(x) => RunConfig::Exact(ExactConfig {
                input: x.input.source(),
                sigma: x.sigma,
                grid: x.grid.spec(),
                bounds: x.bounds.spec(),
                seed: x.seed,
                output: x.out.clone(),
                format: x.format,
                against: x.against.clone(),
                record_timing: x.record_timing,
            }),
            Command::Trace(t) => {
                let mut cfg = TraceConfig::defaults(t.input.source(), t.function.clone(), t.sigma);
                cfg.estimator = t.estimator.config(Method::RessDgc);
                cfg.window = t.window;
                cfg.sigma_tilde = t.sigma_tilde;
                cfg.n_points = t.points;
                cfg.bounds = t.bounds.spec();
                cfg.output = t.out.clone();
                cfg.record_timing = t.record_timing;
                RunConfig::Trace(cfg)
            }
            Command::Rerun(r) => {
                let cfg = load_config(&r.provenance)?;
                match &r.out {
                    Some(p) => redirect(&cfg, p.clone()),
                    None => cfg,
                }
            }
        })
    }
}

fn strip(e: &Error) -> String {
    match e {
        Error::InvalidParameter(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. The report goes to stdout as JSON, errors to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run_cli(&cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run_cli(cli: &Cli) -> crate::Result<Report> {
    let cfg = cli.command.resolve()?;
    match cli.threads {
        None => execute(&cfg),
        Some(0) => Err(Error::param("--threads must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::param(format!("cannot start {n} threads: {e}")))?;
            pool.install(|| execute(&cfg))
        }
    }
}
