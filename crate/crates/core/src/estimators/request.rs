use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ProbeKind;
use crate::dense::DEFAULT_TAU;
use crate::{Error, Result};

/// Default cap on the dense accumulators of the spectrum-sweeping estimator.
pub const DEFAULT_MEMORY_CAP: u64 = 8 << 30;

/// DOS estimator selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Chebyshev expansion traced with Hutchinson probes.
    Dgc,
    /// Spectrum sweeping with per-point `N × N_v` accumulators.
    #[serde(rename = "ss")]
    SsDgc,
    /// Moment-only spectrum sweeping with a hybrid correction.
    #[serde(rename = "ress")]
    RessDgc,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Dgc => "dgc",
            Method::SsDgc => "ss",
            Method::RessDgc => "ress",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dgc" => Ok(Method::Dgc),
            "ss" | "ss-dgc" => Ok(Method::SsDgc),
            "ress" | "ress-dgc" => Ok(Method::RessDgc),
            _ => Err(Error::param(format!("unknown method '{s}' (expected dgc, ss or ress)"))),
        }
    }
}

/// Parameters of one DOS estimate. Grid and `sigma` are in scaled units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DosRequest {
    pub method: Method,
    pub grid: Vec<f64>,
    pub sigma: f64,
    pub degree: usize,
    pub n_v: usize,
    /// Correction probes for RESS-DGC; 0 disables the hybrid term.
    pub tilde_n_v: usize,
    pub seed: u64,
    pub tau: f64,
    pub probe: ProbeKind,
    /// Integrator resolution; `None` uses the default for the degree.
    pub n_theta: Option<usize>,
    /// Multiplier on the upper end of the generalized-eigenvalue range filter.
    pub range_slack: f64,
    /// SS-DGC refuses to run when its accumulators would exceed this.
    pub memory_cap: u64,
}

impl DosRequest {
    pub fn new(method: Method, grid: Vec<f64>, sigma: f64, degree: usize, n_v: usize) -> Self {
        Self {
            method,
            grid,
            sigma,
            degree,
            n_v,
            tilde_n_v: 0,
            seed: 0,
            tau: DEFAULT_TAU,
            probe: ProbeKind::Gaussian,
            n_theta: None,
            range_slack: 1.0,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_correction(mut self, tilde_n_v: usize) -> Self {
        self.tilde_n_v = tilde_n_v;
        self
    }

    pub fn with_probe(mut self, probe: ProbeKind) -> Self {
        self.probe = probe;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_memory_cap(mut self, bytes: u64) -> Self {
        self.memory_cap = bytes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::param("the evaluation grid is empty"));
        }
        if let Some(t) = self.grid.iter().find(|t| !(t.abs() < 1.0)) {
            return Err(Error::param(format!("grid point {t} lies outside (-1, 1)")));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::param(format!("smearing width must be positive, got {}", self.sigma)));
        }
        if self.n_v == 0 {
            return Err(Error::param("at least one probe vector is required"));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::param(format!("truncation tau must lie in (0, 1), got {}", self.tau)));
        }
        if !(self.range_slack >= 1.0 && self.range_slack.is_finite()) {
            return Err(Error::param(format!("range slack must be at least 1, got {}", self.range_slack)));
        }
        if self.method == Method::RessDgc && !self.degree.is_multiple_of(2) {
            return Err(Error::param(format!("RESS-DGC needs an even degree, got {}", self.degree)));
        }
        Ok(())
    }

    /// Bytes the SS-DGC accumulators `Z(t_i)` need for an `n`-dimensional operator.
    pub fn ss_memory_estimate(&self, n: usize) -> u64 {
        (self.grid.len() as u64)
            .saturating_mul(n as u64)
            .saturating_mul(self.n_v as u64)
            .saturating_mul(8)
    }
}

/// Per-grid-point diagnostics. For DGC and the exact oracle only
/// `correction = 0` and zero counts are reported.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PointDiagnostics {
    pub kept: usize,
    pub dropped_small: usize,
    pub dropped_range: usize,
    /// Hybrid correction added on top of `Tr Ξ̃`.
    pub correction: f64,
}

/// How a [`DosResult`] was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// `dgc`, `ss`, `ress` or `exact`.
    pub method: String,
    pub dim: usize,
    pub sigma: f64,
    pub degree: Option<usize>,
    pub n_theta: Option<usize>,
    pub n_v: Option<usize>,
    pub tilde_n_v: Option<usize>,
    pub seed: Option<u64>,
    pub tau: Option<f64>,
    pub probe: Option<ProbeKind>,
    pub range_slack: Option<f64>,
    pub wall_time_secs: f64,
}

impl Provenance {
    pub(crate) fn for_request(req: &DosRequest, dim: usize, n_theta: usize) -> Self {
        Self {
            method: req.method.as_str().into(),
            dim,
            sigma: req.sigma,
            degree: Some(req.degree),
            n_theta: Some(n_theta),
            n_v: Some(req.n_v),
            tilde_n_v: (req.method == Method::RessDgc).then_some(req.tilde_n_v),
            seed: Some(req.seed),
            tau: (req.method != Method::Dgc).then_some(req.tau),
            probe: Some(req.probe),
            range_slack: (req.method != Method::Dgc).then_some(req.range_slack),
            wall_time_secs: 0.0,
        }
    }
}

/// Estimated `φ̃_σ(t_i)` with diagnostics for every grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DosResult {
    pub grid: Vec<f64>,
    pub phi: Vec<f64>,
    pub diagnostics: Vec<PointDiagnostics>,
    pub provenance: Provenance,
}

impl DosResult {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Trapezoid integral of `φ̃` over the grid (assumes sorted points).
    pub fn trapezoid_mass(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.phi.windows(2))
            .map(|(t, p)| 0.5 * (t[1] - t[0]) * (p[0] + p[1]))
            .sum()
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
