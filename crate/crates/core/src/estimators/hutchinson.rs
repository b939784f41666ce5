use ndarray::Zip;

use super::{ProbeBlock, ProbeKind};
use crate::{Error, LinearOperator, Result};

const CHUNK: usize = 256;

/// Hutchinson trace estimate with its per-sample spread.
#[derive(Debug, Clone, PartialEq)]
pub struct HutchinsonEstimate {
    pub estimate: f64,
    /// Sample standard deviation of the individual `w_kᵀ A w_k`.
    pub stddev: f64,
    pub samples: Vec<f64>,
}

impl HutchinsonEstimate {
    pub fn standard_error(&self) -> f64 {
        self.stddev / (self.samples.len() as f64).sqrt()
    }
}

/// `(1/N_v) Σ_k w_kᵀ A w_k` over `n_v` seeded probes.
///
/// Probes are generated and applied in chunks, so `n_v` may be large.
pub fn hutchinson_trace(op: &dyn LinearOperator, n_v: usize, kind: ProbeKind, seed: u64) -> Result<HutchinsonEstimate> {
    if n_v == 0 {
        return Err(Error::param("at least one probe vector is required"));
    }
    let n = op.dim();
    let mut samples = Vec::with_capacity(n_v);
    for start in (0..n_v).step_by(CHUNK) {
        let end = (start + CHUNK).min(n_v);
        let w = ProbeBlock::generate_range(n, start..end, kind, seed, 0)?;
        let aw = op.apply(w.values())?;
        Zip::from(w.values().columns())
            .and(aw.columns())
            .for_each(|x, y| samples.push(x.dot(&y)));
    }
    // Shift by the first sample so identical samples give exactly zero spread.
    let s0 = samples[0];
    let sum_d: f64 = samples.iter().map(|s| s - s0).sum();
    let mean_d = sum_d / n_v as f64;
    let estimate = s0 + mean_d;
    let stddev = if n_v > 1 {
        let ss: f64 = samples.iter().map(|s| (s - s0 - mean_d).powi(2)).sum();
        (ss / (n_v - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(HutchinsonEstimate {
        estimate,
        stddev,
        samples,
    })
}
