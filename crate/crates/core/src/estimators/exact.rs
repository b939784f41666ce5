use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{DosResult, PointDiagnostics, Provenance};
use crate::chebyshev::gaussian_kernel;
use crate::{Error, LinearOperator, Result, SparseSymMatrix};

/// Largest dimension the dense eigendecomposition oracle accepts.
pub const DENSE_ORACLE_CAP: usize = 4096;

/// All eigenvalues of `m`, ascending, from a dense decomposition.
pub fn dense_eigenvalues(m: &SparseSymMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if n > DENSE_ORACLE_CAP {
        return Err(Error::OracleCap {
            dim: n,
            cap: DENSE_ORACLE_CAP,
        });
    }
    let mut dense = DMatrix::zeros(n, n);
    for i in 0..n {
        for (j, v) in m.row(i) {
            dense[(i, j)] = v;
        }
    }
    let mut eigs: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

/// `φ_σ(t_i) = Σ_j g_σ(t_i − λ_j)` with the `1/N` normalization, `N = eigenvalues.len()`.
pub fn exact_dos(eigenvalues: &[f64], grid: &[f64], sigma: f64) -> Result<DosResult> {
    if eigenvalues.is_empty() {
        return Err(Error::param("no eigenvalues given"));
    }
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::param("eigenvalues must be finite"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::param(format!("smearing width must be positive, got {sigma}")));
    }
    let start = Instant::now();
    let n = eigenvalues.len();
    let phi: Vec<f64> = grid
        .par_iter()
        .map(|&t| eigenvalues.iter().map(|&l| gaussian_kernel(t - l, sigma, n)).sum())
        .collect();
    Ok(DosResult {
        grid: grid.to_vec(),
        diagnostics: vec![PointDiagnostics::default(); phi.len()],
        phi,
        provenance: Provenance {
            method: "exact".into(),
            dim: n,
            sigma,
            degree: None,
            n_theta: None,
            n_v: None,
            tilde_n_v: None,
            seed: None,
            tau: None,
            probe: None,
            range_slack: None,
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
    })
}

/// `Σ_i |φ̃(t_i) − φ(t_i)| / Σ_i |φ(t_i)|`.
pub fn rel_l1_error(approx: &DosResult, exact: &DosResult) -> Result<f64> {
    if approx.grid != exact.grid {
        return Err(Error::DimensionMismatch("approximate and exact DOS use different grids".into()));
    }
    let den: f64 = exact.phi.iter().map(|p| p.abs()).sum();
    if den == 0.0 {
        return Err(Error::param("reference DOS vanishes on the whole grid"));
    }
    let num: f64 = approx.phi.iter().zip(&exact.phi).map(|(a, e)| (a - e).abs()).sum();
    Ok(num / den)
}
