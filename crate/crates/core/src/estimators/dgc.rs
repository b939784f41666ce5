use std::time::Instant;

use ndarray::{Array1, Zip};

use super::{DosRequest, DosResult, Method, PointDiagnostics, ProbeBlock, Provenance};
use crate::chebyshev::{cheb_sweep, CoeffTable};
use crate::{Error, LinearOperator, Result};

pub(crate) fn check_method(req: &DosRequest, want: Method) -> Result<()> {
    req.validate()?;
    if req.method != want {
        return Err(Error::param(format!(
            "request is for method '{}' but the '{want}' estimator was called",
            req.method
        )));
    }
    Ok(())
}

/// Stochastic Chebyshev moments `ζ_l = (1/N_v) Tr[Wᵀ T_l(A) W]`, `l = 0..=degree`.
pub fn dgc_moments(op: &dyn LinearOperator, w: &ProbeBlock, degree: usize) -> Result<Vec<f64>> {
    let n_v = w.n_cols() as f64;
    let mut zeta = Vec::with_capacity(degree + 1);
    cheb_sweep(op, w.values(), degree, |_, v| {
        let s = Zip::from(&w.values()).and(&v).fold(0.0, |acc, &a, &b| acc + a * b);
        zeta.push(s / n_v);
    })?;
    Ok(zeta)
}

/// DGC estimate `φ̃(t_i) = Σ_l μ_l(t_i) ζ_l` from one degree-`M` sweep.
///
/// `op` must have its spectrum in `(−1, 1)`.
pub fn dgc_dos(op: &dyn LinearOperator, req: &DosRequest) -> Result<DosResult> {
    check_method(req, Method::Dgc)?;
    let start = Instant::now();
    let n = op.dim();
    let table = CoeffTable::dgc(&req.grid, req.sigma, req.degree, req.n_theta, n)?;
    let w = ProbeBlock::generate(n, req.n_v, req.probe, req.seed)?;
    let zeta = Array1::from(dgc_moments(op, &w, req.degree)?);
    let phi = table.mu().dot(&zeta).to_vec();
    let mut provenance = Provenance::for_request(req, n, table.n_theta());
    provenance.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(DosResult {
        grid: req.grid.clone(),
        diagnostics: vec![PointDiagnostics::default(); phi.len()],
        phi,
        provenance,
    })
}
