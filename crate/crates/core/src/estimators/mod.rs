//! DOS estimators, generic trace estimators and the exact-DOS oracle.
//!
//! Every estimator takes an operator whose spectrum lies in `(−1, 1)` and a
//! [`DosRequest`]; grid points and `σ` are in the same scaled units.

mod dgc;
mod exact;
mod hutchinson;
mod probe;
mod request;
mod sweeping;

pub use dgc::{dgc_dos, dgc_moments};
pub use exact::{dense_eigenvalues, exact_dos, rel_l1_error, DENSE_ORACLE_CAP};
pub use hutchinson::{hutchinson_trace, HutchinsonEstimate};
pub use probe::{ProbeBlock, ProbeKind};
pub use request::{uniform_grid, DosRequest, DosResult, Method, PointDiagnostics, Provenance, DEFAULT_MEMORY_CAP};
pub use sweeping::{
    lowrank_trace, ress_dgc_dos, ress_dgc_moments, ss_dgc_dos, HybridEstimate, LowRankTrace, MomentSet, PointMoments,
    NOISE_FLOOR_FACTOR,
};

use crate::{LinearOperator, Result};

/// Runs the estimator selected by `req.method`.
pub fn estimate_dos(op: &dyn LinearOperator, req: &DosRequest) -> Result<DosResult> {
    match req.method {
        Method::Dgc => dgc_dos(op, req),
        Method::SsDgc => ss_dgc_dos(op, req),
        Method::RessDgc => ress_dgc_dos(op, req),
    }
}
