//! Matrix-free spectral density estimation for large symmetric matrices.
//!
//! The crate estimates the Gaussian-regularized density of states (DOS)
//!
//! ```text
//! φ_σ(t) = Σ_i g_σ(t − λ_i),   g_σ(s) = exp(−s²/2σ²) / (N √(2πσ²))
//! ```
//!
//! using only block matrix-vector products. Three estimators share one
//! Chebyshev sweep engine:
//!
//! * [`estimators::dgc_dos`]: Chebyshev expansion of the Gaussian traced with
//!   Hutchinson probes.
//! * [`estimators::ss_dgc_dos`]: spectrum sweeping. A randomized low-rank
//!   decomposition of `g_σ(tI − A)` is built at every grid point from a single
//!   probe block and traced through a filtered generalized eigenproblem.
//! * [`estimators::ress_dgc_dos`]: the memory-lean variant that accumulates only
//!   small moment matrices and adds a Hutchinson correction on the low-rank
//!   residual.
//!
//! [`tracefn`] turns a DOS estimate into `Tr[f(A)]` for smooth `f` through a
//! periodic deconvolution quadrature.
//!
//! All estimators expect an operator whose spectrum lies in `(−1, 1)`; use
//! [`operator::spectral_transform`] with bounds from
//! [`operator::estimate_bounds`] to get there.

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod cli;
pub mod dense;
mod error;
pub mod estimators;
pub mod operator;
pub mod tracefn;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use estimators::{DosRequest, DosResult, Method, ProbeBlock, ProbeKind};
pub use operator::{LinearOperator, ScaledOperator, SparseSymMatrix, SpectralBounds};
