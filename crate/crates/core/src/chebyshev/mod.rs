//! Chebyshev machinery: coefficient pipelines and the three-term sweep.

mod coeffs;
mod series;
mod sweep;

pub use coeffs::{
    default_n_theta, dgc_coeffs, gaussian_kernel, squared_coeffs, ChebyshevProjector, CoeffTable,
};
pub use series::{eval_cheb_series, eval_cheb_series_unchecked};
pub use sweep::{cheb_sweep, SweepState};
