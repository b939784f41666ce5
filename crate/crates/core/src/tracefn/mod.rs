//! Trace of a smooth matrix function through the smeared DOS.
//!
//! With `f̃ ⊛ g_σ = f` on the spectrum, `Tr f(A) = N ∫ f̃(s) φ_σ(s) ds`. The
//! function is made periodic on `[−1, 1)` by blending it into a constant
//! outside a window `(−a, a)` that holds the (scaled) spectrum, deconvolved in
//! Fourier space, and integrated against a DOS estimate with the trapezoid
//! rule.

mod deconv;
mod functions;
mod trace;
mod window;

pub use deconv::{deconvolve, gaussian_symbol, Deconvolved, SYMBOL_CUTOFF};
pub use functions::{fermi_dirac, ScalarFunction};
pub use trace::{trace_of_function, TraceEstimate, TraceParams, TracePlan};
pub use window::{build_h, periodic_points, PeriodicSamples, WindowParams, DEFAULT_SIGMA_TILDE, DEFAULT_WINDOW};
