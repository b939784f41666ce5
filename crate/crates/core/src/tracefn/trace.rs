use std::time::Instant;

use super::{build_h, deconvolve, periodic_points, Deconvolved, WindowParams};
use crate::estimators::{estimate_dos, DosRequest, DosResult};
use crate::{Error, LinearOperator, Result, ScaledOperator, SpectralBounds};

/// Spectral map, periodic grid and smearing width shared by the deconvolved
/// kernel and the DOS estimate of one trace computation.
///
/// The effective bounds of `A` are mapped onto `[−a, a]`; `σ` is given in the
/// original units of `A` and converted with the map's scale. The Gaussian tails
/// must not reach the periodic boundary, so `σ_scaled ≤ (1 − a)/8` is required.
#[derive(Debug, Clone, Copy)]
pub struct TracePlan<'a> {
    op: ScaledOperator<'a>,
    window: WindowParams,
    sigma: f64,
    n_points: usize,
}

impl<'a> TracePlan<'a> {
    /// `n_points = None` picks the smallest power of two with `Δt ≤ σ_scaled/2`.
    pub fn new(
        base: &'a dyn LinearOperator,
        bounds: &SpectralBounds,
        sigma: f64,
        window: WindowParams,
        n_points: Option<usize>,
    ) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::param(format!("smearing width must be positive, got {sigma}")));
        }
        let (lo, hi) = bounds.effective();
        let op = ScaledOperator::from_interval(base, lo, hi, window.a())?;
        let scaled = sigma * op.scale();
        if scaled > (1.0 - window.a()) / 8.0 {
            return Err(Error::param(format!(
                "smearing width {sigma} maps to {scaled} in scaled units, too wide for the gap {} \
                 between the window and the periodic boundary",
                1.0 - window.a()
            )));
        }
        let n_points = n_points.unwrap_or_else(|| ((4.0 / scaled).ceil() as usize).next_power_of_two());
        if n_points == 0 {
            return Err(Error::param("periodic grid needs at least one point"));
        }
        Ok(Self {
            op,
            window,
            sigma,
            n_points,
        })
    }

    pub fn operator(&self) -> &ScaledOperator<'a> {
        &self.op
    }

    pub fn window(&self) -> &WindowParams {
        &self.window
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sigma_scaled(&self) -> f64 {
        self.sigma * self.op.scale()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Periodic grid in scaled units.
    pub fn grid(&self) -> Vec<f64> {
        periodic_points(self.n_points)
    }

    /// `template` with its grid and `σ` replaced by this plan's.
    pub fn dos_request(&self, template: &DosRequest) -> DosRequest {
        DosRequest {
            grid: self.grid(),
            sigma: self.sigma_scaled(),
            ..template.clone()
        }
    }

    /// `f̃` for `f` given in original units.
    pub fn kernel(&self, f: &dyn Fn(f64) -> f64) -> Result<Deconvolved> {
        let op = self.op;
        let fs = move |t: f64| f(op.to_original(t));
        let h = build_h(&fs, &self.window, self.n_points)?;
        deconvolve(&h, self.sigma_scaled())
    }

    /// `N·Δt·Σ_i f̃(t_i) φ̃(t_i)`.
    pub fn quadrature(&self, kernel: &Deconvolved, phi: &[f64]) -> Result<f64> {
        if phi.len() != self.n_points || kernel.samples.len() != self.n_points {
            return Err(Error::DimensionMismatch(format!(
                "quadrature needs {} samples, got kernel {} and DOS {}",
                self.n_points,
                kernel.samples.len(),
                phi.len()
            )));
        }
        let dt = 2.0 / self.n_points as f64;
        let s: f64 = kernel.samples.values().iter().zip(phi).map(|(a, b)| a * b).sum();
        Ok(self.op.dim() as f64 * dt * s)
    }
}

/// Result of [`trace_of_function`].
#[derive(Debug, Clone)]
pub struct TraceEstimate {
    /// `Tr f(A)` in original units.
    pub estimate: f64,
    pub zeroed_modes: usize,
    pub n_points: usize,
    pub sigma_scaled: f64,
    pub dos: DosResult,
    pub wall_time_secs: f64,
}

/// Parameters of [`trace_of_function`] besides the DOS estimator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceParams {
    /// Smearing width in original units.
    pub sigma: f64,
    pub window: WindowParams,
    pub n_points: Option<usize>,
}

/// `Tr f(A) ≈ N Δt Σ_i f̃(t_i) φ̃_σ(t_i)` where `f̃ ⊛ g_σ` is the periodic
/// extension of `f` and `φ̃_σ` comes from the estimator in `dos`.
///
/// `dos` supplies method, degree, probes and seed; its grid and `σ` are
/// overwritten. The spectrum of `a` must lie inside `bounds`.
pub fn trace_of_function(
    a: &dyn LinearOperator,
    bounds: &SpectralBounds,
    f: &dyn Fn(f64) -> f64,
    params: &TraceParams,
    dos: &DosRequest,
) -> Result<TraceEstimate> {
    let start = Instant::now();
    let plan = TracePlan::new(a, bounds, params.sigma, params.window, params.n_points)?;
    let kernel = plan.kernel(f)?;
    let dos = estimate_dos(plan.operator(), &plan.dos_request(dos))?;
    Ok(TraceEstimate {
        estimate: plan.quadrature(&kernel, &dos.phi)?,
        zeroed_modes: kernel.zeroed_modes,
        n_points: plan.n_points(),
        sigma_scaled: plan.sigma_scaled(),
        dos,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}
