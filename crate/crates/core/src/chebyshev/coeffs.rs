//! Chebyshev coefficients of the regularized delta and of its square.
//!
//! Coefficients come from the trapezoidal rule on `θ_j = jπ/N_θ`,
//! `j = 0..2N_θ`, evaluated with one FFT:
//!
//! ```text
//! c_l = (2 − δ_l0)/(2N_θ) · Re Σ_j f(cos θ_j) e^{−2πi jl/(2N_θ)}
//! ```
//!
//! which is exact for polynomials of degree below `2N_θ − l`.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// `g_σ(s) = exp(−s²/2σ²) / (N √(2πσ²))`.
pub fn gaussian_kernel(s: f64, sigma: f64, norm_dim: usize) -> f64 {
    (-(s * s) / (2.0 * sigma * sigma)).exp() / (norm_dim as f64 * (2.0 * PI * sigma * sigma).sqrt())
}

/// Default integrator resolution for a degree-`degree` expansion.
pub fn default_n_theta(degree: usize) -> usize {
    2 * (degree + 1)
}

/// Cached FFT plans for projecting sampled functions onto `T_0..T_M`.
#[derive(Clone)]
pub struct ChebyshevProjector {
    n_theta: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for ChebyshevProjector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChebyshevProjector").field("n_theta", &self.n_theta).finish()
    }
}

impl ChebyshevProjector {
    /// `n_theta` must exceed `degree`; it is rounded up to a power of two.
    pub fn new(degree: usize, n_theta: usize) -> Result<Self> {
        if n_theta <= degree {
            return Err(Error::param(format!(
                "integration resolution N_theta = {n_theta} must exceed the degree {degree}"
            )));
        }
        let n_theta = n_theta.next_power_of_two();
        let mut planner = FftPlanner::new();
        Ok(Self {
            n_theta,
            forward: planner.plan_fft_forward(2 * n_theta),
            inverse: planner.plan_fft_inverse(2 * n_theta),
        })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    /// Nodes `cos θ_j`, `j = 0..2N_θ`.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.n_theta as f64;
        (0..2 * self.n_theta).map(move |j| (j as f64 * PI / n).cos())
    }

    /// Coefficients `c_0..=c_degree` of `f` sampled at [`Self::nodes`].
    pub fn project(&self, f: impl Fn(f64) -> f64, degree: usize) -> Vec<f64> {
        let mut buf: Vec<Complex64> = self.nodes().map(|x| Complex64::new(f(x), 0.0)).collect();
        self.project_buffer(&mut buf, degree)
    }

    fn project_buffer(&self, buf: &mut [Complex64], degree: usize) -> Vec<f64> {
        self.forward.process(buf);
        let norm = 1.0 / (2.0 * self.n_theta as f64);
        (0..=degree)
            .map(|l| {
                let w = if l == 0 { norm } else { 2.0 * norm };
                w * buf[l].re
            })
            .collect()
    }

    /// Samples `Σ_k c_k T_k` at the nodes through one inverse FFT.
    fn synthesize(&self, coeffs: &[f64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * self.n_theta];
        for (b, &c) in buf.iter_mut().zip(coeffs) {
            *b = Complex64::new(c, 0.0);
        }
        self.inverse.process(&mut buf);
        // cos(kθ_j) = Re e^{+ikθ_j}; keep only the real part.
        buf.iter_mut().for_each(|z| *z = Complex64::new(z.re, 0.0));
        buf
    }

    /// Coefficients of `(Σ_k mu_k T_k)²` up to `degree`.
    pub fn square(&self, mu: &[f64], degree: usize) -> Vec<f64> {
        let mut buf = self.synthesize(mu);
        buf.iter_mut().for_each(|z| *z = Complex64::new(z.re * z.re, 0.0));
        self.project_buffer(&mut buf, degree)
    }
}

/// DGC coefficients `μ_0..=μ_M` of `s ↦ g_σ(t − s)`.
///
/// `norm_dim` is the `N` in the `1/N` normalization of the Gaussian; scalar
/// use passes 1.
pub fn dgc_coeffs(t: f64, sigma: f64, degree: usize, n_theta: usize, norm_dim: usize) -> Result<Vec<f64>> {
    check_sigma(sigma)?;
    let proj = ChebyshevProjector::new(degree, n_theta)?;
    Ok(proj.project(|s| gaussian_kernel(t - s, sigma, norm_dim), degree))
}

/// Coefficients `ν_0..=ν_M` of `P²` where `P = Σ_{k ≤ M/2} μ_k T_k`.
///
/// `mu` may be given up to degree `M`, but every entry above `M/2` must be zero.
pub fn squared_coeffs(mu: &[f64], degree: usize, n_theta: usize) -> Result<Vec<f64>> {
    if !degree.is_multiple_of(2) {
        return Err(Error::param(format!("squared expansion needs an even degree, got {degree}")));
    }
    let half = degree / 2;
    if mu.iter().skip(half + 1).any(|&c| c != 0.0) {
        return Err(Error::param(format!(
            "coefficients above degree {half} must vanish for a degree-{degree} square"
        )));
    }
    let proj = ChebyshevProjector::new(degree, n_theta)?;
    let mu = &mu[..mu.len().min(half + 1)];
    Ok(proj.square(mu, degree))
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::param(format!("smearing width must be positive, got {sigma}")));
    }
    Ok(())
}

/// Per-grid-point coefficient rows, computed once per `(grid, σ, M)`.
///
/// `mu` is `N_t × (M+1)`. For the squared pipeline `mu` is zero above `M/2`
/// and `nu` holds the coefficients of its square.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    grid: Vec<f64>,
    degree: usize,
    sigma: f64,
    n_theta: usize,
    norm_dim: usize,
    mu: Array2<f64>,
    nu: Option<Array2<f64>>,
}

impl CoeffTable {
    /// Full degree-`M` DGC coefficients at every grid point.
    pub fn dgc(grid: &[f64], sigma: f64, degree: usize, n_theta: Option<usize>, norm_dim: usize) -> Result<Self> {
        check_sigma(sigma)?;
        let proj = ChebyshevProjector::new(degree, n_theta.unwrap_or_else(|| default_n_theta(degree)))?;
        let rows: Vec<Vec<f64>> = grid
            .par_iter()
            .map(|&t| proj.project(|s| gaussian_kernel(t - s, sigma, norm_dim), degree))
            .collect();
        Ok(Self {
            grid: grid.to_vec(),
            degree,
            sigma,
            n_theta: proj.n_theta(),
            norm_dim,
            mu: stack(&rows, degree + 1),
            nu: None,
        })
    }

    /// Degree-`M/2` coefficients zero-padded to `M`, and their exact square.
    pub fn squared(grid: &[f64], sigma: f64, degree: usize, n_theta: Option<usize>, norm_dim: usize) -> Result<Self> {
        check_sigma(sigma)?;
        if !degree.is_multiple_of(2) {
            return Err(Error::param(format!("squared expansion needs an even degree, got {degree}")));
        }
        let half = degree / 2;
        let proj = ChebyshevProjector::new(degree, n_theta.unwrap_or_else(|| default_n_theta(degree)))?;
        let rows: Vec<(Vec<f64>, Vec<f64>)> = grid
            .par_iter()
            .map(|&t| {
                let mut mu = proj.project(|s| gaussian_kernel(t - s, sigma, norm_dim), half);
                let nu = proj.square(&mu, degree);
                mu.resize(degree + 1, 0.0);
                (mu, nu)
            })
            .collect();
        let (mu, nu): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        Ok(Self {
            grid: grid.to_vec(),
            degree,
            sigma,
            n_theta: proj.n_theta(),
            norm_dim,
            mu: stack(&mu, degree + 1),
            nu: Some(stack(&nu, degree + 1)),
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }
    pub fn norm_dim(&self) -> usize {
        self.norm_dim
    }
    pub fn mu(&self) -> &Array2<f64> {
        &self.mu
    }
    pub fn nu(&self) -> Option<&Array2<f64>> {
        self.nu.as_ref()
    }
}

fn stack(rows: &[Vec<f64>], width: usize) -> Array2<f64> {
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Array2::from_shape_vec((rows.len(), width), flat).expect("rows share one width")
}
