use libm::erf;

use crate::{Error, Result};

/// Smooth cut-off `π(t)` that equals 1 on `(−a, a)` and vanishes near `±1`:
///
/// ```text
/// π(t) = ½ [erf((1 + a − 2t)/σ̃) − erf((−1 − a − 2t)/σ̃)]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowParams {
    a: f64,
    sigma_tilde: f64,
}

/// Default transition width `σ̃`.
pub const DEFAULT_SIGMA_TILDE: f64 = 0.016;
/// Default half-width of the window, as a fraction of `[−1, 1]`.
pub const DEFAULT_WINDOW: f64 = 0.9;

impl WindowParams {
    /// Requires `0 < a < 1` and `π ≥ 1 − 1e-10` on `(−a, a)`.
    pub fn new(a: f64, sigma_tilde: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::param(format!("window half-width must lie in (0, 1), got {a}")));
        }
        if !(sigma_tilde > 0.0 && sigma_tilde.is_finite()) {
            return Err(Error::param(format!("window transition width must be positive, got {sigma_tilde}")));
        }
        let w = Self { a, sigma_tilde };
        // π is even and decreasing in |t| on [0, 1], so t = a is the worst point.
        if w.pi(a) < 1.0 - 1e-10 {
            return Err(Error::param(format!(
                "transition width {sigma_tilde} is too wide for a window of half-width {a}: pi(a) = {}",
                w.pi(a)
            )));
        }
        Ok(w)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn sigma_tilde(&self) -> f64 {
        self.sigma_tilde
    }

    pub fn pi(&self, t: f64) -> f64 {
        let s = self.sigma_tilde;
        0.5 * (erf((1.0 + self.a - 2.0 * t) / s) - erf((-1.0 - self.a - 2.0 * t) / s))
    }

    /// `h(t) = f(t)π(t) + ((f(−1) + f(1))/2)(1 − π(t))`.
    pub fn extend(&self, f: &dyn Fn(f64) -> f64, t: f64) -> f64 {
        let mid = 0.5 * (f(-1.0) + f(1.0));
        self.blend(f(t), mid, t)
    }

    fn blend(&self, ft: f64, mid: f64, t: f64) -> f64 {
        let p = self.pi(t);
        if mid == ft {
            return ft;
        }
        ft * p + mid * (1.0 - p)
    }
}

/// Uniform samples on the periodic domain `[−1, 1)` at the half-shifted
/// points `t_j = −1 + (j + ½)Δt`, `Δt = 2/N_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSamples {
    values: Vec<f64>,
}

impl PeriodicSamples {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("periodic grid needs at least one point"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("periodic samples must be finite"));
        }
        Ok(Self { values })
    }

    /// Samples `f` at the grid points.
    pub fn sample(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(periodic_points(n).into_iter().map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dt(&self) -> f64 {
        2.0 / self.values.len() as f64
    }

    pub fn points(&self) -> Vec<f64> {
        periodic_points(self.values.len())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `t_j = −1 + (j + ½)·2/n`; every point lies strictly inside `(−1, 1)`.
pub fn periodic_points(n: usize) -> Vec<f64> {
    let dt = 2.0 / n as f64;
    (0..n).map(|j| -1.0 + (j as f64 + 0.5) * dt).collect()
}

/// Periodic extension `h` of `f` sampled on `n` grid points.
pub fn build_h(f: &dyn Fn(f64) -> f64, window: &WindowParams, n: usize) -> Result<PeriodicSamples> {
    let mid = 0.5 * (f(-1.0) + f(1.0));
    PeriodicSamples::sample(n, |t| window.blend(f(t), mid, t))
}
