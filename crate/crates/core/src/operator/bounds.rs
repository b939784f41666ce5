use ndarray::{Array2, ArrayView2, ArrayViewMut2, Zip};
use serde::{Deserialize, Serialize};

use super::{check_block, LinearOperator, SparseSymMatrix};
use crate::estimators::{ProbeBlock, ProbeKind};
use crate::{Error, Result};

/// Widening fraction applied to estimated bounds.
pub const DEFAULT_MARGIN: f64 = 0.01;

/// An interval `(a, b)` believed to contain the spectrum, plus a widening
/// fraction. The interval actually mapped onto `(−1, 1)` is
/// `[a − margin·(b − a), b + margin·(b − a)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralBounds {
    pub a: f64,
    pub b: f64,
    pub margin: f64,
}

impl SpectralBounds {
    pub fn new(a: f64, b: f64, margin: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::param(format!("spectral bounds need a < b, got ({a}, {b})")));
        }
        if !(margin >= 0.0 && margin.is_finite()) {
            return Err(Error::param(format!("margin must be nonnegative, got {margin}")));
        }
        Ok(Self { a, b, margin })
    }

    pub fn effective(&self) -> (f64, f64) {
        let w = self.margin * (self.b - self.a);
        (self.a - w, self.b + w)
    }

    pub fn contains(&self, lambda: f64) -> bool {
        let (lo, hi) = self.effective();
        lo <= lambda && lambda <= hi
    }
}

/// `(A − shift·I)·scale`, an affine image of a base operator.
///
/// With `shift = (lo + hi)/2` and `scale = 2/(hi − lo)` the interval `[lo, hi]`
/// lands on `[−1, 1]`.
#[derive(Clone, Copy)]
pub struct ScaledOperator<'a> {
    base: &'a dyn LinearOperator,
    shift: f64,
    scale: f64,
}

impl std::fmt::Debug for ScaledOperator<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScaledOperator")
            .field("dim", &self.base.dim())
            .field("shift", &self.shift)
            .field("scale", &self.scale)
            .finish()
    }
}

impl<'a> ScaledOperator<'a> {
    /// Maps `[lo, hi]` onto `[−half_width, half_width]`.
    pub fn from_interval(
        base: &'a dyn LinearOperator,
        lo: f64,
        hi: f64,
        half_width: f64,
    ) -> Result<Self> {
        if !(lo < hi) || !(half_width > 0.0) {
            return Err(Error::param(format!(
                "cannot map [{lo}, {hi}] onto a window of half-width {half_width}"
            )));
        }
        Ok(Self {
            base,
            shift: 0.5 * (lo + hi),
            scale: 2.0 * half_width / (hi - lo),
        })
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn base(&self) -> &'a dyn LinearOperator {
        self.base
    }

    pub fn to_scaled(&self, lambda: f64) -> f64 {
        (lambda - self.shift) * self.scale
    }

    pub fn to_original(&self, t: f64) -> f64 {
        t / self.scale + self.shift
    }
}

impl LinearOperator for ScaledOperator<'_> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply_into(&self, v: ArrayView2<'_, f64>, mut out: ArrayViewMut2<'_, f64>) {
        self.base.apply_into(v, out.view_mut());
        let (c, s) = (self.shift, self.scale);
        Zip::from(&mut out).and(&v).for_each(|o, &x| *o = s * (*o - c * x));
    }
}

/// Affine map sending the effective bounds interval onto `[−1, 1]`.
pub fn spectral_transform<'a>(
    a: &'a dyn LinearOperator,
    bounds: &SpectralBounds,
) -> Result<ScaledOperator<'a>> {
    let bounds = SpectralBounds::new(bounds.a, bounds.b, bounds.margin)?;
    let (lo, hi) = bounds.effective();
    ScaledOperator::from_interval(a, lo, hi, 1.0)
}

/// Seeded extremal-eigenvalue estimate.
///
/// Runs `iters` power steps on `A − g_lo·I` and on `g_hi·I − A`, where
/// `[g_lo, g_hi]` is the Gershgorin interval (both shifted matrices are then
/// positive semidefinite). Each end is the Rayleigh quotient pushed outward by
/// its residual norm and clipped to Gershgorin. The result carries
/// [`DEFAULT_MARGIN`].
pub fn estimate_bounds(a: &SparseSymMatrix, iters: usize, seed: u64) -> Result<SpectralBounds> {
    if iters == 0 {
        return Err(Error::param("estimate_bounds needs at least one iteration"));
    }
    let (g_lo, g_hi) = a.gershgorin();
    let n = a.dim();

    let start = ProbeBlock::generate(n, 2, ProbeKind::Gaussian, seed)?;
    let top = power_rayleigh(a, start.values().column(0).to_owned(), iters, -g_lo, 1.0)?;
    let bottom = power_rayleigh(a, start.values().column(1).to_owned(), iters, g_hi, -1.0)?;

    let mut hi = (top.0 + top.1).min(g_hi);
    let mut lo = (bottom.0 - bottom.1).max(g_lo);
    let width = hi - lo;
    let floor = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
    if width <= floor {
        let pad = DEFAULT_MARGIN * lo.abs().max(hi.abs()).max(1.0);
        lo -= pad;
        hi += pad;
    }
    SpectralBounds::new(lo, hi, DEFAULT_MARGIN)
}

/// Power iteration on `sign·A + shift·I`; returns the Rayleigh quotient of `A`
/// at the final iterate and its residual norm `‖Ax − ρx‖`.
fn power_rayleigh(
    a: &SparseSymMatrix,
    x0: ndarray::Array1<f64>,
    iters: usize,
    shift: f64,
    sign: f64,
) -> Result<(f64, f64)> {
    let n = a.dim();
    let mut x: Array2<f64> = x0.into_shape_with_order((n, 1)).expect("column");
    normalize(&mut x);
    check_block(n, x.view())?;
    for _ in 0..iters {
        let ax = a.apply(x.view())?;
        let mut y = ax * sign + &x * shift;
        if normalize(&mut y) == 0.0 {
            break;
        }
        x = y;
    }
    let ax = a.apply(x.view())?;
    let rho: f64 = x.iter().zip(ax.iter()).map(|(p, q)| p * q).sum();
    let resid = ax
        .iter()
        .zip(x.iter())
        .map(|(q, p)| (q - rho * p).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok((rho, resid))
}

fn normalize(x: &mut Array2<f64>) -> f64 {
    let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nrm > 0.0 {
        x.mapv_inplace(|v| v / nrm);
    }
    nrm
}
