use std::f64::consts::PI;

use ndarray::{Array2, Axis};

use super::{sym_eig, DenseSym};
use crate::{Error, Result};

/// Relative eigenvalue threshold for truncating `K_W`.
pub const DEFAULT_TAU: f64 = 1e-7;

/// Relative roundoff allowance above the range cap. A grid point sitting on an
/// eigenvalue produces `ξ` equal to the cap up to rounding.
pub const CAP_ROUNDOFF: f64 = 1e-8;

/// Truncation and range-filter parameters for [`gen_eig_filtered`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeFilter {
    /// Upper end of the admissible interval `[0, cap]`.
    pub cap: f64,
    /// Eigenvalues `s_j < tau·max s` of `K_W` are discarded.
    pub tau: f64,
    /// Absolute floor: eigenvalues `s_j < floor` of `K_W` are discarded too.
    /// Estimators set it to the roundoff level of the accumulated moments so
    /// that a point with no spectral weight yields an empty result.
    pub floor: f64,
}

impl RangeFilter {
    /// The range of `g_σ`: `[0, 1/(N √(2πσ²))]`.
    pub fn gaussian(sigma: f64, n: usize, tau: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::param(format!("smearing width must be positive, got {sigma}")));
        }
        if n == 0 {
            return Err(Error::param("matrix dimension must be positive"));
        }
        Self::new(1.0 / (n as f64 * (2.0 * PI * sigma * sigma).sqrt()), tau)
    }

    pub fn new(cap: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::param(format!("truncation tau must lie in (0, 1), got {tau}")));
        }
        if !(cap >= 0.0) {
            return Err(Error::param(format!("range cap must be nonnegative, got {cap}")));
        }
        Ok(Self { cap, tau, floor: 0.0 })
    }

    pub fn with_floor(self, floor: f64) -> Self {
        Self { floor, ..self }
    }

    /// Widens the admissible interval to `[0, slack·cap]`.
    pub fn with_slack(self, slack: f64) -> Self {
        Self {
            cap: self.cap * slack,
            ..self
        }
    }
}

/// Retained generalized eigenpairs of `K_Z c = ξ K_W c`.
#[derive(Debug, Clone)]
pub struct GenEigResult {
    /// Retained eigenvalues, ascending.
    pub xi: Vec<f64>,
    /// `p × kept`, `C̃ᵀ K_W C̃ = I`.
    pub c: Array2<f64>,
    pub kept: usize,
    pub dropped_small: usize,
    pub dropped_range: usize,
}

impl GenEigResult {
    fn empty(p: usize) -> Self {
        Self {
            xi: Vec::new(),
            c: Array2::zeros((p, 0)),
            kept: 0,
            dropped_small: p,
            dropped_range: 0,
        }
    }

    pub fn trace(&self) -> f64 {
        self.xi.iter().sum()
    }
}

/// `Ũ S̃^{-1/2}` for the eigenpairs of `K_W` with `s_j ≥ max(τ·max s, floor)`.
fn truncated_whitener(kw: &DenseSym, tau: f64, floor: f64) -> Result<Option<Array2<f64>>> {
    let eig = sym_eig(kw)?;
    let smax = eig.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(smax > 0.0) || smax < floor {
        return Ok(None);
    }
    let threshold = (tau * smax).max(floor);
    let keep: Vec<usize> = (0..kw.order()).filter(|&j| eig.values[j] >= threshold).collect();
    let mut b = eig.vectors.select(Axis(1), &keep);
    for (mut col, &j) in b.axis_iter_mut(Axis(1)).zip(&keep) {
        col.mapv_inplace(|v| v / eig.values[j].sqrt());
    }
    Ok(Some(b))
}

/// Filtered solve of `K_Z C̃ = K_W C̃ Ξ̃`.
///
/// 1. `K_W = U S Uᵀ`; keep `s_j ≥ max(τ·max s, floor)` (negative `s_j` fail
///    automatically).
/// 2. Diagonalize `S̃^{-1/2} Ũᵀ K_Z Ũ S̃^{-1/2} = X Ξ Xᵀ`.
/// 3. Keep `ξ ∈ [0, cap·(1 + CAP_ROUNDOFF)]`; `C̃ = Ũ S̃^{-1/2} X̃`.
///
/// If nothing survives step 1 the result is empty (zero local density).
pub fn gen_eig_filtered(kw: &DenseSym, kz: &DenseSym, filter: &RangeFilter) -> Result<GenEigResult> {
    let p = kw.order();
    if kz.order() != p {
        return Err(Error::DimensionMismatch(format!(
            "K_W is {p}x{p} but K_Z is {0}x{0}",
            kz.order()
        )));
    }
    let Some(b) = truncated_whitener(kw, filter.tau, filter.floor)? else {
        return Ok(GenEigResult::empty(p));
    };
    let r = b.ncols();
    let reduced = DenseSym::new(b.t().dot(kz.as_array()).dot(&b))?;
    let eig = sym_eig(&reduced)?;
    let hi = filter.cap * (1.0 + CAP_ROUNDOFF);
    let keep: Vec<usize> = (0..r)
        .filter(|&i| (0.0..=hi).contains(&eig.values[i]))
        .collect();
    let xi: Vec<f64> = keep.iter().map(|&i| eig.values[i]).collect();
    let c = b.dot(&eig.vectors.select(Axis(1), &keep));
    Ok(GenEigResult {
        kept: keep.len(),
        dropped_small: p - r,
        dropped_range: r - keep.len(),
        xi,
        c,
    })
}

/// `Tr[K_W† K_Z]` with the τ-truncated pseudo-inverse of `K_W`.
pub fn pinv_trace(kw: &DenseSym, kz: &DenseSym, tau: f64) -> Result<f64> {
    if kz.order() != kw.order() {
        return Err(Error::DimensionMismatch("K_W and K_Z differ in order".into()));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::param(format!("truncation tau must lie in (0, 1), got {tau}")));
    }
    let Some(b) = truncated_whitener(kw, tau, 0.0)? else {
        return Ok(0.0);
    };
    // Tr[Ũ S̃⁻¹ Ũᵀ K_Z] = Σ_j b_jᵀ K_Z b_j.
    let kzb = kz.as_array().dot(&b);
    Ok(b.iter().zip(kzb.iter()).map(|(x, y)| x * y).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{gaussian_matrix, orthonormalize};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exact rank-`r` PSD `P = U S Uᵀ` with planted eigenvalues.
    fn low_rank(n: usize, planted: &[f64], rng: &mut ChaCha8Rng) -> Array2<f64> {
        let g = gaussian_matrix(n, planted.len(), rng);
        let q = orthonormalize(g);
        let s = Array2::from_diag(&ndarray::Array1::from(planted.to_vec()));
        q.dot(&s).dot(&q.t())
    }

    fn moments(p: &Array2<f64>, w: &Array2<f64>) -> (DenseSym, DenseSym) {
        let z = p.dot(w);
        (DenseSym::new(w.t().dot(&z)).unwrap(), DenseSym::new(z.t().dot(&z)).unwrap())
    }

    #[test]
    fn identity_pair() {
        let f = RangeFilter::new(1.0, DEFAULT_TAU).unwrap();
        let r = gen_eig_filtered(&DenseSym::identity(4), &DenseSym::identity(4), &f).unwrap();
        assert_eq!(r.kept, 4);
        assert!(r.xi.iter().all(|&x| (x - 1.0).abs() < 1e-14));
        assert!((pinv_trace(&DenseSym::identity(4), &DenseSym::identity(4), DEFAULT_TAU).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn recovers_planted_low_rank_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let planted = [0.9, 0.5, 0.3, 0.2, 0.05];
        let p = low_rank(80, &planted, &mut rng);
        let w = gaussian_matrix(80, 10, &mut rng);
        let (kw, kz) = moments(&p, &w);
        let f = RangeFilter::new(1.0, DEFAULT_TAU).unwrap();
        let r = gen_eig_filtered(&kw, &kz, &f).unwrap();
        assert_eq!((r.kept, r.dropped_small, r.dropped_range), (5, 5, 0));
        let mut want = planted.to_vec();
        want.sort_by(f64::total_cmp);
        for (a, b) in r.xi.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "{:?}", r.xi);
        }
        let ctkc = r.c.t().dot(kw.as_array()).dot(&r.c);
        assert!((ctkc - Array2::<f64>::eye(5)).iter().all(|v| v.abs() < 1e-10));
        let lhs = kz.as_array().dot(&r.c);
        let rhs = kw.as_array().dot(&r.c).dot(&Array2::from_diag(&ndarray::Array1::from(r.xi.clone())));
        let scale = lhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((lhs - rhs).iter().all(|v| v.abs() < 1e-9 * scale));

        let total: f64 = planted.iter().sum();
        assert!((pinv_trace(&kw, &kz, DEFAULT_TAU).unwrap() - total).abs() < 1e-10 * total);
        assert!((r.trace() - pinv_trace(&kw, &kz, DEFAULT_TAU).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn planted_out_of_range_value_is_dropped() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let planted = [0.033, 0.006, 0.004, 0.002];
        let p = low_rank(60, &planted, &mut rng);
        let w = gaussian_matrix(60, 8, &mut rng);
        let (kw, kz) = moments(&p, &w);
        let f = RangeFilter::new(0.008, DEFAULT_TAU).unwrap();
        let r = gen_eig_filtered(&kw, &kz, &f).unwrap();
        assert_eq!(r.dropped_range, 1);
        assert!(r.xi.iter().all(|&x| (x - 0.033).abs() > 1e-3));
        assert!((r.trace() - 0.012).abs() < 1e-12);
        assert_eq!(f.with_slack(5.0).cap, 0.04);
        let wide = gen_eig_filtered(&kw, &kz, &f.with_slack(5.0)).unwrap();
        assert_eq!(wide.dropped_range, 0);
    }

    #[test]
    fn all_small_gives_empty_result() {
        let z = DenseSym::new(Array2::zeros((3, 3))).unwrap();
        let f = RangeFilter::gaussian(0.1, 10, DEFAULT_TAU).unwrap();
        let r = gen_eig_filtered(&z, &z, &f).unwrap();
        assert_eq!((r.kept, r.dropped_small), (0, 3));
        assert_eq!(r.trace(), 0.0);
        assert!(!r.trace().is_nan());
        assert_eq!(pinv_trace(&z, &z, DEFAULT_TAU).unwrap(), 0.0);
        let tiny = DenseSym::new(Array2::<f64>::eye(3) * 1e-15).unwrap();
        let tiny_z = DenseSym::new(Array2::<f64>::eye(3) * 1e-16).unwrap();
        assert_eq!(gen_eig_filtered(&tiny, &tiny_z, &f).unwrap().kept, 3);
        assert_eq!(gen_eig_filtered(&tiny, &tiny_z, &f.with_floor(1e-12)).unwrap().kept, 0);
        let neg = DenseSym::new(-Array2::<f64>::eye(3)).unwrap();
        assert_eq!(gen_eig_filtered(&neg, &DenseSym::identity(3), &f).unwrap().kept, 0);
    }

    #[test]
    fn mismatched_orders() {
        let f = RangeFilter::new(1.0, DEFAULT_TAU).unwrap();
        assert!(gen_eig_filtered(&DenseSym::identity(2), &DenseSym::identity(3), &f).is_err());
        assert!(RangeFilter::new(1.0, 0.0).is_err());
        assert!(RangeFilter::gaussian(0.0, 1, 0.1).is_err());
    }

    #[test]
    fn invariant_under_orthogonal_congruence() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = low_rank(50, &[0.7, 0.4, 0.1], &mut rng);
        let w = gaussian_matrix(50, 6, &mut rng);
        let (kw, kz) = moments(&p, &w);
        let q = orthonormalize(gaussian_matrix(6, 6, &mut rng));
        let f = RangeFilter::new(1.0, DEFAULT_TAU).unwrap();
        let a = gen_eig_filtered(&kw, &kz, &f).unwrap();
        let b = gen_eig_filtered(&kw.congruence(q.view()).unwrap(), &kz.congruence(q.view()).unwrap(), &f).unwrap();
        assert_eq!(a.kept, b.kept);
        for (x, y) in a.xi.iter().zip(&b.xi) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}
