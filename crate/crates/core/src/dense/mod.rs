//! Small dense symmetric kernels: eigendecomposition, the filtered
//! generalized eigensolver behind the spectrum-sweeping estimators and the
//! truncated pseudo-inverse trace.

mod geneig;
mod symeig;

pub use geneig::{gen_eig_filtered, pinv_trace, GenEigResult, RangeFilter, CAP_ROUNDOFF, DEFAULT_TAU};
pub use symeig::{sym_eig, SymEig};

use ndarray::{Array2, ArrayView2};

use crate::{Error, Result};

/// Small dense symmetric matrix, symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSym {
    data: Array2<f64>,
}

impl DenseSym {
    pub fn new(m: Array2<f64>) -> Result<Self> {
        Self::from_view(m.view())
    }

    pub fn from_view(m: ArrayView2<'_, f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "symmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let data = (&m + &m.t()) * 0.5;
        Ok(Self { data })
    }

    pub fn identity(p: usize) -> Self {
        Self { data: Array2::eye(p) }
    }

    pub fn order(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.diag().sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `Qᵀ·self·Q`.
    pub fn congruence(&self, q: ArrayView2<'_, f64>) -> Result<Self> {
        if q.nrows() != self.order() {
            return Err(Error::DimensionMismatch("congruence factor has wrong row count".into()));
        }
        Self::new(q.t().dot(&self.data).dot(&q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn symmetrizes() {
        let s = DenseSym::new(array![[1.0, 2.0], [4.0, 3.0]]).unwrap();
        assert_eq!(s.as_array(), &array![[1.0, 3.0], [3.0, 3.0]]);
        assert!(DenseSym::new(Array2::zeros((2, 3))).is_err());
    }
}
