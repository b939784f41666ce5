//! Matrix representations and the block matvec primitive.
//!
//! Every estimator in the crate touches the matrix only through
//! [`LinearOperator::apply_into`]. Implementations must compute each output
//! row independently so results do not depend on the worker count.

mod bounds;
mod csr;
mod modes3d;
mod mtx;

pub use bounds::{estimate_bounds, spectral_transform, ScaledOperator, SpectralBounds, DEFAULT_MARGIN};
pub use csr::SparseSymMatrix;
pub use modes3d::{gen_modes3d, Modes3dParams};
pub use mtx::{
    load_matrix_market, read_matrix_market, save_matrix_market, write_matrix_market,
};

use ndarray::{Array2, ArrayView2, ArrayViewMut2, Axis};
use rayon::prelude::*;

use crate::{Error, Result};

/// A symmetric linear operator applied to dense blocks of column vectors.
pub trait LinearOperator: Sync {
    /// Number of rows (and columns).
    fn dim(&self) -> usize;

    /// Writes `A·v` into `out`. Shapes are checked by [`LinearOperator::apply`];
    /// implementors may assume `v` and `out` are both `dim × k`.
    fn apply_into(&self, v: ArrayView2<'_, f64>, out: ArrayViewMut2<'_, f64>);

    fn apply(&self, v: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        check_block(self.dim(), v)?;
        let mut out = Array2::zeros(v.raw_dim());
        self.apply_into(v, out.view_mut());
        Ok(out)
    }
}

/// Returns `A·V`, leaving `V` untouched.
pub fn matvec_block(op: &dyn LinearOperator, v: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
    op.apply(v)
}

pub(crate) fn check_block(dim: usize, v: ArrayView2<'_, f64>) -> Result<()> {
    if v.nrows() != dim {
        return Err(Error::DimensionMismatch(format!(
            "operator has {dim} rows, block has {}",
            v.nrows()
        )));
    }
    if v.ncols() == 0 {
        return Err(Error::DimensionMismatch("block has no columns".into()));
    }
    Ok(())
}

/// Dense symmetric operator. Meant for small test problems and oracles.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    matrix: Array2<f64>,
}

impl DenseOperator {
    pub fn new(matrix: Array2<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "dense operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }
}

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply_into(&self, v: ArrayView2<'_, f64>, mut out: ArrayViewMut2<'_, f64>) {
        out.axis_iter_mut(Axis(0))
            .into_par_iter()
            .zip(self.matrix.axis_iter(Axis(0)).into_par_iter())
            .for_each(|(mut o, a)| {
                o.assign(&a.dot(&v));
            });
    }
}
