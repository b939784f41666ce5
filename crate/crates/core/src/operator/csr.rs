use ndarray::{ArrayView2, ArrayViewMut2, Axis};
use rayon::prelude::*;

use super::LinearOperator;
use crate::{Error, Result};

/// Real symmetric matrix in compressed sparse-row layout.
///
/// Both triangles are stored so a block matvec is a single streaming pass.
/// Column indices within a row are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    dim: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
    name: Option<String>,
}

impl SparseSymMatrix {
    /// Builds a matrix from the full symmetric pattern. Every `(i, j, v)` must
    /// have a bit-identical `(j, i, v)` partner; duplicates are rejected.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if let Some(&(i, j, _)) = triplets.iter().find(|&&(i, j, _)| i >= dim || j >= dim) {
            return Err(Error::InvalidMatrix(format!(
                "entry ({i}, {j}) outside a {dim}x{dim} matrix"
            )));
        }
        triplets.sort_unstable_by_key(|a| (a.0, a.1));
        if let Some(w) = triplets.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::InvalidMatrix(format!(
                "duplicate entry ({}, {})",
                w[0].0, w[0].1
            )));
        }

        let mut row_offsets = vec![0usize; dim + 1];
        for &(i, _, _) in &triplets {
            row_offsets[i + 1] += 1;
        }
        for i in 0..dim {
            row_offsets[i + 1] += row_offsets[i];
        }
        let (col_indices, values) = triplets.iter().map(|&(_, j, v)| (j, v)).unzip();
        let m = Self {
            dim,
            row_offsets,
            col_indices,
            values,
            name: None,
        };
        m.check_symmetry()?;
        Ok(m)
    }

    /// Builds a matrix from one triangle; off-diagonal entries are mirrored.
    pub fn from_lower_triplets(dim: usize, triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut full = Vec::with_capacity(2 * triplets.len());
        for (i, j, v) in triplets {
            full.push((i, j, v));
            if i != j {
                full.push((j, i, v));
            }
        }
        Self::from_triplets(dim, full)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_triplets(diag.len(), diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[span.clone()].binary_search(&j) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    /// Gershgorin interval `[min_i (a_ii − R_i), max_i (a_ii + R_i)]`.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let mut diag = 0.0;
            let mut radius = 0.0;
            for (j, v) in self.row(i) {
                if j == i {
                    diag = v;
                } else {
                    radius += v.abs();
                }
            }
            lo = lo.min(diag - radius);
            hi = hi.max(diag + radius);
        }
        (lo, hi)
    }

    /// Dense copy, row-major.
    pub fn to_dense(&self) -> ndarray::Array2<f64> {
        let mut d = ndarray::Array2::zeros((self.dim, self.dim));
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                d[[i, j]] = v;
            }
        }
        d
    }

    fn check_symmetry(&self) -> Result<()> {
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                if j != i && self.get(j, i).to_bits() != v.to_bits() {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i}, {j}) = {v} has no symmetric partner"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl LinearOperator for SparseSymMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_into(&self, v: ArrayView2<'_, f64>, mut out: ArrayViewMut2<'_, f64>) {
        out.axis_iter_mut(Axis(0))
            .into_par_iter()
            .enumerate()
            .for_each(|(i, mut o)| {
                o.fill(0.0);
                // Off-diagonal terms in column order, then the diagonal.
                let mut diag = None;
                for (j, a) in self.row(i) {
                    if j == i {
                        diag = Some(a);
                    } else {
                        o.scaled_add(a, &v.row(j));
                    }
                }
                if let Some(a) = diag {
                    o.scaled_add(a, &v.row(i));
                }
            });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    #[test]
    fn identity_is_noop() {
        let eye = SparseSymMatrix::from_diagonal(&[1.0; 4]).unwrap();
        let v = array![[0.3, -1.0, 2.0], [1.5, 0.0, 4.0], [-2.0, 7.0, 0.1], [9.0, 1.0, 1.0]];
        assert_eq!(eye.apply(v.view()).unwrap(), v);
    }

    #[test]
    fn diagonal_action() {
        let d = SparseSymMatrix::from_diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let e2 = array![[0.0], [1.0], [0.0]];
        assert_eq!(d.apply(e2.view()).unwrap(), array![[0.0], [2.0], [0.0]]);
    }

    #[test]
    fn rejects_asymmetric_and_duplicate() {
        let asym = SparseSymMatrix::from_triplets(2, vec![(0, 1, 1.0)]);
        assert!(matches!(asym, Err(Error::InvalidMatrix(_))));
        let bits = SparseSymMatrix::from_triplets(2, vec![(0, 1, 1.0), (1, 0, 1.0 + f64::EPSILON)]);
        assert!(matches!(bits, Err(Error::InvalidMatrix(_))));
        let dup = SparseSymMatrix::from_triplets(2, vec![(0, 0, 1.0), (0, 0, 2.0)]);
        assert!(matches!(dup, Err(Error::InvalidMatrix(_))));
        let out = SparseSymMatrix::from_triplets(2, vec![(0, 2, 1.0)]);
        assert!(matches!(out, Err(Error::InvalidMatrix(_))));
    }

    #[test]
    fn lower_triplets_are_mirrored() {
        let m = SparseSymMatrix::from_lower_triplets(
            3,
            vec![(0, 0, 1.0), (1, 0, 2.0), (2, 1, 3.0), (2, 2, 4.0)],
        )
        .unwrap();
        assert_eq!(m.nnz(), 6);
        assert_eq!(m.get(0, 1), 2.0);
        assert_eq!(m.get(1, 2), 3.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert!(m.row_offsets().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn block_matvec_is_columnwise() {
        let m = SparseSymMatrix::from_lower_triplets(
            3,
            vec![(0, 0, 1.0), (1, 0, 2.0), (2, 1, -3.0), (2, 2, 4.0)],
        )
        .unwrap();
        let v = array![[1.0, 2.0], [3.0, -4.0], [5.0, 6.0]];
        let both = m.apply(v.view()).unwrap();
        for c in 0..2 {
            let col: Array2<f64> = v.column(c).to_owned().insert_axis(Axis(1));
            let single = m.apply(col.view()).unwrap();
            assert_eq!(single.column(0), both.column(c));
        }
        assert_eq!(m.to_dense().dot(&v), both);
    }

    #[test]
    fn gershgorin_encloses() {
        let m = SparseSymMatrix::from_lower_triplets(2, vec![(0, 0, 1.0), (1, 0, -2.0), (1, 1, 0.5)])
            .unwrap();
        assert_eq!(m.gershgorin(), (-1.5, 3.0));
    }
}
