use ndarray::{s, Array2, ArrayView2, Zip};

use crate::operator::check_block;
use crate::{LinearOperator, Result};

/// Three blocks of the Chebyshev recurrence. After `l` advances `current()`
/// holds `T_l(A)·W`.
#[derive(Debug, Clone)]
pub struct SweepState {
    prev: Array2<f64>,
    cur: Array2<f64>,
    next: Array2<f64>,
    degree: usize,
}

impl SweepState {
    pub fn new(op: &dyn LinearOperator, w: ArrayView2<'_, f64>) -> Result<Self> {
        check_block(op.dim(), w)?;
        Ok(Self {
            prev: Array2::zeros(w.raw_dim()),
            cur: w.to_owned(),
            next: Array2::zeros(w.raw_dim()),
            degree: 0,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn current(&self) -> ArrayView2<'_, f64> {
        self.cur.view()
    }

    /// `V_p ← (2 − δ_l0)·A·V_c − V_m`, then shifts the window by one degree.
    pub fn advance(&mut self, op: &dyn LinearOperator) {
        op.apply_into(self.cur.view(), self.next.view_mut());
        let factor = if self.degree == 0 { 1.0 } else { 2.0 };
        Zip::from(&mut self.next)
            .and(&self.prev)
            .for_each(|n, &p| *n = factor * *n - p);
        std::mem::swap(&mut self.prev, &mut self.cur);
        std::mem::swap(&mut self.cur, &mut self.next);
        self.degree += 1;
    }

    /// Drops every column past the first `k`; later advances only carry those.
    pub fn truncate_columns(&mut self, k: usize) {
        if k >= self.cur.ncols() {
            return;
        }
        for block in [&mut self.prev, &mut self.cur, &mut self.next] {
            *block = block.slice(s![.., ..k]).to_owned();
        }
    }
}

/// Visits `(l, T_l(A)·W)` for `l = 0..=degree` in increasing order.
pub fn cheb_sweep(
    op: &dyn LinearOperator,
    w: ArrayView2<'_, f64>,
    degree: usize,
    mut visitor: impl FnMut(usize, ArrayView2<'_, f64>),
) -> Result<()> {
    let mut state = SweepState::new(op, w)?;
    loop {
        visitor(state.degree(), state.current());
        if state.degree() == degree {
            return Ok(());
        }
        state.advance(op);
    }
}
