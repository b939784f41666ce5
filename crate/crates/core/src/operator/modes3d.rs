use serde::{Deserialize, Serialize};

use super::SparseSymMatrix;
use crate::{Error, Result};

/// Parameters of the periodic model Hamiltonian `−Δ + V` on `[0, n·L]³`.
///
/// `V` is a sum of Gaussian wells of the given depth and width, one at the
/// center of every unit cell. Depth and width are free parameters of the
/// model; the defaults give a spectrum of about `(−1.25, 33.04)` at `n = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modes3dParams {
    pub cells_per_dim: usize,
    pub length: f64,
    pub spacing: f64,
    pub potential_depth: f64,
    pub potential_width: f64,
}

impl Default for Modes3dParams {
    fn default() -> Self {
        Self {
            cells_per_dim: 1,
            length: 6.0,
            spacing: 0.6,
            potential_depth: -4.0,
            potential_width: 1.2,
        }
    }
}

impl Modes3dParams {
    pub fn with_cells(cells_per_dim: usize) -> Self {
        Self {
            cells_per_dim,
            ..Self::default()
        }
    }

    /// Grid points per unit-cell edge, `L/h`, when it is a positive integer.
    pub fn points_per_cell(&self) -> Result<usize> {
        if !(self.length > 0.0 && self.spacing > 0.0) {
            return Err(Error::param("cell length and grid spacing must be positive"));
        }
        let ratio = self.length / self.spacing;
        let rounded = ratio.round();
        if rounded < 1.0 || (ratio - rounded).abs() > 1e-9 * ratio {
            return Err(Error::param(format!(
                "L/h = {}/{} = {ratio} is not a positive integer",
                self.length, self.spacing
            )));
        }
        Ok(rounded as usize)
    }

    pub fn dim(&self) -> Result<usize> {
        let side = self.points_per_cell()? * self.cells_per_dim;
        Ok(side * side * side)
    }
}

/// 7-point finite-difference discretization of `−Δu + V u` with periodic
/// boundary conditions. Grid points sit at `x = i·h`; the flat index is
/// `ix + s·(iy + s·iz)` with `s = n·L/h`.
pub fn gen_modes3d(params: &Modes3dParams) -> Result<SparseSymMatrix> {
    if params.cells_per_dim == 0 {
        return Err(Error::param("need at least one unit cell per dimension"));
    }
    if !(params.potential_width > 0.0) {
        return Err(Error::param("potential width must be positive"));
    }
    let per_cell = params.points_per_cell()?;
    let side = per_cell * params.cells_per_dim;
    if side < 3 {
        return Err(Error::param(format!(
            "periodic 7-point stencil needs at least 3 points per dimension, got {side}"
        )));
    }
    let h = params.spacing;
    let inv_h2 = 1.0 / (h * h);
    let n = side * side * side;
    let index = |x: usize, y: usize, z: usize| x + side * (y + side * z);

    // Well centers repeat with period L, so the potential depends only on the
    // position inside the cell.
    let two_w2 = 2.0 * params.potential_width * params.potential_width;
    let center = 0.5 * params.length;
    let well: Vec<f64> = (0..per_cell)
        .map(|i| {
            let d = i as f64 * h - center;
            d * d
        })
        .collect();

    // The Laplacian diagonal is the negated sum of the six neighbour weights,
    // accumulated in the order the matvec uses, so constants are annihilated
    // exactly at zero potential.
    let lap_diag = -(0..6).fold(0.0, |s, _| s + -inv_h2);

    let mut triplets = Vec::with_capacity(7 * n);
    for z in 0..side {
        for y in 0..side {
            for x in 0..side {
                let r2 = well[x % per_cell] + well[y % per_cell] + well[z % per_cell];
                let v = params.potential_depth * (-r2 / two_w2).exp();
                let i = index(x, y, z);
                triplets.push((i, i, lap_diag + v));
                let up = |c: usize| (c + 1) % side;
                let down = |c: usize| (c + side - 1) % side;
                for j in [
                    index(up(x), y, z),
                    index(down(x), y, z),
                    index(x, up(y), z),
                    index(x, down(y), z),
                    index(x, y, up(z)),
                    index(x, y, down(z)),
                ] {
                    triplets.push((i, j, -inv_h2));
                }
            }
        }
    }
    let name = format!("ModES3D_{}", params.cells_per_dim.pow(3));
    Ok(SparseSymMatrix::from_triplets(n, triplets)?.with_name(name))
}
