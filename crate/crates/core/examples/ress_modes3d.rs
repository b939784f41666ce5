//! RESS-DGC density of states of ModES3D_1, written as CSV and checked
//! against the dense-eigenvalue reference.

use specsweep::cli::{to_csv, Row};
use specsweep::estimators::{dense_eigenvalues, exact_dos, ress_dgc_dos, rel_l1_error, uniform_grid, DosRequest, Method};
use specsweep::operator::{estimate_bounds, gen_modes3d, spectral_transform, Modes3dParams};

fn main() -> specsweep::Result<()> {
    let a = gen_modes3d(&Modes3dParams::with_cells(1))?;
    let bounds = estimate_bounds(&a, 200, 0)?;
    let op = spectral_transform(&a, &bounds)?;
    let grid = uniform_grid(op.to_scaled(bounds.a), op.to_scaled(bounds.b), 100);
    let sigma = 0.05;

    let req = DosRequest::new(Method::RessDgc, grid.clone(), sigma, 320, 40)
        .with_correction(40)
        .with_seed(1);
    let dos = ress_dgc_dos(&op, &req)?;

    let eigs: Vec<f64> = dense_eigenvalues(&a)?.iter().map(|&l| op.to_scaled(l)).collect();
    let exact = exact_dos(&eigs, &grid, sigma)?;
    println!("rel L1 error vs dense reference: {:.3e}", rel_l1_error(&dos, &exact)?);

    let rows: Vec<Row> = (0..dos.len())
        .map(|i| Row {
            t: dos.grid[i],
            phi: dos.phi[i],
            kept: dos.diagnostics[i].kept,
            dropped_small: dos.diagnostics[i].dropped_small,
            dropped_range: dos.diagnostics[i].dropped_range,
            correction: dos.diagnostics[i].correction,
        })
        .collect();
    let path = std::env::temp_dir().join("ress_modes3d_1.csv");
    std::fs::write(&path, to_csv(&rows)).map_err(|e| specsweep::Error::Io { path: path.clone(), source: e })?;
    println!("wrote {}", path.display());
    Ok(())
}
