//! DGC, SS-DGC and RESS-DGC against the exact smeared DOS of a diagonal
//! test matrix whose numerical rank per grid point is small.

use specsweep::estimators::{estimate_dos, exact_dos, rel_l1_error, uniform_grid, DosRequest, Method};
use specsweep::SparseSymMatrix;

fn main() -> specsweep::Result<()> {
    // 40 clusters of 10 nearly degenerate eigenvalues.
    let eigs: Vec<f64> = (0..400)
        .map(|i| -0.8 + 1.6 * (i / 10) as f64 / 39.0 + 1e-6 * (i % 10) as f64)
        .collect();
    let a = SparseSymMatrix::from_diagonal(&eigs)?;
    let grid = uniform_grid(-0.9, 0.9, 181);
    let sigma = 0.01;
    let exact = exact_dos(&eigs, &grid, sigma)?;

    let runs = [
        DosRequest::new(Method::Dgc, grid.clone(), sigma, 1600, 40),
        DosRequest::new(Method::SsDgc, grid.clone(), sigma, 1600, 40),
        DosRequest::new(Method::RessDgc, grid.clone(), sigma, 3200, 20).with_correction(20),
    ];
    for req in runs {
        let res = estimate_dos(&a, &req.with_seed(5))?;
        println!("{:5} rel L1 error {:.3e}", res.provenance.method, rel_l1_error(&res, &exact)?);
    }
    Ok(())
}
