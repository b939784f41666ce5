//! Tr f(A) for the Fermi-Dirac function on ModES3D_1 from a RESS-DGC density
//! of states, against the sum over dense eigenvalues.

use specsweep::estimators::{dense_eigenvalues, DosRequest, Method};
use specsweep::operator::{estimate_bounds, gen_modes3d, Modes3dParams};
use specsweep::tracefn::{fermi_dirac, trace_of_function, TraceParams, WindowParams, DEFAULT_SIGMA_TILDE};

fn main() -> specsweep::Result<()> {
    let a = gen_modes3d(&Modes3dParams::with_cells(1))?;
    let bounds = estimate_bounds(&a, 200, 0)?;
    let f = fermi_dirac(10.0, -1.0)?;

    let params = TraceParams {
        sigma: 0.05,
        window: WindowParams::new(0.9, DEFAULT_SIGMA_TILDE)?,
        n_points: None,
    };
    // Grid and smearing width are filled in from the plan.
    let req = DosRequest::new(Method::RessDgc, vec![], 1.0, 6400, 40)
        .with_correction(40)
        .with_seed(2);
    let est = trace_of_function(&a, &bounds, &f, &params, &req)?;

    let direct: f64 = dense_eigenvalues(&a)?.iter().map(|&l| f(l)).sum();
    println!("Tr f(A): estimate {:.10}, direct {direct:.10}", est.estimate);
    println!(
        "relative error {:.2e}, {} periodic points, sigma {:.4} in scaled units, {} modes zeroed",
        ((est.estimate - direct) / direct).abs(),
        est.n_points,
        est.sigma_scaled,
        est.zeroed_modes
    );
    Ok(())
}
