//! Stochastic trace estimation with Gaussian and Rademacher probes.

use specsweep::estimators::{hutchinson_trace, ProbeKind};
use specsweep::SparseSymMatrix;

fn main() -> specsweep::Result<()> {
    let diag: Vec<f64> = (0..500).map(|i| 1.0 + (i as f64 * 0.37).sin()).collect();
    let a = SparseSymMatrix::from_diagonal(&diag)?;
    let exact: f64 = diag.iter().sum();
    println!("Tr A = {exact:.6}");
    for kind in [ProbeKind::Gaussian, ProbeKind::Rademacher] {
        for n_v in [10, 100, 1000] {
            let h = hutchinson_trace(&a, n_v, kind, 7)?;
            println!(
                "  {kind:10} N_v = {n_v:4}  estimate {:.6}  std error {:.2e}",
                h.estimate,
                h.standard_error()
            );
        }
    }
    // Rademacher probes have zero variance on a diagonal matrix.
    Ok(())
}
