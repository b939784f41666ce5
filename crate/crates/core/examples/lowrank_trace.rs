//! Trace of a low-rank matrix from a handful of probes through the filtered
//! generalized eigenproblem, next to Hutchinson at the same budget.

use ndarray::Array2;
use specsweep::dense::RangeFilter;
use specsweep::estimators::{hutchinson_trace, lowrank_trace, ProbeBlock, ProbeKind};
use specsweep::operator::DenseOperator;

fn main() -> specsweep::Result<()> {
    let n = 200;
    let planted = [0.9, 0.7, 0.5, 0.3, 0.1];
    // Orthonormal columns from a seeded Gaussian block.
    let mut q = ProbeBlock::generate(n, planted.len(), ProbeKind::Gaussian, 1)?.into_values();
    for j in 0..q.ncols() {
        for k in 0..j {
            let d = q.column(j).dot(&q.column(k));
            let ck = q.column(k).to_owned();
            q.column_mut(j).scaled_add(-d, &ck);
        }
        let norm = q.column(j).dot(&q.column(j)).sqrt();
        q.column_mut(j).mapv_inplace(|v| v / norm);
    }
    let lambda = Array2::from_diag(&ndarray::arr1(&planted));
    let p = DenseOperator::new(q.dot(&lambda).dot(&q.t()))?;
    let exact: f64 = planted.iter().sum();

    let filter = RangeFilter::new(f64::INFINITY, 1e-10)?;
    let lr = lowrank_trace(&p, 10, 0, &filter, 3)?;
    let mut xi = lr.hybrid.geneig.xi.clone();
    xi.sort_by(|a, b| b.total_cmp(a));
    println!("Tr P = {exact}");
    println!("low rank, 10 probes: {:.15}  (recovered {xi:.12?})", lr.estimate);
    let h = hutchinson_trace(&p, 10, ProbeKind::Gaussian, 3)?;
    println!("Hutchinson, 10 probes: {:.6} +- {:.2e}", h.estimate, h.standard_error());
    Ok(())
}
