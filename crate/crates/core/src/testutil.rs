use std::f64::consts::PI;

use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let v: f64 = rng.gen();
        (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
    })
}

/// Modified Gram–Schmidt on the columns.
pub fn orthonormalize(mut g: Array2<f64>) -> Array2<f64> {
    for j in 0..g.ncols() {
        for k in 0..j {
            let d = g.column(k).dot(&g.column(j));
            let ck = g.column(k).to_owned();
            g.column_mut(j).scaled_add(-d, &ck);
        }
        let nrm = g.column(j).dot(&g.column(j)).sqrt();
        g.column_mut(j).mapv_inplace(|v| v / nrm);
    }
    g
}
