//! Oracles and fixtures shared by the integration tests. Nothing here calls
//! into the estimators being checked.
#![allow(dead_code)]

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, cols), || {
        let u1: f64 = 1.0 - rng.gen::<f64>();
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    })
}

/// `n × k` with orthonormal columns (modified Gram-Schmidt, two passes).
pub fn orthonormal(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let mut q = gaussian(n, k, rng);
    for j in 0..k {
        for _ in 0..2 {
            for i in 0..j {
                let d = q.column(j).dot(&q.column(i));
                let qi = q.column(i).to_owned();
                q.column_mut(j).scaled_add(-d, &qi);
            }
        }
        let norm = q.column(j).dot(&q.column(j)).sqrt();
        q.column_mut(j).mapv_inplace(|v| v / norm);
    }
    q
}

/// `φ_σ(t) = (1/N) Σ_i exp(−(t − λ_i)²/2σ²)/√(2πσ²)`, summed directly.
pub fn smeared_dos(eigs: &[f64], grid: &[f64], sigma: f64) -> Vec<f64> {
    let norm = 1.0 / (eigs.len() as f64 * (2.0 * std::f64::consts::PI * sigma * sigma).sqrt());
    grid.iter()
        .map(|&t| eigs.iter().map(|&l| (-(t - l).powi(2) / (2.0 * sigma * sigma)).exp()).sum::<f64>() * norm)
        .collect()
}

pub fn rel_l1(approx: &[f64], exact: &[f64]) -> f64 {
    let num: f64 = approx.iter().zip(exact).map(|(a, b)| (a - b).abs()).sum();
    num / exact.iter().map(|v| v.abs()).sum::<f64>()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `Σ_k c_k cos(kθ)`, i.e. a Chebyshev series at `cos θ`, summed term by term.
pub fn cheb_at_angle(coeffs: &[f64], theta: f64) -> f64 {
    coeffs.iter().enumerate().map(|(k, c)| c * (k as f64 * theta).cos()).sum()
}

/// Eigenvalues of the smooth surrogate density on `(lo, hi)`: a sine warp of
/// the uniform quantiles, denser near the ends.
pub fn surrogate_spectrum(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) / n as f64;
            let two_pi = 2.0 * std::f64::consts::PI;
            lo + (hi - lo) * (u - 0.12 * (two_pi * u).sin() / two_pi)
        })
        .collect()
}

pub fn fermi_dirac_direct(eigs: &[f64], beta: f64, mu: f64) -> f64 {
    eigs.iter().map(|&l| 1.0 / (1.0 + (beta * (l - mu)).exp())).sum()
}

/// Matrix Market coordinate file of `diag(values)`.
pub fn write_diag_mtx(path: &std::path::Path, values: &[f64]) {
    let mut s = format!("%%MatrixMarket matrix coordinate real symmetric\n{0} {0} {0}\n", values.len());
    for (i, v) in values.iter().enumerate() {
        s.push_str(&format!("{} {} {:.17e}\n", i + 1, i + 1, v));
    }
    std::fs::write(path, s).unwrap();
}
