//! Chebyshev coefficients of the Gaussian kernel and of its square.

use specsweep::chebyshev::{default_n_theta, dgc_coeffs, eval_cheb_series, gaussian_kernel, squared_coeffs};

fn main() -> specsweep::Result<()> {
    let (t, sigma) = (0.3, 0.05);
    println!("sup error of the degree-M expansion of g(t - x), sigma = {sigma}");
    for m in [100, 200, 400, 800, 1600] {
        let mu = dgc_coeffs(t, sigma, m, default_n_theta(m), 1)?;
        let mut err: f64 = 0.0;
        for k in 0..=1800 {
            let x = -0.9 + 1.8 * k as f64 / 1800.0;
            err = err.max((eval_cheb_series(&mu, x)? - gaussian_kernel(t - x, sigma, 1)).abs());
        }
        println!("  M = {m:5}  {err:.3e}");
    }

    let m = 400;
    let mu = dgc_coeffs(t, sigma, m, default_n_theta(m), 1)?;
    let half: Vec<f64> = mu[..=m / 2].to_vec();
    let nu = squared_coeffs(&half, m, default_n_theta(m))?;
    let x = 0.31;
    let p = eval_cheb_series(&half, x)?;
    println!("squared expansion at x = {x}: {:.15e} vs {:.15e}", eval_cheb_series(&nu, x)?, p * p);
    Ok(())
}
