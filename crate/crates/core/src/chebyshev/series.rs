use crate::{Error, Result};

/// `Σ_l c_l T_l(x)` by Clenshaw's recurrence.
pub fn eval_cheb_series(coeffs: &[f64], x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::param(format!("Chebyshev series evaluated at |x| = {} > 1", x.abs())));
    }
    Ok(eval_cheb_series_unchecked(coeffs, x))
}

/// Clenshaw evaluation without the domain check.
pub fn eval_cheb_series_unchecked(coeffs: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = c + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    match coeffs.first() {
        Some(&c0) => c0 + x * b1 - b2,
        None => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_and_linear() {
        assert_eq!(eval_cheb_series(&[2.5], 0.7).unwrap(), 2.5);
        assert_eq!(eval_cheb_series(&[0.0, 1.0], 0.3).unwrap(), 0.3);
        assert_eq!(eval_cheb_series(&[], 0.3).unwrap(), 0.0);
    }

    #[test]
    fn outside_domain_is_error() {
        assert!(eval_cheb_series(&[1.0], 1.0 + 1e-12).is_err());
        assert!(eval_cheb_series(&[1.0], f64::NAN).is_err());
        assert!(eval_cheb_series(&[1.0], -1.0).is_ok());
    }

    #[test]
    fn matches_trigonometric_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let c: Vec<f64> = (0..=50).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x: f64 = rng.gen_range(-1.0..1.0);
            let naive: f64 = c
                .iter()
                .enumerate()
                .map(|(l, cl)| cl * (l as f64 * x.acos()).cos())
                .sum();
            assert!((eval_cheb_series(&c, x).unwrap() - naive).abs() < 1e-13);
        }
    }
}
