use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::PeriodicSamples;
use crate::{Error, Result};

/// Modes whose Gaussian symbol falls below this are zeroed instead of divided.
pub const SYMBOL_CUTOFF: f64 = 1e-12;

/// Deconvolved samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Deconvolved {
    pub samples: PeriodicSamples,
    /// Modes above the roundoff floor of `ĥ` that were zeroed because their
    /// symbol fell below [`SYMBOL_CUTOFF`]. Nonzero means `f` does not decay
    /// fast enough in Fourier space for this `σ`.
    pub zeroed_modes: usize,
}

/// Fourier symbol of the unit-mass Gaussian of width `sigma` on a period-2
/// domain at signed mode `k`.
pub fn gaussian_symbol(k: usize, n: usize, sigma: f64) -> f64 {
    let k = k.min(n - k) as f64;
    (-0.5 * (sigma * PI * k).powi(2)).exp()
}

/// Solves `f̃ ⊛ g_σ = h` on `[−1, 1)` by dividing Fourier modes by the
/// Gaussian symbol. Requires `Δt ≤ σ/2`.
///
/// Modes at the FFT roundoff floor of `ĥ` carry no information and are set to
/// zero rather than amplified.
pub fn deconvolve(h: &PeriodicSamples, sigma: f64) -> Result<Deconvolved> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::param(format!("smearing width must be positive, got {sigma}")));
    }
    let n = h.len();
    if h.dt() > 0.5 * sigma {
        return Err(Error::param(format!(
            "grid spacing {} does not resolve the smearing width {sigma}; need at least {} points",
            h.dt(),
            (4.0 / sigma).ceil()
        )));
    }
    let mut buf: Vec<Complex64> = h.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let peak = buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = 16.0 * f64::EPSILON * (n as f64).log2().max(1.0) * peak;
    let mut zeroed_modes = 0;
    for (k, z) in buf.iter_mut().enumerate() {
        let g = gaussian_symbol(k, n, sigma);
        let noise = z.norm() <= floor;
        if g < SYMBOL_CUTOFF || noise {
            zeroed_modes += usize::from(!noise);
            *z = Complex64::new(0.0, 0.0);
        } else {
            *z /= g;
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let values = buf.iter().map(|z| z.re * scale).collect();
    Ok(Deconvolved {
        samples: PeriodicSamples::new(values)?,
        zeroed_modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracefn::periodic_points;

    /// Direct periodic convolution with the periodized Gaussian.
    fn convolve(f: &[f64], sigma: f64) -> Vec<f64> {
        let n = f.len();
        let dt = 2.0 / n as f64;
        let g = |s: f64| {
            (-8..=8)
                .map(|m| {
                    let x = s + 2.0 * m as f64;
                    (-(x * x) / (2.0 * sigma * sigma)).exp() / (2.0 * PI * sigma * sigma).sqrt()
                })
                .sum::<f64>()
        };
        let kernel: Vec<f64> = (0..n).map(|d| g(d as f64 * dt) * dt).collect();
        (0..n)
            .map(|i| (0..n).map(|j| f[j] * kernel[(i + n - j) % n]).sum())
            .collect()
    }

    #[test]
    fn constant_is_fixed_point() {
        let h = PeriodicSamples::sample(256, |_| 3.0).unwrap();
        let d = deconvolve(&h, 0.05).unwrap();
        assert!(d.samples.values().iter().all(|v| (v - 3.0).abs() < 1e-13));
    }

    #[test]
    fn gaussian_widths_subtract() {
        let (sigma, wide) = (0.05f64, 0.12f64);
        let target = (wide * wide - sigma * sigma).sqrt();
        let gauss = |w: f64| move |t: f64| (-(t * t) / (2.0 * w * w)).exp() / (2.0 * PI * w * w).sqrt();
        let h = PeriodicSamples::sample(512, gauss(wide)).unwrap();
        let d = deconvolve(&h, sigma).unwrap();
        for (t, v) in periodic_points(512).iter().zip(d.samples.values()) {
            assert!((v - gauss(target)(*t)).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn round_trip_through_forward_convolution() {
        let sigma = 0.04;
        let h = PeriodicSamples::sample(256, |t| (PI * t).cos() + 0.3 * (3.0 * PI * t).sin()).unwrap();
        let d = deconvolve(&h, sigma).unwrap();
        assert_eq!(d.zeroed_modes, 0);
        let back = convolve(d.samples.values(), sigma);
        for (a, b) in back.iter().zip(h.values()) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn coarse_grid_is_rejected_and_high_modes_are_counted() {
        let h = PeriodicSamples::sample(64, |t| t).unwrap();
        assert!(deconvolve(&h, 0.05).is_err());
        // A kink has slowly decaying modes; those past the cutoff are lost.
        let kink = PeriodicSamples::sample(4096, |t| t.abs()).unwrap();
        let d = deconvolve(&kink, 0.05).unwrap();
        assert!(d.zeroed_modes > 1000, "{}", d.zeroed_modes);
        let smooth = PeriodicSamples::sample(4096, |t| (PI * t).cos()).unwrap();
        assert_eq!(deconvolve(&smooth, 0.05).unwrap().zeroed_modes, 0);
    }
}
