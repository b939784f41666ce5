//! Property tests, one per stated invariant.

mod common;

use ndarray::{concatenate, Array2, Axis};
use proptest::prelude::*;
use specsweep::chebyshev::{cheb_sweep, default_n_theta, dgc_coeffs, eval_cheb_series, squared_coeffs};
use specsweep::dense::{gen_eig_filtered, sym_eig, DenseSym, RangeFilter};
use specsweep::estimators::{estimate_dos, exact_dos, uniform_grid, DosRequest, Method, ProbeBlock, ProbeKind};
use specsweep::operator::{gen_modes3d, matvec_block, spectral_transform, Modes3dParams};
use specsweep::tracefn::{periodic_points, trace_of_function, TraceParams, TracePlan, WindowParams};
use specsweep::{LinearOperator, SparseSymMatrix, SpectralBounds};

use common::*;

fn random_sparse(n: usize, density: f64, seed: u64) -> SparseSymMatrix {
    use rand::Rng;
    let mut r = rng(seed);
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, 4.0 * r.gen::<f64>() - 2.0));
        for j in 0..i {
            if r.gen::<f64>() < density {
                t.push((i, j, 2.0 * r.gen::<f64>() - 1.0));
            }
        }
    }
    SparseSymMatrix::from_lower_triplets(n, t).unwrap()
}

fn random_sym(p: usize, seed: u64) -> DenseSym {
    let g = gaussian(p, p, &mut rng(seed));
    DenseSym::new((&g + &g.t()) * 0.5).unwrap()
}

fn cheb_error(t: f64, sigma: f64, m: usize) -> f64 {
    let mu = dgc_coeffs(t, sigma, m, default_n_theta(m), 1).unwrap();
    (0..=400)
        .map(|k| {
            let x = -0.9 + 1.8 * k as f64 / 400.0;
            let g = (-(t - x).powi(2) / (2.0 * sigma * sigma)).exp() / (2.0 * std::f64::consts::PI * sigma * sigma).sqrt();
            (eval_cheb_series(&mu, x).unwrap() - g).abs()
        })
        .fold(0.0, f64::max)
}

/// 20 eigenvalues inside the σ-window of 0.1 and 160 well away from it.
fn clustered() -> Vec<f64> {
    let mut e: Vec<f64> = (0..20).map(|i| 0.1 + 0.04 * (i as f64 / 19.0 - 0.5)).collect();
    e.extend((0..80).map(|i| -0.9 + 0.35 * i as f64 / 79.0));
    e.extend((0..80).map(|i| 0.6 + 0.3 * i as f64 / 79.0));
    e
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn block_matvec_is_columnwise(n in 1usize..60, k in 1usize..6, seed in 0u64..1000) {
        let a = random_sparse(n, 0.2, seed);
        let v = gaussian(n, k, &mut rng(seed + 1));
        let block = matvec_block(&a, v.view()).unwrap();
        for j in 0..k {
            let col = v.column(j).to_owned().insert_axis(Axis(1));
            let single = matvec_block(&a, col.view()).unwrap();
            prop_assert_eq!(block.column(j), single.column(0));
        }
    }

    #[test]
    fn enclosing_bounds_map_strictly_inside(n in 2usize..40, seed in 0u64..1000, margin in 0.001f64..0.2) {
        let a = random_sparse(n, 0.3, seed);
        let (lo, hi) = a.gershgorin();
        let op = spectral_transform(&a, &SpectralBounds::new(lo, hi, margin).unwrap()).unwrap();
        let scaled = op.apply(Array2::eye(n).view()).unwrap();
        let sym = DenseSym::new((&scaled + &scaled.t()) * 0.5).unwrap();
        for l in sym_eig(&sym).unwrap().values {
            prop_assert!(l > -1.0 && l < 1.0, "{}", l);
        }
    }

    #[test]
    fn zero_potential_annihilates_constants(cells in 1usize..3, per_cell in 3usize..7, length in 1.0f64..10.0) {
        let params = Modes3dParams {
            cells_per_dim: cells,
            length,
            spacing: length / per_cell as f64,
            potential_depth: 0.0,
            ..Modes3dParams::default()
        };
        let a = gen_modes3d(&params).unwrap();
        let ones = Array2::ones((a.dim(), 1));
        let out = a.apply(ones.view()).unwrap();
        prop_assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn expansion_error_decreases_geometrically(t in -0.9f64..0.9, sigma in 0.04f64..0.2) {
        let peak = 1.0 / (2.0 * std::f64::consts::PI * sigma * sigma).sqrt();
        let mut m = 8;
        let mut prev = cheb_error(t, sigma, m);
        while m < 2048 {
            let next = cheb_error(t, sigma, 2 * m);
            if prev < 1e-2 && next > 1e-13 * peak {
                prop_assert!(next < prev, "M = {}: {} -> {}", m, prev, next);
            }
            if next <= 1e-13 * peak {
                break;
            }
            prev = next;
            m *= 2;
        }
    }

    #[test]
    fn squared_expansion_matches_pointwise_square(half in 1usize..80, seed in 0u64..1000) {
        use rand::Rng;
        let mut r = rng(seed);
        let mu: Vec<f64> = (0..=half).map(|_| r.gen::<f64>() * 2.0 - 1.0).collect();
        let m = 2 * half;
        let nu = squared_coeffs(&mu, m, default_n_theta(m)).unwrap();
        let nodes = m + 1;
        let vals: Vec<(f64, f64)> = (0..nodes)
            .map(|j| {
                let th = std::f64::consts::PI * (j as f64 + 0.5) / nodes as f64;
                (cheb_at_angle(&nu, th), cheb_at_angle(&mu, th).powi(2))
            })
            .collect();
        let scale = vals.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
        for (a, b) in vals {
            prop_assert!((a - b).abs() <= 1e-12 * scale, "{} vs {}", a, b);
        }
    }

    #[test]
    fn sweep_is_columnwise(n in 2usize..40, degree in 0usize..30, seed in 0u64..1000) {
        let a = random_sparse(n, 0.3, seed);
        let (lo, hi) = a.gershgorin();
        let op = spectral_transform(&a, &SpectralBounds::new(lo, hi, 0.01).unwrap()).unwrap();
        let w = gaussian(n, 2, &mut rng(seed + 7));
        let mut joint = Vec::new();
        cheb_sweep(&op, w.view(), degree, |_, v| joint.push(v.to_owned())).unwrap();
        let mut cols: [Vec<Array2<f64>>; 2] = [Vec::new(), Vec::new()];
        for (j, out) in cols.iter_mut().enumerate() {
            let wj = w.column(j).to_owned().insert_axis(Axis(1));
            cheb_sweep(&op, wj.view(), degree, |_, v| out.push(v.to_owned())).unwrap();
        }
        for (l, block) in joint.iter().enumerate() {
            let stacked = concatenate![Axis(1), cols[0][l], cols[1][l]];
            prop_assert_eq!(block, &stacked);
        }
    }

    #[test]
    fn eigenvalue_sum_is_trace(p in 1usize..50, seed in 0u64..1000) {
        let h = random_sym(p, seed);
        let sum: f64 = sym_eig(&h).unwrap().values.iter().sum();
        prop_assert!((sum - h.trace()).abs() <= 1e-12 * h.frobenius().max(1.0));
    }

    #[test]
    fn generalized_solve_is_congruence_invariant(p in 2usize..16, seed in 0u64..1000) {
        let g = gaussian(p, p, &mut rng(seed)) + Array2::<f64>::eye(p) * 2.0;
        let kw = g.t().dot(&g);
        let d = Array2::from_diag(&ndarray::Array1::linspace(0.01, 0.5, p));
        let kz = g.t().dot(&d).dot(&g);
        let q = orthonormal(p, p, &mut rng(seed + 3));
        let filter = RangeFilter::new(0.3, 1e-10).unwrap();
        let base = gen_eig_filtered(&DenseSym::new(kw.clone()).unwrap(), &DenseSym::new(kz.clone()).unwrap(), &filter).unwrap();
        let rot = gen_eig_filtered(
            &DenseSym::new(q.t().dot(&kw).dot(&q)).unwrap(),
            &DenseSym::new(q.t().dot(&kz).dot(&q)).unwrap(),
            &filter,
        )
        .unwrap();
        prop_assert_eq!(base.xi.len(), rot.xi.len());
        for (a, b) in base.xi.iter().zip(&rot.xi) {
            prop_assert!((a - b).abs() <= 1e-10, "{} vs {}", a, b);
        }
    }

    #[test]
    fn empty_solve_contributes_zero(p in 1usize..10, scale in -30i32..-15) {
        let tiny = DenseSym::new(Array2::eye(p) * 10f64.powi(scale)).unwrap();
        let filter = RangeFilter::new(1.0, 1e-7).unwrap().with_floor(1e-12);
        let res = gen_eig_filtered(&tiny, &tiny, &filter).unwrap();
        prop_assert_eq!(res.kept, 0);
        prop_assert_eq!(res.trace(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn estimators_are_reproducible(seed in 0u64..1000, which in 0usize..3) {
        let method = [Method::Dgc, Method::SsDgc, Method::RessDgc][which];
        let a = SparseSymMatrix::from_diagonal(&clustered()).unwrap();
        let req = DosRequest::new(method, uniform_grid(-0.5, 0.5, 9), 0.05, 200, 8).with_correction(4).with_seed(seed);
        let r1 = estimate_dos(&a, &req).unwrap();
        let r2 = estimate_dos(&a, &req).unwrap();
        prop_assert_eq!(r1.phi, r2.phi);
        prop_assert_eq!(r1.diagnostics, r2.diagnostics);
    }

    #[test]
    fn ample_estimates_carry_unit_mass(seed in 0u64..1000, which in 0usize..3) {
        let method = [Method::Dgc, Method::SsDgc, Method::RessDgc][which];
        let eigs = surrogate_spectrum(120, -0.6, 0.6);
        let a = SparseSymMatrix::from_diagonal(&eigs).unwrap();
        let grid = uniform_grid(-0.95, 0.95, 191);
        let degree = if method == Method::RessDgc { 640 } else { 320 };
        // Hutchinson mass error is about sqrt(2 / (N n_v)); 3000 probes put 1% near four of those.
        let n_v = if method == Method::Dgc { 3000 } else { 130 };
        let req = DosRequest::new(method, grid, 0.05, degree, n_v).with_correction(20).with_seed(seed);
        let mass = estimate_dos(&a, &req).unwrap().trapezoid_mass();
        prop_assert!((0.99..=1.01).contains(&mass), "{}", mass);
    }

    #[test]
    fn ss_and_dgc_agree_on_the_cluster(seed in 0u64..1000) {
        let eigs = clustered();
        let a = SparseSymMatrix::from_diagonal(&eigs).unwrap();
        let grid = vec![0.06, 0.08, 0.1, 0.12, 0.14];
        let ss = estimate_dos(&a, &DosRequest::new(Method::SsDgc, grid.clone(), 0.02, 1200, 40).with_seed(seed)).unwrap();
        let dgc = estimate_dos(&a, &DosRequest::new(Method::Dgc, grid.clone(), 0.02, 1200, 40).with_seed(seed)).unwrap();
        let exact = smeared_dos(&eigs, &grid, 0.02);
        let l1 = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum::<f64>();
        prop_assert!(l1(&ss.phi, &dgc.phi) <= l1(&dgc.phi, &exact) + 1e-6);
    }

    #[test]
    fn correction_vanishes_above_local_rank(seed in 0u64..1000) {
        let eigs = clustered();
        let a = SparseSymMatrix::from_diagonal(&eigs).unwrap();
        let grid = vec![0.08, 0.1, 0.12];
        let req = DosRequest::new(Method::RessDgc, grid, 0.02, 2400, 60).with_correction(10).with_seed(seed);
        let res = estimate_dos(&a, &req).unwrap();
        for (phi, d) in res.phi.iter().zip(&res.diagnostics) {
            prop_assert!(d.correction.abs() <= 1e-8 * phi, "{} vs {}", d.correction, phi);
        }
    }

    #[test]
    fn grid_permutation_permutes_output(seed in 0u64..1000, which in 0usize..3) {
        use rand::seq::SliceRandom;
        let method = [Method::Dgc, Method::SsDgc, Method::RessDgc][which];
        let a = SparseSymMatrix::from_diagonal(&clustered()).unwrap();
        let grid = uniform_grid(-0.6, 0.6, 13);
        let mut perm: Vec<usize> = (0..grid.len()).collect();
        perm.shuffle(&mut rng(seed));
        let shuffled: Vec<f64> = perm.iter().map(|&i| grid[i]).collect();
        let base = DosRequest::new(method, grid, 0.05, 300, 6).with_correction(3).with_seed(seed);
        let r1 = estimate_dos(&a, &base).unwrap();
        let r2 = estimate_dos(&a, &DosRequest { grid: shuffled, ..base }).unwrap();
        for (k, &i) in perm.iter().enumerate() {
            prop_assert_eq!(r2.phi[k], r1.phi[i]);
            prop_assert_eq!(r2.diagnostics[k], r1.diagnostics[i]);
        }
    }
}

fn diag_case() -> (SparseSymMatrix, Vec<f64>, SpectralBounds) {
    let eigs = surrogate_spectrum(100, 1.0, 9.0);
    (SparseSymMatrix::from_diagonal(&eigs).unwrap(), eigs, SpectralBounds::new(1.0, 9.0, 0.01).unwrap())
}

/// Trace computed from the dense reference DOS on the plan's grid.
fn exact_trace(eigs: &[f64], plan: &TracePlan<'_>, f: &dyn Fn(f64) -> f64) -> (f64, usize) {
    let scaled: Vec<f64> = eigs.iter().map(|&l| plan.operator().to_scaled(l)).collect();
    let dos = exact_dos(&scaled, &plan.grid(), plan.sigma_scaled()).unwrap();
    let kernel = plan.kernel(f).unwrap();
    (plan.quadrature(&kernel, &dos.phi).unwrap(), kernel.zeroed_modes)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn trace_is_linear_in_f(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, seed in 0u64..1000) {
        let (a, _, bounds) = diag_case();
        let params = TraceParams { sigma: 0.01, window: WindowParams::new(0.9, 0.016).unwrap(), n_points: None };
        let req = DosRequest::new(Method::Dgc, vec![], 1.0, 600, 8).with_seed(seed);
        let f = |t: f64| (0.4 * t).cos();
        let g = |t: f64| 1.0 / (1.0 + t * t);
        let tf = trace_of_function(&a, &bounds, &f, &params, &req).unwrap().estimate;
        let tg = trace_of_function(&a, &bounds, &g, &params, &req).unwrap().estimate;
        let tc = trace_of_function(&a, &bounds, &|t| alpha * f(t) + beta * g(t), &params, &req).unwrap().estimate;
        let scale = (alpha * tf).abs() + (beta * tg).abs() + 1.0;
        prop_assert!((tc - alpha * tf - beta * tg).abs() <= 1e-11 * scale, "{} vs {}", tc, alpha * tf + beta * tg);
    }

    #[test]
    fn window_width_is_neutral_well_inside(c in 3.0f64..7.0, w in 0.8f64..2.0) {
        let (a, eigs, _) = diag_case();
        // [-1, 11] maps onto (-0.9, 0.9), which puts the spectrum [1, 9] at about ±0.6.
        let bounds = SpectralBounds::new(-1.0, 11.0, 0.0).unwrap();
        let f = move |t: f64| (-(t - c).powi(2) / (2.0 * w * w)).exp();
        let wide = TracePlan::new(&a, &bounds, 0.005, WindowParams::new(0.9, 0.016).unwrap(), None).unwrap();
        let narrow = TracePlan::new(&a, &bounds, 0.005, WindowParams::new(0.9, 0.008).unwrap(), None).unwrap();
        let lo_edge = wide.operator().to_scaled(eigs[0]);
        prop_assert!(lo_edge + 0.9 >= 6.0 * 0.016);
        let (t1, _) = exact_trace(&eigs, &wide, &f);
        let (t2, _) = exact_trace(&eigs, &narrow, &f);
        prop_assert!((t1 - t2).abs() <= 1e-8 * t1.abs(), "{} vs {}", t1, t2);
    }

    #[test]
    fn smooth_functions_zero_no_modes(beta in 0.5f64..4.0, mu in 2.0f64..8.0) {
        let (a, eigs, bounds) = diag_case();
        let plan = TracePlan::new(&a, &bounds, 0.01, WindowParams::new(0.9, 0.016).unwrap(), None).unwrap();
        let f = move |t: f64| 1.0 / (1.0 + (beta * (t - mu)).exp());
        let (est, zeroed) = exact_trace(&eigs, &plan, &f);
        prop_assert_eq!(zeroed, 0);
        let direct: f64 = eigs.iter().map(|&l| f(l)).sum();
        prop_assert!((est - direct).abs() <= 1e-6 * direct.abs().max(1.0), "{} vs {}", est, direct);
    }
}

#[test]
fn periodic_grid_is_half_shifted() {
    let p = periodic_points(8);
    assert_eq!(p.len(), 8);
    assert!((p[0] + 1.0 - 0.125).abs() < 1e-15);
    assert!((p[7] - 1.0 + 0.125).abs() < 1e-15);
    let block = ProbeBlock::generate(5, 2, ProbeKind::Rademacher, 1).unwrap();
    assert!(block.values().iter().all(|v| v.abs() == 1.0));
}
