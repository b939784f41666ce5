//! Householder tridiagonalization followed by implicit QL iterations, after
//! the EISPACK `tred2`/`tql2` pair.

use ndarray::Array2;

use super::DenseSym;
use crate::{Error, Result};

/// Eigenpairs of a symmetric matrix, eigenvalues ascending; column `j` of
/// `vectors` belongs to `values[j]`.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
}

const MAX_QL_ITERATIONS: usize = 60;

pub fn sym_eig(h: &DenseSym) -> Result<SymEig> {
    let n = h.order();
    if n == 0 {
        return Err(Error::param("cannot diagonalize a 0x0 matrix"));
    }
    // Row-major working copy; after tridiagonalization it is transposed so the
    // QL rotations sweep contiguous rows.
    let mut v: Vec<f64> = h.as_array().iter().copied().collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);
    let mut z = transpose(n, &v);
    ql_implicit(n, &mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[[i, col]] = z[k * n + i];
        }
    }
    Ok(SymEig { values, vectors })
}

fn transpose(n: usize, v: &[f64]) -> Vec<f64> {
    let mut t = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = v[i * n + j];
        }
    }
    t
}

fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for x in d[..i].iter_mut() {
                *x /= scale;
                h += *x * *x;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);
            for j in 0..i {
                let f = d[j];
                v[at(j, i)] = f;
                let mut g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let (f, g) = (d[j], e[j]);
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// `z` holds eigenvectors as rows: row `k` pairs with `d[k]`.
fn ql_implicit(n: usize, d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence(format!(
                        "QL iteration stalled at index {l} of {n} (|e| = {:e})",
                        e[l].abs()
                    )));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(p: usize, seed: u64) -> DenseSym {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseSym::new(Array2::from_shape_fn((p, p), |_| rng.gen_range(-1.0..1.0))).unwrap()
    }

    fn check_residuals(h: &DenseSym) {
        let eig = sym_eig(h).unwrap();
        let p = h.order();
        let u = &eig.vectors;
        let s = Array2::from_diag(&ndarray::Array1::from(eig.values.clone()));
        let res = h.as_array().dot(u) - u.dot(&s);
        let fro = |m: &Array2<f64>| m.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(fro(&res) <= 1e-12 * h.frobenius().max(1.0), "residual {}", fro(&res));
        let orth = u.t().dot(u) - Array2::<f64>::eye(p);
        assert!(fro(&orth) <= 1e-12 * p as f64, "orthogonality {}", fro(&orth));
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let trace_err = (eig.values.iter().sum::<f64>() - h.trace()).abs();
        assert!(trace_err <= 1e-12 * h.frobenius().max(1.0));
    }

    #[test]
    fn identity_and_swap() {
        let eig = sym_eig(&DenseSym::identity(3)).unwrap();
        assert_eq!(eig.values, vec![1.0, 1.0, 1.0]);
        let eig = sym_eig(&DenseSym::new(array![[0.0, 1.0], [1.0, 0.0]]).unwrap()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15 && (eig.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_by_one() {
        let eig = sym_eig(&DenseSym::new(array![[-2.5]]).unwrap()).unwrap();
        assert_eq!(eig.values, vec![-2.5]);
        assert_eq!(eig.vectors[[0, 0]].abs(), 1.0);
    }

    #[test]
    fn random_residuals() {
        for (p, seed) in [(2, 1), (7, 2), (50, 3), (123, 4)] {
            check_residuals(&random_sym(p, seed));
        }
    }

    #[test]
    fn graded_and_degenerate() {
        let graded = DenseSym::new(Array2::from_diag(&ndarray::Array1::from_iter(
            (0..20).map(|k| 10f64.powi(-k)),
        )))
        .unwrap();
        check_residuals(&graded);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = Array2::from_shape_fn((30, 3), |_| rng.gen_range(-1.0..1.0));
        check_residuals(&DenseSym::new(w.dot(&w.t())).unwrap());
        check_residuals(&DenseSym::new(Array2::zeros((4, 4))).unwrap());
    }

    proptest::proptest! {
        #[test]
        fn eigenvalue_sum_is_trace(seed in 0u64..1000, p in 1usize..40) {
            let h = random_sym(p, seed);
            let eig = sym_eig(&h).unwrap();
            let err = (eig.values.iter().sum::<f64>() - h.trace()).abs();
            proptest::prop_assert!(err <= 1e-12 * h.frobenius().max(1.0));
        }
    }
}
