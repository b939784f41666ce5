//! Spectrum-sweeping estimators.
//!
//! Both variants build, at every grid point, a randomized low-rank view of
//! `P(t) = g_σ(tI − A)` from the single probe block `W` and read the trace off
//! the filtered generalized eigenproblem `K_Z c = ξ K_W c`. SS-DGC forms
//! `Z(t) = P(t)W` explicitly; RESS-DGC only accumulates the small moments
//! `K_W = WᵀPW` and, through the squared expansion, `K_Z = WᵀP²W`.

use std::time::Instant;

use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array1, Array2, ArrayView2, Axis, Zip};
use rayon::prelude::*;

use super::dgc::check_method;
use super::{DosRequest, DosResult, Method, PointDiagnostics, ProbeBlock, ProbeKind, Provenance};
use crate::chebyshev::{CoeffTable, SweepState};
use crate::dense::{gen_eig_filtered, DenseSym, GenEigResult, RangeFilter};
use crate::{Error, LinearOperator, Result};

/// Target size of the buffered `T_l(A)W` blocks between GEMM flushes.
const CHUNK_BYTES: usize = 64 << 20;
const MAX_CHUNK: usize = 64;

fn chunk_len(row_width: usize) -> usize {
    (CHUNK_BYTES / (8 * row_width.max(1))).clamp(1, MAX_CHUNK)
}

/// Row-flattened `Σ_l c_l(t_i) T_l(A) W` for every row of `coeffs`.
///
/// Blocks are buffered and folded in with one GEMM per chunk; each output
/// entry is summed in increasing `l`, whatever the thread count.
fn accumulate_filtered(op: &dyn LinearOperator, w: ArrayView2<'_, f64>, coeffs: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
    let width = w.len();
    let degree = coeffs.ncols() - 1;
    let chunk = chunk_len(width);
    let mut z = Array2::zeros((coeffs.nrows(), width));
    let mut buf = Array2::zeros((chunk.min(degree + 1), width));
    let mut state = SweepState::new(op, w)?;
    let mut first = 0;
    loop {
        let l = state.degree();
        let row = l - first;
        buf.row_mut(row).iter_mut().zip(state.current().iter()).for_each(|(b, &v)| *b = v);
        if row + 1 == buf.nrows() || l == degree {
            let c = coeffs.slice(s![.., first..=l]);
            general_mat_mul(1.0, &c, &buf.slice(s![..=row, ..]), 1.0, &mut z);
            first = l + 1;
        }
        if l == degree {
            return Ok(z);
        }
        state.advance(op);
    }
}

/// Multiple of `ε·‖μ(t)‖₁·‖W‖_F²/N_v` below which eigenvalues of `K_W(t)` are
/// treated as roundoff. Without it a grid point with no spectral weight keeps
/// pure-noise directions and reports up to `N_v` spurious eigenvalues.
pub const NOISE_FLOOR_FACTOR: f64 = 1e3;

fn noise_floors(mu: ArrayView2<'_, f64>, w: ArrayView2<'_, f64>) -> Vec<f64> {
    let wnorm = w.iter().map(|v| v * v).sum::<f64>() / w.ncols() as f64;
    mu.rows()
        .into_iter()
        .map(|row| NOISE_FLOOR_FACTOR * f64::EPSILON * row.iter().map(|c| c.abs()).sum::<f64>() * wnorm)
        .collect()
}

fn range_filter(req: &DosRequest, n: usize) -> Result<RangeFilter> {
    Ok(RangeFilter::gaussian(req.sigma, n, req.tau)?.with_slack(req.range_slack))
}

/// SS-DGC: explicit `Z(t_i)` accumulators, then one filtered solve per point.
///
/// Needs `N_t·N·N_v` doubles; refuses with [`Error::MemoryGuard`] above
/// `req.memory_cap`.
pub fn ss_dgc_dos(op: &dyn LinearOperator, req: &DosRequest) -> Result<DosResult> {
    check_method(req, Method::SsDgc)?;
    let n = op.dim();
    let need = req.ss_memory_estimate(n);
    if need > req.memory_cap {
        return Err(Error::MemoryGuard(format!(
            "SS-DGC needs {need} bytes for {} accumulators of size {n}x{}, above the cap of {} bytes; \
             the ress method needs only the small moment matrices",
            req.grid.len(),
            req.n_v,
            req.memory_cap
        )));
    }
    let start = Instant::now();
    let table = CoeffTable::dgc(&req.grid, req.sigma, req.degree, req.n_theta, n)?;
    let w = ProbeBlock::generate(n, req.n_v, req.probe, req.seed)?;
    let z = accumulate_filtered(op, w.values(), table.mu().view())?;
    let filter = range_filter(req, n)?;
    let floors = noise_floors(table.mu().view(), w.values());
    let solved: Vec<Result<GenEigResult>> = z
        .axis_iter(Axis(0))
        .into_par_iter()
        .zip(floors.par_iter())
        .map(|(row, &floor)| {
            let zi = row.into_shape_with_order((n, req.n_v)).expect("row holds an N x N_v block");
            let kw = DenseSym::new(w.values().t().dot(&zi))?;
            let kz = DenseSym::new(zi.t().dot(&zi))?;
            gen_eig_filtered(&kw, &kz, &filter.with_floor(floor))
        })
        .collect();
    let mut phi = Vec::with_capacity(solved.len());
    let mut diagnostics = Vec::with_capacity(solved.len());
    for r in solved {
        let r = r?;
        phi.push(r.trace());
        diagnostics.push(PointDiagnostics {
            kept: r.kept,
            dropped_small: r.dropped_small,
            dropped_range: r.dropped_range,
            correction: 0.0,
        });
    }
    let mut provenance = Provenance::for_request(req, n, table.n_theta());
    provenance.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(DosResult {
        grid: req.grid.clone(),
        phi,
        diagnostics,
        provenance,
    })
}

/// Small moment matrices of one grid point.
///
/// `kc` is `Ñ_v × N_v`. Only the trace of `K_W̃ = W̃ᵀPW̃` enters the estimate,
/// so only the trace is accumulated.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMoments {
    pub kw: DenseSym,
    pub kz: DenseSym,
    pub kc: Array2<f64>,
    pub tr_kw_tilde: f64,
    /// Roundoff level of `K_W`; see [`NOISE_FLOOR_FACTOR`].
    pub floor: f64,
}

/// Outcome of the low-rank solve plus hybrid correction at one point.
#[derive(Debug, Clone)]
pub struct HybridEstimate {
    pub geneig: GenEigResult,
    /// `(1/Ñ_v)(Tr K_W̃ − ‖K_C C̃‖_F²)`, zero when `Ñ_v = 0`.
    pub correction: f64,
}

impl HybridEstimate {
    pub fn value(&self) -> f64 {
        self.geneig.trace() + self.correction
    }

    fn diagnostics(&self) -> PointDiagnostics {
        PointDiagnostics {
            kept: self.geneig.kept,
            dropped_small: self.geneig.dropped_small,
            dropped_range: self.geneig.dropped_range,
            correction: self.correction,
        }
    }
}

impl PointMoments {
    pub fn tilde_n_v(&self) -> usize {
        self.kc.nrows()
    }

    /// `Tr Ξ̃ + (1/Ñ_v)(Tr K_W̃ − Tr[K_C C̃ C̃ᵀ K_Cᵀ])`.
    ///
    /// The larger of `filter.floor` and the point's own floor is used.
    pub fn solve(&self, filter: &RangeFilter) -> Result<HybridEstimate> {
        let filter = filter.with_floor(filter.floor.max(self.floor));
        let geneig = gen_eig_filtered(&self.kw, &self.kz, &filter)?;
        let nt = self.tilde_n_v();
        let correction = if nt == 0 {
            0.0
        } else {
            let kcc = self.kc.dot(&geneig.c);
            let captured: f64 = kcc.iter().map(|v| v * v).sum();
            (self.tr_kw_tilde - captured) / nt as f64
        };
        Ok(HybridEstimate { geneig, correction })
    }
}

/// Accumulated RESS-DGC moments for every grid point.
#[derive(Debug, Clone)]
pub struct MomentSet {
    pub grid: Vec<f64>,
    pub dim: usize,
    pub n_v: usize,
    pub tilde_n_v: usize,
    pub n_theta: usize,
    pub points: Vec<PointMoments>,
}

/// One degree-`M` sweep of `[W W̃]` accumulating only [`PointMoments`].
///
/// `μ` is the degree-`M/2` expansion zero-padded to `M` and `ν` the exact
/// coefficients of its square, so `K_Z = Σ ν_l WᵀT_lW` equals `WᵀP²W`.
/// Correction columns are dropped from the sweep after degree `M/2`.
pub fn ress_dgc_moments(op: &dyn LinearOperator, req: &DosRequest) -> Result<MomentSet> {
    check_method(req, Method::RessDgc)?;
    let n = op.dim();
    let (nv, ntil) = (req.n_v, req.tilde_n_v);
    let half = req.degree / 2;
    let table = CoeffTable::squared(&req.grid, req.sigma, req.degree, req.n_theta, n)?;
    let mu = table.mu().slice(s![.., ..=half]);
    let nu = table.nu().expect("squared table carries nu");
    let nt = req.grid.len();

    let w = ProbeBlock::generate(n, nv, req.probe, req.seed)?;
    let probes = if ntil > 0 {
        let wt = ProbeBlock::generate_range(n, 0..ntil, req.probe, req.seed, 1)?;
        ndarray::concatenate(Axis(1), &[w.values(), wt.values()]).expect("same row count")
    } else {
        w.values().to_owned()
    };
    let wt = probes.slice(s![.., nv..]);

    let xw_width = nv * nv;
    let xc_width = ntil * nv;
    let chunk = chunk_len(xw_width + xc_width + 1);
    let mut xw = Array2::<f64>::zeros((chunk, xw_width));
    let mut xc = Array2::<f64>::zeros((chunk, xc_width));
    let mut xt = Array1::<f64>::zeros(chunk);

    let mut kw = Array2::<f64>::zeros((nt, xw_width));
    let mut kz = Array2::<f64>::zeros((nt, xw_width));
    let mut kc = Array2::<f64>::zeros((nt, xc_width));
    let mut tr = Array1::<f64>::zeros(nt);

    let mut state = SweepState::new(op, probes.view())?;
    let mut first = 0;
    loop {
        let l = state.degree();
        let row = l - first;
        let v = state.current();
        let vw = v.slice(s![.., ..nv]);
        if l <= half {
            // [W W̃]ᵀ V_W stacks X_W over X_C.
            let x = probes.t().dot(&vw);
            copy_flat(xw.row_mut(row), x.slice(s![..nv, ..]));
            if ntil > 0 {
                copy_flat(xc.row_mut(row), x.slice(s![nv.., ..]));
                xt[row] = Zip::from(&wt).and(&v.slice(s![.., nv..])).fold(0.0, |a, &p, &q| a + p * q);
            }
        } else {
            copy_flat(xw.row_mut(row), w.values().t().dot(&vw).view());
        }
        if row + 1 == chunk || l == req.degree {
            let rows = row + 1;
            general_mat_mul(1.0, &nu.slice(s![.., first..=l]), &xw.slice(s![..rows, ..]), 1.0, &mut kz);
            if first <= half {
                let last = l.min(half);
                let m = mu.slice(s![.., first..=last]);
                let r = last - first + 1;
                general_mat_mul(1.0, &m, &xw.slice(s![..r, ..]), 1.0, &mut kw);
                if ntil > 0 {
                    general_mat_mul(1.0, &m, &xc.slice(s![..r, ..]), 1.0, &mut kc);
                    tr += &m.dot(&xt.slice(s![..r]));
                }
            }
            first = l + 1;
        }
        if l == req.degree {
            break;
        }
        if l == half {
            state.truncate_columns(nv);
        }
        state.advance(op);
    }

    let floors = noise_floors(mu, w.values());
    let points = (0..nt)
        .map(|i| -> Result<PointMoments> {
            let square = |a: &Array2<f64>| a.row(i).to_owned().into_shape_with_order((nv, nv)).expect("N_v x N_v");
            Ok(PointMoments {
                kw: DenseSym::new(square(&kw))?,
                kz: DenseSym::new(square(&kz))?,
                kc: kc.row(i).to_owned().into_shape_with_order((ntil, nv)).expect("Ñ_v x N_v"),
                tr_kw_tilde: tr[i],
                floor: floors[i],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentSet {
        grid: req.grid.clone(),
        dim: n,
        n_v: nv,
        tilde_n_v: ntil,
        n_theta: table.n_theta(),
        points,
    })
}

fn copy_flat(mut dst: ndarray::ArrayViewMut1<'_, f64>, src: ArrayView2<'_, f64>) {
    dst.iter_mut().zip(src.iter()).for_each(|(d, &s)| *d = s);
}

/// RESS-DGC: moments from one sweep, then the hybrid estimate per point.
pub fn ress_dgc_dos(op: &dyn LinearOperator, req: &DosRequest) -> Result<DosResult> {
    let start = Instant::now();
    let moments = ress_dgc_moments(op, req)?;
    let filter = range_filter(req, moments.dim)?;
    let solved: Vec<HybridEstimate> = moments
        .points
        .par_iter()
        .map(|p| p.solve(&filter))
        .collect::<Result<_>>()?;
    let mut provenance = Provenance::for_request(req, moments.dim, moments.n_theta);
    provenance.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(DosResult {
        grid: req.grid.clone(),
        phi: solved.iter().map(HybridEstimate::value).collect(),
        diagnostics: solved.iter().map(HybridEstimate::diagnostics).collect(),
        provenance,
    })
}

/// Low-rank trace with hybrid correction for a numerically low-rank PSD operator.
#[derive(Debug, Clone)]
pub struct LowRankTrace {
    pub estimate: f64,
    pub hybrid: HybridEstimate,
}

/// `Tr Ξ̃ + (1/Ñ_v)(Tr K_W̃ − ‖K_C C̃‖_F²)` with
/// `K_W = WᵀPW`, `K_Z = (PW)ᵀPW`, `K_C = W̃ᵀPW`, `K_W̃ = W̃ᵀPW̃`.
///
/// `W` and `W̃` are Gaussian blocks 0 and 1 of `seed`. Use
/// [`RangeFilter::new`] with `f64::INFINITY` to disable the range filter.
pub fn lowrank_trace(
    op: &dyn LinearOperator,
    n_v: usize,
    tilde_n_v: usize,
    filter: &RangeFilter,
    seed: u64,
) -> Result<LowRankTrace> {
    if n_v == 0 {
        return Err(Error::param("at least one probe vector is required"));
    }
    let n = op.dim();
    let w = ProbeBlock::generate(n, n_v, ProbeKind::Gaussian, seed)?;
    let z = op.apply(w.values())?;
    let (kc, tr_kw_tilde) = if tilde_n_v > 0 {
        let wt = ProbeBlock::generate_range(n, 0..tilde_n_v, ProbeKind::Gaussian, seed, 1)?;
        let pwt = op.apply(wt.values())?;
        let tr = Zip::from(&wt.values()).and(&pwt).fold(0.0, |a, &p, &q| a + p * q);
        (wt.values().t().dot(&z), tr)
    } else {
        (Array2::zeros((0, n_v)), 0.0)
    };
    let moments = PointMoments {
        kw: DenseSym::new(w.values().t().dot(&z))?,
        kz: DenseSym::new(z.t().dot(&z))?,
        kc,
        tr_kw_tilde,
        floor: 0.0,
    };
    let hybrid = moments.solve(filter)?;
    Ok(LowRankTrace {
        estimate: hybrid.value(),
        hybrid,
    })
}
