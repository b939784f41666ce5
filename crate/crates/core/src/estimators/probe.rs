use std::f64::consts::PI;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Distribution of probe entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeKind {
    /// Standard normal entries.
    #[default]
    Gaussian,
    /// Entries `±1` with equal probability.
    Rademacher,
}

impl fmt::Display for ProbeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeKind::Gaussian => "gaussian",
            ProbeKind::Rademacher => "rademacher",
        })
    }
}

impl FromStr for ProbeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(ProbeKind::Gaussian),
            "rademacher" => Ok(ProbeKind::Rademacher),
            _ => Err(Error::param(format!("unknown probe kind '{s}'"))),
        }
    }
}

/// A seeded `N × N_v` block of random probe vectors.
///
/// Column `j` of block `b` is drawn from its own ChaCha8 stream
/// `(b << 32) | j`, so any column range can be regenerated independently and
/// the values never depend on the thread count.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeBlock {
    kind: ProbeKind,
    seed: u64,
    block_id: u32,
    values: Array2<f64>,
}

impl ProbeBlock {
    /// The main probe block `W` (block id 0).
    pub fn generate(n: usize, cols: usize, kind: ProbeKind, seed: u64) -> Result<Self> {
        Self::generate_range(n, 0..cols, kind, seed, 0)
    }

    /// Columns `cols` of block `block_id`.
    pub fn generate_range(n: usize, cols: Range<usize>, kind: ProbeKind, seed: u64, block_id: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("probe vectors need at least one row"));
        }
        if cols.end > u32::MAX as usize {
            return Err(Error::param("probe column index exceeds 2^32"));
        }
        let width = cols.len();
        let columns: Vec<Vec<f64>> = cols
            .into_par_iter()
            .map(|j| column(n, kind, seed, ((block_id as u64) << 32) | j as u64))
            .collect();
        let mut values = Array2::zeros((n, width));
        for (j, c) in columns.iter().enumerate() {
            values.column_mut(j).iter_mut().zip(c).for_each(|(v, &x)| *v = x);
        }
        Ok(Self {
            kind,
            seed,
            block_id,
            values,
        })
    }

    pub fn kind(&self) -> ProbeKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn block_id(&self) -> u32 {
        self.block_id
    }

    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }
}

fn column(n: usize, kind: ProbeKind, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    match kind {
        ProbeKind::Rademacher => {
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let bits = rng.next_u64();
                let take = (n - out.len()).min(64);
                out.extend((0..take).map(|b| if bits >> b & 1 == 1 { 1.0 } else { -1.0 }));
            }
            out
        }
        ProbeKind::Gaussian => {
            let mut out = Vec::with_capacity(n + 1);
            while out.len() < n {
                // u1 ∈ (0, 1], u2 ∈ [0, 1).
                let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
                let u2 = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                let r = (-2.0 * u1.ln()).sqrt();
                let (s, c) = (2.0 * PI * u2).sin_cos();
                out.push(r * c);
                out.push(r * s);
            }
            out.truncate(n);
            out
        }
    }
}
