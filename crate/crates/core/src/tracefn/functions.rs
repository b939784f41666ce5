use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::{Error, Result};

/// `t ↦ 1/(1 + exp(β(t − μ)))`, evaluated as `½(1 − tanh(β(t − μ)/2))` so it
/// saturates to 0 or 1 instead of overflowing.
pub fn fermi_dirac(beta: f64, mu: f64) -> Result<impl Fn(f64) -> f64 + Copy + Send + Sync> {
    if !(beta > 0.0 && beta.is_finite()) || !mu.is_finite() {
        return Err(Error::FunctionSpec(format!(
            "fermi-dirac needs beta > 0 and finite mu, got beta = {beta}, mu = {mu}"
        )));
    }
    Ok(move |t: f64| 0.5 * (1.0 - (0.5 * beta * (t - mu)).tanh()))
}

/// Scalar functions understood by the command-line driver.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFunction {
    FermiDirac { beta: f64, mu: f64 },
    Identity,
    Constant(f64),
    /// `exp(−(t − center)²/(2·width²))`.
    Gaussian { center: f64, width: f64 },
    /// Piecewise-linear interpolation of sampled `(t, f(t))` pairs, held
    /// constant beyond the first and last sample.
    Table { path: PathBuf, t: Vec<f64>, f: Vec<f64> },
}

impl ScalarFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ScalarFunction::FermiDirac { beta, mu } => 0.5 * (1.0 - (0.5 * beta * (x - mu)).tanh()),
            ScalarFunction::Identity => x,
            ScalarFunction::Constant(c) => *c,
            ScalarFunction::Gaussian { center, width } => (-(x - center).powi(2) / (2.0 * width * width)).exp(),
            ScalarFunction::Table { t, f, .. } => interpolate(t, f, x),
        }
    }

    /// Reads a table of `t,f` lines (comma or whitespace separated, `#` comments).
    pub fn load_table(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut t = Vec::new();
        let mut f = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            let parsed: Option<Vec<f64>> = fields.iter().map(|s| s.parse().ok()).collect();
            match parsed.as_deref() {
                Some([a, b]) if a.is_finite() && b.is_finite() => {
                    t.push(*a);
                    f.push(*b);
                }
                // A non-numeric first line is a header.
                None if t.is_empty() && k == 0 => {}
                _ => {
                    return Err(Error::FunctionSpec(format!(
                        "{}:{}: expected two numbers, got '{line}'",
                        path.display(),
                        k + 1
                    )))
                }
            }
        }
        if t.len() < 2 {
            return Err(Error::FunctionSpec(format!("{}: table needs at least two samples", path.display())));
        }
        if t.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::FunctionSpec(format!(
                "{}: sample points must be strictly increasing",
                path.display()
            )));
        }
        Ok(ScalarFunction::Table {
            path: path.to_path_buf(),
            t,
            f,
        })
    }
}

fn interpolate(t: &[f64], f: &[f64], x: f64) -> f64 {
    let last = t.len() - 1;
    if x <= t[0] {
        return f[0];
    }
    if x >= t[last] {
        return f[last];
    }
    let i = t.partition_point(|&s| s <= x) - 1;
    let w = (x - t[i]) / (t[i + 1] - t[i]);
    f[i] + w * (f[i + 1] - f[i])
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFunction::FermiDirac { beta, mu } => write!(fm, "fermi-dirac({beta},{mu})"),
            ScalarFunction::Identity => write!(fm, "identity"),
            ScalarFunction::Constant(c) => write!(fm, "constant({c})"),
            ScalarFunction::Gaussian { center, width } => write!(fm, "gaussian({center},{width})"),
            ScalarFunction::Table { path, .. } => write!(fm, "table:{}", path.display()),
        }
    }
}

impl FromStr for ScalarFunction {
    type Err = Error;

    /// `fermi-dirac(beta,mu)`, `identity`, `constant(c)`,
    /// `gaussian(center,width)` or `table:PATH`.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("table:") {
            return Self::load_table(path);
        }
        let bad = |why: &str| Error::FunctionSpec(format!("'{spec}': {why}"));
        let (name, args) = match spec.find('(') {
            Some(open) => {
                let inner = spec[open + 1..].strip_suffix(')').ok_or_else(|| bad("missing ')'"))?;
                let args: Option<Vec<f64>> = inner.split(',').map(|a| a.trim().parse().ok()).collect();
                (&spec[..open], args.ok_or_else(|| bad("arguments must be numbers"))?)
            }
            None => (spec, Vec::new()),
        };
        if args.iter().any(|a| !a.is_finite()) {
            return Err(bad("arguments must be finite"));
        }
        match (name.trim(), args.as_slice()) {
            ("fermi-dirac", &[beta, mu]) => {
                let _ = fermi_dirac(beta, mu)?;
                Ok(ScalarFunction::FermiDirac { beta, mu })
            }
            ("identity", &[]) => Ok(ScalarFunction::Identity),
            ("constant", &[c]) => Ok(ScalarFunction::Constant(c)),
            ("gaussian", &[center, width]) if width > 0.0 => Ok(ScalarFunction::Gaussian { center, width }),
            ("gaussian", &[_, _]) => Err(bad("width must be positive")),
            ("fermi-dirac" | "identity" | "constant" | "gaussian", _) => Err(bad("wrong number of arguments")),
            _ => Err(bad("unknown function")),
        }
    }
}
