use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::estimators::{DosResult, PointDiagnostics, Provenance};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "t,phi,kept,dropped_small,dropped_range,correction";

/// One CSV/JSON row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct Row {
    pub t: f64,
    pub phi: f64,
    pub kept: usize,
    pub dropped_small: usize,
    pub dropped_range: usize,
    pub correction: f64,
}

pub fn rows(res: &DosResult) -> Vec<Row> {
    res.grid
        .iter()
        .zip(&res.phi)
        .zip(&res.diagnostics)
        .map(|((&t, &phi), d)| Row {
            t,
            phi,
            kept: d.kept,
            dropped_small: d.dropped_small,
            dropped_range: d.dropped_range,
            correction: d.correction,
        })
        .collect()
}

/// Floats get 17 significant digits so every double survives a round trip.
pub fn to_csv(rows: &[Row]) -> String {
    let mut s = String::with_capacity(96 * (rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{:.16e},{:.16e},{},{},{},{:.16e}",
            r.t, r.phi, r.kept, r.dropped_small, r.dropped_range, r.correction
        );
    }
    s
}

pub fn parse_csv(text: &str, origin: &Path) -> Result<Vec<Row>> {
    let parse_err = |line: usize, msg: String| Error::Parse { line, msg: format!("{}: {msg}", origin.display()) };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(parse_err(1, format!("expected header '{CSV_HEADER}'"))),
    }
    let mut out = Vec::new();
    for (k, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 6 {
            return Err(parse_err(k + 1, format!("expected 6 fields, found {}", f.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| parse_err(k + 1, format!("'{s}': {e}")));
        let count = |s: &str| s.parse::<usize>().map_err(|e| parse_err(k + 1, format!("'{s}': {e}")));
        out.push(Row {
            t: num(f[0])?,
            phi: num(f[1])?,
            kept: count(f[2])?,
            dropped_small: count(f[3])?,
            dropped_range: count(f[4])?,
            correction: num(f[5])?,
        });
    }
    Ok(out)
}

pub fn read_csv(path: &Path) -> Result<Vec<Row>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, path)
}

pub fn rows_to_result(rows: &[Row], provenance: Provenance) -> DosResult {
    DosResult {
        grid: rows.iter().map(|r| r.t).collect(),
        phi: rows.iter().map(|r| r.phi).collect(),
        diagnostics: rows
            .iter()
            .map(|r| PointDiagnostics {
                kept: r.kept,
                dropped_small: r.dropped_small,
                dropped_range: r.dropped_range,
                correction: r.correction,
            })
            .collect(),
        provenance,
    }
}

/// `<path>.prov.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".prov.json");
    PathBuf::from(s)
}

/// Library provenance as JSON, with the wall clock kept only on request.
pub fn provenance_value(p: &Provenance, record_timing: bool) -> Value {
    let mut v = serde_json::to_value(p).expect("provenance serializes");
    if !record_timing {
        if let Value::Object(m) = &mut v {
            m.remove("wall_time_secs");
        }
    }
    v
}

pub fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("document serializes");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_bits() {
        let r = vec![
            Row { t: -0.1, phi: 1.0 / 3.0, kept: 4, dropped_small: 1, dropped_range: 0, correction: -2.5e-300 },
            Row { t: 0.7, phi: f64::MIN_POSITIVE, kept: 0, dropped_small: 0, dropped_range: 2, correction: 0.0 },
        ];
        let back = parse_csv(&to_csv(&r), Path::new("x.csv")).unwrap();
        assert_eq!(back, r);
        assert!(to_csv(&r).starts_with("t,phi,kept,dropped_small,dropped_range,correction\n"));
    }

    #[test]
    fn bad_header_is_a_parse_error() {
        let e = parse_csv("a,b\n1,2\n", Path::new("x.csv")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn sidecar_appends_suffix() {
        assert_eq!(sidecar_path(Path::new("out/dos.csv")), PathBuf::from("out/dos.csv.prov.json"));
    }
}
