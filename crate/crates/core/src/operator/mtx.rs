//! Matrix Market coordinate files, real symmetric only.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::SparseSymMatrix;
use crate::{Error, LinearOperator, Result};

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<SparseSymMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let m = read_matrix_market(BufReader::new(file))?;
    let name = path.file_stem().and_then(|s| s.to_str()).map(str::to_owned);
    Ok(match (m.name().is_none(), name) {
        (true, Some(n)) => m.with_name(n),
        _ => m,
    })
}

/// Parses a `matrix coordinate real symmetric` stream. Entries are mirrored
/// across the diagonal; a `% name: ...` comment sets the matrix name.
pub fn read_matrix_market(reader: impl BufRead) -> Result<SparseSymMatrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let io_err = |e: std::io::Error| Error::io("<matrix market stream>", e);

    let (lineno, header) = match lines.next() {
        Some((n, l)) => (n, l.map_err(io_err)?),
        None => return Err(Error::Parse { line: 1, msg: "empty file".into() }),
    };
    parse_header(lineno, &header)?;

    let mut name = None;
    let mut size: Option<(usize, usize)> = None;
    let mut triplets = Vec::new();
    for (lineno, line) in lines {
        let line = line.map_err(io_err)?;
        let trimmed = line.trim();
        if let Some(comment) = trimmed.strip_prefix('%') {
            if let Some(n) = comment.trim().strip_prefix("name:") {
                name = Some(n.trim().to_owned());
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_err = |msg: String| Error::Parse { line: lineno, msg };
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(format!("expected `rows cols nnz`, got `{trimmed}`")));
                }
                let rows: usize = parse_field(fields[0], lineno)?;
                let cols: usize = parse_field(fields[1], lineno)?;
                let nnz: usize = parse_field(fields[2], lineno)?;
                if rows != cols || rows == 0 {
                    return Err(parse_err(format!("symmetric matrix must be square, got {rows}x{cols}")));
                }
                triplets.reserve(nnz);
                size = Some((rows, nnz));
            }
            Some((n, _)) => {
                if fields.len() != 3 {
                    return Err(parse_err(format!("expected `i j value`, got `{trimmed}`")));
                }
                let i: usize = parse_field(fields[0], lineno)?;
                let j: usize = parse_field(fields[1], lineno)?;
                let v: f64 = parse_field(fields[2], lineno)?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(format!("index ({i}, {j}) outside 1..={n}")));
                }
                // Stored triangle is the lower one by convention; accept either.
                let (r, c) = if i >= j { (i - 1, j - 1) } else { (j - 1, i - 1) };
                triplets.push((r, c, v));
            }
        }
    }
    let Some((n, nnz)) = size else {
        return Err(Error::Parse { line: 1, msg: "missing size line".into() });
    };
    if triplets.len() != nnz {
        return Err(Error::Parse {
            line: 1,
            msg: format!("size line announces {nnz} entries, found {}", triplets.len()),
        });
    }
    let m = SparseSymMatrix::from_lower_triplets(n, triplets)?;
    Ok(match name {
        Some(n) => m.with_name(n),
        None => m,
    })
}

fn parse_header(line: usize, header: &str) -> Result<()> {
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(Error::Parse {
            line,
            msg: format!("expected `%%MatrixMarket matrix coordinate real symmetric`, got `{header}`"),
        });
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(Error::UnsupportedFormat(format!("{} {}", tokens[1], tokens[2])));
    }
    match tokens[3].as_str() {
        "real" | "double" | "integer" => {}
        other => return Err(Error::UnsupportedFormat(format!("field type `{other}`"))),
    }
    if tokens[4] != "symmetric" {
        return Err(Error::UnsupportedFormat(format!("symmetry `{}`", tokens[4])));
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse `{s}`"),
    })
}

/// Writes the lower triangle with shortest round-trip float formatting.
pub fn write_matrix_market(mut w: impl Write, m: &SparseSymMatrix) -> std::io::Result<()> {
    let n = m.dim();
    let lower: usize = (0..n).map(|i| m.row(i).filter(|&(j, _)| j <= i).count()).sum();
    writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
    if let Some(name) = m.name() {
        writeln!(w, "% name: {name}")?;
    }
    writeln!(w, "{n} {n} {lower}")?;
    for i in 0..n {
        for (j, v) in m.row(i).filter(|&(j, _)| j <= i) {
            writeln!(w, "{} {} {:e}", i + 1, j + 1, v)?;
        }
    }
    Ok(())
}

pub fn save_matrix_market(path: impl AsRef<Path>, m: &SparseSymMatrix) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_matrix_market(&mut w, m)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}
