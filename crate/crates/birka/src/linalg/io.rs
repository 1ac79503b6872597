//! Matrix Market (coordinate, real) for sparse matrices; CSV for dense ones.

use super::{Mat, SparseMatrix};
use crate::{Error, Result};
use std::fs;
use std::io::Write;
use std::path::Path;

pub fn write_matrix_market(path: &Path, m: &SparseMatrix<f64>) -> Result<()> {
    let mut out = String::new();
    out.push_str("%%MatrixMarket matrix coordinate real general\n");
    out.push_str(&format!("{} {} {}\n", m.nrows(), m.ncols(), m.nnz()));
    for (i, j, v) in m.iter() {
        out.push_str(&format!("{} {} {:.17e}\n", i + 1, j + 1, v));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn parse_matrix_market(text: &str) -> Result<SparseMatrix<f64>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty Matrix Market file".into()))?;
    let head: Vec<String> = header.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if head.len() < 5 || head[0] != "%%matrixmarket" || head[1] != "matrix" {
        return Err(Error::Parse(format!("bad banner: {header}")));
    }
    if head[2] != "coordinate" {
        return Err(Error::Parse(format!("only coordinate format is supported, got {}", head[2])));
    }
    let field = head[3].as_str();
    if !matches!(field, "real" | "integer" | "pattern") {
        return Err(Error::Parse(format!("unsupported field {field}")));
    }
    let symmetry = head[4].as_str();
    if !matches!(symmetry, "general" | "symmetric" | "skew-symmetric") {
        return Err(Error::Parse(format!("unsupported symmetry {symmetry}")));
    }
    let mut body = lines.map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('%'));
    let size = body.next().ok_or_else(|| Error::Parse("missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad size line: {size}"))))
        .collect::<Result<_>>()?;
    if dims.len() != 3 {
        return Err(Error::Parse(format!("bad size line: {size}")));
    }
    let (rows, cols, nnz) = (dims[0], dims[1], dims[2]);
    let mut trips = Vec::with_capacity(nnz);
    for line in body {
        let tok: Vec<&str> = line.split_whitespace().collect();
        let need = if field == "pattern" { 2 } else { 3 };
        if tok.len() < need {
            return Err(Error::Parse(format!("short entry line: {line}")));
        }
        let i: usize = tok[0].parse().map_err(|_| Error::Parse(format!("bad row index: {line}")))?;
        let j: usize = tok[1].parse().map_err(|_| Error::Parse(format!("bad column index: {line}")))?;
        if i == 0 || j == 0 {
            return Err(Error::Parse(format!("indices are 1-based: {line}")));
        }
        let v = if field == "pattern" {
            1.0
        } else {
            tok[2].parse::<f64>().map_err(|_| Error::Parse(format!("bad value: {line}")))?
        };
        trips.push((i - 1, j - 1, v));
        if symmetry != "general" && i != j {
            trips.push((j - 1, i - 1, if symmetry == "symmetric" { v } else { -v }));
        }
    }
    let declared = if symmetry == "general" { trips.len() } else { trips.iter().filter(|t| t.0 >= t.1).count() };
    if declared != nnz {
        return Err(Error::Parse(format!("expected {nnz} entries, found {declared}")));
    }
    SparseMatrix::try_from_triplets(rows, cols, &trips)
}

pub fn read_matrix_market(path: &Path) -> Result<SparseMatrix<f64>> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

/// Row-major CSV, no header.
pub fn write_dense_csv(path: &Path, m: &Mat<f64>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:.17e}", m[(i, j)])).collect();
        writeln!(f, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn read_dense_csv(path: &Path) -> Result<Mat<f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_path(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse("ragged CSV rows".into()));
            }
        }
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    Ok(Mat::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}
