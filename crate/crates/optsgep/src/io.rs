//! File formats of the command-line surface: headerless CSV matrices
//! (row-major, squareness inferred by the consumer) and datasets with the
//! response in the first column. Floats are written with 17 significant
//! digits so a write/read round trip is bit-exact.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::sdr::Dataset;

fn parse_rows(text: &str, what: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let value: f64 = field.trim().parse().map_err(|_| {
                Error::Parse(format!("{what} line {}: bad float '{}'", lineno + 1, field.trim()))
            })?;
            if !value.is_finite() {
                return Err(Error::Parse(format!(
                    "{what} line {}: non-finite value '{}'",
                    lineno + 1,
                    field.trim()
                )));
            }
            row.push(value);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse(format!(
                    "{what} line {}: expected {} fields, got {}",
                    lineno + 1,
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse(format!("{what}: no data rows")));
    }
    Ok(rows)
}

/// Reads a headerless comma-separated matrix.
pub fn read_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let text = fs::read_to_string(path)?;
    let rows = parse_rows(&text, &path.display().to_string())?;
    let (nr, nc) = (rows.len(), rows[0].len());
    Ok(DMatrix::from_fn(nr, nc, |i, j| rows[i][j]))
}

/// Writes a matrix as headerless CSV with round-trip-exact floats.
pub fn write_matrix(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{:.16e}", m[(i, j)]));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a dataset: first column is the response, the rest the predictors.
pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path)?;
    let rows = parse_rows(&text, &path.display().to_string())?;
    if rows[0].len() < 2 {
        return Err(Error::Parse(format!(
            "{}: need at least one predictor column besides y",
            path.display()
        )));
    }
    let n = rows.len();
    let p = rows[0].len() - 1;
    let y = DVector::from_fn(n, |i, _| rows[i][0]);
    let x = DMatrix::from_fn(n, p, |i, j| rows[i][j + 1]);
    Dataset::new(x, y)
}

/// Writes a dataset in the same y-first layout.
pub fn write_dataset(path: &Path, data: &Dataset) -> Result<()> {
    let mut out = String::new();
    for i in 0..data.n() {
        out.push_str(&format!("{:.16e}", data.y()[i]));
        for j in 0..data.p() {
            out.push_str(&format!(",{:.16e}", data.x()[(i, j)]));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}
