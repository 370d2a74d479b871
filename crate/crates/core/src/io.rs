//! Headerless CSV for matrices and vectors, and content hashes of matrices.
//!
//! Values are written with 17 significant digits, so an `f64` survives a
//! write/read round trip bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::linalg::{DenseMatrix, MatrixError};
use crate::scalar::Scalar;

#[derive(Error, Debug)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{path}: {source}")]
    Matrix { path: PathBuf, source: MatrixError },
}

fn format_value<T: Scalar>(out: &mut String, x: T) {
    write!(out, "{:.16e}", x.as_f64()).expect("writing to a String cannot fail");
}

pub fn matrix_to_csv<T: Scalar>(m: &DenseMatrix<T>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for (j, &x) in m.row(i).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            format_value(&mut out, x);
        }
        out.push('\n');
    }
    out
}

pub fn vector_to_csv<T: Scalar>(v: &[T]) -> String {
    let mut out = String::new();
    for &x in v {
        format_value(&mut out, x);
        out.push('\n');
    }
    out
}

fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

pub fn write_matrix_csv<T: Scalar>(path: &Path, m: &DenseMatrix<T>) -> Result<(), IoError> {
    write_text(path, &matrix_to_csv(m))
}

pub fn write_vector_csv<T: Scalar>(path: &Path, v: &[T]) -> Result<(), IoError> {
    write_text(path, &vector_to_csv(v))
}

fn parse_rows<T: Scalar>(path: &Path, text: &str) -> Result<Vec<Vec<T>>, IoError> {
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (col, field) in line.split(',').enumerate() {
            let field = field.trim();
            let x: f64 = field.parse().map_err(|_| IoError::Parse {
                path: path.to_path_buf(),
                line: k + 1,
                message: format!("column {}: {field:?} is not a number", col + 1),
            })?;
            if !x.is_finite() {
                return Err(IoError::Parse {
                    path: path.to_path_buf(),
                    line: k + 1,
                    message: format!("column {}: non-finite value", col + 1),
                });
            }
            row.push(T::of(x));
        }
        if let Some(first) = rows.first().map(|r: &Vec<T>| r.len()) {
            if row.len() != first {
                return Err(IoError::Parse {
                    path: path.to_path_buf(),
                    line: k + 1,
                    message: format!("expected {first} columns, found {}", row.len()),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn parse_matrix_csv<T: Scalar>(path: &Path, text: &str) -> Result<DenseMatrix<T>, IoError> {
    let rows = parse_rows(path, text)?;
    if rows.is_empty() {
        return Err(IoError::Parse { path: path.to_path_buf(), line: 1, message: "no matrix rows".into() });
    }
    DenseMatrix::from_rows(&rows).map_err(|source| IoError::Matrix { path: path.to_path_buf(), source })
}

/// Accepts one value per line or a single comma-separated line.
pub fn parse_vector_csv<T: Scalar>(path: &Path, text: &str) -> Result<Vec<T>, IoError> {
    let rows = parse_rows::<T>(path, text);
    match rows {
        Ok(rows) if rows.len() == 1 => Ok(rows.into_iter().next().unwrap_or_default()),
        Ok(rows) => Ok(rows.into_iter().flatten().collect()),
        Err(IoError::Parse { message, .. }) if message.starts_with("expected") => {
            Err(IoError::Parse { path: path.to_path_buf(), line: 1, message: "a vector needs one value per line or a single row".into() })
        }
        Err(e) => Err(e),
    }
}

fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

pub fn read_matrix_csv<T: Scalar>(path: &Path) -> Result<DenseMatrix<T>, IoError> {
    parse_matrix_csv(path, &read_text(path)?)
}

pub fn read_vector_csv<T: Scalar>(path: &Path) -> Result<Vec<T>, IoError> {
    parse_vector_csv(path, &read_text(path)?)
}

/// SHA-256 over the shape and the little-endian `f64` bytes of the entries, hex encoded.
pub fn matrix_hash<T: Scalar>(m: &DenseMatrix<T>) -> String {
    let mut h = Sha256::new();
    h.update((m.rows() as u64).to_le_bytes());
    h.update((m.cols() as u64).to_le_bytes());
    for &x in m.as_slice() {
        h.update(x.as_f64().to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip_is_exact() {
        let m = DenseMatrix::from_rows(&[vec![1.0 / 3.0, -2e-300, 7.0], vec![0.1, std::f64::consts::PI, -0.0]]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        write_matrix_csv(&p, &m).unwrap();
        let back: DenseMatrix<f64> = read_matrix_csv(&p).unwrap();
        assert_eq!(back.as_slice(), m.as_slice());
        assert_eq!(matrix_hash(&back), matrix_hash(&m));
    }

    #[test]
    fn vector_forms() {
        let p = Path::new("v.csv");
        assert_eq!(parse_vector_csv::<f64>(p, "1\n2\n3\n").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_vector_csv::<f64>(p, "1, 2,3\n").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_vector_csv::<f64>(p, "1,2\n3\n").is_err());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_matrix_csv::<f64>(Path::new("a.csv"), "1,2\n3,x\n").unwrap_err();
        assert_eq!(err.to_string(), "a.csv:2: column 2: \"x\" is not a number");
        let err = parse_matrix_csv::<f64>(Path::new("a.csv"), "1,2\n3\n").unwrap_err();
        assert!(err.to_string().starts_with("a.csv:2: expected 2 columns"));
        assert!(parse_matrix_csv::<f64>(Path::new("a.csv"), "\n").is_err());
        assert!(parse_matrix_csv::<f64>(Path::new("a.csv"), "1,inf\n").is_err());
    }

    #[test]
    fn hash_depends_on_shape() {
        let a = DenseMatrix::new(1, 2, vec![1.0, 2.0]).unwrap();
        let b = DenseMatrix::new(2, 1, vec![1.0, 2.0]).unwrap();
        assert_ne!(matrix_hash(&a), matrix_hash(&b));
        assert_eq!(matrix_hash(&a).len(), 64);
    }
}
