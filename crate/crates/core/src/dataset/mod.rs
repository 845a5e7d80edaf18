//! Loading and preprocessing of connection-record CSV files.
//!
//! The pipeline is: [`load_csv`] → [`clean`] → [`binarize_labels`] →
//! optional [`subsample_indices`] → [`split_validation`] → ordinal encoding
//! and min-max scaling fitted on the training partition only. [`prepare`]
//! runs the whole chain.

mod encode;
mod normalize;
mod prepare;
mod raw;
mod spec;
mod split;

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use encode::{apply_encoder, fit_ordinal_encoder, CategoryColumn, EncodingMap};
pub use normalize::{apply_minmax, fit_minmax, NormalizationParams};
pub use prepare::{prepare, PrepareOptions, PreparedData, Preprocessor};
pub use raw::{binarize_labels, clean, load_csv, read_csv, RawTable};
pub use spec::{DatasetSpec, LabelRule};
pub use split::{split_validation, subsample_indices, SplitIndices};

/// Dense row-major matrix of feature values.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::arg(format!(
                "matrix of {rows}x{cols} needs {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        Ok(Matrix { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::arg("ragged rows"));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            values: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.cols..(r + 1) * self.cols]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Keeps only `columns`, in the given order.
    pub fn project(&self, columns: &[usize]) -> Matrix {
        let mut values = Vec::with_capacity(self.rows * columns.len());
        for r in 0..self.rows {
            let row = self.row(r);
            values.extend(columns.iter().map(|&c| row[c]));
        }
        Matrix {
            rows: self.rows,
            cols: columns.len(),
            values,
        }
    }

    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut values = Vec::with_capacity(indices.len() * self.cols);
        for &r in indices {
            values.extend_from_slice(self.row(r));
        }
        Matrix {
            rows: indices.len(),
            cols: self.cols,
            values,
        }
    }
}

/// Which partition a table was cut from. Search-time contexts refuse
/// [`TableRole::Test`] tables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableRole {
    #[default]
    Unassigned,
    Train,
    Validation,
    Test,
}

/// Preprocessed feature matrix with binary labels (normal 0, attack 1).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    x: Matrix,
    labels: Vec<u8>,
    role: TableRole,
}

impl FeatureTable {
    pub fn new(x: Matrix, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != x.rows() {
            return Err(Error::arg(format!(
                "{} labels for {} rows",
                labels.len(),
                x.rows()
            )));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::arg("labels must be 0 or 1"));
        }
        if x.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::arg("feature table contains non-finite values"));
        }
        Ok(FeatureTable {
            x,
            labels,
            role: TableRole::Unassigned,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<u8>) -> Result<Self> {
        FeatureTable::new(Matrix::from_rows(rows)?, labels)
    }

    pub fn with_role(mut self, role: TableRole) -> Self {
        self.role = role;
        self
    }

    pub fn role(&self) -> TableRole {
        self.role
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn row_count(&self) -> usize {
        self.x.rows()
    }

    pub fn col_count(&self) -> usize {
        self.x.cols()
    }

    pub fn attack_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    pub fn project(&self, columns: &[usize]) -> FeatureTable {
        FeatureTable {
            x: self.x.project(columns),
            labels: self.labels.clone(),
            role: self.role,
        }
    }

    pub fn select_rows(&self, indices: &[usize]) -> FeatureTable {
        FeatureTable {
            x: self.x.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            role: self.role,
        }
    }

    /// Writes `f0,…,f{n-1},label` rows with shortest round-trip floats.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        let header: Vec<String> = (0..self.col_count())
            .map(|c| format!("f{c}"))
            .chain(std::iter::once("label".to_string()))
            .collect();
        writeln!(w, "{}", header.join(",")).map_err(|e| Error::io(path, e))?;
        for r in 0..self.row_count() {
            let mut line: Vec<String> = self.x.row(r).iter().map(|v| v.to_string()).collect();
            line.push(self.labels[r].to_string());
            writeln!(w, "{}", line.join(",")).map_err(|e| Error::io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Reads a table written by [`FeatureTable::write_csv`].
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut rdr = csv::Reader::from_path(path)?;
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("{s:?}: {e}"),
                })
            };
            let n = rec.len();
            if n == 0 {
                continue;
            }
            let row = rec.iter().take(n - 1).map(parse).collect::<Result<Vec<_>>>()?;
            let label = parse(&rec[n - 1])? as u8;
            rows.push(row);
            labels.push(label);
        }
        FeatureTable::from_rows(&rows, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_and_row_selection() {
        let t = FeatureTable::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]], vec![0, 1]).unwrap();
        let p = t.project(&[2, 0]);
        assert_eq!(p.x().row(1), &[6.0, 4.0]);
        let s = t.select_rows(&[1]);
        assert_eq!(s.labels(), &[1]);
        assert_eq!(s.x().row(0), &[4.0, 5.0, 6.0]);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FeatureTable::from_rows(&[vec![1.0]], vec![0, 1]).is_err());
        assert!(FeatureTable::from_rows(&[vec![f64::NAN]], vec![0]).is_err());
        assert!(FeatureTable::from_rows(&[vec![1.0]], vec![2]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = FeatureTable::from_rows(&[vec![0.1, 1.0 / 3.0], vec![0.0, 1.0]], vec![1, 0]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        t.write_csv(&path).unwrap();
        assert_eq!(FeatureTable::read_csv(&path).unwrap(), t);
    }
}
