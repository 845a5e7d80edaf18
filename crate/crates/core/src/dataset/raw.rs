use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::dataset::spec::DatasetSpec;
use crate::error::{Error, Result};

/// Rows of string cells exactly as read from disk.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawTable {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn select_rows(&self, indices: &[usize]) -> RawTable {
        RawTable {
            header: self.header.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, spec: &DatasetSpec) -> Result<RawTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, spec)
}

pub fn read_csv<R: Read>(reader: R, spec: &DatasetSpec) -> Result<RawTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(spec.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = if spec.has_header {
        let h = rdr.headers()?;
        if h.is_empty() {
            None
        } else {
            Some(h.iter().map(str::to_string).collect())
        }
    } else {
        None
    };

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != spec.column_count {
            return Err(Error::Parse {
                line,
                message: format!(
                    "expected {} columns for {}, found {}",
                    spec.column_count,
                    spec.name,
                    record.len()
                ),
            });
        }
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(RawTable { header, rows })
}

fn is_missing(cell: &str) -> bool {
    let c = cell.trim();
    if c.is_empty() || c == "?" {
        return true;
    }
    if ["na", "n/a", "null"].iter().any(|m| c.eq_ignore_ascii_case(m)) {
        return true;
    }
    // Rust's float parser accepts nan/inf/infinity in any case.
    matches!(c.parse::<f64>(), Ok(v) if !v.is_finite())
}

/// Drops rows with a missing or non-finite cell in a feature or label
/// column. Returns the surviving table and the number of rows removed.
pub fn clean(raw: &RawTable, spec: &DatasetSpec) -> (RawTable, usize) {
    let mut checked = spec.feature_columns();
    checked.push(spec.label_column);
    let rows: Vec<Vec<String>> = raw
        .rows
        .iter()
        .filter(|row| !checked.iter().any(|&c| is_missing(&row[c])))
        .cloned()
        .collect();
    let removed = raw.rows.len() - rows.len();
    (
        RawTable {
            header: raw.header.clone(),
            rows,
        },
        removed,
    )
}

/// Binarizes the label column with the dataset's normal-class rule.
pub fn binarize_labels(raw: &RawTable, spec: &DatasetSpec) -> Result<Vec<u8>> {
    raw.rows
        .iter()
        .map(|row| spec.labels.classify(&row[spec.label_column]))
        .collect()
}
