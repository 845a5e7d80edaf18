use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dataset::raw::RawTable;
use crate::dataset::spec::DatasetSpec;
use crate::dataset::Matrix;
use crate::error::{Error, Result};

/// Ordered vocabulary of one categorical column; a category's code is its
/// position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryColumn {
    pub raw_column: usize,
    pub categories: Vec<String>,
}

impl CategoryColumn {
    /// Code reserved for categories not seen at fit time.
    pub fn unseen_code(&self) -> usize {
        self.categories.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingMap {
    pub columns: Vec<CategoryColumn>,
}

/// Codes categories by order of first appearance in `raw`.
pub fn fit_ordinal_encoder(raw: &RawTable, spec: &DatasetSpec) -> EncodingMap {
    let mut cat_cols = spec.categorical_columns.clone();
    cat_cols.sort_unstable();
    let columns = cat_cols
        .into_iter()
        .map(|c| {
            let mut seen: HashMap<&str, ()> = HashMap::new();
            let mut categories = Vec::new();
            for row in &raw.rows {
                let v = row[c].as_str();
                if seen.insert(v, ()).is_none() {
                    categories.push(v.to_string());
                }
            }
            CategoryColumn {
                raw_column: c,
                categories,
            }
        })
        .collect();
    EncodingMap { columns }
}

/// Converts the feature columns of `raw` to numbers.
///
/// Categorical cells that already hold a valid code (an integer in
/// `0..=unseen_code` that is not itself a fitted category) keep that code,
/// so encoding is idempotent on encoded data.
pub fn apply_encoder(raw: &RawTable, map: &EncodingMap, spec: &DatasetSpec) -> Result<Matrix> {
    let lookups: HashMap<usize, (HashMap<&str, usize>, usize)> = map
        .columns
        .iter()
        .map(|col| {
            let codes = col
                .categories
                .iter()
                .enumerate()
                .map(|(i, s)| (s.as_str(), i))
                .collect();
            (col.raw_column, (codes, col.unseen_code()))
        })
        .collect();

    let features = spec.feature_columns();
    let mut values = Vec::with_capacity(raw.rows.len() * features.len());
    for (r, row) in raw.rows.iter().enumerate() {
        for &c in &features {
            let cell = row[c].as_str();
            let v = match lookups.get(&c) {
                Some((codes, unseen)) => match codes.get(cell) {
                    Some(&code) => code as f64,
                    None => match cell.parse::<usize>() {
                        Ok(code) if code <= *unseen => code as f64,
                        _ => *unseen as f64,
                    },
                },
                None => cell.parse::<f64>().map_err(|_| Error::Parse {
                    line: r as u64 + 1,
                    message: format!("column {c}: {cell:?} is not numeric"),
                })?,
            };
            values.push(v);
        }
    }
    Matrix::new(raw.rows.len(), features.len(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::spec::LabelRule;

    fn spec() -> DatasetSpec {
        DatasetSpec {
            name: "enc".into(),
            feature_count: 2,
            column_count: 3,
            label_column: 2,
            ignored_columns: vec![],
            categorical_columns: vec![0],
            has_header: false,
            labels: LabelRule {
                normal: vec!["normal".into()],
                attack: vec![],
                other_is_attack: true,
            },
        }
    }

    fn table(rows: &[[&str; 3]]) -> RawTable {
        RawTable {
            header: None,
            rows: rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
        }
    }

    #[test]
    fn first_appearance_order() {
        let t = table(&[
            ["tcp", "1.5", "normal"],
            ["udp", "2", "x"],
            ["tcp", "3", "normal"],
            ["icmp", "4", "x"],
        ]);
        let map = fit_ordinal_encoder(&t, &spec());
        assert_eq!(map.columns[0].categories, vec!["tcp", "udp", "icmp"]);
        let m = apply_encoder(&t, &map, &spec()).unwrap();
        assert_eq!(m.column(0), vec![0.0, 1.0, 0.0, 2.0]);
        // numeric column untouched
        assert_eq!(m.column(1), vec![1.5, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn unseen_category_gets_reserved_code() {
        let fit = table(&[["tcp", "1", "n"], ["udp", "1", "n"], ["icmp", "1", "n"]]);
        let map = fit_ordinal_encoder(&fit, &spec());
        let test = table(&[["sctp", "1", "n"]]);
        let m = apply_encoder(&test, &map, &spec()).unwrap();
        assert_eq!(m.get(0, 0), 3.0);
    }

    #[test]
    fn idempotent_on_encoded_cells() {
        let fit = table(&[["tcp", "1", "n"], ["udp", "1", "n"]]);
        let map = fit_ordinal_encoder(&fit, &spec());
        let once = apply_encoder(&fit, &map, &spec()).unwrap();
        let encoded_raw = RawTable {
            header: None,
            rows: (0..once.rows())
                .map(|r| {
                    vec![
                        once.get(r, 0).to_string(),
                        once.get(r, 1).to_string(),
                        "n".to_string(),
                    ]
                })
                .collect(),
        };
        let twice = apply_encoder(&encoded_raw, &map, &spec()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn non_numeric_feature_is_an_error() {
        let fit = table(&[["tcp", "abc", "n"]]);
        let map = fit_ordinal_encoder(&fit, &spec());
        assert!(matches!(
            apply_encoder(&fit, &map, &spec()),
            Err(Error::Parse { .. })
        ));
    }
}
