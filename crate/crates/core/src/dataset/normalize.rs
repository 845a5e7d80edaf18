use serde::{Deserialize, Serialize};

use crate::dataset::Matrix;

/// Per-column minimum and maximum fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

pub fn fit_minmax(x: &Matrix) -> NormalizationParams {
    let mut min = vec![f64::INFINITY; x.cols()];
    let mut max = vec![f64::NEG_INFINITY; x.cols()];
    for r in 0..x.rows() {
        for (c, &v) in x.row(r).iter().enumerate() {
            min[c] = min[c].min(v);
            max[c] = max[c].max(v);
        }
    }
    // An empty fit leaves every column degenerate, which scales to zero.
    for c in 0..x.cols() {
        if min[c] > max[c] {
            min[c] = 0.0;
            max[c] = 0.0;
        }
    }
    NormalizationParams { min, max }
}

/// Scales each column to [0, 1], clipping values outside the fitted range.
/// Columns that were constant at fit time map to zero.
pub fn apply_minmax(x: &Matrix, params: &NormalizationParams) -> Matrix {
    let mut values = Vec::with_capacity(x.rows() * x.cols());
    for r in 0..x.rows() {
        for (c, &v) in x.row(r).iter().enumerate() {
            let (lo, hi) = (params.min[c], params.max[c]);
            let scaled = if hi > lo {
                ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
            } else {
                0.0
            };
            values.push(scaled);
        }
    }
    Matrix::new(x.rows(), x.cols(), values).expect("shape preserved")
}
