use serde::{Deserialize, Serialize};

use crate::dataset::{FeatureTable, Matrix};
use crate::error::{Error, Result};

/// Principal axes of a training table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    /// `components[j]` is the j-th unit axis (length n).
    pub components: Vec<Vec<f64>>,
    pub column_means: Vec<f64>,
    /// Sample variance along each axis, non-increasing.
    pub explained_variance: Vec<f64>,
}

impl PcaModel {
    pub fn k(&self) -> usize {
        self.components.len()
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and the matching eigenvectors as columns of `v`.
pub(crate) fn jacobi_eigen(mut a: Vec<Vec<f64>>, tol: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Top-`k` principal components of `table`'s features. Each component is
/// signed so its largest-magnitude entry is positive.
pub fn pca_fit(table: &FeatureTable, k: usize) -> Result<PcaModel> {
    let x = table.x();
    let (rows, n) = (x.rows(), x.cols());
    if k == 0 || k > n.min(rows) {
        return Err(Error::arg(format!(
            "PCA needs 1 <= k <= min({n} columns, {rows} rows), got {k}"
        )));
    }
    let means: Vec<f64> = (0..n).map(|c| x.column(c).iter().sum::<f64>() / rows as f64).collect();
    let denom = (rows.max(2) - 1) as f64;
    let mut cov = vec![vec![0.0; n]; n];
    for r in 0..rows {
        let row = x.row(r);
        for i in 0..n {
            let di = row[i] - means[i];
            for j in i..n {
                cov[i][j] += di * (row[j] - means[j]);
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            cov[i][j] /= denom;
            cov[j][i] = cov[i][j];
        }
    }
    let (values, vectors) = jacobi_eigen(cov, 1e-10);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let components: Vec<Vec<f64>> = order[..k]
        .iter()
        .map(|&j| {
            let mut axis: Vec<f64> = (0..n).map(|i| vectors[i][j]).collect();
            let lead = (0..n).fold(0, |best, i| if axis[i].abs() > axis[best].abs() { i } else { best });
            if axis[lead] < 0.0 {
                axis.iter_mut().for_each(|v| *v = -*v);
            }
            axis
        })
        .collect();
    Ok(PcaModel {
        components,
        column_means: means,
        explained_variance: order[..k].iter().map(|&j| values[j].max(0.0)).collect(),
    })
}

/// Projects centred rows onto the model's components; labels and role kept.
pub fn pca_transform(table: &FeatureTable, model: &PcaModel) -> Result<FeatureTable> {
    let x = table.x();
    if x.cols() != model.column_means.len() {
        return Err(Error::arg(format!(
            "PCA fitted on {} columns, table has {}",
            model.column_means.len(),
            x.cols()
        )));
    }
    let k = model.k();
    let mut values = Vec::with_capacity(x.rows() * k);
    for r in 0..x.rows() {
        let centred: Vec<f64> = x.row(r).iter().zip(&model.column_means).map(|(v, m)| v - m).collect();
        for axis in &model.components {
            values.push(centred.iter().zip(axis).map(|(a, b)| a * b).sum());
        }
    }
    Ok(FeatureTable::new(Matrix::new(x.rows(), k, values)?, table.labels().to_vec())?.with_role(table.role()))
}
