use serde::{Deserialize, Serialize};

use crate::dataset::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegParams {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2_penalty: f64,
}

impl Default for LogRegParams {
    fn default() -> Self {
        LogRegParams {
            learning_rate: 0.1,
            epochs: 200,
            l2_penalty: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[inline]
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Mean cross-entropy plus `l2/2 · ‖w‖²`, with its gradient in `w` and `b`.
pub fn loss_and_gradient(
    model: &LogRegModel,
    x: &Matrix,
    labels: &[u8],
    l2_penalty: f64,
) -> (f64, Vec<f64>, f64) {
    let n = x.rows() as f64;
    let mut loss = 0.0;
    let mut gw = vec![0.0; model.weights.len()];
    let mut gb = 0.0;
    for r in 0..x.rows() {
        let row = x.row(r);
        let z = model.bias + row.iter().zip(&model.weights).map(|(a, w)| a * w).sum::<f64>();
        let y = labels[r] as f64;
        loss += softplus(z) - y * z;
        let err = sigmoid(z) - y;
        for (g, a) in gw.iter_mut().zip(row) {
            *g += err * a;
        }
        gb += err;
    }
    let sq: f64 = model.weights.iter().map(|w| w * w).sum();
    loss = loss / n + 0.5 * l2_penalty * sq;
    for (g, w) in gw.iter_mut().zip(&model.weights) {
        *g = *g / n + l2_penalty * w;
    }
    (loss, gw, gb / n)
}

/// Full-batch gradient descent from zero weights. Returns the model and the
/// loss trace (`epochs + 1` entries, the first at initialization).
pub fn train_logreg_traced(
    x: &Matrix,
    labels: &[u8],
    params: &LogRegParams,
) -> Result<(LogRegModel, Vec<f64>)> {
    if x.rows() == 0 {
        return Err(Error::arg("cannot train logistic regression on zero rows"));
    }
    if labels.len() != x.rows() {
        return Err(Error::arg("label count differs from row count"));
    }
    let mut model = LogRegModel {
        weights: vec![0.0; x.cols()],
        bias: 0.0,
    };
    let mut trace = Vec::with_capacity(params.epochs + 1);
    for epoch in 0..=params.epochs {
        let (loss, gw, gb) = loss_and_gradient(&model, x, labels, params.l2_penalty);
        if !loss.is_finite() {
            return Err(Error::Numeric(format!("non-finite loss at epoch {epoch}")));
        }
        trace.push(loss);
        if epoch == params.epochs {
            break;
        }
        for (w, g) in model.weights.iter_mut().zip(&gw) {
            *w -= params.learning_rate * g;
        }
        model.bias -= params.learning_rate * gb;
    }
    Ok((model, trace))
}

pub fn train_logreg(x: &Matrix, labels: &[u8], params: &LogRegParams) -> Result<LogRegModel> {
    train_logreg_traced(x, labels, params).map(|(m, _)| m)
}

impl LogRegModel {
    /// `sigmoid(w·x + b) >= 0.5` → attack.
    pub fn predict(&self, x: &Matrix) -> Result<Vec<u8>> {
        if x.cols() != self.weights.len() {
            return Err(Error::arg(format!(
                "model has {} weights, table has {} columns",
                self.weights.len(),
                x.cols()
            )));
        }
        Ok((0..x.rows())
            .map(|r| {
                let z = self.bias + x.row(r).iter().zip(&self.weights).map(|(a, w)| a * w).sum::<f64>();
                u8::from(sigmoid(z) >= 0.5)
            })
            .collect())
    }
}
