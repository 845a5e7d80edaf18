use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::cart::{grow, CartParams, DecisionTree};
use crate::dataset::Matrix;
use crate::error::{Error, Result};
use crate::genotype::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub tree_count: usize,
    /// Candidate features per node; `None` means `ceil(sqrt(m))`.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub tree: CartParams,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            tree_count: 100,
            features_per_split: None,
            bootstrap: true,
            tree: CartParams::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<DecisionTree>,
    pub seed: u64,
}

/// Forest trees draw from their own stream keyed by `(seed, tree index)`,
/// so the result does not depend on how trees are scheduled.
pub fn train_forest(x: &Matrix, labels: &[u8], params: &ForestParams) -> Result<ForestModel> {
    if params.tree_count == 0 {
        return Err(Error::arg("forest needs at least one tree"));
    }
    let n = x.rows();
    let m = x.cols();
    let k = params
        .features_per_split
        .unwrap_or_else(|| (m as f64).sqrt().ceil() as usize)
        .clamp(1, m.max(1));
    let trees = (0..params.tree_count)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(params.seed, u64::MAX, t as u64).rng();
            let sample: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n.max(1))).collect()
            } else {
                (0..n).collect()
            };
            grow(x, labels, &sample, &params.tree, Some((k, &mut rng)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForestModel {
        trees,
        seed: params.seed,
    })
}

impl ForestModel {
    /// Majority vote; a split vote goes to attack.
    pub fn predict(&self, x: &Matrix) -> Result<Vec<u8>> {
        let mut votes = vec![0usize; x.rows()];
        for tree in &self.trees {
            for (v, p) in votes.iter_mut().zip(tree.predict(x)?) {
                *v += p as usize;
            }
        }
        let total = self.trees.len();
        Ok(votes.into_iter().map(|v| u8::from(2 * v >= total)).collect())
    }
}
