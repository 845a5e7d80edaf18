//! Wrapper classifiers written from scratch: CART, logistic regression and
//! random forest.

mod cart;
mod forest;
mod impurity;
mod logreg;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Matrix;
use crate::error::{Error, Result};

pub use cart::{train_cart, CartParams, DecisionTree, Node};
pub use forest::{train_forest, ForestModel, ForestParams};
pub use impurity::{best_split, entropy, gini_impurity, information_gain, SplitCandidate};
pub use logreg::{
    loss_and_gradient, sigmoid, train_logreg, train_logreg_traced, LogRegModel, LogRegParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    #[default]
    Cart,
    #[serde(alias = "lr")]
    Logreg,
    #[serde(alias = "rf")]
    Forest,
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassifierKind::Cart => "cart",
            ClassifierKind::Logreg => "logreg",
            ClassifierKind::Forest => "forest",
        })
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cart" | "dt" => Ok(ClassifierKind::Cart),
            "logreg" | "lr" => Ok(ClassifierKind::Logreg),
            "forest" | "rf" => Ok(ClassifierKind::Forest),
            other => Err(Error::Config(format!("unknown classifier {other:?}"))),
        }
    }
}

/// Classifier choice and hyperparameters. Only the fields of the selected
/// kind are read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub kind: ClassifierKind,
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2_penalty: f64,
    pub tree_count: usize,
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        let cart = CartParams::default();
        let lr = LogRegParams::default();
        TrainConfig {
            kind: ClassifierKind::Cart,
            max_depth: cart.max_depth,
            min_samples_split: cart.min_samples_split,
            learning_rate: lr.learning_rate,
            epochs: lr.epochs,
            l2_penalty: lr.l2_penalty,
            tree_count: 100,
            features_per_split: None,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn with_kind(kind: ClassifierKind) -> Self {
        TrainConfig {
            kind,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_samples_split == 0 {
            return Err(Error::Config("min_samples_split must be positive".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config("learning_rate must be positive".into()));
        }
        if !(self.l2_penalty >= 0.0) {
            return Err(Error::Config("l2_penalty must be non-negative".into()));
        }
        if self.tree_count == 0 {
            return Err(Error::Config("tree_count must be positive".into()));
        }
        if self.features_per_split == Some(0) {
            return Err(Error::Config("features_per_split must be positive".into()));
        }
        Ok(())
    }

    pub fn cart(&self) -> CartParams {
        CartParams {
            max_depth: self.max_depth,
            min_samples_split: self.min_samples_split,
        }
    }

    pub fn logreg(&self) -> LogRegParams {
        LogRegParams {
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            l2_penalty: self.l2_penalty,
        }
    }

    pub fn forest(&self) -> ForestParams {
        ForestParams {
            tree_count: self.tree_count,
            features_per_split: self.features_per_split,
            bootstrap: self.bootstrap,
            tree: self.cart(),
            seed: self.seed,
        }
    }
}

/// A trained classifier of any kind; serializes to self-describing JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    Cart(DecisionTree),
    Logreg(LogRegModel),
    Forest(ForestModel),
}

pub fn train(x: &Matrix, labels: &[u8], cfg: &TrainConfig) -> Result<Model> {
    if x.rows() == 0 || x.cols() == 0 {
        return Err(Error::arg("cannot train on an empty table"));
    }
    Ok(match cfg.kind {
        ClassifierKind::Cart => Model::Cart(train_cart(x, labels, &cfg.cart())?),
        ClassifierKind::Logreg => Model::Logreg(train_logreg(x, labels, &cfg.logreg())?),
        ClassifierKind::Forest => Model::Forest(train_forest(x, labels, &cfg.forest())?),
    })
}

impl Model {
    pub fn predict(&self, x: &Matrix) -> Result<Vec<u8>> {
        match self {
            Model::Cart(t) => t.predict(x),
            Model::Logreg(m) => m.predict(x),
            Model::Forest(f) => f.predict(x),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
