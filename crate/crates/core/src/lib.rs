//! Wrapper feature selection for binary network intrusion detection.
//!
//! Feature subsets are bitstrings scored by training a classifier on the
//! selected columns and measuring it on held-out validation rows. The search
//! treats subset size, accuracy and attack detection rate as separate
//! objectives and explores the trade-off with NSGA-II, NSGA-III or MOEA/D;
//! single-objective GA, SFS, RFE and PCA are provided as comparison methods.
//!
//! Module map:
//! - [`dataset`]: CSV loading, cleaning, ordinal encoding, min-max scaling, splits.
//! - [`metrics`]: confusion matrix and the scalar rates built on it.
//! - [`classifiers`]: CART, logistic regression and random forest.
//! - [`genotype`]: bitstring genomes, variation operators, seeded RNG streams.
//! - [`objectives`]: wrapper evaluation and Pareto dominance.
//! - [`moea`]: the search engines and their selection machinery.
//! - [`baselines`]: SFS, RFE, PCA and the k-grid harness.
//! - [`experiment`]: configuration, repeats, statistics and report export.

pub mod baselines;
pub mod classifiers;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod genotype;
pub mod metrics;
pub mod moea;
pub mod objectives;
pub mod synthetic;

pub use error::{Error, Result};
