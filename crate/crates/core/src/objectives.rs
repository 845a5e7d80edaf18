//! Wrapper evaluation of genomes and Pareto dominance.
//!
//! Objective vectors are always in maximization form: subset size enters
//! as `-size`.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::classifiers::{self, TrainConfig};
use crate::dataset::{FeatureTable, TableRole};
use crate::error::{Error, Result};
use crate::genotype::Genome;
use crate::metrics::{self, confusion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    /// (−size, accuracy, detection rate)
    Dr3,
    /// (−size, accuracy)
    Acc2,
    /// (−size, F1)
    F12,
    /// (accuracy)
    Acc1,
}

impl Formulation {
    pub fn arity(self) -> usize {
        match self {
            Formulation::Dr3 => 3,
            Formulation::Acc2 | Formulation::F12 => 2,
            Formulation::Acc1 => 1,
        }
    }

    pub fn objectives(self, s: &SubsetScore) -> ObjectiveVector {
        let size = -(s.size as f64);
        ObjectiveVector(match self {
            Formulation::Dr3 => vec![size, s.accuracy, s.detection_rate],
            Formulation::Acc2 => vec![size, s.accuracy],
            Formulation::F12 => vec![size, s.f1],
            Formulation::Acc1 => vec![s.accuracy],
        })
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::Dr3 => "dr3",
            Formulation::Acc2 => "acc2",
            Formulation::F12 => "f12",
            Formulation::Acc1 => "acc1",
        })
    }
}

impl FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dr3" => Ok(Formulation::Dr3),
            "acc2" => Ok(Formulation::Acc2),
            "f12" => Ok(Formulation::F12),
            "acc1" => Ok(Formulation::Acc1),
            other => Err(Error::Config(format!("unknown formulation {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector(pub Vec<f64>);

impl ObjectiveVector {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Metrics of one classifier trained on a subset and scored on held-out rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsetScore {
    pub size: usize,
    pub accuracy: f64,
    pub detection_rate: f64,
    pub f1: f64,
}

/// Popcount of the genome.
pub fn size(g: &Genome) -> usize {
    g.size()
}

/// Pareto dominance under maximization.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<bool> {
    if a.arity() != b.arity() {
        return Err(Error::arg(format!(
            "cannot compare objective vectors of arity {} and {}",
            a.arity(),
            b.arity()
        )));
    }
    Ok(dominates_slice(&a.0, &b.0))
}

#[inline]
pub(crate) fn dominates_slice(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strictly = true;
        }
    }
    strictly
}

/// Trains `cfg` on `train` restricted to `selected` and scores it on `target`.
pub fn score_subset(
    selected: &[usize],
    train: &FeatureTable,
    target: &FeatureTable,
    cfg: &TrainConfig,
) -> Result<SubsetScore> {
    if selected.is_empty() {
        return Err(Error::Internal("empty feature subset reached evaluation".into()));
    }
    let tr = train.x().project(selected);
    let model = classifiers::train(&tr, train.labels(), cfg)?;
    let pred = model.predict(&target.x().project(selected))?;
    let cm = confusion(target.labels(), &pred)?;
    Ok(SubsetScore {
        size: selected.len(),
        accuracy: metrics::accuracy(&cm)?,
        detection_rate: metrics::detection_rate(&cm)?,
        f1: metrics::f1(&cm)?,
    })
}

/// Everything needed to score a genome during search: train and validation
/// partitions, the wrapper classifier, the formulation and a per-run memo.
pub struct EvaluationContext {
    train: Arc<FeatureTable>,
    validation: Arc<FeatureTable>,
    classifier: TrainConfig,
    formulation: Formulation,
    cache: DashMap<Genome, SubsetScore>,
    trainings: AtomicUsize,
}

impl EvaluationContext {
    pub fn new(
        train: Arc<FeatureTable>,
        validation: Arc<FeatureTable>,
        classifier: TrainConfig,
        formulation: Formulation,
    ) -> Result<Self> {
        for t in [&train, &validation] {
            if t.role() == TableRole::Test {
                return Err(Error::Config("test rows may not enter the search".into()));
            }
        }
        if train.row_count() == 0 || validation.row_count() == 0 {
            return Err(Error::Config("train and validation partitions must be non-empty".into()));
        }
        if train.col_count() != validation.col_count() {
            return Err(Error::Config("train and validation column counts differ".into()));
        }
        if validation.attack_count() == 0 {
            return Err(Error::Config(
                "validation partition has no attack rows; detection rate is undefined".into(),
            ));
        }
        classifier.validate()?;
        Ok(EvaluationContext {
            train,
            validation,
            classifier,
            formulation,
            cache: DashMap::new(),
            trainings: AtomicUsize::new(0),
        })
    }

    pub fn feature_count(&self) -> usize {
        self.train.col_count()
    }

    pub fn formulation(&self) -> Formulation {
        self.formulation
    }

    pub fn classifier(&self) -> &TrainConfig {
        &self.classifier
    }

    pub fn train(&self) -> &FeatureTable {
        &self.train
    }

    pub fn validation(&self) -> &FeatureTable {
        &self.validation
    }

    /// Number of classifiers actually trained (cache misses).
    pub fn trainings(&self) -> usize {
        self.trainings.load(Ordering::Relaxed)
    }

    /// Validation metrics of the genome's subset, memoized by bitstring.
    pub fn score(&self, g: &Genome) -> Result<SubsetScore> {
        if g.len() != self.feature_count() {
            return Err(Error::arg(format!(
                "genome length {} does not match {} features",
                g.len(),
                self.feature_count()
            )));
        }
        if let Some(s) = self.cache.get(g) {
            return Ok(*s);
        }
        let s = score_subset(&g.selected(), &self.train, &self.validation, &self.classifier)?;
        self.trainings.fetch_add(1, Ordering::Relaxed);
        self.cache.insert(g.clone(), s);
        Ok(s)
    }

    pub fn evaluate(&self, g: &Genome) -> Result<ObjectiveVector> {
        Ok(self.formulation.objectives(&self.score(g)?))
    }
}
