#![allow(dead_code)]

use std::sync::Arc;

use featsel_core::classifiers::TrainConfig;
use featsel_core::dataset::{FeatureTable, TableRole};
use featsel_core::objectives::{EvaluationContext, Formulation};
use featsel_core::synthetic::informative_instance;

/// 12-feature instance, 2000 rows split 1600 train / 400 validation.
pub fn synthetic_split(seed: u64) -> (FeatureTable, FeatureTable) {
    let t = informative_instance(2000, seed).unwrap();
    let train: Vec<usize> = (0..1600).collect();
    let val: Vec<usize> = (1600..2000).collect();
    (
        t.select_rows(&train).with_role(TableRole::Train),
        t.select_rows(&val).with_role(TableRole::Validation),
    )
}

pub fn synthetic_ctx(seed: u64, formulation: Formulation) -> EvaluationContext {
    let (train, val) = synthetic_split(seed);
    EvaluationContext::new(Arc::new(train), Arc::new(val), TrainConfig::default(), formulation).unwrap()
}
