use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::encode::{apply_encoder, fit_ordinal_encoder, EncodingMap};
use crate::dataset::normalize::{apply_minmax, fit_minmax, NormalizationParams};
use crate::dataset::raw::{binarize_labels, clean, RawTable};
use crate::dataset::spec::DatasetSpec;
use crate::dataset::split::{split_validation, subsample_indices, SplitIndices};
use crate::dataset::{FeatureTable, TableRole};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrepareOptions {
    pub validation_fraction: f64,
    pub seed: u64,
    pub subsample_train: Option<usize>,
    pub subsample_test: Option<usize>,
    pub stratified: bool,
}

impl Default for PrepareOptions {
    fn default() -> Self {
        PrepareOptions {
            validation_fraction: 0.2,
            seed: 0,
            subsample_train: None,
            subsample_test: None,
            stratified: true,
        }
    }
}

/// Fitted encoder and scaler; written next to cached tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preprocessor {
    pub dataset: String,
    pub encoding: EncodingMap,
    pub normalization: NormalizationParams,
}

#[derive(Debug, Clone)]
pub struct PreparedData {
    pub spec: DatasetSpec,
    pub train: FeatureTable,
    pub validation: FeatureTable,
    pub test: Option<FeatureTable>,
    pub split: SplitIndices,
    pub preprocessor: Preprocessor,
    /// Rows dropped by cleaning from the training and test files.
    pub removed: (usize, usize),
}

impl PreparedData {
    pub fn feature_count(&self) -> usize {
        self.spec.feature_count
    }

    /// Writes train/validation/test CSVs and the `preprocess.json` sidecar.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        self.train.write_csv(dir.join("train.csv"))?;
        self.validation.write_csv(dir.join("validation.csv"))?;
        if let Some(test) = &self.test {
            test.write_csv(dir.join("test.csv"))?;
        }
        let sidecar = dir.join("preprocess.json");
        let json = serde_json::to_string_pretty(&self.preprocessor)?;
        std::fs::write(&sidecar, json).map_err(|e| Error::io(&sidecar, e))
    }
}

/// Runs clean → label → subsample → split → encode → scale. Encoder and
/// scaler see the training partition only.
pub fn prepare(
    spec: &DatasetSpec,
    train_raw: &RawTable,
    test_raw: Option<&RawTable>,
    opts: &PrepareOptions,
) -> Result<PreparedData> {
    spec.validate()?;
    let (mut train_raw, removed_train) = clean(train_raw, spec);
    let mut train_labels = binarize_labels(&train_raw, spec)?;
    if let Some(limit) = opts.subsample_train {
        let keep = subsample_indices(&train_labels, limit, opts.seed, opts.stratified)?;
        train_raw = train_raw.select_rows(&keep);
        train_labels = keep.iter().map(|&i| train_labels[i]).collect();
    }

    let split = split_validation(train_raw.len(), opts.validation_fraction, opts.seed)?;
    let fit_rows = train_raw.select_rows(&split.train_rows);
    let encoding = fit_ordinal_encoder(&fit_rows, spec);
    let encoded_train = apply_encoder(&train_raw, &encoding, spec)?;
    let normalization = fit_minmax(&encoded_train.select_rows(&split.train_rows));
    let scaled = apply_minmax(&encoded_train, &normalization);
    let all = FeatureTable::new(scaled, train_labels)?;
    let train = all.select_rows(&split.train_rows).with_role(TableRole::Train);
    let validation = all
        .select_rows(&split.validation_rows)
        .with_role(TableRole::Validation);

    let mut removed_test = 0;
    let test = match test_raw {
        None => None,
        Some(raw) => {
            let (mut raw, removed) = clean(raw, spec);
            removed_test = removed;
            let mut labels = binarize_labels(&raw, spec)?;
            if let Some(limit) = opts.subsample_test {
                let keep = subsample_indices(&labels, limit, opts.seed ^ 0x7e57, opts.stratified)?;
                raw = raw.select_rows(&keep);
                labels = keep.iter().map(|&i| labels[i]).collect();
            }
            let x = apply_minmax(&apply_encoder(&raw, &encoding, spec)?, &normalization);
            Some(FeatureTable::new(x, labels)?.with_role(TableRole::Test))
        }
    };

    Ok(PreparedData {
        spec: spec.clone(),
        train,
        validation,
        test,
        split,
        preprocessor: Preprocessor {
            dataset: spec.name.clone(),
            encoding,
            normalization,
        },
        removed: (removed_train, removed_test),
    })
}
