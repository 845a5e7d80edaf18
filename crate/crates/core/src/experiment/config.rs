use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::BaselineMethod;
use crate::classifiers::TrainConfig;
use crate::dataset::{DatasetSpec, PrepareOptions};
use crate::error::{Error, Result};
use crate::moea::{Algorithm, SearchParams};
use crate::objectives::Formulation;

/// Any method the experiment runner can execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Method {
    Search(Algorithm),
    Baseline(BaselineMethod),
}

impl Method {
    pub fn is_search(self) -> bool {
        matches!(self, Method::Search(_))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Search(a) => a.fmt(f),
            Method::Baseline(b) => b.fmt(f),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<Algorithm>()
            .map(Method::Search)
            .or_else(|_| s.parse::<BaselineMethod>().map(Method::Baseline))
            .map_err(|_| Error::Config(format!("unknown method {s:?}")))
    }
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Method> for String {
    fn from(m: Method) -> Self {
        m.to_string()
    }
}

/// Named starting points for a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Stratified 10k training rows, 50 generations, 5 repeats.
    Desk,
    /// Full data, 500 generations, 10 repeats.
    Paper,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "desk" => Ok(Preset::Desk),
            "paper" => Ok(Preset::Paper),
            other => Err(Error::Config(format!("unknown preset {other:?}"))),
        }
    }
}

/// One experiment: data, method, classifier, search settings and output.
///
/// Loaded from TOML; every key is optional and falls back to the full-scale
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: String,
    pub train_path: Option<PathBuf>,
    pub test_path: Option<PathBuf>,
    pub method: Method,
    pub formulation: Formulation,
    /// Directory name for this arm's results; derived when unset.
    pub label: Option<String>,
    pub classifier: TrainConfig,
    pub population: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub nsga3_divisions: Option<usize>,
    pub moead_neighbors: usize,
    pub external_archive: bool,
    pub workers: usize,
    pub repeats: usize,
    pub seed: u64,
    pub validation_fraction: f64,
    pub subsample_train: Option<usize>,
    pub subsample_test: Option<usize>,
    pub stratified: bool,
    /// Subset sizes tried by SFS, RFE and PCA.
    pub k_grid: Vec<usize>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let search = SearchParams::default();
        ExperimentConfig {
            dataset: "nsl-kdd".into(),
            train_path: None,
            test_path: None,
            method: Method::Search(Algorithm::Nsga2),
            formulation: Formulation::Dr3,
            label: None,
            classifier: TrainConfig::default(),
            population: search.population,
            generations: search.generations,
            crossover_prob: search.crossover_prob,
            mutation_prob: search.mutation_prob,
            nsga3_divisions: search.nsga3_divisions,
            moead_neighbors: search.moead_neighbors,
            external_archive: search.external_archive,
            workers: search.workers,
            repeats: 10,
            seed: 0,
            validation_fraction: 0.2,
            subsample_train: None,
            subsample_test: None,
            stratified: true,
            k_grid: crate::baselines::K_GRID.to_vec(),
            output_dir: PathBuf::from("results"),
        }
    }
}

impl ExperimentConfig {
    pub fn preset(p: Preset) -> Self {
        match p {
            Preset::Paper => Self::default(),
            Preset::Desk => ExperimentConfig {
                subsample_train: Some(10_000),
                generations: 50,
                repeats: 5,
                ..Self::default()
            },
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid configuration: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn search_params(&self) -> SearchParams {
        SearchParams {
            population: self.population,
            generations: self.generations,
            crossover_prob: self.crossover_prob,
            mutation_prob: self.mutation_prob,
            nsga3_divisions: self.nsga3_divisions,
            moead_neighbors: self.moead_neighbors,
            external_archive: self.external_archive,
            workers: self.workers,
        }
    }

    pub fn prepare_options(&self) -> PrepareOptions {
        PrepareOptions {
            validation_fraction: self.validation_fraction,
            seed: self.seed,
            subsample_train: self.subsample_train,
            subsample_test: self.subsample_test,
            stratified: self.stratified,
        }
    }

    pub fn dataset_spec(&self) -> Result<DatasetSpec> {
        DatasetSpec::builtin(&self.dataset)
            .ok_or_else(|| Error::Config(format!("unknown dataset {:?}", self.dataset)))
    }

    /// `nsga2-dr3-cart` for searches, `sfs-cart` for baselines.
    pub fn effective_label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match self.method {
            Method::Search(a) => format!("{a}-{}-{}", self.formulation, self.classifier.kind),
            Method::Baseline(b) => format!("{b}-{}", self.classifier.kind),
        }
    }

    /// Checks everything that can be checked without touching the data.
    pub fn validate(&self) -> Result<()> {
        self.dataset_spec()?;
        if self.train_path.is_none() || self.test_path.is_none() {
            return Err(Error::Config("both train_path and test_path are required".into()));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::Config(format!(
                "validation_fraction must lie in (0, 1), got {}",
                self.validation_fraction
            )));
        }
        if let Some(l) = &self.label {
            if l.is_empty() || l.contains(['/', '\\']) || l.starts_with('.') {
                return Err(Error::Config(format!("label {l:?} is not a plain directory name")));
            }
        }
        self.classifier.validate()?;
        if let Method::Search(a) = self.method {
            self.search_params().validate()?;
            match a {
                Algorithm::Ga if self.formulation != Formulation::Acc1 => {
                    return Err(Error::Config("the GA arm requires formulation acc1".into()))
                }
                Algorithm::Nsga2 | Algorithm::Nsga3 | Algorithm::Moead if self.formulation.arity() < 2 => {
                    return Err(Error::Config(format!(
                        "{a} requires a multi-objective formulation, got {}",
                        self.formulation
                    )))
                }
                _ => {}
            }
        } else if self.k_grid.is_empty() {
            return Err(Error::Config("k_grid must not be empty".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_paths(mut c: ExperimentConfig) -> ExperimentConfig {
        c.train_path = Some("a.csv".into());
        c.test_path = Some("b.csv".into());
        c
    }

    #[test]
    fn toml_round_trip_and_overrides() {
        let c = ExperimentConfig::from_toml_str(
            "method = \"moead\"\nformulation = \"acc2\"\ngenerations = 7\n[classifier]\nkind = \"forest\"\ntree_count = 5\n",
        )
        .unwrap();
        assert_eq!(c.method, Method::Search(Algorithm::Moead));
        assert_eq!(c.generations, 7);
        assert_eq!(c.population, 100);
        assert_eq!(c.classifier.tree_count, 5);
        assert_eq!(c.effective_label(), "moead-acc2-forest");
        let back = ExperimentConfig::from_toml_str(&c.to_toml_string().unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(ExperimentConfig::from_toml_str("populaton = 3").is_err());
    }

    #[test]
    fn presets() {
        let d = ExperimentConfig::preset(Preset::Desk);
        assert_eq!((d.subsample_train, d.generations, d.repeats), (Some(10_000), 50, 5));
        let p = ExperimentConfig::preset(Preset::Paper);
        assert_eq!((p.population, p.generations, p.repeats), (100, 500, 10));
        assert_eq!((p.crossover_prob, p.mutation_prob), (0.9, 1.0));
    }

    #[test]
    fn arity_rules() {
        let ok = with_paths(ExperimentConfig::default());
        assert!(ok.validate().is_ok());
        assert!(ExperimentConfig::default().validate().is_err(), "paths missing");
        let ga = ExperimentConfig { method: Method::Search(Algorithm::Ga), ..ok.clone() };
        assert!(ga.validate().is_err());
        assert!(ExperimentConfig { formulation: Formulation::Acc1, ..ga }.validate().is_ok());
        let nsga = ExperimentConfig { formulation: Formulation::Acc1, ..ok.clone() };
        assert!(nsga.validate().is_err());
        let sfs = ExperimentConfig { method: "sfs".parse().unwrap(), ..ok };
        assert_eq!(sfs.effective_label(), "sfs-cart");
        assert!(sfs.validate().is_ok());
    }
}
