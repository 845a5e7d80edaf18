use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::run_baseline_grid;
use crate::dataset::{load_csv, prepare, FeatureTable, TableRole};
use crate::error::{Error, Result};
use crate::experiment::config::{ExperimentConfig, Method};
use crate::experiment::results::{ResultMember, RunMeta, RunResult};
use crate::genotype::derive_seed;
use crate::moea::run;
use crate::objectives::{score_subset, EvaluationContext};

/// Loads and prepares the configured data, then runs every repeat.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunResult>> {
    cfg.validate()?;
    let spec = cfg.dataset_spec()?;
    let train_path = cfg.train_path.as_ref().expect("validated");
    let test_path = cfg.test_path.as_ref().expect("validated");
    let train_raw = load_csv(train_path, &spec)?;
    let test_raw = load_csv(test_path, &spec)?;
    let data = prepare(&spec, &train_raw, Some(&test_raw), &cfg.prepare_options())?;
    log::info!(
        "{}: {} train / {} validation / {} test rows ({} + {} removed by cleaning)",
        spec.name,
        data.train.row_count(),
        data.validation.row_count(),
        data.test.as_ref().map_or(0, |t| t.row_count()),
        data.removed.0,
        data.removed.1
    );
    let test = data.test.ok_or_else(|| Error::Internal("prepared data lacks a test table".into()))?;
    run_on_tables(cfg, Arc::new(data.train), Arc::new(data.validation), &test)
}

/// Runs the configured method on already prepared partitions. Search
/// methods run `cfg.repeats` times with seeds derived from `cfg.seed`;
/// baselines are deterministic and run once.
pub fn run_on_tables(
    cfg: &ExperimentConfig,
    train: Arc<FeatureTable>,
    validation: Arc<FeatureTable>,
    test: &FeatureTable,
) -> Result<Vec<RunResult>> {
    if test.role() != TableRole::Test {
        return Err(Error::Config("the final evaluation table must carry the test role".into()));
    }
    let ctx = EvaluationContext::new(train, validation, cfg.classifier.clone(), cfg.formulation)?;
    let label = cfg.effective_label();
    let meta = |repeat: usize, seed: u64, secs: f64| RunMeta {
        label: label.clone(),
        method: cfg.method,
        formulation: cfg.formulation,
        classifier: cfg.classifier.kind,
        repeat,
        seed,
        feature_count: ctx.feature_count(),
        wall_time_secs: secs,
    };

    match cfg.method {
        Method::Search(algorithm) => {
            let params = cfg.search_params();
            (0..cfg.repeats)
                .into_par_iter()
                .map(|repeat| {
                    let seed = derive_seed(cfg.seed, repeat as u64);
                    let started = Instant::now();
                    let out = run(algorithm, &ctx, &params, seed)
                        .map_err(|e| Error::Internal(format!("{label} repeat {repeat}: {e}")))?;
                    // test rows are touched only here, after the search is over
                    let members = out
                        .archive
                        .members()
                        .iter()
                        .map(|m| {
                            Ok(ResultMember {
                                genome: Some(m.genome.clone()),
                                size: m.genome.size(),
                                validation: Some(m.validation),
                                test: score_subset(&m.genome.selected(), ctx.train(), test, ctx.classifier())?,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(RunResult {
                        meta: meta(repeat, seed, started.elapsed().as_secs_f64()),
                        members,
                        progress: out.progress,
                    })
                })
                .collect()
        }
        Method::Baseline(method) => {
            let started = Instant::now();
            let r = run_baseline_grid(method, &ctx, test, &cfg.k_grid)?;
            let validation = match &r.genome {
                Some(g) => Some(ctx.score(g)?),
                None => None,
            };
            Ok(vec![RunResult {
                meta: meta(0, cfg.seed, started.elapsed().as_secs_f64()),
                members: vec![ResultMember { size: r.k, genome: r.genome, validation, test: r.test }],
                progress: Vec::new(),
            }])
        }
    }
}

/// Writes `<output_dir>/<label>/method.json` and one `repeat_NN` directory
/// per result. Returns the arm directory.
pub fn write_experiment(cfg: &ExperimentConfig, results: &[RunResult]) -> Result<PathBuf> {
    let dir = cfg.output_dir.join(cfg.effective_label());
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let manifest = dir.join("method.json");
    fs::write(&manifest, serde_json::to_string_pretty(cfg)?).map_err(|e| Error::io(&manifest, e))?;
    for r in results {
        r.write(dir.join(format!("repeat_{:02}", r.meta.repeat)))?;
    }
    Ok(dir)
}

/// Reads every `repeat_*` run below one arm directory, in repeat order.
pub fn read_arm(dir: impl AsRef<Path>) -> Result<Vec<RunResult>> {
    let dir = dir.as_ref();
    let mut runs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && p.file_name().is_some_and(|n| n.to_string_lossy().starts_with("repeat_")))
        .collect();
    runs.sort();
    runs.iter().map(RunResult::read).collect()
}

/// Finds arm directories (those holding `method.json`) at or directly below
/// `root` and reads them, sorted by directory name.
pub fn read_arms(root: impl AsRef<Path>) -> Result<Vec<Vec<RunResult>>> {
    let root = root.as_ref();
    if root.join("method.json").is_file() {
        return Ok(vec![read_arm(root)?]);
    }
    let mut arms: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("method.json").is_file())
        .collect();
    arms.sort();
    arms.iter().map(read_arm).collect()
}
