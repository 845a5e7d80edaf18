//! Non-evolutionary comparison methods and the k-grid harness.

mod pca;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::information_gain;
use crate::dataset::FeatureTable;
use crate::error::{Error, Result};
use crate::genotype::Genome;
use crate::objectives::{score_subset, EvaluationContext, SubsetScore};

pub use pca::{pca_fit, pca_transform, PcaModel};

/// Subset sizes tried by [`run_baseline_grid`].
pub const K_GRID: [usize; 5] = [5, 10, 15, 20, 25];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineMethod {
    Sfs,
    Rfe,
    Pca,
    /// Every feature, no selection.
    Basic,
}

impl fmt::Display for BaselineMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaselineMethod::Sfs => "sfs",
            BaselineMethod::Rfe => "rfe",
            BaselineMethod::Pca => "pca",
            BaselineMethod::Basic => "basic",
        })
    }
}

impl FromStr for BaselineMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sfs" => Ok(BaselineMethod::Sfs),
            "rfe" => Ok(BaselineMethod::Rfe),
            "pca" => Ok(BaselineMethod::Pca),
            "basic" | "none" => Ok(BaselineMethod::Basic),
            other => Err(Error::Config(format!("unknown baseline method {other:?}"))),
        }
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::arg(format!("k must lie in 1..={n}, got {k}")));
    }
    Ok(())
}

/// Sequential forward selection. Returns the subset and, per round, the
/// best validation accuracy among that round's candidates.
pub fn sfs_traced(ctx: &EvaluationContext, k: usize) -> Result<(Genome, Vec<f64>)> {
    let n = ctx.feature_count();
    check_k(k, n)?;
    let mut current = Genome::zeros(n);
    let mut trace = Vec::with_capacity(k);
    for _ in 0..k {
        let candidates: Vec<usize> = (0..n).filter(|&f| !current.get(f)).collect();
        let scores = candidates
            .par_iter()
            .map(|&f| {
                let mut g = current.clone();
                g.set(f, true);
                Ok(ctx.score(&g)?.accuracy)
            })
            .collect::<Result<Vec<f64>>>()?;
        let best = (0..candidates.len()).fold(0, |b, i| if scores[i] > scores[b] { i } else { b });
        current.set(candidates[best], true);
        trace.push(scores[best]);
    }
    Ok((current, trace))
}

pub fn sfs(ctx: &EvaluationContext, k: usize) -> Result<Genome> {
    Ok(sfs_traced(ctx, k)?.0)
}

/// Recursive elimination by information gain on the training rows. Returns
/// the survivors and the removal order.
pub fn rfe_traced(train: &FeatureTable, k: usize) -> Result<(Genome, Vec<usize>)> {
    let n = train.col_count();
    check_k(k, n)?;
    let mut survivors: Vec<usize> = (0..n).collect();
    let mut removed = Vec::with_capacity(n - k);
    while survivors.len() > k {
        let gains: Vec<f64> = survivors
            .par_iter()
            .map(|&f| information_gain(&train.x().column(f), train.labels()))
            .collect();
        // minimum gain; ties remove the highest index
        let drop = (0..survivors.len()).fold(0, |w, i| if gains[i] <= gains[w] { i } else { w });
        removed.push(survivors.remove(drop));
    }
    Ok((Genome::from_indices(n, &survivors), removed))
}

pub fn rfe(ctx: &EvaluationContext, k: usize) -> Result<Genome> {
    Ok(rfe_traced(ctx.train(), k)?.0)
}

/// One baseline outcome: the chosen `k` with its test metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineResult {
    pub method: BaselineMethod,
    pub k: usize,
    /// Selected features; `None` for PCA, whose "size" counts components.
    pub genome: Option<Genome>,
    pub test: SubsetScore,
}

/// Runs `method` at one `k` and scores the final classifier on `test`.
pub fn run_baseline(
    method: BaselineMethod,
    ctx: &EvaluationContext,
    test: &FeatureTable,
    k: usize,
) -> Result<BaselineResult> {
    let cfg = ctx.classifier();
    let subset = |g: Genome| -> Result<BaselineResult> {
        let test_score = score_subset(&g.selected(), ctx.train(), test, cfg)?;
        Ok(BaselineResult { method, k, genome: Some(g), test: test_score })
    };
    match method {
        BaselineMethod::Sfs => subset(sfs(ctx, k)?),
        BaselineMethod::Rfe => subset(rfe(ctx, k)?),
        BaselineMethod::Basic => subset(Genome::ones(ctx.feature_count())),
        BaselineMethod::Pca => {
            let model = pca_fit(ctx.train(), k)?;
            let tr = pca_transform(ctx.train(), &model)?;
            let te = pca_transform(test, &model)?;
            let all: Vec<usize> = (0..k).collect();
            Ok(BaselineResult { method, k, genome: None, test: score_subset(&all, &tr, &te, cfg)? })
        }
    }
}

/// Tries every feasible `k` in `grid` and keeps the one with the highest
/// test accuracy (first maximal on ties). [`BaselineMethod::Basic`] ignores
/// the grid.
pub fn run_baseline_grid(
    method: BaselineMethod,
    ctx: &EvaluationContext,
    test: &FeatureTable,
    grid: &[usize],
) -> Result<BaselineResult> {
    if method == BaselineMethod::Basic {
        return run_baseline(method, ctx, test, ctx.feature_count());
    }
    let limit = match method {
        BaselineMethod::Pca => ctx.feature_count().min(ctx.train().row_count()),
        _ => ctx.feature_count(),
    };
    let feasible: Vec<usize> = grid
        .iter()
        .copied()
        .filter(|&k| {
            let ok = (1..=limit).contains(&k);
            if !ok {
                log::warn!("{method}: skipping k={k}, only {limit} available");
            }
            ok
        })
        .collect();
    if feasible.is_empty() {
        return Err(Error::Config(format!("{method}: no feasible k in {grid:?}")));
    }
    let results = feasible
        .par_iter()
        .map(|&k| run_baseline(method, ctx, test, k))
        .collect::<Result<Vec<_>>>()?;
    let best = (0..results.len()).fold(0, |b, i| {
        if results[i].test.accuracy > results[b].test.accuracy {
            i
        } else {
            b
        }
    });
    Ok(results.into_iter().nth(best).expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::TrainConfig;
    use crate::dataset::TableRole;
    use crate::objectives::Formulation;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    /// Feature 2 copies the label; features 0, 1 are noise.
    fn label_copy(rows: usize, seed: u64) -> FeatureTable {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut data = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..rows {
            let y: u8 = rng.gen_range(0..2);
            data.push(vec![rng.gen(), rng.gen(), f64::from(y)]);
            labels.push(y);
        }
        FeatureTable::from_rows(&data, labels).unwrap()
    }

    fn ctx(train: FeatureTable, val: FeatureTable) -> EvaluationContext {
        EvaluationContext::new(
            Arc::new(train),
            Arc::new(val.with_role(TableRole::Validation)),
            TrainConfig::default(),
            Formulation::Dr3,
        )
        .unwrap()
    }

    #[test]
    fn sfs_picks_the_predictive_feature_first() {
        let c = ctx(label_copy(200, 1), label_copy(100, 2));
        let (g, trace) = sfs_traced(&c, 1).unwrap();
        assert_eq!(g.selected(), vec![2]);
        assert_eq!(trace, vec![1.0]);
        // round one equals the exhaustive single-feature argmax
        let singles: Vec<f64> = (0..3).map(|f| c.score(&Genome::from_indices(3, &[f])).unwrap().accuracy).collect();
        let argmax = (0..3).fold(0, |b, i| if singles[i] > singles[b] { i } else { b });
        assert_eq!(g.selected(), vec![argmax]);
        assert_eq!(sfs(&c, 3).unwrap(), Genome::ones(3));
        assert!(sfs(&c, 0).is_err());
    }

    #[test]
    fn rfe_keeps_the_label_copy() {
        let t = label_copy(300, 3);
        let (g, removed) = rfe_traced(&t, 1).unwrap();
        assert_eq!(g.selected(), vec![2]);
        assert_eq!(removed.len(), 2);
        assert_eq!(rfe_traced(&t, 3).unwrap().1, Vec::<usize>::new());
    }

    #[test]
    fn rfe_ties_remove_highest_index() {
        // three constant columns: all gains zero
        let t = FeatureTable::from_rows(&[vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]], vec![0, 1]).unwrap();
        let (g, removed) = rfe_traced(&t, 1).unwrap();
        assert_eq!(removed, vec![2, 1]);
        assert_eq!(g.selected(), vec![0]);
    }

    #[test]
    fn grid_skips_infeasible_and_prefers_first_maximum() {
        let c = ctx(label_copy(200, 4), label_copy(100, 5));
        let test = label_copy(100, 6).with_role(TableRole::Test);
        // every k >= 1 containing feature 2 scores 1.0; only k <= 3 is feasible
        let r = run_baseline_grid(BaselineMethod::Sfs, &c, &test, &[1, 2, 3, 5]).unwrap();
        assert_eq!(r.k, 1);
        assert_eq!(r.test.accuracy, 1.0);
        assert!(run_baseline_grid(BaselineMethod::Rfe, &c, &test, &[5, 10]).is_err());
        let basic = run_baseline_grid(BaselineMethod::Basic, &c, &test, &K_GRID).unwrap();
        assert_eq!(basic.k, 3);
        let pca = run_baseline_grid(BaselineMethod::Pca, &c, &test, &[1, 2]).unwrap();
        assert!(pca.genome.is_none());
    }
}
