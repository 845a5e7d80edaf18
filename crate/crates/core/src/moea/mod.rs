//! Search engines over feature-subset genomes: NSGA-II, NSGA-III, MOEA/D
//! and a single-objective GA, plus the sorting, niching and archive
//! machinery they share.
//!
//! Randomness comes only from [`RngStream`]s keyed by the run seed, the
//! generation and a slot, and wrapper evaluation is deterministic, so a run
//! is reproducible regardless of how many threads evaluate offspring.

mod archive;
mod ga;
mod hypervolume;
mod moead;
mod nsga2;
mod nsga3;
mod run;
mod sort;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genotype::{bitflip_mutation, repair_empty, uniform_crossover, Genome};
use crate::objectives::{EvaluationContext, ObjectiveVector, SubsetScore};

pub use archive::{ArchiveMember, ParetoArchive};
pub use ga::ga_generation;
pub use hypervolume::hypervolume;
pub use moead::{
    moead_generation, neighborhoods, tchebycheff, weight_vectors, IdealPoint, MoeadState,
};
pub use nsga2::{nsga2_generation, nsga2_select};
pub use nsga3::{das_dennis_points, default_divisions, nsga3_generation, nsga3_select, NicheSelection};
pub use run::{run, ProgressRecord, RunOutput};
pub use sort::{assign_rank_and_crowding, crowding_distance, fast_nondominated_sort};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genome: Genome,
    pub objectives: ObjectiveVector,
    pub score: SubsetScore,
    pub rank: Option<usize>,
    pub crowding: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nsga2,
    Nsga3,
    Moead,
    Ga,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Nsga3 => "nsga3",
            Algorithm::Moead => "moead",
            Algorithm::Ga => "ga",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '/'], "").as_str() {
            "nsga2" | "nsgaii" => Ok(Algorithm::Nsga2),
            "nsga3" | "nsgaiii" => Ok(Algorithm::Nsga3),
            "moead" => Ok(Algorithm::Moead),
            "ga" => Ok(Algorithm::Ga),
            other => Err(Error::Config(format!("unknown search algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchParams {
    pub population: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    /// Das–Dennis divisions for NSGA-III; derived from the population size
    /// and objective count when unset.
    pub nsga3_divisions: Option<usize>,
    pub moead_neighbors: usize,
    /// Keep every non-dominated solution seen in any generation instead of
    /// only the final population's.
    pub external_archive: bool,
    /// Evaluation threads; 0 uses the global rayon pool.
    pub workers: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            population: 100,
            generations: 500,
            crossover_prob: 0.9,
            mutation_prob: 1.0,
            nsga3_divisions: None,
            moead_neighbors: 20,
            external_archive: false,
            workers: 0,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::Config("population must hold at least 2 individuals".into()));
        }
        for (name, p) in [("crossover_prob", self.crossover_prob), ("mutation_prob", self.mutation_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if self.moead_neighbors == 0 {
            return Err(Error::Config("moead_neighbors must be positive".into()));
        }
        if self.nsga3_divisions == Some(0) {
            return Err(Error::Config("nsga3_divisions must be positive".into()));
        }
        Ok(())
    }
}

/// Evaluates genomes in parallel, preserving input order.
pub(crate) fn evaluate_batch(genomes: Vec<Genome>, ctx: &EvaluationContext) -> Result<Vec<Individual>> {
    genomes
        .into_par_iter()
        .map(|genome| {
            let score = ctx.score(&genome)?;
            Ok(Individual {
                objectives: ctx.formulation().objectives(&score),
                genome,
                score,
                rank: None,
                crowding: None,
            })
        })
        .collect()
}

/// Crossover with probability `p_c` (else copies), then each child mutated
/// with probability `p_m`, then empty-subset repair.
pub(crate) fn vary<R: Rng>(
    p1: &Genome,
    p2: &Genome,
    params: &SearchParams,
    rng: &mut R,
) -> Result<(Genome, Genome)> {
    let (mut c1, mut c2) = if rng.gen_bool(params.crossover_prob) {
        uniform_crossover(p1, p2, rng)?
    } else {
        (p1.clone(), p2.clone())
    };
    if rng.gen_bool(params.mutation_prob) {
        c1 = bitflip_mutation(&c1, rng);
    }
    if rng.gen_bool(params.mutation_prob) {
        c2 = bitflip_mutation(&c2, rng);
    }
    Ok((repair_empty(&c1, rng), repair_empty(&c2, rng)))
}

/// Builds `count` offspring from consecutive parent pairs; pair `k` draws
/// from stream slot `slot_base + k`.
pub(crate) fn breed(
    parents: &[&Genome],
    count: usize,
    params: &SearchParams,
    seed: u64,
    generation: u64,
    slot_base: u64,
) -> Result<Vec<Genome>> {
    let mut children = Vec::with_capacity(count + 1);
    let mut k = 0;
    while children.len() < count {
        let a = parents[(2 * k) % parents.len()];
        let b = parents[(2 * k + 1) % parents.len()];
        let mut rng = crate::genotype::RngStream::new(seed, generation, slot_base + k as u64).rng();
        let (c1, c2) = vary(a, b, params, &mut rng)?;
        children.push(c1);
        children.push(c2);
        k += 1;
    }
    children.truncate(count);
    Ok(children)
}
