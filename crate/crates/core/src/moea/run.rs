use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genotype::{random_init, repair_empty, Genome, RngStream};
use crate::moea::ga::best_index;
use crate::moea::{
    assign_rank_and_crowding, das_dennis_points, default_divisions, evaluate_batch, ga_generation,
    moead_generation, nsga2_generation, nsga3_generation, Algorithm, ArchiveMember, Individual,
    MoeadState, ParetoArchive, SearchParams,
};
use crate::objectives::{EvaluationContext, Formulation};

/// Summary of the population after one generation (0 = initial).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressRecord {
    pub generation: usize,
    pub best_accuracy: f64,
    pub best_detection_rate: f64,
    pub min_size: usize,
    pub archive_size: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub archive: ParetoArchive,
    pub progress: Vec<ProgressRecord>,
    pub final_population: Vec<Individual>,
}

fn check_config(algorithm: Algorithm, formulation: Formulation, refs: Option<&[Vec<f64>]>) -> Result<()> {
    match algorithm {
        Algorithm::Ga if formulation != Formulation::Acc1 => Err(Error::Config(format!(
            "the single-objective GA needs the acc1 formulation, got {formulation}"
        ))),
        Algorithm::Nsga2 | Algorithm::Nsga3 | Algorithm::Moead if formulation.arity() < 2 => {
            Err(Error::Config(format!("{algorithm} needs at least two objectives, got {formulation}")))
        }
        _ => match refs.and_then(|r| r.first()) {
            Some(r) if r.len() != formulation.arity() => Err(Error::Config(format!(
                "reference points have dimension {}, {formulation} has {} objectives",
                r.len(),
                formulation.arity()
            ))),
            _ => Ok(()),
        },
    }
}

fn final_archive(algorithm: Algorithm, pop: &[Individual]) -> ParetoArchive {
    if algorithm == Algorithm::Ga {
        ParetoArchive::from_population(std::slice::from_ref(&pop[best_index(pop)]))
    } else {
        ParetoArchive::from_population(pop)
    }
}

fn progress(generation: usize, pop: &[Individual], algorithm: Algorithm) -> ProgressRecord {
    ProgressRecord {
        generation,
        best_accuracy: pop.iter().map(|i| i.score.accuracy).fold(f64::NEG_INFINITY, f64::max),
        best_detection_rate: pop
            .iter()
            .map(|i| i.score.detection_rate)
            .fold(f64::NEG_INFINITY, f64::max),
        min_size: pop.iter().map(|i| i.score.size).min().unwrap_or(0),
        archive_size: final_archive(algorithm, pop).len(),
    }
}

/// Runs `params.generations` generations of `algorithm` from a seeded
/// random population and returns the final non-dominated set.
pub fn run(
    algorithm: Algorithm,
    ctx: &EvaluationContext,
    params: &SearchParams,
    seed: u64,
) -> Result<RunOutput> {
    params.validate()?;
    let formulation = ctx.formulation();
    let m = formulation.arity();
    let refs = (algorithm == Algorithm::Nsga3).then(|| {
        let p = params
            .nsga3_divisions
            .unwrap_or_else(|| default_divisions(params.population, m));
        das_dennis_points(p, m)
    });
    check_config(algorithm, formulation, refs.as_deref())?;

    let body = || search(algorithm, ctx, params, refs.as_deref(), seed);
    if params.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(params.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", params.workers)))?;
        pool.install(body)
    } else {
        body()
    }
}

fn search(
    algorithm: Algorithm,
    ctx: &EvaluationContext,
    params: &SearchParams,
    refs: Option<&[Vec<f64>]>,
    seed: u64,
) -> Result<RunOutput> {
    let n = ctx.feature_count();
    let genomes = (0..params.population)
        .map(|i| {
            let mut rng = RngStream::new(seed, 0, i as u64).rng();
            let g = random_init(n, &mut rng)?;
            Ok(repair_empty(&g, &mut rng))
        })
        .collect::<Result<Vec<Genome>>>()?;
    let mut pop = evaluate_batch(genomes, ctx)?;
    if algorithm != Algorithm::Ga {
        assign_rank_and_crowding(&mut pop)?;
    }

    let mut external = params.external_archive.then(|| final_archive(algorithm, &pop));
    let mut trace = vec![progress(0, &pop, algorithm)];
    let mut moead = if algorithm == Algorithm::Moead {
        Some(MoeadState::new(pop.clone(), params.moead_neighbors)?)
    } else {
        None
    };

    for gen in 1..=params.generations {
        let g = gen as u64;
        pop = match algorithm {
            Algorithm::Nsga2 => nsga2_generation(&pop, ctx, params, seed, g)?,
            Algorithm::Nsga3 => nsga3_generation(&pop, ctx, params, refs.expect("reference points"), seed, g)?,
            Algorithm::Ga => ga_generation(&pop, ctx, params, seed, g)?,
            Algorithm::Moead => {
                let state = moead.as_mut().expect("moead state");
                moead_generation(state, ctx, params, seed, g)?;
                state.population.clone()
            }
        };
        if let Some(archive) = external.as_mut() {
            for member in final_archive(algorithm, &pop).into_members() {
                archive.insert(member);
            }
        }
        trace.push(progress(gen, &pop, algorithm));
    }

    let archive = match external {
        Some(a) if algorithm == Algorithm::Ga => {
            // keep only the best individual ever seen
            let best = a.members().iter().fold(None::<&ArchiveMember>, |acc, m| match acc {
                Some(b) if b.objectives.0[0] >= m.objectives.0[0] => Some(b),
                _ => Some(m),
            });
            let mut out = ParetoArchive::new();
            if let Some(b) = best {
                out.insert(b.clone());
            }
            out
        }
        Some(a) => a,
        None => final_archive(algorithm, &pop),
    };
    Ok(RunOutput {
        archive,
        progress: trace,
        final_population: pop,
    })
}
