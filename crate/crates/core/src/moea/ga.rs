use rand::Rng;

use crate::error::Result;
use crate::genotype::{Genome, RngStream};
use crate::moea::{breed, evaluate_batch, Individual, SearchParams};
use crate::objectives::EvaluationContext;

fn fitness(ind: &Individual) -> f64 {
    ind.objectives.0[0]
}

/// Index of the fittest individual, ties to the lower index.
pub(crate) fn best_index(pop: &[Individual]) -> usize {
    (0..pop.len())
        .fold(0, |best, i| if fitness(&pop[i]) > fitness(&pop[best]) { i } else { best })
}

/// Single-objective generational GA step with one elite.
pub fn ga_generation(
    pop: &[Individual],
    ctx: &EvaluationContext,
    params: &SearchParams,
    seed: u64,
    generation: u64,
) -> Result<Vec<Individual>> {
    let p = pop.len();
    let mut rng = RngStream::new(seed, generation, 0).rng();
    let parents: Vec<&Genome> = (0..p)
        .map(|_| {
            let a = rng.gen_range(0..p);
            let b = rng.gen_range(0..p);
            let fa = fitness(&pop[a]);
            let fb = fitness(&pop[b]);
            if fa > fb || (fa == fb && a <= b) {
                &pop[a].genome
            } else {
                &pop[b].genome
            }
        })
        .collect();
    let children = breed(&parents, p - 1, params, seed, generation, 1)?;
    let mut next = Vec::with_capacity(p);
    next.push(pop[best_index(pop)].clone());
    next.extend(evaluate_batch(children, ctx)?);
    Ok(next)
}
