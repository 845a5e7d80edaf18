use rand::Rng;

use crate::error::Result;
use crate::genotype::{Genome, RngStream};
use crate::moea::sort::{crowding_distance, fast_nondominated_sort};
use crate::moea::{assign_rank_and_crowding, breed, evaluate_batch, Individual, SearchParams};
use crate::objectives::{EvaluationContext, ObjectiveVector};

/// Environmental selection: whole fronts first, the splitting front by
/// descending crowding distance (ties to the lower index). Returns the
/// chosen indices in ascending order.
pub fn nsga2_select(points: &[ObjectiveVector], target: usize) -> Result<Vec<usize>> {
    let fronts = fast_nondominated_sort(points)?;
    let mut chosen = Vec::with_capacity(target);
    for front in fronts {
        if chosen.len() + front.len() <= target {
            chosen.extend_from_slice(&front);
            if chosen.len() == target {
                break;
            }
            continue;
        }
        let members: Vec<&ObjectiveVector> = front.iter().map(|&i| &points[i]).collect();
        let dist = crowding_distance(&members);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(front[a].cmp(&front[b])));
        let room = target - chosen.len();
        chosen.extend(order.into_iter().take(room).map(|k| front[k]));
        break;
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Binary tournament on (rank, crowding), ties to the lower index.
pub(crate) fn crowded_tournament<R: Rng>(pop: &[Individual], rng: &mut R) -> usize {
    let a = rng.gen_range(0..pop.len());
    let b = rng.gen_range(0..pop.len());
    let key = |i: usize| (pop[i].rank.unwrap_or(usize::MAX), pop[i].crowding.unwrap_or(0.0));
    let (ra, ca) = key(a);
    let (rb, cb) = key(b);
    let a_wins = ra < rb || (ra == rb && (ca > cb || (ca == cb && a <= b)));
    if a_wins {
        a
    } else {
        b
    }
}

pub fn nsga2_generation(
    pop: &[Individual],
    ctx: &EvaluationContext,
    params: &SearchParams,
    seed: u64,
    generation: u64,
) -> Result<Vec<Individual>> {
    let mut pop = pop.to_vec();
    assign_rank_and_crowding(&mut pop)?;
    let p = pop.len();

    let mut rng = RngStream::new(seed, generation, 0).rng();
    let parents: Vec<&Genome> = (0..p)
        .map(|_| &pop[crowded_tournament(&pop, &mut rng)].genome)
        .collect();
    let children = breed(&parents, p, params, seed, generation, 1)?;
    let offspring = evaluate_batch(children, ctx)?;

    let mut combined = pop;
    combined.extend(offspring);
    let points: Vec<ObjectiveVector> = combined.iter().map(|i| i.objectives.clone()).collect();
    let keep = nsga2_select(&points, p)?;
    let mut next: Vec<Individual> = keep.into_iter().map(|i| combined[i].clone()).collect();
    assign_rank_and_crowding(&mut next)?;
    Ok(next)
}
