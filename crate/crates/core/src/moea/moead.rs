use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genotype::RngStream;
use crate::moea::nsga3::{binomial, das_dennis_points};
use crate::moea::{evaluate_batch, vary, Individual, SearchParams};
use crate::objectives::{EvaluationContext, ObjectiveVector};

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Exactly `count` weight vectors on the unit simplex.
///
/// Two objectives use the evenly spaced lattice with `count − 1` divisions.
/// Otherwise the smallest lattice with at least `count` points is thinned by
/// greedy max-min distance, seeded with the corners (ties to the lowest
/// lattice index).
pub fn weight_vectors(count: usize, dim: usize) -> Result<Vec<Vec<f64>>> {
    if count == 0 || dim == 0 {
        return Err(Error::arg("weight vectors need a positive count and dimension"));
    }
    if dim == 1 {
        return Ok(vec![vec![1.0]; count]);
    }
    if dim == 2 {
        if count == 1 {
            return Ok(vec![vec![0.5, 0.5]]);
        }
        return Ok(das_dennis_points(count - 1, 2));
    }
    let divisions = (1..)
        .find(|&p| binomial(p + dim - 1, dim - 1) >= count)
        .expect("lattice grows without bound");
    let lattice = das_dennis_points(divisions, dim);
    if lattice.len() == count {
        return Ok(lattice);
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    for axis in 0..dim {
        if chosen.len() == count {
            break;
        }
        let corner = lattice
            .iter()
            .position(|w| w[axis] == 1.0)
            .expect("lattice contains every corner");
        chosen.push(corner);
    }
    let mut nearest: Vec<f64> = lattice
        .iter()
        .map(|w| chosen.iter().map(|&c| sq_dist(w, &lattice[c])).fold(f64::INFINITY, f64::min))
        .collect();
    while chosen.len() < count {
        let next = (0..lattice.len())
            .filter(|i| !chosen.contains(i))
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if nearest[b] >= nearest[i] => Some(b),
                _ => Some(i),
            })
            .expect("lattice larger than count");
        chosen.push(next);
        for (i, w) in lattice.iter().enumerate() {
            nearest[i] = nearest[i].min(sq_dist(w, &lattice[next]));
        }
    }
    chosen.sort_unstable();
    Ok(chosen.into_iter().map(|i| lattice[i].clone()).collect())
}

/// For each weight, the indices of its `t` nearest weights (itself first),
/// ordered by Euclidean distance with ties to the lower index.
pub fn neighborhoods(weights: &[Vec<f64>], t: usize) -> Vec<Vec<usize>> {
    let t = t.min(weights.len());
    weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let mut order: Vec<usize> = (0..weights.len()).collect();
            order.sort_by(|&a, &b| {
                let da = if a == i { -1.0 } else { sq_dist(w, &weights[a]) };
                let db = if b == i { -1.0 } else { sq_dist(w, &weights[b]) };
                da.total_cmp(&db).then(a.cmp(&b))
            });
            order.truncate(t);
            order
        })
        .collect()
}

/// Weighted Tchebycheff distance to the ideal point (smaller is better).
/// Zero weights are lifted to 1e-6 so no objective is ignored outright.
pub fn tchebycheff(objectives: &ObjectiveVector, weight: &[f64], ideal: &IdealPoint) -> Result<f64> {
    let m = objectives.arity();
    if weight.len() != m || ideal.0.len() != m {
        return Err(Error::arg(format!(
            "tchebycheff arity mismatch: objectives {m}, weight {}, ideal {}",
            weight.len(),
            ideal.0.len()
        )));
    }
    Ok(objectives
        .0
        .iter()
        .zip(weight)
        .zip(&ideal.0)
        .map(|((f, &w), z)| if w == 0.0 { 1e-6 } else { w } * (z - f).abs())
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Best value seen so far on every objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealPoint(pub Vec<f64>);

impl IdealPoint {
    pub fn from_population(pop: &[Individual]) -> Self {
        let m = pop.first().map_or(0, |i| i.objectives.arity());
        let mut z = IdealPoint(vec![f64::NEG_INFINITY; m]);
        for ind in pop {
            z.update(&ind.objectives);
        }
        z
    }

    pub fn update(&mut self, f: &ObjectiveVector) {
        for (z, v) in self.0.iter_mut().zip(&f.0) {
            if *v > *z {
                *z = *v;
            }
        }
    }
}

/// One incumbent per weight vector plus the decomposition bookkeeping.
#[derive(Debug, Clone)]
pub struct MoeadState {
    pub population: Vec<Individual>,
    pub weights: Vec<Vec<f64>>,
    pub neighbors: Vec<Vec<usize>>,
    pub ideal: IdealPoint,
}

impl MoeadState {
    pub fn new(population: Vec<Individual>, neighbor_count: usize) -> Result<Self> {
        let m = population
            .first()
            .ok_or_else(|| Error::arg("MOEA/D needs a non-empty population"))?
            .objectives
            .arity();
        let weights = weight_vectors(population.len(), m)?;
        let neighbors = neighborhoods(&weights, neighbor_count);
        let ideal = IdealPoint::from_population(&population);
        Ok(MoeadState {
            population,
            weights,
            neighbors,
            ideal,
        })
    }
}

/// One sweep over all subproblems. Subproblem `i` draws two distinct
/// neighbours as parents, evaluates the first child, refreshes the ideal
/// point and replaces every neighbour the child strictly improves on.
pub fn moead_generation(
    state: &mut MoeadState,
    ctx: &EvaluationContext,
    params: &SearchParams,
    seed: u64,
    generation: u64,
) -> Result<()> {
    for i in 0..state.population.len() {
        let mut rng = RngStream::new(seed, generation, i as u64).rng();
        let hood = &state.neighbors[i];
        let (a, b) = if hood.len() < 2 {
            (i, i)
        } else {
            let a = rng.gen_range(0..hood.len());
            let mut b = rng.gen_range(0..hood.len() - 1);
            if b >= a {
                b += 1;
            }
            (hood[a], hood[b])
        };
        let (child, _) = vary(
            &state.population[a].genome,
            &state.population[b].genome,
            params,
            &mut rng,
        )?;
        let child = evaluate_batch(vec![child], ctx)?.pop().expect("one child");
        state.ideal.update(&child.objectives);
        for &j in &state.neighbors[i] {
            let w = &state.weights[j];
            let new = tchebycheff(&child.objectives, w, &state.ideal)?;
            let old = tchebycheff(&state.population[j].objectives, w, &state.ideal)?;
            if new < old {
                state.population[j] = child.clone();
            }
        }
    }
    Ok(())
}
