use rand::Rng;

use crate::error::{Error, Result};
use crate::genotype::{Genome, RngStream};
use crate::moea::sort::fast_nondominated_sort;
use crate::moea::{assign_rank_and_crowding, breed, evaluate_batch, Individual, SearchParams};
use crate::objectives::{EvaluationContext, ObjectiveVector};

/// All simplex-lattice points with coordinates `k/divisions` summing to 1.
pub fn das_dennis_points(divisions: usize, dim: usize) -> Vec<Vec<f64>> {
    fn recurse(left: usize, dim: usize, divisions: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() == dim - 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&k| k as f64 / divisions as f64).collect());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            recurse(left - k, dim, divisions, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 || divisions == 0 {
        return out;
    }
    recurse(divisions, dim, divisions, &mut Vec::with_capacity(dim), &mut out);
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k.min(n));
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Divisions giving at least `population` reference points: `P − 1` for two
/// objectives (exactly `P` points), otherwise the smallest sufficient lattice
/// (13 for three objectives and `P = 100`).
pub fn default_divisions(population: usize, dim: usize) -> usize {
    if dim <= 2 {
        return population.saturating_sub(1).max(1);
    }
    (1..)
        .find(|&p| binomial(p + dim - 1, dim - 1) >= population)
        .expect("lattice grows without bound")
}

/// Outcome of reference-point niching, kept for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct NicheSelection {
    /// Chosen candidate indices, ascending.
    pub selected: Vec<usize>,
    /// Members of the front that had to be split (empty if none).
    pub last_front: Vec<usize>,
    /// Reference direction and perpendicular distance per candidate; `None`
    /// for candidates outside the considered fronts.
    pub association: Vec<Option<(usize, f64)>>,
    /// Final number of selected members associated with each direction.
    pub niche_counts: Vec<usize>,
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Intercepts of the hyperplane through the extreme points of `translated`
/// (minimization form, ideal at the origin); per-axis maxima when that
/// system is singular or yields a non-positive intercept.
fn intercepts(translated: &[Vec<f64>]) -> Vec<f64> {
    let m = translated[0].len();
    let extremes: Vec<Vec<f64>> = (0..m)
        .map(|axis| {
            let asf = |t: &Vec<f64>| {
                t.iter()
                    .enumerate()
                    .map(|(k, v)| v / if k == axis { 1.0 } else { 1e-6 })
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            let best = (0..translated.len())
                .min_by(|&a, &b| asf(&translated[a]).total_cmp(&asf(&translated[b])).then(a.cmp(&b)))
                .expect("non-empty");
            translated[best].clone()
        })
        .collect();
    let from_plane = solve(extremes, vec![1.0; m]).and_then(|a| {
        let icpt: Vec<f64> = a.iter().map(|v| 1.0 / v).collect();
        icpt.iter().all(|&v| v.is_finite() && v > 1e-6).then_some(icpt)
    });
    from_plane.unwrap_or_else(|| {
        (0..m)
            .map(|k| {
                let hi = translated.iter().map(|t| t[k]).fold(0.0, f64::max);
                if hi > 1e-12 {
                    hi
                } else {
                    1.0
                }
            })
            .collect()
    })
}

fn perpendicular_distance(point: &[f64], direction: &[f64]) -> f64 {
    let dd: f64 = direction.iter().map(|w| w * w).sum();
    let proj: f64 = point.iter().zip(direction).map(|(p, w)| p * w).sum::<f64>() / dd;
    point
        .iter()
        .zip(direction)
        .map(|(p, w)| (p - proj * w).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// NSGA-III environmental selection of `target` candidates.
pub fn nsga3_select<R: Rng>(
    points: &[ObjectiveVector],
    target: usize,
    refs: &[Vec<f64>],
    rng: &mut R,
) -> Result<NicheSelection> {
    let fronts = fast_nondominated_sort(points)?;
    let mut fixed: Vec<usize> = Vec::new();
    let mut last_front: Vec<usize> = Vec::new();
    for front in fronts {
        if fixed.len() + front.len() <= target {
            fixed.extend_from_slice(&front);
            if fixed.len() == target {
                break;
            }
        } else {
            last_front = front;
            break;
        }
    }

    let mut association = vec![None; points.len()];
    let mut niche_counts = vec![0usize; refs.len()];
    if last_front.is_empty() {
        fixed.sort_unstable();
        return Ok(NicheSelection {
            selected: fixed,
            last_front,
            association,
            niche_counts,
        });
    }
    if let Some(r) = refs.first() {
        if r.len() != points[0].arity() {
            return Err(Error::Config(format!(
                "reference points have dimension {}, objectives {}",
                r.len(),
                points[0].arity()
            )));
        }
    } else {
        return Err(Error::Config("no reference points".into()));
    }

    // Minimization form, translated so the ideal point is the origin.
    let considered: Vec<usize> = fixed.iter().chain(&last_front).copied().collect();
    let m = points[0].arity();
    let ideal: Vec<f64> = (0..m)
        .map(|k| considered.iter().map(|&i| -points[i].0[k]).fold(f64::INFINITY, f64::min))
        .collect();
    let translated: Vec<Vec<f64>> = considered
        .iter()
        .map(|&i| (0..m).map(|k| -points[i].0[k] - ideal[k]).collect())
        .collect();
    let icpt = intercepts(&translated);
    for (t, &i) in translated.iter().zip(&considered) {
        let normalized: Vec<f64> = t.iter().zip(&icpt).map(|(v, a)| v / a).collect();
        let (best_ref, best_d) = refs
            .iter()
            .enumerate()
            .map(|(j, r)| (j, perpendicular_distance(&normalized, r)))
            .fold((0, f64::INFINITY), |acc, (j, d)| if d < acc.1 { (j, d) } else { acc });
        association[i] = Some((best_ref, best_d));
    }
    for &i in &fixed {
        niche_counts[association[i].expect("associated").0] += 1;
    }

    let mut pool: Vec<Vec<usize>> = vec![Vec::new(); refs.len()];
    for &i in &last_front {
        pool[association[i].expect("associated").0].push(i);
    }
    let mut selected = fixed;
    while selected.len() < target {
        let min_count = (0..refs.len())
            .filter(|&j| !pool[j].is_empty())
            .map(|j| niche_counts[j])
            .min()
            .ok_or_else(|| Error::Internal("niching ran out of candidates".into()))?;
        let tied: Vec<usize> = (0..refs.len())
            .filter(|&j| !pool[j].is_empty() && niche_counts[j] == min_count)
            .collect();
        let j = tied[rng.gen_range(0..tied.len())];
        let pick = if niche_counts[j] == 0 {
            (0..pool[j].len())
                .min_by(|&a, &b| {
                    let da = association[pool[j][a]].expect("associated").1;
                    let db = association[pool[j][b]].expect("associated").1;
                    da.total_cmp(&db).then(pool[j][a].cmp(&pool[j][b]))
                })
                .expect("non-empty pool")
        } else {
            rng.gen_range(0..pool[j].len())
        };
        selected.push(pool[j].remove(pick));
        niche_counts[j] += 1;
    }
    selected.sort_unstable();
    Ok(NicheSelection {
        selected,
        last_front,
        association,
        niche_counts,
    })
}

pub fn nsga3_generation(
    pop: &[Individual],
    ctx: &EvaluationContext,
    params: &SearchParams,
    refs: &[Vec<f64>],
    seed: u64,
    generation: u64,
) -> Result<Vec<Individual>> {
    let p = pop.len();
    let mut rng = RngStream::new(seed, generation, 0).rng();
    let parents: Vec<&Genome> = (0..p).map(|_| &pop[rng.gen_range(0..p)].genome).collect();
    let children = breed(&parents, p, params, seed, generation, 1)?;
    let offspring = evaluate_batch(children, ctx)?;

    let mut combined = pop.to_vec();
    combined.extend(offspring);
    let points: Vec<ObjectiveVector> = combined.iter().map(|i| i.objectives.clone()).collect();
    let mut niche_rng = RngStream::new(seed, generation, u64::MAX).rng();
    let chosen = nsga3_select(&points, p, refs, &mut niche_rng)?;
    let mut next: Vec<Individual> = chosen.selected.into_iter().map(|i| combined[i].clone()).collect();
    assign_rank_and_crowding(&mut next)?;
    Ok(next)
}
