use crate::error::{Error, Result};
use crate::moea::Individual;
use crate::objectives::{dominates_slice, ObjectiveVector};

/// Deb's fast non-dominated sort (maximization). Front 0 is the
/// non-dominated set; indices inside a front are ascending.
pub fn fast_nondominated_sort(points: &[ObjectiveVector]) -> Result<Vec<Vec<usize>>> {
    let n = points.len();
    if let Some(first) = points.first() {
        if points.iter().any(|p| p.arity() != first.arity()) {
            return Err(Error::arg("objective vectors differ in arity"));
        }
    }
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates_slice(&points[i].0, &points[j].0) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if dominates_slice(&points[j].0, &points[i].0) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    Ok(fronts)
}

/// Crowding distance of each member of one front.
///
/// Per objective the front is sorted (stable, by index on ties); the two
/// extremes get +∞ and interior members add the normalized gap between
/// their neighbours. Objectives with zero range contribute nothing.
pub fn crowding_distance(front: &[&ObjectiveVector]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].arity();
    let mut dist = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| front[a].0[k].total_cmp(&front[b].0[k]).then(a.cmp(&b)));
        let lo = front[order[0]].0[k];
        let hi = front[order[n - 1]].0[k];
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        for w in 1..n - 1 {
            let gap = front[order[w + 1]].0[k] - front[order[w - 1]].0[k];
            dist[order[w]] += gap / range;
        }
    }
    dist
}

/// Fills `rank` and `crowding` for every individual.
pub fn assign_rank_and_crowding(pop: &mut [Individual]) -> Result<Vec<Vec<usize>>> {
    let objs: Vec<ObjectiveVector> = pop.iter().map(|i| i.objectives.clone()).collect();
    let fronts = fast_nondominated_sort(&objs)?;
    for (r, front) in fronts.iter().enumerate() {
        let members: Vec<&ObjectiveVector> = front.iter().map(|&i| &objs[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&members)) {
            pop[i].rank = Some(r);
            pop[i].crowding = Some(d);
        }
    }
    Ok(fronts)
}
