//! Split-quality measures shared by CART and RFE.

use crate::dataset::Matrix;
use crate::error::{Error, Result};

/// `1 − p0² − p1²`.
pub fn gini_impurity(counts: [usize; 2]) -> Result<f64> {
    let total = counts[0] + counts[1];
    if total == 0 {
        return Err(Error::arg("gini impurity of an empty node"));
    }
    let p0 = counts[0] as f64 / total as f64;
    let p1 = counts[1] as f64 / total as f64;
    Ok(1.0 - p0 * p0 - p1 * p1)
}

/// Shannon entropy in bits; zero for an empty node.
pub fn entropy(counts: [usize; 2]) -> f64 {
    let total = (counts[0] + counts[1]) as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// Node size times its Gini impurity, computed from counts so that equal
/// count pairs always give bit-identical scores.
#[inline]
pub(crate) fn gini_mass(c0: usize, c1: usize) -> f64 {
    let n = (c0 + c1) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let (a, b) = (c0 as f64, c1 as f64);
    n - (a * a + b * b) / n
}

#[inline]
pub(crate) fn entropy_mass(c0: usize, c1: usize) -> f64 {
    (c0 + c1) as f64 * entropy([c0, c1])
}

/// Threshold halfway between two consecutive distinct values, kept strictly
/// below `hi` so that `x <= t` separates them.
#[inline]
pub(crate) fn midpoint(lo: f64, hi: f64) -> f64 {
    let t = lo + (hi - lo) / 2.0;
    if t >= hi {
        lo
    } else {
        t
    }
}

/// Sweeps one feature's sorted order and returns the lowest-scoring
/// threshold as `(score_mass, threshold)`. `score` maps left and right class
/// counts to an additive impurity mass. Ties keep the lowest threshold.
pub(crate) fn scan_sorted<V, L, S>(
    order: &[u32],
    value: V,
    label: L,
    totals: [usize; 2],
    score: S,
) -> Option<(f64, f64)>
where
    V: Fn(u32) -> f64,
    L: Fn(u32) -> u8,
    S: Fn([usize; 2], [usize; 2]) -> f64,
{
    let mut left = [0usize; 2];
    let mut best: Option<(f64, f64)> = None;
    for i in 0..order.len().saturating_sub(1) {
        left[label(order[i]) as usize] += 1;
        let (a, b) = (value(order[i]), value(order[i + 1]));
        if a < b {
            let right = [totals[0] - left[0], totals[1] - left[1]];
            let s = score(left, right);
            if best.map_or(true, |(bs, _)| s < bs) {
                best = Some((s, midpoint(a, b)));
            }
        }
    }
    best
}

pub(crate) fn sorted_order(x: &Matrix, feature: usize) -> Vec<u32> {
    let mut order: Vec<u32> = (0..x.rows() as u32).collect();
    order.sort_by(|&a, &b| {
        x.get(a as usize, feature)
            .total_cmp(&x.get(b as usize, feature))
    });
    order
}

fn class_counts(labels: &[u8]) -> [usize; 2] {
    let ones = labels.iter().filter(|&&l| l == 1).count();
    [labels.len() - ones, ones]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    pub threshold: f64,
    pub weighted_gini: f64,
}

/// Best Gini split of the rows of `x` over `candidate_features`.
///
/// Thresholds are midpoints between consecutive distinct values. Returns
/// `None` when no split strictly lowers the weighted impurity. Ties go to
/// the lowest feature index, then the lowest threshold.
pub fn best_split(x: &Matrix, labels: &[u8], candidate_features: &[usize]) -> Option<SplitCandidate> {
    let totals = class_counts(labels);
    let n = labels.len();
    if n < 2 {
        return None;
    }
    let parent = gini_mass(totals[0], totals[1]);
    let mut features = candidate_features.to_vec();
    features.sort_unstable();
    let mut best: Option<(f64, usize, f64)> = None;
    for f in features {
        let order = sorted_order(x, f);
        let found = scan_sorted(
            &order,
            |r| x.get(r as usize, f),
            |r| labels[r as usize],
            totals,
            |l, r| gini_mass(l[0], l[1]) + gini_mass(r[0], r[1]),
        );
        if let Some((mass, thr)) = found {
            if best.map_or(true, |(bm, _, _)| mass < bm) {
                best = Some((mass, f, thr));
            }
        }
    }
    match best {
        Some((mass, feature, threshold)) if mass < parent - 1e-12 => Some(SplitCandidate {
            feature,
            threshold,
            weighted_gini: mass / n as f64,
        }),
        _ => None,
    }
}

/// Label entropy minus the weighted child entropy at the feature's best
/// single threshold.
pub fn information_gain(column: &[f64], labels: &[u8]) -> f64 {
    let n = labels.len();
    if n < 2 || column.len() != n {
        return 0.0;
    }
    let totals = class_counts(labels);
    let parent = entropy(totals);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| column[a as usize].total_cmp(&column[b as usize]));
    let best = scan_sorted(
        &order,
        |r| column[r as usize],
        |r| labels[r as usize],
        totals,
        |l, r| entropy_mass(l[0], l[1]) + entropy_mass(r[0], r[1]),
    );
    match best {
        Some((mass, _)) => (parent - mass / n as f64).max(0.0),
        None => 0.0,
    }
}
