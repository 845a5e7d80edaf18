use crate::error::{Error, Result};
use crate::objectives::{dominates_slice, ObjectiveVector};

/// Volume dominated by `points` and bounded below by `reference`
/// (maximization). Supports two and three objectives.
pub fn hypervolume(points: &[ObjectiveVector], reference: &[f64]) -> Result<f64> {
    let m = reference.len();
    if !(2..=3).contains(&m) {
        return Err(Error::arg(format!("hypervolume supports 2 or 3 objectives, got {m}")));
    }
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if p.arity() != m {
            return Err(Error::arg("point and reference arity differ"));
        }
        if !dominates_slice(&p.0, reference) {
            return Err(Error::arg(format!(
                "point {:?} does not dominate the reference {:?}",
                p.0, reference
            )));
        }
        pts.push(p.0.iter().zip(reference).map(|(v, r)| v - r).collect());
    }
    Ok(if m == 2 { area(&pts) } else { volume(&pts) })
}

/// Points shifted so the reference is the origin, all coordinates positive.
fn area(pts: &[Vec<f64>]) -> f64 {
    let mut sorted: Vec<&Vec<f64>> = pts.iter().collect();
    sorted.sort_by(|a, b| b[0].total_cmp(&a[0]).then(b[1].total_cmp(&a[1])));
    let mut total = 0.0;
    let mut top = 0.0;
    for p in sorted {
        if p[1] > top {
            total += p[0] * (p[1] - top);
            top = p[1];
        }
    }
    total
}

fn volume(pts: &[Vec<f64>]) -> f64 {
    let front: Vec<&Vec<f64>> = pts
        .iter()
        .filter(|p| !pts.iter().any(|q| dominates_slice(q, p)))
        .collect();
    let mut levels: Vec<f64> = front.iter().map(|p| p[2]).collect();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    let mut total = 0.0;
    for (k, &z) in levels.iter().enumerate() {
        let below = levels.get(k + 1).copied().unwrap_or(0.0);
        let slice: Vec<Vec<f64>> = front.iter().filter(|p| p[2] >= z).map(|p| p[..2].to_vec()).collect();
        total += area(&slice) * (z - below);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector(v.to_vec())
    }

    #[test]
    fn boxes() {
        assert_eq!(hypervolume(&[ov(&[2.0, 3.0])], &[0.0, 0.0]).unwrap(), 6.0);
        let two = [ov(&[1.0, 2.0]), ov(&[2.0, 1.0])];
        assert_eq!(hypervolume(&two, &[0.0, 0.0]).unwrap(), 3.0);
        assert_eq!(hypervolume(&[ov(&[1.0, 2.0, 3.0])], &[0.0, 0.0, 0.0]).unwrap(), 6.0);
        let three = [ov(&[2.0, 1.0, 1.0]), ov(&[1.0, 2.0, 1.0]), ov(&[1.0, 1.0, 2.0])];
        assert_eq!(hypervolume(&three, &[0.0, 0.0, 0.0]).unwrap(), 4.0);
        let pair = [ov(&[1.0, 0.5]), ov(&[0.5, 1.0])];
        assert_eq!(hypervolume(&pair, &[0.0, 0.0]).unwrap(), 0.75);
        let with_dominated = [ov(&[1.0, 0.5]), ov(&[0.5, 1.0]), ov(&[0.4, 0.4])];
        assert_eq!(hypervolume(&with_dominated, &[0.0, 0.0]).unwrap(), 0.75);
        assert_eq!(hypervolume(&[ov(&[0.0, 1.0])], &[0.0, 0.0]).unwrap(), 0.0);
        assert!(hypervolume(&[ov(&[-1.0, 1.0])], &[0.0, 0.0]).is_err());
        assert_eq!(hypervolume(&[], &[0.0, 0.0]).unwrap(), 0.0);
    }

    /// Monte-Carlo-free grid oracle on integer points.
    fn grid_volume(pts: &[Vec<i32>]) -> f64 {
        let mut count = 0;
        for x in 0..6 {
            for y in 0..6 {
                for z in 0..6 {
                    if pts.iter().any(|p| p[0] > x && p[1] > y && p[2] > z) {
                        count += 1;
                    }
                }
            }
        }
        count as f64
    }

    proptest! {
        #[test]
        fn matches_unit_cell_count(raw in prop::collection::vec(prop::collection::vec(1i32..=6, 3), 1..8)) {
            let pts: Vec<ObjectiveVector> = raw.iter().map(|p| ov(&p.iter().map(|&v| v as f64).collect::<Vec<_>>())).collect();
            let hv = hypervolume(&pts, &[0.0, 0.0, 0.0]).unwrap();
            prop_assert!((hv - grid_volume(&raw)).abs() < 1e-9);
        }
    }
}
