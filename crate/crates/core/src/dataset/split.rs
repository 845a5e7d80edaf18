use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train_rows: Vec<usize>,
    pub validation_rows: Vec<usize>,
    pub seed: u64,
}

/// Holds out a uniformly random `fraction` of `row_count` rows (rounded
/// down) for validation. Both index lists come back sorted.
pub fn split_validation(row_count: usize, fraction: f64, seed: u64) -> Result<SplitIndices> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::arg(format!("validation fraction {fraction} not in (0, 1)")));
    }
    let n_val = ((row_count as f64) * fraction + 1e-9).floor() as usize;
    let mut idx: Vec<usize> = (0..row_count).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    idx.shuffle(&mut rng);
    let mut validation_rows = idx[..n_val].to_vec();
    let mut train_rows = idx[n_val..].to_vec();
    validation_rows.sort_unstable();
    train_rows.sort_unstable();
    Ok(SplitIndices {
        train_rows,
        validation_rows,
        seed,
    })
}

/// Picks at most `max_rows` row indices (sorted). With `stratified`, each
/// class keeps its share of the sample to within one row.
pub fn subsample_indices(
    labels: &[u8],
    max_rows: usize,
    seed: u64,
    stratified: bool,
) -> Result<Vec<usize>> {
    if max_rows < 2 {
        return Err(Error::arg("subsample size must be at least 2"));
    }
    let n = labels.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = if !stratified {
        if max_rows >= n {
            return Ok((0..n).collect());
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        idx.truncate(max_rows);
        idx
    } else {
        let (mut normal, mut attack): (Vec<usize>, Vec<usize>) =
            (0..n).partition(|&i| labels[i] == 0);
        if normal.is_empty() || attack.is_empty() {
            return Err(Error::arg("stratified subsample needs both classes present"));
        }
        if max_rows >= n {
            return Ok((0..n).collect());
        }
        let attack_quota = ((max_rows * attack.len()) as f64 / n as f64).round() as usize;
        let attack_quota = attack_quota.min(attack.len());
        let normal_quota = (max_rows - attack_quota).min(normal.len());
        normal.shuffle(&mut rng);
        attack.shuffle(&mut rng);
        normal.truncate(normal_quota);
        attack.truncate(attack_quota);
        normal.extend(attack);
        normal
    };
    picked.sort_unstable();
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_size_is_floor_of_fifth() {
        let s = split_validation(125_972, 0.2, 7).unwrap();
        assert_eq!(s.validation_rows.len(), 25_194);
        assert_eq!(s.train_rows.len(), 125_972 - 25_194);
    }

    #[test]
    fn split_is_deterministic_and_covers() {
        let a = split_validation(10, 0.2, 3).unwrap();
        let b = split_validation(10, 0.2, 3).unwrap();
        assert_eq!(a, b);
        let mut all: Vec<usize> = a.train_rows.iter().chain(&a.validation_rows).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert!(split_validation(10, 1.5, 3).is_err());
        assert!(split_validation(10, 0.0, 3).is_err());
    }

    #[test]
    fn split_disjoint_exhaustive_over_sizes() {
        for n in 0..60 {
            let s = split_validation(n, 0.2, n as u64).unwrap();
            let mut seen = vec![false; n];
            for &i in s.train_rows.iter().chain(&s.validation_rows) {
                assert!(!seen[i]);
                seen[i] = true;
            }
            assert!(seen.into_iter().all(|b| b));
            assert_eq!(s.validation_rows.len(), n / 5);
        }
    }

    #[test]
    fn subsample_sizes() {
        let labels: Vec<u8> = (0..100_000).map(|i| (i % 3 == 0) as u8).collect();
        assert_eq!(subsample_indices(&labels, 10_000, 1, false).unwrap().len(), 10_000);
        assert_eq!(subsample_indices(&labels, 200_000, 1, true).unwrap().len(), 100_000);
        assert!(subsample_indices(&labels, 1, 1, false).is_err());
        assert_eq!(
            subsample_indices(&labels, 500, 9, true).unwrap(),
            subsample_indices(&labels, 500, 9, true).unwrap()
        );
    }

    #[test]
    fn stratified_keeps_proportions() {
        let labels: Vec<u8> = (0..1000).map(|i| (i % 5 == 0) as u8).collect();
        let idx = subsample_indices(&labels, 100, 4, true).unwrap();
        let attacks = idx.iter().filter(|&&i| labels[i] == 1).count();
        assert_eq!(idx.len(), 100);
        assert!((19..=21).contains(&attacks));

        let one_class = vec![0u8; 50];
        assert!(subsample_indices(&one_class, 10, 1, true).is_err());
    }
}
