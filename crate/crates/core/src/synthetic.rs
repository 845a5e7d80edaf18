//! Generated datasets with known structure, for tests and smoke runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::FeatureTable;
use crate::error::Result;

/// Rows whose label is `x0 + x1 > 1` followed by `noise_features` uniform
/// columns; each label is then flipped with probability `label_noise`.
pub fn two_feature_instance(
    rows: usize,
    noise_features: usize,
    label_noise: f64,
    seed: u64,
) -> Result<FeatureTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(rows);
    let mut labels = Vec::with_capacity(rows);
    for _ in 0..rows {
        let row: Vec<f64> = (0..2 + noise_features).map(|_| rng.gen::<f64>()).collect();
        let mut y = u8::from(row[0] + row[1] > 1.0);
        if label_noise > 0.0 && rng.gen_bool(label_noise) {
            y ^= 1;
        }
        data.push(row);
        labels.push(y);
    }
    FeatureTable::from_rows(&data, labels)
}

/// The 12-feature instance: 2 informative columns, 10 noise columns.
pub fn informative_instance(rows: usize, seed: u64) -> Result<FeatureTable> {
    two_feature_instance(rows, 10, 0.0, seed)
}

/// The 12-feature instance with 15% of labels flipped.
pub fn noisy_instance(rows: usize, seed: u64) -> Result<FeatureTable> {
    two_feature_instance(rows, 10, 0.15, seed)
}

/// Header-less CSV text in the 43-column NSL-KDD layout. Attacks favour the
/// `S0` flag and larger values in column 4; the rest is noise.
pub fn nsl_kdd_like_csv(rows: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let protocols = ["tcp", "udp", "icmp"];
    let services = ["http", "ftp", "smtp", "private"];
    let attacks = ["neptune", "smurf", "satan", "guess_passwd"];
    let mut out = String::new();
    for _ in 0..rows {
        let attack = rng.gen_bool(0.45);
        let mut cells: Vec<String> = Vec::with_capacity(43);
        cells.push(rng.gen_range(0..100).to_string());
        cells.push(protocols[rng.gen_range(0..3)].to_string());
        cells.push(services[rng.gen_range(0..4)].to_string());
        let s0 = if attack { rng.gen_bool(0.8) } else { rng.gen_bool(0.1) };
        cells.push(if s0 { "S0" } else { "SF" }.to_string());
        let shift = if attack { 4.0 } else { 0.0 };
        cells.push(format!("{:.3}", rng.gen::<f64>() * 6.0 + shift));
        for _ in 5..41 {
            cells.push(format!("{:.3}", rng.gen::<f64>() * 10.0));
        }
        let label = if attack { attacks[rng.gen_range(0..4)] } else { "normal" };
        cells.push(label.to_string());
        cells.push(rng.gen_range(0..22).to_string());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_balance() {
        let t = informative_instance(2000, 1).unwrap();
        assert_eq!((t.row_count(), t.col_count()), (2000, 12));
        let rate = t.attack_count() as f64 / 2000.0;
        assert!((0.4..0.6).contains(&rate), "{rate}");
        for r in 0..t.row_count() {
            let x = t.x().row(r);
            assert_eq!(t.labels()[r], u8::from(x[0] + x[1] > 1.0));
        }
        assert_eq!(informative_instance(50, 3).unwrap(), informative_instance(50, 3).unwrap());
    }

    #[test]
    fn nsl_layout() {
        let text = nsl_kdd_like_csv(20, 4);
        assert_eq!(text.lines().count(), 20);
        assert!(text.lines().all(|l| l.split(',').count() == 43));
    }
}
