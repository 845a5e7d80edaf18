//! Bitstring genomes, their variation operators, and keyed RNG streams.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Feature subset as a fixed-length bitstring; bit `i` set selects feature `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Genome {
    bits: Vec<bool>,
}

impl Genome {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Genome { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Genome { bits: vec![false; n] }
    }

    pub fn ones(n: usize) -> Self {
        Genome { bits: vec![true; n] }
    }

    /// Genome of length `n` with exactly the listed features set.
    pub fn from_indices(n: usize, selected: &[usize]) -> Self {
        let mut g = Genome::zeros(n);
        for &i in selected {
            g.bits[i] = true;
        }
        g
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    /// Number of selected features.
    pub fn size(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn selected(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for Genome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::arg(format!("genome strings hold only 0/1, found {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Genome::from_bits)
    }
}

impl TryFrom<String> for Genome {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Genome> for String {
    fn from(g: Genome) -> String {
        g.to_string()
    }
}

/// Derives a child seed; used to build the master → repeat → generation
/// seed hierarchy.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    let mut z = parent ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic random stream keyed by `(master_seed, generation, slot)`.
/// Distinct keys give distinct ChaCha keys, hence independent streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub generation: u64,
    pub slot: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, generation: u64, slot: u64) -> Self {
        RngStream {
            master_seed,
            generation,
            slot,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&self.master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.generation.to_le_bytes());
        key[16..24].copy_from_slice(&self.slot.to_le_bytes());
        key[24..32].copy_from_slice(b"featsel\0");
        ChaCha8Rng::from_seed(key)
    }
}

/// Each bit independently 1 with probability 0.5.
pub fn random_init<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Genome> {
    if n == 0 {
        return Err(Error::arg("genome length must be at least 1"));
    }
    Ok(Genome::from_bits((0..n).map(|_| rng.gen_bool(0.5)).collect()))
}

/// Uniform crossover: the first child takes each bit from a randomly chosen
/// parent, the second child takes the bit that was not chosen.
pub fn uniform_crossover<R: Rng + ?Sized>(
    p1: &Genome,
    p2: &Genome,
    rng: &mut R,
) -> Result<(Genome, Genome)> {
    if p1.len() != p2.len() {
        return Err(Error::arg(format!(
            "crossover parents differ in length ({} vs {})",
            p1.len(),
            p2.len()
        )));
    }
    let mut c1 = Vec::with_capacity(p1.len());
    let mut c2 = Vec::with_capacity(p1.len());
    for (&a, &b) in p1.bits.iter().zip(&p2.bits) {
        if rng.gen_bool(0.5) {
            c1.push(a);
            c2.push(b);
        } else {
            c1.push(b);
            c2.push(a);
        }
    }
    Ok((Genome::from_bits(c1), Genome::from_bits(c2)))
}

/// Flips every bit independently with probability `1/n`.
pub fn bitflip_mutation<R: Rng + ?Sized>(g: &Genome, rng: &mut R) -> Genome {
    let n = g.len();
    if n == 0 {
        return g.clone();
    }
    let p = 1.0 / n as f64;
    Genome::from_bits(g.bits.iter().map(|&b| b ^ rng.gen_bool(p)).collect())
}

/// Sets one uniformly random bit of an all-zero genome; identity otherwise.
pub fn repair_empty<R: Rng + ?Sized>(g: &Genome, rng: &mut R) -> Genome {
    if g.is_empty() || g.bits.iter().any(|&b| b) {
        return g.clone();
    }
    let mut out = g.clone();
    out.bits[rng.gen_range(0..g.len())] = true;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip_and_size() {
        let g: Genome = "0101".parse().unwrap();
        assert_eq!(g.size(), 2);
        assert_eq!(g.to_string(), "0101");
        assert_eq!(g.selected(), vec![1, 3]);
        assert_eq!(Genome::zeros(5).size(), 0);
        assert_eq!(Genome::ones(41).size(), 41);
        assert!("01x".parse::<Genome>().is_err());
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, "\"0101\"");
        assert_eq!(serde_json::from_str::<Genome>(&json).unwrap(), g);
    }

    #[test]
    fn init_mean_ones_count() {
        let mut rng = RngStream::new(1, 0, 0).rng();
        let total: usize = (0..10_000).map(|_| random_init(41, &mut rng).unwrap().size()).sum();
        let mean = total as f64 / 10_000.0;
        assert!((19.5..=21.5).contains(&mean), "mean {mean}");
        assert_eq!(random_init(1, &mut rng).unwrap().len(), 1);
        assert!(random_init(0, &mut rng).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = random_init(64, &mut RngStream::new(5, 2, 3).rng()).unwrap();
        let b = random_init(64, &mut RngStream::new(5, 2, 3).rng()).unwrap();
        let c = random_init(64, &mut RngStream::new(5, 2, 4).rng()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn crossover_of_complements_is_complementary() {
        let mut rng = RngStream::new(2, 0, 0).rng();
        let p1: Genome = "0000".parse().unwrap();
        let p2: Genome = "1111".parse().unwrap();
        for _ in 0..50 {
            let (c1, c2) = uniform_crossover(&p1, &p2, &mut rng).unwrap();
            assert!(c1.bits().iter().zip(c2.bits()).all(|(a, b)| a ^ b));
        }
        let (c1, c2) = uniform_crossover(&p1, &p1, &mut rng).unwrap();
        assert_eq!((c1, c2), (p1.clone(), p1.clone()));
        assert!(uniform_crossover(&p1, &Genome::zeros(3), &mut rng).is_err());
    }

    #[test]
    fn mutation_rates() {
        let mut rng = RngStream::new(3, 0, 0).rng();
        let g = Genome::zeros(41);
        let flips: usize = (0..10_000).map(|_| bitflip_mutation(&g, &mut rng).size()).sum();
        let mean = flips as f64 / 10_000.0;
        assert!((0.9..=1.1).contains(&mean), "mean flips {mean}");

        let one = Genome::zeros(1);
        assert!((0..1000).all(|_| bitflip_mutation(&one, &mut rng).size() == 1));

        let unchanged = (0..1000).filter(|_| bitflip_mutation(&g, &mut rng) == g).count();
        assert!(unchanged > 0);
    }

    #[test]
    fn repair_cases() {
        let mut rng = RngStream::new(4, 0, 0).rng();
        assert_eq!(repair_empty(&Genome::zeros(4), &mut rng).size(), 1);
        let g: Genome = "0101".parse().unwrap();
        assert_eq!(repair_empty(&g, &mut rng), g);
    }

    #[test]
    fn repair_index_is_uniform() {
        // chi-square, 7 degrees of freedom; critical value at alpha 0.01 is 18.475
        let n = 8;
        let trials = 10_000;
        let mut rng = RngStream::new(6, 0, 0).rng();
        let mut counts = vec![0usize; n];
        for _ in 0..trials {
            let g = repair_empty(&Genome::zeros(n), &mut rng);
            counts[g.selected()[0]] += 1;
        }
        let expected = trials as f64 / n as f64;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 18.475, "chi2 {chi2}");
    }
}
