use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classifiers::ClassifierKind;
use crate::error::{Error, Result};
use crate::experiment::config::Method;
use crate::genotype::Genome;
use crate::moea::ProgressRecord;
use crate::objectives::{Formulation, SubsetScore};

/// One final solution: the subset, its validation score from the search
/// (absent for baselines) and its test score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultMember {
    /// `None` for PCA, whose size counts components.
    pub genome: Option<Genome>,
    pub size: usize,
    pub validation: Option<SubsetScore>,
    pub test: SubsetScore,
}

/// Run-level facts stored in `meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub label: String,
    pub method: Method,
    pub formulation: Formulation,
    pub classifier: ClassifierKind,
    pub repeat: usize,
    pub seed: u64,
    pub feature_count: usize,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub meta: RunMeta,
    pub members: Vec<ResultMember>,
    pub progress: Vec<ProgressRecord>,
}

const ARCHIVE_HEADER: [&str; 8] = [
    "bitstring",
    "size",
    "val_accuracy",
    "val_detection_rate",
    "val_f1",
    "test_accuracy",
    "test_detection_rate",
    "test_f1",
];

fn opt_f64(field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|_| Error::Parse { line: 0, message: format!("bad number {field:?}") })
}

impl RunResult {
    /// Writes `archive.csv`, `progress.jsonl` and `meta.json` into `dir`.
    /// Floats use the shortest representation that parses back exactly.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut w = csv::Writer::from_path(dir.join("archive.csv"))?;
        w.write_record(ARCHIVE_HEADER)?;
        for m in &self.members {
            let val = |f: fn(&SubsetScore) -> f64| m.validation.as_ref().map_or(String::new(), |v| f(v).to_string());
            w.write_record([
                m.genome.as_ref().map_or(String::new(), |g| g.to_string()),
                m.size.to_string(),
                val(|v| v.accuracy),
                val(|v| v.detection_rate),
                val(|v| v.f1),
                m.test.accuracy.to_string(),
                m.test.detection_rate.to_string(),
                m.test.f1.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io(dir.join("archive.csv"), e))?;

        let path = dir.join("progress.jsonl");
        let mut f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        for rec in &self.progress {
            writeln!(f, "{}", serde_json::to_string(rec)?).map_err(|e| Error::io(&path, e))?;
        }
        let path = dir.join("meta.json");
        fs::write(&path, serde_json::to_string_pretty(&self.meta)?).map_err(|e| Error::io(&path, e))
    }

    pub fn read(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let path = dir.join("meta.json");
        let meta: RunMeta =
            serde_json::from_str(&fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?)?;

        let mut members = Vec::new();
        let mut r = csv::Reader::from_path(dir.join("archive.csv"))?;
        if r.headers()?.iter().ne(ARCHIVE_HEADER) {
            return Err(Error::Parse { line: 1, message: "unexpected archive header".into() });
        }
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = i as u64 + 2;
            let err = |message: String| Error::Parse { line, message };
            let genome = if rec[0].is_empty() {
                None
            } else {
                Some(rec[0].parse::<Genome>().map_err(|e| err(e.to_string()))?)
            };
            let size: usize = rec[1].parse().map_err(|_| err(format!("bad size {:?}", &rec[1])))?;
            let num = |k: usize| opt_f64(&rec[k]).map_err(|_| err(format!("bad number {:?}", &rec[k])));
            let validation = match (num(2)?, num(3)?, num(4)?) {
                (Some(accuracy), Some(detection_rate), Some(f1)) => {
                    Some(SubsetScore { size, accuracy, detection_rate, f1 })
                }
                (None, None, None) => None,
                _ => return Err(err("partial validation columns".into())),
            };
            let need = |k: usize| num(k)?.ok_or_else(|| err("missing test metric".into()));
            members.push(ResultMember {
                genome,
                size,
                validation,
                test: SubsetScore { size, accuracy: need(5)?, detection_rate: need(6)?, f1: need(7)? },
            });
        }

        let path = dir.join("progress.jsonl");
        let file = fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
        let mut progress = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| Error::io(&path, e))?;
            if !line.trim().is_empty() {
                progress.push(serde_json::from_str(&line)?);
            }
        }
        Ok(RunResult { meta, members, progress })
    }
}

/// The member with the highest test accuracy; ties go to higher detection
/// rate, then smaller size, then the smaller bitstring.
pub fn select_solution(result: &RunResult) -> Result<&ResultMember> {
    result
        .members
        .iter()
        .reduce(|best, m| {
            let key = |x: &ResultMember| (x.test.accuracy, x.test.detection_rate);
            let (ba, bd) = key(best);
            let (ma, md) = key(m);
            let better = ma > ba
                || (ma == ba && (md > bd || (md == bd && (m.size < best.size || (m.size == best.size && m.genome < best.genome)))));
            if better {
                m
            } else {
                best
            }
        })
        .ok_or_else(|| Error::Internal(format!("run {} has an empty archive", result.meta.label)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moea::Algorithm;

    fn score(size: usize, a: f64, d: f64) -> SubsetScore {
        SubsetScore { size, accuracy: a, detection_rate: d, f1: 0.5 }
    }

    fn member(bits: &str, a: f64, d: f64) -> ResultMember {
        let g: Genome = bits.parse().unwrap();
        let size = g.size();
        ResultMember { genome: Some(g), size, validation: Some(score(size, 0.1, 0.2)), test: score(size, a, d) }
    }

    fn result(members: Vec<ResultMember>) -> RunResult {
        RunResult {
            meta: RunMeta {
                label: "x".into(),
                method: Method::Search(Algorithm::Nsga2),
                formulation: Formulation::Dr3,
                classifier: ClassifierKind::Cart,
                repeat: 0,
                seed: 7,
                feature_count: 4,
                wall_time_secs: 0.25,
            },
            members,
            progress: vec![ProgressRecord {
                generation: 0,
                best_accuracy: 1.0 / 3.0,
                best_detection_rate: 0.1,
                min_size: 1,
                archive_size: 2,
            }],
        }
    }

    #[test]
    fn selection_rules() {
        let r = result(vec![member("1000", 0.86, 0.82), member("0100", 0.82, 0.90)]);
        assert_eq!(select_solution(&r).unwrap().genome.as_ref().unwrap().to_string(), "1000");
        let r = result(vec![member("1000", 0.8, 0.7), member("0100", 0.8, 0.9)]);
        assert_eq!(select_solution(&r).unwrap().test.detection_rate, 0.9);
        let r = result(vec![member("1100", 0.8, 0.9), member("0100", 0.8, 0.9)]);
        assert_eq!(select_solution(&r).unwrap().size, 1);
        let r = result(vec![member("0010", 0.8, 0.9), member("0100", 0.8, 0.9)]);
        assert_eq!(select_solution(&r).unwrap().genome.as_ref().unwrap().to_string(), "0010");
        assert!(matches!(select_solution(&result(vec![])), Err(Error::Internal(_))));
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut pca = member("0000", 0.1 + 0.2, 2.0 / 3.0);
        pca.genome = None;
        pca.validation = None;
        pca.size = 3;
        pca.test.size = 3;
        let r = result(vec![member("1010", 0.123456789012345, 1.0 / 7.0), pca]);
        r.write(dir.path()).unwrap();
        assert_eq!(RunResult::read(dir.path()).unwrap(), r);
    }
}
