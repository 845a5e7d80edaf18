use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classifiers::ClassifierKind;
use crate::error::{Error, Result};
use crate::experiment::results::{select_solution, RunResult};
use crate::experiment::stats::{mean, std_dev, welch_t_test};
use crate::metrics::feature_reduction;

/// Per-repeat values of the selected solution of one arm.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSamples {
    pub method: String,
    pub classifier: ClassifierKind,
    pub size: Vec<f64>,
    pub accuracy: Vec<f64>,
    pub detection_rate: Vec<f64>,
}

impl MethodSamples {
    /// Takes the max-test-accuracy member of every run in `arm`. The method
    /// name is the run label with a trailing `-<classifier>` removed.
    pub fn from_arm(arm: &[RunResult]) -> Result<Self> {
        let first = arm.first().ok_or_else(|| Error::arg("arm has no runs"))?;
        let suffix = format!("-{}", first.meta.classifier);
        let method = first.meta.label.strip_suffix(&suffix).unwrap_or(&first.meta.label).to_string();
        let mut s = MethodSamples {
            method,
            classifier: first.meta.classifier,
            size: Vec::new(),
            accuracy: Vec::new(),
            detection_rate: Vec::new(),
        };
        for run in arm {
            let m = select_solution(run)?;
            s.size.push(m.size as f64);
            s.accuracy.push(m.test.accuracy);
            s.detection_rate.push(m.test.detection_rate);
        }
        Ok(s)
    }

    fn metric(&self, k: usize) -> Vec<f64> {
        let v = [&self.size, &self.accuracy, &self.detection_rate][k];
        // deterministic single-sample methods count as two identical draws
        if v.len() == 1 {
            vec![v[0]; 2]
        } else {
            v.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mark {
    /// The primary method is significantly better than this row.
    PrimaryBetter,
    /// The primary method is significantly worse than this row.
    PrimaryWorse,
}

impl Mark {
    pub fn symbol(self) -> &'static str {
        match self {
            Mark::PrimaryBetter => "•",
            Mark::PrimaryWorse => "◦",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub method: String,
    pub classifier: ClassifierKind,
    pub repeats: usize,
    /// (mean, sample std) of size, accuracy and detection rate.
    pub stats: [(f64, f64); 3],
    pub marks: [Option<Mark>; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinTieLoss {
    pub method: String,
    pub win: usize,
    pub tie: usize,
    pub loss: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatTable {
    pub primary: String,
    pub rows: Vec<StatRow>,
    /// Counts from the primary method's point of view, by mean.
    pub wtl: Vec<WinTieLoss>,
    pub has_single_repeat: bool,
}

const METRICS: [&str; 3] = ["Size", "Accuracy(%)", "DR(%)"];

/// Formats `mean±std`; rates become percentages with two decimals.
pub fn format_cell(metric: usize, mean: f64, std: f64) -> String {
    if metric == 0 {
        format!("{mean:.1}±{std:.1}")
    } else {
        format!("{:.2}±{:.2}", mean * 100.0, std * 100.0)
    }
}

/// Whether `a` beats `b` on `metric` (smaller size, larger rates).
fn better(metric: usize, a: f64, b: f64) -> bool {
    if metric == 0 {
        a < b
    } else {
        a > b
    }
}

pub fn build_table(samples: &[MethodSamples], primary: &str) -> Result<StatTable> {
    if !samples.iter().any(|s| s.method == primary) {
        return Err(Error::Config(format!("primary method {primary:?} is not among the results")));
    }
    let mut rows = Vec::with_capacity(samples.len());
    for s in samples {
        let base = samples.iter().find(|p| p.method == primary && p.classifier == s.classifier);
        let mut marks = [None; 3];
        let mut stats = [(0.0, 0.0); 3];
        for k in 0..3 {
            let v = s.metric(k);
            stats[k] = (mean(&v), std_dev(&v));
            if let Some(p) = base.filter(|_| s.method != primary) {
                let pv = p.metric(k);
                let w = welch_t_test(&pv, &v)?;
                if w.significant {
                    marks[k] = Some(if better(k, mean(&pv), mean(&v)) {
                        Mark::PrimaryBetter
                    } else {
                        Mark::PrimaryWorse
                    });
                }
            }
        }
        rows.push(StatRow { method: s.method.clone(), classifier: s.classifier, repeats: s.size.len(), stats, marks });
    }

    let mut wtl: Vec<WinTieLoss> = Vec::new();
    for s in samples.iter().filter(|s| s.method != primary) {
        let Some(p) = samples.iter().find(|p| p.method == primary && p.classifier == s.classifier) else {
            continue;
        };
        let idx = match wtl.iter().position(|w| w.method == s.method) {
            Some(i) => i,
            None => {
                wtl.push(WinTieLoss { method: s.method.clone(), win: 0, tie: 0, loss: 0 });
                wtl.len() - 1
            }
        };
        for k in 0..3 {
            let (pm, sm) = (mean(&p.metric(k)), mean(&s.metric(k)));
            let entry = &mut wtl[idx];
            if better(k, pm, sm) {
                entry.win += 1;
            } else if pm == sm {
                entry.tie += 1;
            } else {
                entry.loss += 1;
            }
        }
    }
    Ok(StatTable {
        primary: primary.to_string(),
        has_single_repeat: rows.iter().any(|r| r.repeats == 1),
        rows,
        wtl,
    })
}

impl StatTable {
    fn cell(row: &StatRow, k: usize) -> String {
        let (m, s) = row.stats[k];
        let mut c = format_cell(k, m, s);
        if let Some(mark) = row.marks[k] {
            c.push_str(mark.symbol());
        }
        c
    }

    fn wtl_for(&self, method: &str) -> String {
        self.wtl
            .iter()
            .find(|w| w.method == method)
            .map_or(String::new(), |w| format!("{}/{}/{}", w.win, w.tie, w.loss))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "method", "classifier", "repeats", "size_mean", "size_std", "accuracy_mean", "accuracy_std",
            "dr_mean", "dr_std", "size", "accuracy", "dr", "wtl",
        ])?;
        for r in &self.rows {
            let mut rec = vec![r.method.clone(), r.classifier.to_string(), r.repeats.to_string()];
            for (m, s) in r.stats {
                rec.push(m.to_string());
                rec.push(s.to_string());
            }
            for k in 0..3 {
                rec.push(Self::cell(r, k));
            }
            rec.push(self.wtl_for(&r.method));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut grid: Vec<Vec<String>> = vec![["Method", "Classifier", METRICS[0], METRICS[1], METRICS[2], "w/t/l"]
            .iter()
            .map(|s| s.to_string())
            .collect()];
        for r in &self.rows {
            grid.push(vec![
                r.method.clone(),
                r.classifier.to_string(),
                Self::cell(r, 0),
                Self::cell(r, 1),
                Self::cell(r, 2),
                self.wtl_for(&r.method),
            ]);
        }
        let widths: Vec<usize> = (0..6).map(|c| grid.iter().map(|row| row[c].chars().count()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in &grid {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell}{}", " ".repeat(w - cell.chars().count())))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out.push_str(&format!(
            "\n•/◦: {} is significantly better/worse (Welch t-test, p < 0.05). w/t/l counts {}'s wins, ties and losses by mean.\n",
            self.primary, self.primary
        ));
        if self.has_single_repeat {
            out.push_str("Rows with one repeat come from deterministic methods; their std is 0 by construction.\n");
        }
        out
    }
}

/// Builds the table from result arms and writes `table.csv` and `table.txt`.
pub fn export_table(arms: &[Vec<RunResult>], primary: &str, out_dir: impl AsRef<Path>) -> Result<StatTable> {
    let samples = arms.iter().map(|a| MethodSamples::from_arm(a)).collect::<Result<Vec<_>>>()?;
    let table = build_table(&samples, primary)?;
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, body) in [("table.csv", table.to_csv()?), ("table.txt", table.to_text())] {
        let p = dir.join(name);
        fs::write(&p, body).map_err(|e| Error::io(&p, e))?;
    }
    Ok(table)
}

/// Names of the projection files, in write order.
pub const PROJECTION_FILES: [&str; 3] = ["reduction_accuracy.csv", "reduction_dr.csv", "accuracy_dr.csv"];

/// Writes the three pairwise projections of every archive member's test
/// metrics, one row per member per run, tagged by method label.
pub fn export_projection(arms: &[Vec<RunResult>], out_dir: impl AsRef<Path>) -> Result<()> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut writers = PROJECTION_FILES
        .iter()
        .map(|f| csv::Writer::from_path(dir.join(f)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    writers[0].write_record(["method", "repeat", "feature_reduction", "accuracy"])?;
    writers[1].write_record(["method", "repeat", "feature_reduction", "detection_rate"])?;
    writers[2].write_record(["method", "repeat", "accuracy", "detection_rate"])?;
    for run in arms.iter().flatten() {
        for m in &run.members {
            let fr = feature_reduction(m.size, run.meta.feature_count)?;
            let tag = [run.meta.label.clone(), run.meta.repeat.to_string()];
            let (acc, dr) = (m.test.accuracy.to_string(), m.test.detection_rate.to_string());
            writers[0].write_record([&tag[0], &tag[1], &fr.to_string(), &acc])?;
            writers[1].write_record([&tag[0], &tag[1], &fr.to_string(), &dr])?;
            writers[2].write_record([&tag[0], &tag[1], &acc, &dr])?;
        }
    }
    for (w, f) in writers.iter_mut().zip(PROJECTION_FILES) {
        w.flush().map_err(|e| Error::io(dir.join(f), e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(method: &str, size: &[f64], acc: &[f64], dr: &[f64]) -> MethodSamples {
        MethodSamples {
            method: method.into(),
            classifier: ClassifierKind::Cart,
            size: size.to_vec(),
            accuracy: acc.to_vec(),
            detection_rate: dr.to_vec(),
        }
    }

    #[test]
    fn cell_format() {
        assert_eq!(format_cell(1, 0.868642, 0.006511), "86.86±0.65");
        assert_eq!(format_cell(0, 4.7, 1.5), "4.7±1.5");
        assert_eq!(format_cell(2, 0.5, 0.0), "50.00±0.00");
    }

    #[test]
    fn marks_and_counts() {
        let primary = samples("dr3", &[4.0, 5.0, 5.0, 6.0], &[0.86, 0.87, 0.86, 0.87], &[0.82, 0.83, 0.82, 0.83]);
        let basic = samples("basic", &[41.0], &[0.78], &[0.64]);
        let close = samples("close", &[4.0, 5.0, 5.0, 6.0], &[0.86, 0.87, 0.86, 0.87], &[0.90, 0.91, 0.90, 0.91]);
        let t = build_table(&[primary, basic, close], "dr3").unwrap();
        assert_eq!(t.rows[0].marks, [None; 3]);
        assert_eq!(t.rows[1].marks, [Some(Mark::PrimaryBetter); 3]);
        assert_eq!(t.rows[2].marks, [None, None, Some(Mark::PrimaryWorse)]);
        assert_eq!(t.wtl[0], WinTieLoss { method: "basic".into(), win: 3, tie: 0, loss: 0 });
        assert_eq!(t.wtl[1], WinTieLoss { method: "close".into(), win: 0, tie: 2, loss: 1 });
        assert!(t.has_single_repeat);
        let text = t.to_text();
        assert!(text.contains("78.00±0.00•"));
        assert!(text.contains("deterministic"));
        assert!(text.contains("3/0/0"));
        assert!(build_table(&t.rows.iter().map(|_| samples("x", &[1.0], &[0.5], &[0.5])).collect::<Vec<_>>(), "dr3").is_err());
    }
}
