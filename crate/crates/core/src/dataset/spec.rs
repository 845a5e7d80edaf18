use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maps raw label text to normal (0) or attack (1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRule {
    pub normal: Vec<String>,
    #[serde(default)]
    pub attack: Vec<String>,
    /// Treat any label not listed as `normal` as an attack.
    #[serde(default)]
    pub other_is_attack: bool,
}

impl LabelRule {
    pub fn classify(&self, raw: &str) -> Result<u8> {
        let label = raw.trim().trim_end_matches('.');
        if self.normal.iter().any(|n| n == label) {
            Ok(0)
        } else if self.other_is_attack || self.attack.iter().any(|a| a == label) {
            Ok(1)
        } else {
            Err(Error::UnknownLabel(raw.to_string()))
        }
    }
}

/// Column layout of a connection-record CSV file.
///
/// Column indices refer to raw file columns. Feature columns are every raw
/// column except the label and the ignored ones, kept in file order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub name: String,
    pub feature_count: usize,
    pub column_count: usize,
    pub label_column: usize,
    #[serde(default)]
    pub ignored_columns: Vec<usize>,
    #[serde(default)]
    pub categorical_columns: Vec<usize>,
    #[serde(default)]
    pub has_header: bool,
    pub labels: LabelRule,
}

const NSL_KDD_ATTACKS: &[&str] = &[
    // DoS
    "back", "land", "neptune", "pod", "smurf", "teardrop", "apache2", "udpstorm",
    "processtable", "worm", "mailbomb",
    // Probe
    "satan", "ipsweep", "nmap", "portsweep", "mscan", "saint",
    // R2L
    "guess_passwd", "ftp_write", "imap", "phf", "multihop", "warezmaster", "warezclient",
    "spy", "xlock", "xsnoop", "snmpguess", "snmpgetattack", "httptunnel", "sendmail", "named",
    // U2R
    "buffer_overflow", "loadmodule", "rootkit", "perl", "sqlattack", "xterm", "ps",
];

impl DatasetSpec {
    /// KDDTrain+/KDDTest+ layout: 41 features, label, difficulty score.
    pub fn nsl_kdd() -> Self {
        DatasetSpec {
            name: "nsl-kdd".into(),
            feature_count: 41,
            column_count: 43,
            label_column: 41,
            ignored_columns: vec![42],
            categorical_columns: vec![1, 2, 3],
            has_header: false,
            labels: LabelRule {
                normal: vec!["normal".into()],
                attack: NSL_KDD_ATTACKS.iter().map(|s| s.to_string()).collect(),
                other_is_attack: false,
            },
        }
    }

    /// UNSW_NB15 training-set/testing-set layout: id, 42 features,
    /// attack_cat, label.
    pub fn unsw_nb15() -> Self {
        DatasetSpec {
            name: "unsw-nb15".into(),
            feature_count: 42,
            column_count: 45,
            label_column: 44,
            ignored_columns: vec![0, 43],
            categorical_columns: vec![2, 3, 4],
            has_header: true,
            labels: LabelRule {
                normal: vec!["0".into()],
                attack: vec!["1".into()],
                other_is_attack: false,
            },
        }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "nsl-kdd" | "nsl_kdd" | "nslkdd" => Some(Self::nsl_kdd()),
            "unsw-nb15" | "unsw_nb15" | "unswnb15" => Some(Self::unsw_nb15()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let in_range = |c: usize| c < self.column_count;
        if !in_range(self.label_column) {
            return Err(Error::Config(format!(
                "{}: label column {} outside {} columns",
                self.name, self.label_column, self.column_count
            )));
        }
        for &c in self.ignored_columns.iter().chain(&self.categorical_columns) {
            if !in_range(c) {
                return Err(Error::Config(format!("{}: column {c} out of range", self.name)));
            }
        }
        for &c in &self.categorical_columns {
            if c == self.label_column || self.ignored_columns.contains(&c) {
                return Err(Error::Config(format!(
                    "{}: categorical column {c} is not a feature column",
                    self.name
                )));
            }
        }
        let features = self.feature_columns().len();
        if features != self.feature_count || features == 0 {
            return Err(Error::Config(format!(
                "{}: layout yields {features} feature columns, declared {}",
                self.name, self.feature_count
            )));
        }
        Ok(())
    }

    pub fn feature_columns(&self) -> Vec<usize> {
        (0..self.column_count)
            .filter(|&c| c != self.label_column && !self.ignored_columns.contains(&c))
            .collect()
    }

    pub fn is_categorical(&self, raw_column: usize) -> bool {
        self.categorical_columns.contains(&raw_column)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_layouts_are_consistent() {
        let nsl = DatasetSpec::nsl_kdd();
        nsl.validate().unwrap();
        assert_eq!(nsl.feature_count, 41);
        let unsw = DatasetSpec::unsw_nb15();
        unsw.validate().unwrap();
        assert_eq!(unsw.feature_count, 42);
        assert_eq!(DatasetSpec::builtin("NSL-KDD"), Some(nsl));
        assert!(DatasetSpec::builtin("darpa").is_none());
    }

    #[test]
    fn label_rule() {
        let rule = DatasetSpec::nsl_kdd().labels;
        assert_eq!(rule.classify("normal").unwrap(), 0);
        assert_eq!(rule.classify("neptune").unwrap(), 1);
        assert_eq!(rule.classify(" smurf. ").unwrap(), 1);
        match rule.classify("???") {
            Err(Error::UnknownLabel(s)) => assert_eq!(s, "???"),
            other => panic!("expected unknown label error, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_feature_count_rejected() {
        let mut s = DatasetSpec::nsl_kdd();
        s.feature_count = 42;
        assert!(s.validate().is_err());
        let mut s = DatasetSpec::nsl_kdd();
        s.categorical_columns.push(41);
        assert!(s.validate().is_err());
    }
}
