//! Confusion matrix and the rates derived from it. Attack (label 1) is the
//! positive class throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Tallies predictions against ground truth.
pub fn confusion(y_true: &[u8], y_pred: &[u8]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::arg(format!(
            "label vectors differ in length ({} vs {})",
            y_true.len(),
            y_pred.len()
        )));
    }
    let mut cm = ConfusionMatrix::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (1, 1) => cm.tp += 1,
            (0, 1) => cm.fp += 1,
            (0, 0) => cm.tn += 1,
            (1, 0) => cm.fn_ += 1,
            _ => return Err(Error::arg(format!("labels must be 0 or 1, got ({t}, {p})"))),
        }
    }
    Ok(cm)
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::UndefinedMetric("accuracy"));
    }
    Ok((cm.tp + cm.tn) as f64 / total as f64)
}

/// Recall of the attack class.
pub fn detection_rate(cm: &ConfusionMatrix) -> Result<f64> {
    let attacks = cm.tp + cm.fn_;
    if attacks == 0 {
        return Err(Error::UndefinedMetric("detection rate"));
    }
    Ok(cm.tp as f64 / attacks as f64)
}

pub fn f1(cm: &ConfusionMatrix) -> Result<f64> {
    let denom = 2 * cm.tp + cm.fp + cm.fn_;
    if denom == 0 {
        return Err(Error::UndefinedMetric("F1 score"));
    }
    Ok((2 * cm.tp) as f64 / denom as f64)
}

/// Fraction of the `n` available features that a subset of `size` drops.
pub fn feature_reduction(size: usize, n: usize) -> Result<f64> {
    if n == 0 || size > n {
        return Err(Error::arg(format!(
            "feature reduction needs 0 <= size <= n and n > 0 (size {size}, n {n})"
        )));
    }
    Ok(1.0 - size as f64 / n as f64)
}

/// All report columns for one scored subset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub subset_size: usize,
    pub accuracy: f64,
    pub detection_rate: f64,
    pub f1: f64,
    pub feature_reduction: f64,
}

impl MetricReport {
    pub fn from_confusion(cm: &ConfusionMatrix, subset_size: usize, n: usize) -> Result<Self> {
        Ok(MetricReport {
            subset_size,
            accuracy: accuracy(cm)?,
            detection_rate: detection_rate(cm)?,
            f1: f1(cm)?,
            feature_reduction: feature_reduction(subset_size, n)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cm(tp: u64, fp: u64, tn: u64, fn_: u64) -> ConfusionMatrix {
        ConfusionMatrix { tp, fp, tn, fn_ }
    }

    #[test]
    fn confusion_counts() {
        let m = confusion(&[1, 1, 0, 0], &[1, 0, 0, 1]).unwrap();
        assert_eq!(m, cm(1, 1, 1, 1));
        let m = confusion(&[1, 0, 1], &[1, 0, 1]).unwrap();
        assert_eq!((m.fp, m.fn_), (0, 0));
        assert_eq!(confusion(&[], &[]).unwrap(), ConfusionMatrix::default());
        assert!(matches!(confusion(&[1], &[1, 0]), Err(Error::Argument(_))));
        assert!(confusion(&[2], &[1]).is_err());
    }

    #[test]
    fn rates_by_hand() {
        assert_eq!(accuracy(&cm(50, 5, 40, 5)).unwrap(), 0.9);
        assert_eq!(accuracy(&cm(3, 0, 4, 0)).unwrap(), 1.0);
        assert_eq!(accuracy(&cm(0, 1, 0, 1)).unwrap(), 0.0);
        assert!(accuracy(&cm(0, 0, 0, 0)).is_err());

        assert_eq!(detection_rate(&cm(8, 0, 0, 2)).unwrap(), 0.8);
        assert_eq!(detection_rate(&cm(5, 3, 3, 0)).unwrap(), 1.0);
        assert!(matches!(
            detection_rate(&cm(0, 4, 4, 0)),
            Err(Error::UndefinedMetric(_))
        ));

        assert_eq!(f1(&cm(8, 2, 0, 2)).unwrap(), 0.8);
        assert_eq!(f1(&cm(7, 0, 9, 0)).unwrap(), 1.0);
        assert_eq!(f1(&cm(0, 3, 1, 2)).unwrap(), 0.0);
        assert!(f1(&cm(0, 0, 5, 0)).is_err());
    }

    #[test]
    fn reduction() {
        assert_eq!(feature_reduction(10, 41).unwrap(), 1.0 - 10.0 / 41.0);
        assert!((feature_reduction(10, 41).unwrap() - 0.7561).abs() < 1e-4);
        assert_eq!(feature_reduction(0, 41).unwrap(), 1.0);
        assert_eq!(feature_reduction(41, 41).unwrap(), 0.0);
        assert!(feature_reduction(42, 41).is_err());
        assert!(feature_reduction(0, 0).is_err());
    }

    proptest! {
        #[test]
        fn rates_stay_in_unit_interval(tp in 0u64..500, fp in 0u64..500, tn in 0u64..500, fn_ in 0u64..500) {
            let m = cm(tp, fp, tn, fn_);
            if let Ok(a) = accuracy(&m) { prop_assert!((0.0..=1.0).contains(&a)); }
            if let Ok(d) = detection_rate(&m) { prop_assert!((0.0..=1.0).contains(&d)); }
            if let Ok(f) = f1(&m) { prop_assert!((0.0..=1.0).contains(&f)); }
        }

        #[test]
        fn accuracy_symmetric_under_class_swap(tp in 0u64..500, fp in 0u64..500, tn in 0u64..500, fn_ in 1u64..500) {
            let a = accuracy(&cm(tp, fp, tn, fn_)).unwrap();
            let b = accuracy(&cm(tn, fn_, tp, fp)).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn detection_rate_ignores_negatives(tp in 0u64..500, fn_ in 1u64..500, fp in 0u64..500, tn in 0u64..500, fp2 in 0u64..500, tn2 in 0u64..500) {
            prop_assert_eq!(
                detection_rate(&cm(tp, fp, tn, fn_)).unwrap(),
                detection_rate(&cm(tp, fp2, tn2, fn_)).unwrap()
            );
        }
    }
}
