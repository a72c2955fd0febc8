//! Confusion matrix and accuracy reports.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::data::Sample;
use crate::TrainError;

/// Anything that maps a batch of samples to predicted class indices.
pub trait Classifier {
    fn predict(&mut self, batch: &[&Sample]) -> Result<Vec<usize>, TrainError>;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub class_names: Vec<String>,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    /// Recall of each class; `None` when the class has no samples.
    pub per_class_accuracy: Vec<Option<f64>>,
    pub overall_accuracy: f64,
    pub samples: usize,
}

impl MetricsReport {
    pub fn from_predictions(truth: &[usize], predicted: &[usize], class_names: &[String]) -> Result<Self, TrainError> {
        if truth.len() != predicted.len() {
            return Err(TrainError::ShapeMismatch(format!(
                "{} labels but {} predictions",
                truth.len(),
                predicted.len()
            )));
        }
        let k = class_names.len();
        let mut confusion = vec![vec![0usize; k]; k];
        for (&t, &p) in truth.iter().zip(predicted) {
            for l in [t, p] {
                if l >= k {
                    return Err(TrainError::LabelOutOfRange { label: l, classes: k });
                }
            }
            confusion[t][p] += 1;
        }
        let per_class_accuracy = confusion
            .iter()
            .enumerate()
            .map(|(c, row)| {
                let n: usize = row.iter().sum();
                (n > 0).then(|| row[c] as f64 / n as f64)
            })
            .collect();
        let correct: usize = (0..k).map(|c| confusion[c][c]).sum();
        Ok(Self {
            class_names: class_names.to_vec(),
            confusion,
            per_class_accuracy,
            overall_accuracy: if truth.is_empty() { 0.0 } else { correct as f64 / truth.len() as f64 },
            samples: truth.len(),
        })
    }

    /// `class,samples,correct,accuracy` rows plus an `overall` row.
    pub fn accuracy_csv(&self) -> String {
        let mut s = String::from("class,samples,correct,accuracy\n");
        for (c, name) in self.class_names.iter().enumerate() {
            let n: usize = self.confusion[c].iter().sum();
            let acc = self.per_class_accuracy[c].map_or(String::new(), |a| format!("{a:.6}"));
            let _ = writeln!(s, "{name},{n},{},{acc}", self.confusion[c][c]);
        }
        let correct: usize = (0..self.class_names.len()).map(|c| self.confusion[c][c]).sum();
        let _ = writeln!(s, "overall,{},{correct},{:.6}", self.samples, self.overall_accuracy);
        s
    }

    /// Square matrix with a header row of predicted class names.
    pub fn confusion_csv(&self) -> String {
        let mut s = format!("true\\predicted,{}\n", self.class_names.join(","));
        for (name, row) in self.class_names.iter().zip(&self.confusion) {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            let _ = writeln!(s, "{name},{}", cells.join(","));
        }
        s
    }

    /// Writes `metrics.csv`, `confusion.csv` and `metrics.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), TrainError> {
        std::fs::create_dir_all(dir).map_err(|e| TrainError::io(dir, e))?;
        let json = serde_json::to_string_pretty(self).map_err(|e| TrainError::Format(e.to_string()))?;
        for (file, body) in [
            ("metrics.csv", self.accuracy_csv()),
            ("confusion.csv", self.confusion_csv()),
            ("metrics.json", json),
        ] {
            let p = dir.join(file);
            std::fs::write(&p, body).map_err(|e| TrainError::io(&p, e))?;
        }
        Ok(())
    }
}

/// Runs `model` over `samples` in batches and tabulates the predictions.
pub fn evaluate<C: Classifier + ?Sized>(
    model: &mut C,
    samples: &[&Sample],
    class_names: &[String],
    batch_size: usize,
) -> Result<MetricsReport, TrainError> {
    let mut predicted = Vec::with_capacity(samples.len());
    for chunk in samples.chunks(batch_size.max(1)) {
        let p = model.predict(chunk)?;
        if p.len() != chunk.len() {
            return Err(TrainError::ShapeMismatch(format!("{} predictions for {} samples", p.len(), chunk.len())));
        }
        predicted.extend(p);
    }
    let truth: Vec<usize> = samples.iter().map(|s| s.label).collect();
    MetricsReport::from_predictions(&truth, &predicted, class_names)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        (0..6).map(|i| format!("c{i}")).collect()
    }

    #[test]
    fn perfect_and_constant_predictors() {
        let truth: Vec<usize> = (0..60).map(|i| i % 6).collect();
        let r = MetricsReport::from_predictions(&truth, &truth, &names()).unwrap();
        assert_eq!(r.overall_accuracy, 1.0);
        assert!(r.per_class_accuracy.iter().all(|a| *a == Some(1.0)));
        let r = MetricsReport::from_predictions(&truth, &vec![2; 60], &names()).unwrap();
        assert!((r.overall_accuracy - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(r.per_class_accuracy[2], Some(1.0));
        assert_eq!(r.per_class_accuracy[0], Some(0.0));
        assert_eq!(r.confusion[4][2], 10);
    }

    #[test]
    fn csv_layout() {
        let r = MetricsReport::from_predictions(&[0, 1, 1], &[0, 0, 1], &names()).unwrap();
        let acc = r.accuracy_csv();
        assert!(acc.contains("c1,2,1,0.500000"));
        assert!(acc.contains("c3,0,0,\n"));
        assert!(acc.ends_with("overall,3,2,0.666667\n"));
        let cm = r.confusion_csv();
        assert_eq!(cm.lines().count(), 7);
        assert!(cm.lines().nth(2).unwrap().starts_with("c1,1,1,0"));
    }

    #[test]
    fn label_checks() {
        assert!(MetricsReport::from_predictions(&[0], &[6], &names()).is_err());
        assert!(MetricsReport::from_predictions(&[0, 1], &[0], &names()).is_err());
    }
}
