//! Softmax cross-entropy.

use std::sync::Arc;

use pecl_nn::gradcheck::{check, CheckConfig, CheckReport, GradCheck, GradCheckRegistry};
use pecl_nn::{Init, Matrix, Module, NnError, Param};

use crate::TrainError;

/// Mean of `-log softmax(logits)[label]` over the batch and its gradient
/// `(softmax - onehot) / B`.
pub fn cross_entropy(logits: &Matrix, labels: &[usize]) -> Result<(f64, Matrix), TrainError> {
    let (b, k) = (logits.rows, logits.cols);
    if labels.len() != b {
        return Err(TrainError::ShapeMismatch(format!("{b} logit rows but {} labels", labels.len())));
    }
    let mut grad = Matrix::zeros(b, k);
    let mut total = 0.0;
    for (s, &y) in labels.iter().enumerate() {
        if y >= k {
            return Err(TrainError::LabelOutOfRange { label: y, classes: k });
        }
        let row = logits.row(s);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = row.iter().map(|v| (v - max).exp()).sum();
        let log_z = max + sum.ln();
        total += log_z - row[y];
        for (g, v) in grad.row_mut(s).iter_mut().zip(row) {
            *g = (v - log_z).exp() / b as f64;
        }
        grad.row_mut(s)[y] -= 1.0 / b as f64;
    }
    Ok((total / b as f64, grad))
}

/// Remembers the last logits so the loss can be differentiated without
/// parameters of its own.
#[derive(Default)]
struct LossProbe {
    last: Vec<f64>,
}

impl Module for LossProbe {
    fn visit(&self, _: &mut dyn FnMut(&Param)) {}
    fn visit_mut(&mut self, _: &mut dyn FnMut(&mut Param)) {}
}

/// Gradient check of the loss with respect to the logits.
pub struct CrossEntropyCheck;

impl GradCheck for CrossEntropyCheck {
    fn name(&self) -> &str {
        "cross_entropy"
    }

    fn run(&self, cfg: &CheckConfig) -> Result<CheckReport, NnError> {
        let (b, k) = (4, 6);
        let labels = [0usize, 5, 2, 2];
        let ce = |x: &[f64]| {
            let m = Matrix::from_vec(b, k, x.to_vec())?;
            cross_entropy(&m, &labels).map_err(|e| NnError::InvalidConfig(e.to_string()))
        };
        let logits = Init::new(cfg.seed + 1).normal(b * k).iter().map(|v| 2.0 * v).collect();
        check(
            "cross_entropy",
            &mut LossProbe::default(),
            logits,
            |m, x| {
                m.last = x.to_vec();
                Ok(vec![ce(x)?.0])
            },
            |m, dy| Ok(ce(&m.last)?.1.data.iter().map(|g| g * dy[0]).collect()),
            cfg,
        )
    }
}

/// Adds the loss check to a gradient-check registry.
pub fn register_checks(registry: &mut GradCheckRegistry) {
    registry.register(Arc::new(CrossEntropyCheck));
}
