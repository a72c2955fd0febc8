//! Mini-batch training of the three-branch network.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use pecl_nn::checkpoint;
use pecl_nn::config::preset;
use pecl_nn::{Module, ModelConfig, Pecl};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{batch_input, Dataset, Sample};
use crate::loss::cross_entropy;
use crate::metrics::{evaluate, Classifier, MetricsReport};
use crate::optim::{learning_rate, Adam, AdamConfig};
use crate::split::{stratified_split, Split};
use crate::TrainError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub preset: String,
    /// Square input size; overrides the preset's `input_hw`.
    pub map_size: usize,
    pub per_class: usize,
    pub split: [f64; 3],
    pub epochs: usize,
    pub batch_size: usize,
    pub lr0: f64,
    pub decay_factor: f64,
    pub decay_every_epochs: usize,
    pub adam: AdamConfig,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            preset: "toy".into(),
            map_size: 64,
            per_class: 10,
            split: [0.6, 0.2, 0.2],
            epochs: 50,
            batch_size: 8,
            lr0: 1e-3,
            decay_factor: 0.1,
            decay_every_epochs: 30,
            adam: AdamConfig::default(),
            seed: 7,
        }
    }
}

impl TrainConfig {
    pub fn model_config(&self) -> Result<ModelConfig, TrainError> {
        let mut cfg = preset(&self.preset)?;
        cfg.input_hw = [self.map_size, self.map_size];
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), TrainError> {
        if self.epochs == 0 || self.batch_size == 0 || self.map_size == 0 {
            return Err(TrainError::InvalidConfig("epochs, batch_size and map_size must be positive".into()));
        }
        if !(self.lr0 > 0.0) {
            return Err(TrainError::InvalidConfig(format!("lr0 {} must be positive", self.lr0)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    /// One-based.
    pub epoch: usize,
    pub lr: f64,
    /// Mean training loss over the epoch's mini-batches, weighted by size.
    pub loss: f64,
    /// Inference-mode accuracy on the training partition after the epoch.
    pub train_accuracy: f64,
    pub val_accuracy: Option<f64>,
    pub seconds: f64,
}

impl Classifier for Pecl {
    fn predict(&mut self, batch: &[&Sample]) -> Result<Vec<usize>, TrainError> {
        Ok(self.forward(&batch_input(batch)?, false)?.argmax_rows())
    }
}

pub struct TrainOutcome {
    pub config: TrainConfig,
    pub model: Pecl,
    pub split: Split,
    pub history: Vec<EpochRecord>,
    pub test_report: Option<MetricsReport>,
}

impl TrainOutcome {
    /// First one-based epoch whose training accuracy reached `target`.
    pub fn epoch_reaching(&self, target: f64) -> Option<usize> {
        self.history.iter().find(|r| r.train_accuracy >= target).map(|r| r.epoch)
    }

    pub fn history_csv(&self) -> String {
        let mut s = String::from("epoch,lr,loss,train_accuracy,val_accuracy,seconds\n");
        for r in &self.history {
            let val = r.val_accuracy.map_or(String::new(), |v| format!("{v:.6}"));
            let _ = writeln!(
                s,
                "{},{:e},{:.8},{:.6},{val},{:.3}",
                r.epoch, r.lr, r.loss, r.train_accuracy, r.seconds
            );
        }
        s
    }

    /// `train_config.json`, `split.json`, `history.csv`, `checkpoint/` and,
    /// when a test partition exists, `metrics.*` and `confusion.csv`.
    pub fn write(&self, dir: &Path) -> Result<(), TrainError> {
        std::fs::create_dir_all(dir).map_err(|e| TrainError::io(dir, e))?;
        for (file, body) in [
            ("train_config.json", to_json(&self.config)?),
            ("split.json", to_json(&self.split)?),
            ("history.csv", self.history_csv()),
        ] {
            let p = dir.join(file);
            std::fs::write(&p, body).map_err(|e| TrainError::io(&p, e))?;
        }
        checkpoint::save(&dir.join("checkpoint"), &self.model.cfg, self.config.seed, &self.model)?;
        if let Some(r) = &self.test_report {
            r.write(dir)?;
        }
        Ok(())
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, TrainError> {
    serde_json::to_string_pretty(v).map_err(|e| TrainError::Format(e.to_string()))
}

fn accuracy(model: &mut Pecl, samples: &[&Sample], names: &[String], batch: usize) -> Result<Option<f64>, TrainError> {
    if samples.is_empty() {
        return Ok(None);
    }
    Ok(Some(evaluate(model, samples, names, batch)?.overall_accuracy))
}

/// Trains on the training partition of `data`; `on_epoch` sees each record
/// as it is produced.
pub fn train(
    cfg: &TrainConfig,
    data: &Dataset,
    mut on_epoch: impl FnMut(&EpochRecord),
) -> Result<TrainOutcome, TrainError> {
    cfg.validate()?;
    let model_cfg = cfg.model_config()?;
    if data.class_names.len() != model_cfg.num_classes {
        return Err(TrainError::InvalidConfig(format!(
            "{} classes in the data, {} in the model",
            data.class_names.len(),
            model_cfg.num_classes
        )));
    }
    let split = stratified_split(&data.labels(), cfg.split, cfg.seed)?;
    let mut model = Pecl::new(&model_cfg, cfg.seed)?;
    let mut adam = Adam::new(cfg.adam);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5A11);
    let train_set = data.subset(&split.train);
    let val_set = data.subset(&split.val);
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut order: Vec<usize> = (0..train_set.len()).collect();

    for epoch in 0..cfg.epochs {
        let start = Instant::now();
        let lr = learning_rate(cfg.lr0, cfg.decay_factor, cfg.decay_every_epochs, epoch);
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<&Sample> = chunk.iter().map(|&i| train_set[i]).collect();
            let labels: Vec<usize> = batch.iter().map(|s| s.label).collect();
            model.zero_grad();
            let logits = model.forward(&batch_input(&batch)?, true)?;
            let (loss, grad) = cross_entropy(&logits, &labels)?;
            if !loss.is_finite() {
                return Err(TrainError::InvalidConfig(format!("loss diverged at epoch {}", epoch + 1)));
            }
            model.backward(&grad)?;
            adam.step(&mut model, lr)?;
            loss_sum += loss * batch.len() as f64;
        }
        let record = EpochRecord {
            epoch: epoch + 1,
            lr,
            loss: loss_sum / train_set.len().max(1) as f64,
            train_accuracy: accuracy(&mut model, &train_set, &data.class_names, cfg.batch_size)?.unwrap_or(0.0),
            val_accuracy: accuracy(&mut model, &val_set, &data.class_names, cfg.batch_size)?,
            seconds: start.elapsed().as_secs_f64(),
        };
        log::info!(
            "epoch {:>3} lr {:.1e} loss {:.4} train {:.3}",
            record.epoch,
            record.lr,
            record.loss,
            record.train_accuracy
        );
        on_epoch(&record);
        history.push(record);
    }

    let test_set = data.subset(&split.test);
    let test_report = if test_set.is_empty() {
        None
    } else {
        Some(evaluate(&mut model, &test_set, &data.class_names, cfg.batch_size)?)
    };
    Ok(TrainOutcome {
        config: cfg.clone(),
        model,
        split,
        history,
        test_report,
    })
}

/// Loads a checkpoint directory written by [`TrainOutcome::write`].
pub fn load_model(checkpoint_dir: &Path) -> Result<Pecl, TrainError> {
    let manifest = checkpoint::read_manifest(checkpoint_dir)?;
    let mut model = Pecl::new(&manifest.config, manifest.seed)?;
    checkpoint::load_into(checkpoint_dir, &mut model)?;
    Ok(model)
}
