use std::path::Path;

use pecl_train::{train, Dataset, TrainConfig};

use super::{create_dir, read_json};
use crate::manifest::{in_dir, ManifestBuilder};
use crate::{CliError, RunManifest};

/// Writes `data/`, the training outputs, `checkpoint/` and `manifest.json`
/// under `out`.
pub fn run(config: Option<&Path>, seed: Option<u64>, out: &Path, argv: &[String]) -> Result<RunManifest, CliError> {
    let mut cfg: TrainConfig = match config {
        Some(p) => read_json(p)?,
        None => TrainConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    let mut m = ManifestBuilder::new("train-toy", argv, &cfg)?;
    m.seed("train", cfg.seed);
    if let Some(p) = config {
        m.input(p);
    }
    create_dir(out)?;
    let data = Dataset::synthetic(cfg.per_class, cfg.map_size, cfg.seed)?;
    let data_dir = out.join("data");
    data.save(&data_dir)?;
    println!("{} samples, {} classes, {}x{} maps", data.samples.len(), data.class_names.len(), cfg.map_size, cfg.map_size);
    let outcome = train(&cfg, &data, |r| {
        println!(
            "epoch {:>3}  lr {:.0e}  loss {:.4}  train {:.3}  val {}",
            r.epoch,
            r.lr,
            r.loss,
            r.train_accuracy,
            r.val_accuracy.map_or("-".into(), |v| format!("{v:.3}"))
        )
    })?;
    outcome.write(out)?;
    let test = outcome.test_report.as_ref().map(|r| r.overall_accuracy);
    if let Some(t) = test {
        println!("test accuracy {t:.3}");
    }
    for f in ["data", "train_config.json", "split.json", "history.csv", "checkpoint"] {
        m.output(&out.join(f));
    }
    if test.is_some() {
        for f in ["metrics.csv", "confusion.csv", "metrics.json"] {
            m.output(&out.join(f));
        }
    }
    m.results(serde_json::json!({
        "normalization": "per-map min-max to [0, 1]",
        "epochs": outcome.history,
        "first_epoch_at_95pct_train": outcome.epoch_reaching(0.95),
        "test_accuracy": test,
    }));
    m.emit(Some(in_dir(out)))
}
