use std::path::Path;

use pecl_train::{evaluate, load_model, Dataset};

use super::create_dir;
use crate::manifest::{in_dir, ManifestBuilder};
use crate::{CliError, RunManifest};

/// Scores every sample in `data`; writes `metrics.csv`, `confusion.csv`
/// and `metrics.json`.
pub fn run(ckpt: &Path, data: &Path, out: &Path, batch_size: usize, argv: &[String]) -> Result<RunManifest, CliError> {
    let mut m = ManifestBuilder::new("eval", argv, serde_json::json!({ "batch_size": batch_size }))?;
    m.input(ckpt).input(data);
    let mut model = load_model(ckpt)?;
    let ds = Dataset::load(data)?;
    let samples: Vec<_> = ds.samples.iter().collect();
    let report = evaluate(&mut model, &samples, &ds.class_names, batch_size)?;
    create_dir(out)?;
    report.write(out)?;
    print!("{}", report.accuracy_csv());
    for f in ["metrics.csv", "confusion.csv", "metrics.json"] {
        m.output(&out.join(f));
    }
    m.results(serde_json::json!({ "overall_accuracy": report.overall_accuracy, "samples": report.samples }));
    m.emit(Some(in_dir(out)))
}
