use std::path::Path;

use pecl_core::augment::{inject, segment_regions, AugmentPolicy, Region};
use pecl_core::SpectroMap;

use super::{create_parent, read_json};
use crate::manifest::{beside, ManifestBuilder};
use crate::{CliError, RunManifest};

pub fn run(
    input: &Path,
    policy_path: Option<&Path>,
    seed: Option<u64>,
    out: &Path,
    argv: &[String],
) -> Result<RunManifest, CliError> {
    let mut policy: AugmentPolicy = match policy_path {
        Some(p) => read_json(p)?,
        None => AugmentPolicy::default(),
    };
    if let Some(s) = seed {
        policy.seed = s;
    }
    policy.validate()?;
    let mut m = ManifestBuilder::new("augment", argv, &policy)?;
    m.seed("noise", policy.seed).input(input);
    if let Some(p) = policy_path {
        m.input(p);
    }
    let map = SpectroMap::load(input).map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
    let regions = segment_regions(&map, &policy)?;
    let count = |r: Region| regions.iter().filter(|&&x| x == r).count();
    let (low, mid, high) = (count(Region::Low), count(Region::Mid), count(Region::High));
    let noisy = inject(&map, &policy)?;
    create_parent(out)?;
    noisy.save(out).map_err(|e| CliError::write(out, e))?;
    println!("{}: {low} low, {mid} mid, {high} high pixels", out.display());
    m.output(out)
        .output(&SpectroMap::sidecar_path(out))
        .results(serde_json::json!({ "low": low, "mid": mid, "high": high }));
    m.emit(Some(beside(out)))
}
