use std::path::Path;

use pecl_core::radar_io::write_file;
use pecl_core::synth::{activity_template, generate, ActivityKind, Scene};
use pecl_core::RadarParams;

use super::{create_parent, read_json, write_json};
use crate::manifest::{beside, ManifestBuilder};
use crate::{CliError, RunManifest};

/// Writes the recording to `out`, the scene to `out` with a `.json`
/// extension and the manifest to `out` with `.manifest.json`.
pub fn run(
    kind: Option<&str>,
    scene_path: Option<&Path>,
    seed: u64,
    out: &Path,
    argv: &[String],
) -> Result<RunManifest, CliError> {
    let scene: Scene = match (kind, scene_path) {
        (Some(k), _) => {
            let kind: ActivityKind = k.parse().map_err(CliError::Input)?;
            activity_template(kind, seed)
        }
        (None, Some(p)) => {
            let mut s: Scene = read_json(p)?;
            s.seed = seed;
            s
        }
        (None, None) => return Err(CliError::Input("either --kind or --scene is required".into())),
    };
    let params = RadarParams::c_band_nominal();
    let mut m = ManifestBuilder::new("synth", argv, serde_json::json!({ "scene": &scene, "params": params }))?;
    m.seed("scene", seed);
    if let Some(p) = scene_path {
        m.input(p);
    }
    let echo = generate(&scene, &params)?;
    create_parent(out)?;
    write_file(out, &echo).map_err(|e| match e {
        pecl_core::radar_io::RadarIoError::UnknownExtension(_) => CliError::Input(e.to_string()),
        e => CliError::write(out, e),
    })?;
    let scene_out = out.with_extension("json");
    write_json(&scene_out, &scene)?;
    println!(
        "{}: {} chirps, {} scatterers, noise std {}",
        out.display(),
        echo.n_chirps(),
        scene.scatterers.len(),
        scene.noise_std
    );
    m.output(out).output(&scene_out).results(serde_json::json!({ "n_chirps": echo.n_chirps() }));
    m.emit(Some(beside(out)))
}
