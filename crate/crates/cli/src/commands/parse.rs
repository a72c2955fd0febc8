use std::path::Path;

use pecl_core::radar_io::write_file;
use serde::Serialize;

use super::{create_dir, read_echo, write_json};
use crate::manifest::{in_dir, ManifestBuilder};
use crate::{CliError, RunManifest};

#[derive(Debug, Serialize)]
pub struct HeaderSummary {
    pub carrier_hz: f64,
    pub chirp_duration_s: f64,
    pub samples_per_chirp: usize,
    pub bandwidth_hz: f64,
    pub n_chirps: usize,
    pub discarded_entries: usize,
    pub duration_s: f64,
    pub wavelength_m: f64,
    pub range_resolution_m: f64,
    pub max_range_m: f64,
    pub mean_power: f64,
}

/// Writes `header.json` and a lossless `echo.datb` copy.
pub fn run(input: &Path, out: &Path, argv: &[String]) -> Result<RunManifest, CliError> {
    let mut m = ManifestBuilder::new("parse", argv, serde_json::json!({}))?;
    m.input(input);
    let rec = read_echo(input)?;
    let p = *rec.params();
    let echo = &rec.echo;
    let summary = HeaderSummary {
        carrier_hz: p.carrier_freq_hz,
        chirp_duration_s: p.chirp_duration_s,
        samples_per_chirp: p.samples_per_chirp,
        bandwidth_hz: p.bandwidth_hz,
        n_chirps: echo.n_chirps(),
        discarded_entries: rec.discarded,
        duration_s: echo.n_chirps() as f64 * p.chirp_duration_s,
        wavelength_m: p.wavelength_m(),
        range_resolution_m: p.range_resolution_m(),
        max_range_m: p.range_resolution_m() * p.samples_per_chirp as f64,
        mean_power: echo.data().iter().map(|z| z.norm_sqr()).sum::<f64>() / echo.data().len() as f64,
    };
    create_dir(out)?;
    let header = out.join("header.json");
    write_json(&header, &summary)?;
    let dump = out.join("echo.datb");
    write_file(&dump, echo).map_err(|e| CliError::write(&dump, e))?;
    println!(
        "{}: {} chirps x {} samples, {:.3} GHz, {:.1} MHz, range bin {:.4} m{}",
        input.display(),
        summary.n_chirps,
        summary.samples_per_chirp,
        summary.carrier_hz / 1e9,
        summary.bandwidth_hz / 1e6,
        summary.range_resolution_m,
        if rec.discarded > 0 {
            format!(", {} trailing entries dropped", rec.discarded)
        } else {
            String::new()
        }
    );
    m.output(&header).output(&dump).results(&summary);
    m.emit(Some(in_dir(out)))
}
