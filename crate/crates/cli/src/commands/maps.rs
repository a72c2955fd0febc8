use std::path::Path;

use pecl_core::maps::{
    AstftConfig, DopplerTimeMapper, MapperRegistry, MtiOptions, RangeDopplerMapper, RangeTimeMapper,
};
use serde::Serialize;

use super::{create_dir, read_echo};
use crate::manifest::{in_dir, ManifestBuilder};
use crate::{CliError, RunManifest};

#[derive(Serialize)]
struct MapSummary {
    domain: String,
    rows: usize,
    cols: usize,
    min_db: f64,
    max_db: f64,
}

/// Builders for every domain with MTI switched on or off.
pub fn registry(params: &pecl_core::RadarParams, mti: bool) -> MapperRegistry {
    let opts = if mti { MtiOptions::default() } else { MtiOptions::off() };
    let mut dtm = AstftConfig::for_params(params);
    dtm.mti = opts;
    let mut r = MapperRegistry::empty();
    r.register(Box::new(RangeTimeMapper { mti: opts }));
    r.register(Box::new(DopplerTimeMapper { config: Some(dtm) }));
    r.register(Box::new(RangeDopplerMapper { mti: opts }));
    r
}

/// Writes `<domain>.smap` with its `.json` sidecar, and `<domain>.pgm`
/// when asked.
pub fn run(
    input: &Path,
    domains: &[String],
    out: &Path,
    pgm: bool,
    mti: bool,
    argv: &[String],
) -> Result<RunManifest, CliError> {
    let mut m = ManifestBuilder::new("maps", argv, serde_json::json!({ "domains": domains, "pgm": pgm, "mti": mti }))?;
    m.input(input);
    let echo = read_echo(input)?.echo;
    let reg = registry(echo.params(), mti);
    let keys: Vec<&str> = domains.iter().map(|s| s.trim()).collect();
    let maps = reg.build_all(&echo, &keys)?;
    create_dir(out)?;
    let mut summary = Vec::new();
    for (key, map) in keys.iter().zip(&maps) {
        let smap = out.join(format!("{key}.smap"));
        map.save(&smap).map_err(|e| CliError::write(&smap, e))?;
        m.output(&smap);
        m.output(&pecl_core::SpectroMap::sidecar_path(&smap));
        if pgm {
            let p = out.join(format!("{key}.pgm"));
            map.save_pgm(&p).map_err(|e| CliError::write(&p, e))?;
            m.output(&p);
        }
        let (lo, hi) = map.min_max();
        println!("{key}: {} x {} ({} x {}), {lo:.1} .. {hi:.1} dB", map.rows, map.cols, map.row_axis.name, map.col_axis.name);
        summary.push(MapSummary {
            domain: key.to_string(),
            rows: map.rows,
            cols: map.cols,
            min_db: lo,
            max_db: hi,
        });
    }
    m.results(summary);
    m.emit(Some(in_dir(out)))
}
