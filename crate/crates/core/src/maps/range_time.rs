use rayon::prelude::*;

use super::{range_profiles, Axis, Domain, MapError, MtiOptions, SpectroMap};
use crate::dsp::{self, LOG_FLOOR};
use crate::radar_io::EchoMatrix;

/// Range-time map with the default MTI settings, or none when `mti` is false.
pub fn range_time_map(echo: &EchoMatrix, mti: bool) -> Result<SpectroMap, MapError> {
    let opts = if mti { MtiOptions::default() } else { MtiOptions::off() };
    range_time_map_with(echo, &opts)
}

/// Rows are chirps (slow time), columns range bins.
///
/// MTI here filters the magnitude sequence `|S_RT[n, r]|` of each range bin,
/// then the output is `20·log10|y|`.
pub fn range_time_map_with(echo: &EchoMatrix, mti: &MtiOptions) -> Result<SpectroMap, MapError> {
    let (nc, ns) = (echo.n_chirps(), echo.n_samples());
    let profiles = range_profiles(echo);
    let mut mags: Vec<f64> = profiles.iter().map(|z| z.norm()).collect();

    if mti.enabled {
        let coeffs = mti.coeffs()?;
        let filtered: Vec<Vec<f64>> = crate::parallel::pool().install(|| {
            (0..ns)
                .into_par_iter()
                .map(|r| {
                    let x: Vec<f64> = mags.iter().skip(r).step_by(ns).copied().collect();
                    dsp::iir_filter_with(&coeffs, &x, mti.mode)
                })
                .collect()
        });
        for (r, col) in filtered.iter().enumerate() {
            for (n, &v) in col.iter().enumerate() {
                mags[n * ns + r] = v;
            }
        }
    }

    let values = dsp::log_magnitude(&mags, LOG_FLOOR);
    let p = *echo.params();
    SpectroMap::new(
        Domain::RangeTime,
        nc,
        ns,
        values,
        Axis::new("slow_time", "s", 0.0, p.chirp_duration_s),
        Axis::new("range", "m", 0.0, p.range_resolution_m()),
        p,
    )
}
