use rayon::prelude::*;

use super::{
    doppler_bin_order, mti_columns, range_profiles, Axis, Domain, MapError, MtiOptions,
    SpectroMap,
};
use crate::dsp::{self, Dft, LOG_FLOOR};
use crate::radar_io::EchoMatrix;

/// Range-Doppler map over the whole recording, with MTI.
pub fn range_doppler_map(echo: &EchoMatrix) -> Result<SpectroMap, MapError> {
    range_doppler_map_with(echo, &MtiOptions::default())
}

/// Rows are range bins, columns centred Doppler bins.
///
/// The MTI high-pass runs on the complex slow-time sequence of every range
/// bin, then a rectangular-window DFT across all chirps gives the Doppler
/// spectrum.
pub fn range_doppler_map_with(
    echo: &EchoMatrix,
    mti: &MtiOptions,
) -> Result<SpectroMap, MapError> {
    let (nc, ns) = (echo.n_chirps(), echo.n_samples());
    let profiles = range_profiles(echo);
    let mut columns = mti_columns(&profiles, ns, 0..=ns - 1, mti)?;

    let dft = Dft::new(nc);
    let order = doppler_bin_order(nc);
    let rows: Vec<Vec<f64>> = crate::parallel::pool().install(|| {
        columns
            .par_iter_mut()
            .map(|col| {
                dft.process(col);
                order.iter().map(|&k| dsp::db(col[k].norm(), LOG_FLOOR)).collect()
            })
            .collect()
    });

    let p = *echo.params();
    let df = 1.0 / (nc as f64 * p.chirp_duration_s);
    SpectroMap::new(
        Domain::RangeDoppler,
        ns,
        nc,
        rows.concat(),
        Axis::new("range", "m", 0.0, p.range_resolution_m()),
        Axis::new("doppler", "Hz", -((nc / 2) as f64) * df, df),
        p,
    )
}
