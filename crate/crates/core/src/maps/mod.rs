//! The three spectrogram domains built from an [`EchoMatrix`].
//!
//! All maps are in dB. Doppler axes follow the radar convention: a target
//! closing on the radar (range decreasing) appears at positive Doppler.
//! With the echo phase `4πR(t)/λ` that is the negated slow-time DFT
//! frequency, so Doppler row `d` reads DFT bin `-d`.

mod doppler_time;
mod range_doppler;
mod range_time;
mod registry;
mod resize;
mod spectro;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::dsp::{self, butterworth_highpass, Dft, DspError, FilterMode, IirCoeffs};
use crate::radar_io::EchoMatrix;

pub use doppler_time::{
    doppler_time_map, doppler_time_map_traced, fixed_window_stft_map, AstftConfig, AstftTrace,
    DEFAULT_ALPHAS, DEFAULT_HOP, DEFAULT_WINDOW_LEN,
};
pub use range_doppler::{range_doppler_map, range_doppler_map_with};
pub use range_time::{range_time_map, range_time_map_with};
pub use registry::{
    DomainMapper, DopplerTimeMapper, MapperRegistry, RangeDopplerMapper, RangeTimeMapper,
};
pub use resize::resize_bilinear;
pub use spectro::{Axis, Domain, SpectroMap, SpectroMapHeader};

#[derive(Debug, Error)]
pub enum MapError {
    #[error(transparent)]
    Dsp(#[from] DspError),
    #[error("window bank is empty")]
    BankEmpty,
    #[error("invalid window bank: {0}")]
    InvalidBank(String),
    #[error("range interval [{lo}, {hi}] outside 0..{n_bins}")]
    RangeIntervalOutOfBounds { lo: usize, hi: usize, n_bins: usize },
    #[error("window length {window} exceeds chirp count {n_chirps}")]
    WindowTooLong { window: usize, n_chirps: usize },
    #[error("hop must be at least 1")]
    InvalidHop,
    #[error("DFT length {nfft} shorter than window length {window}")]
    NfftTooShort { nfft: usize, window: usize },
    #[error("output size must be at least 1x1, got {0}x{1}")]
    InvalidSize(usize, usize),
    #[error("map shape {rows}x{cols} does not match {len} values")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    #[error("no domain mapper registered under `{0}`")]
    UnknownDomain(String),
    #[error("malformed map file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Options shared by the builders that apply moving-target indication.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct MtiOptions {
    pub enabled: bool,
    pub order: usize,
    pub cutoff: f64,
    pub mode: FilterMode,
}

impl Default for MtiOptions {
    fn default() -> Self {
        Self {
            enabled: true,
            order: dsp::MTI_ORDER,
            cutoff: dsp::MTI_CUTOFF,
            mode: FilterMode::Causal,
        }
    }
}

impl MtiOptions {
    pub fn off() -> Self {
        Self {
            enabled: false,
            ..Self::default()
        }
    }

    pub fn coeffs(&self) -> Result<IirCoeffs, DspError> {
        butterworth_highpass(self.order, self.cutoff)
    }
}

/// Complex range profiles `S_RT[n, r]`: a rectangular-window DFT of every
/// chirp, row-major `(n_chirps, n_samples)`.
pub fn range_profiles(echo: &EchoMatrix) -> Vec<Complex64> {
    let ns = echo.n_samples();
    let dft = Dft::new(ns);
    let mut out = echo.data().to_vec();
    crate::parallel::pool().install(|| {
        out.par_chunks_mut(ns).for_each(|row| dft.process(row));
    });
    out
}

/// Slow-time sequence of range bin `r` from a row-major profile matrix.
pub(crate) fn column(profiles: &[Complex64], ns: usize, r: usize) -> Vec<Complex64> {
    profiles.iter().skip(r).step_by(ns).copied().collect()
}

/// Applies the MTI high-pass to the complex slow-time sequence of each
/// requested range bin. Returns one sequence per bin, in `bins` order.
pub(crate) fn mti_columns(
    profiles: &[Complex64],
    ns: usize,
    bins: std::ops::RangeInclusive<usize>,
    mti: &MtiOptions,
) -> Result<Vec<Vec<Complex64>>, MapError> {
    let coeffs = mti.coeffs()?;
    let bins: Vec<usize> = bins.collect();
    Ok(crate::parallel::pool().install(|| {
        bins.par_iter()
            .map(|&r| {
                let col = column(profiles, ns, r);
                if mti.enabled {
                    dsp::iir_filter_with(&coeffs, &col, mti.mode)
                } else {
                    col
                }
            })
            .collect()
    }))
}

/// Row order for a centred Doppler axis of `n` bins: entry `i` is the DFT
/// bin holding Doppler index `i - n/2`.
pub fn doppler_bin_order(n: usize) -> Vec<usize> {
    let half = (n / 2) as isize;
    (0..n as isize)
        .map(|i| dsp::centered_frequency_index(half - i, n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doppler_order_negates_frequency() {
        // Doppler indices -4..=3 read DFT bins 4, 3, 2, 1, 0, 7, 6, 5.
        assert_eq!(doppler_bin_order(8), vec![4, 3, 2, 1, 0, 7, 6, 5]);
        // Odd length: Doppler -2..=2 -> bins 2, 1, 0, 4, 3.
        assert_eq!(doppler_bin_order(5), vec![2, 1, 0, 4, 3]);
    }
}
