//! Numeric kernels: windows, DFT, Butterworth high-pass design, IIR
//! filtering, log-magnitude and the spectral concentration measure.

mod butterworth;
mod fft;
mod filter;
mod window;

use thiserror::Error;

pub use butterworth::{butterworth_highpass, ButterworthDesign, IirCoeffs};
pub use fft::{centered_frequency_index, dft, ComplexSpectrum, Dft};
pub use filter::{iir_filter, iir_filter_with, FilterMode, FilterSample};
pub use window::{WindowKind, WindowSpec};

/// MTI filter order.
pub const MTI_ORDER: usize = 4;
/// MTI cutoff as a fraction of the slow-time Nyquist frequency.
pub const MTI_CUTOFF: f64 = 0.0075;
/// Floor applied before taking logarithms.
pub const LOG_FLOOR: f64 = 1e-12;
/// Stabilizer in the denominator of [`concentration`].
pub const CONCENTRATION_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum DspError {
    #[error("signal length {signal} does not match window length {window}")]
    LengthMismatch { signal: usize, window: usize },
    #[error("cutoff {0} must lie strictly between 0 and 1 (fraction of Nyquist)")]
    InvalidCutoff(f64),
    #[error("filter order must be at least 1")]
    InvalidOrder,
    #[error("window length must be at least 1")]
    EmptyWindow,
    #[error("gaussian window shape parameter must be positive and finite, got {0}")]
    InvalidAlpha(f64),
}

/// `20·log10(max(magnitude, floor))`.
#[inline]
pub fn db(magnitude: f64, floor: f64) -> f64 {
    20.0 * magnitude.max(floor).log10()
}

/// Elementwise log-magnitude of real values.
pub fn log_magnitude(x: &[f64], floor: f64) -> Vec<f64> {
    x.iter().map(|v| db(v.abs(), floor)).collect()
}

/// Elementwise log-magnitude of complex values.
pub fn log_magnitude_complex(x: &[num_complex::Complex64], floor: f64) -> Vec<f64> {
    x.iter().map(|z| db(z.norm(), floor)).collect()
}

/// Spectral concentration `(Σ|X|)² / (Σ|X|² + eps)`.
///
/// Ranges from ≈1 for a single occupied bin up to ≈N for a flat spectrum;
/// smaller is more concentrated.
pub fn concentration(spectrum_mag: &[f64], eps: f64) -> f64 {
    let (l1, l2) = spectrum_mag
        .iter()
        .fold((0.0, 0.0), |(a, b), &m| (a + m, b + m * m));
    l1 * l1 / (l2 + eps)
}
