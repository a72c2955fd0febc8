use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{DspError, WindowSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    pub bins: Vec<Complex64>,
    /// Spacing between bins. In cycles/sample unless rescaled with
    /// [`ComplexSpectrum::at_sample_rate`].
    pub bin_resolution_hz: f64,
}

impl ComplexSpectrum {
    pub fn at_sample_rate(mut self, sample_rate_hz: f64) -> Self {
        self.bin_resolution_hz *= sample_rate_hz;
        self
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.bins.iter().map(|z| z.norm()).collect()
    }
}

/// Forward DFT of a fixed length, `X[r] = Σ x[m]·w[m]·exp(-j2π rm/N)`.
///
/// Planned once and reused; cheap to clone and share between threads.
#[derive(Clone)]
pub struct Dft {
    fft: Arc<dyn Fft<f64>>,
}

impl Dft {
    pub fn new(len: usize) -> Self {
        Self {
            fft: FftPlanner::new().plan_fft_forward(len),
        }
    }

    pub fn len(&self) -> usize {
        self.fft.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fft.len() == 0
    }

    /// Transforms `buf` in place.
    pub fn process(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len());
        self.fft.process(buf);
    }

    /// Writes the windowed transform of `signal` into `out`.
    pub fn windowed(&self, signal: &[Complex64], window: &[f64], out: &mut Vec<Complex64>) {
        out.clear();
        out.extend(signal.iter().zip(window).map(|(x, w)| x * w));
        self.process(out);
    }
}

/// One-shot windowed DFT.
pub fn dft(signal: &[Complex64], window: &WindowSpec) -> Result<ComplexSpectrum, DspError> {
    if signal.len() != window.length {
        return Err(DspError::LengthMismatch {
            signal: signal.len(),
            window: window.length,
        });
    }
    let w = window.coefficients()?;
    let mut bins = Vec::with_capacity(signal.len());
    Dft::new(signal.len()).windowed(signal, &w, &mut bins);
    Ok(ComplexSpectrum {
        bins,
        bin_resolution_hz: 1.0 / signal.len() as f64,
    })
}

/// DFT bin holding the signed frequency index `k` (in `-n/2 ..= (n-1)/2`).
/// Used to lay spectra out with zero frequency centred.
pub fn centered_frequency_index(k: isize, n: usize) -> usize {
    k.rem_euclid(n as isize) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dc_signal() {
        let s = dft(&[Complex64::new(1.0, 0.0); 8], &WindowSpec::rectangular(8)).unwrap();
        assert!((s.bins[0] - Complex64::new(8.0, 0.0)).norm() < 1e-12);
        for b in &s.bins[1..] {
            assert!(b.norm() < 1e-12);
        }
        assert_eq!(s.bin_resolution_hz, 0.125);
        assert_eq!(s.clone().at_sample_rate(8000.0).bin_resolution_hz, 1000.0);
    }

    #[test]
    fn on_grid_tone() {
        let x: Vec<_> = (0..16)
            .map(|m| Complex64::from_polar(1.0, 2.0 * PI * 3.0 * m as f64 / 16.0))
            .collect();
        let s = dft(&x, &WindowSpec::rectangular(16)).unwrap();
        for (r, b) in s.bins.iter().enumerate() {
            if r == 3 {
                assert!((b.norm() - 16.0).abs() < 1e-12);
            } else {
                assert!(b.norm() < 1e-12, "bin {r} = {b}");
            }
        }
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            dft(&[Complex64::new(0.0, 0.0); 4], &WindowSpec::rectangular(5)).unwrap_err(),
            DspError::LengthMismatch { signal: 4, window: 5 }
        );
    }

    #[test]
    fn centered_index() {
        assert_eq!(centered_frequency_index(0, 8), 0);
        assert_eq!(centered_frequency_index(-1, 8), 7);
        assert_eq!(centered_frequency_index(-4, 8), 4);
        assert_eq!(centered_frequency_index(3, 8), 3);
    }
}
