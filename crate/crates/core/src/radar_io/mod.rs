//! Raw recording ingestion.
//!
//! A recording is a flat sequence of complex entries. The first four carry
//! the radar parameters (carrier frequency, chirp duration, samples per
//! chirp, bandwidth); the rest are echo samples laid out chirp after chirp.
//! Two on-disk codecs exist, selected by file extension through
//! [`CodecRegistry`]: ASCII text (`.dat`) and little-endian binary (`.datb`).

mod ascii;
mod binary;
mod codec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::SPEED_OF_LIGHT;

pub use ascii::AsciiCodec;
pub use binary::BinaryCodec;
pub use codec::{CodecRegistry, EchoCodec, RawRecording};

/// Largest samples-per-chirp value accepted from a header.
pub const MAX_SAMPLES_PER_CHIRP: usize = 1 << 24;

#[derive(Debug, Error, PartialEq)]
pub enum RadarIoError {
    #[error("header truncated: {found} of 4 parameter entries present")]
    TruncatedHeader { found: usize },
    #[error("parameter `{name}` must be strictly positive and finite, got {value}")]
    NonPositiveParam { name: &'static str, value: f64 },
    #[error("samples per chirp must be an integer in 1..={max}, got {value}")]
    InvalidSampleCount { value: f64, max: usize },
    #[error("payload holds no complete chirp ({entries} entries, {samples_per_chirp} per chirp)")]
    EmptyPayload { entries: usize, samples_per_chirp: usize },
    #[error("echo shape {rows}x{cols} does not match {expected} samples per chirp")]
    ShapeMismatch { rows: usize, cols: usize, expected: usize },
    #[error("echo was recorded with different radar parameters")]
    ParamsMismatch,
    #[error("line {line}: cannot parse `{text}` as a complex entry")]
    MalformedEntry { line: usize, text: String },
    #[error("input is not valid UTF-8 text")]
    NotText,
    #[error("bad magic bytes, expected `FMCW`")]
    BadMagic,
    #[error("unsupported binary version {0}")]
    UnsupportedVersion(u32),
    #[error("binary payload truncated: header announces {announced} entries, {available} present")]
    TruncatedPayload { announced: u64, available: u64 },
    #[error("no codec registered for extension `{0}`")]
    UnknownExtension(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for RadarIoError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

/// Radar configuration carried in the first four entries of a recording.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarParams {
    pub carrier_freq_hz: f64,
    pub chirp_duration_s: f64,
    pub samples_per_chirp: usize,
    pub bandwidth_hz: f64,
}

impl RadarParams {
    pub fn new(
        carrier_freq_hz: f64,
        chirp_duration_s: f64,
        samples_per_chirp: usize,
        bandwidth_hz: f64,
    ) -> Result<Self, RadarIoError> {
        positive("carrier_freq_hz", carrier_freq_hz)?;
        positive("chirp_duration_s", chirp_duration_s)?;
        positive("bandwidth_hz", bandwidth_hz)?;
        if samples_per_chirp == 0 || samples_per_chirp > MAX_SAMPLES_PER_CHIRP {
            return Err(RadarIoError::InvalidSampleCount {
                value: samples_per_chirp as f64,
                max: MAX_SAMPLES_PER_CHIRP,
            });
        }
        let p = Self {
            carrier_freq_hz,
            chirp_duration_s,
            samples_per_chirp,
            bandwidth_hz,
        };
        positive("sample_rate_hz", p.sample_rate_hz())?;
        positive("chirp_slope_hz_per_s", p.chirp_slope())?;
        Ok(p)
    }

    /// Builds parameters from the four raw header values, in file order.
    pub fn from_header(header: [f64; 4]) -> Result<Self, RadarIoError> {
        let [fc, t, ns, b] = header;
        positive("carrier_freq_hz", fc)?;
        positive("chirp_duration_s", t)?;
        positive("samples_per_chirp", ns)?;
        positive("bandwidth_hz", b)?;
        if ns.fract() != 0.0 || ns > MAX_SAMPLES_PER_CHIRP as f64 {
            return Err(RadarIoError::InvalidSampleCount {
                value: ns,
                max: MAX_SAMPLES_PER_CHIRP,
            });
        }
        Self::new(fc, t, ns as usize, b)
    }

    pub fn header(&self) -> [f64; 4] {
        [
            self.carrier_freq_hz,
            self.chirp_duration_s,
            self.samples_per_chirp as f64,
            self.bandwidth_hz,
        ]
    }

    /// Fast-time sample rate `N_s / T`.
    pub fn sample_rate_hz(&self) -> f64 {
        self.samples_per_chirp as f64 / self.chirp_duration_s
    }

    /// Chirp slope `B / T` in Hz/s.
    pub fn chirp_slope(&self) -> f64 {
        self.bandwidth_hz / self.chirp_duration_s
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq_hz
    }

    /// Range spanned by one fast-time DFT bin, `c / 2B`.
    pub fn range_resolution_m(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.bandwidth_hz)
    }

    /// Beat frequency of a scatterer at `range_m`.
    pub fn beat_frequency_hz(&self, range_m: f64) -> f64 {
        2.0 * self.chirp_slope() * range_m / SPEED_OF_LIGHT
    }

    /// Doppler shift of a scatterer closing at `velocity_mps`.
    pub fn doppler_hz(&self, velocity_mps: f64) -> f64 {
        2.0 * velocity_mps / self.wavelength_m()
    }

    /// Nominal parameters of the public C-band recordings: 5.8 GHz carrier,
    /// 1 ms chirps, 128 samples per chirp, 400 MHz sweep.
    pub fn c_band_nominal() -> Self {
        Self::new(5.8e9, 1e-3, 128, 4e8).expect("nominal parameters are valid")
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), RadarIoError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(RadarIoError::NonPositiveParam { name, value })
    }
}

/// Slow-time by fast-time grid of complex echo samples, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoMatrix {
    params: RadarParams,
    n_chirps: usize,
    data: Vec<Complex64>,
}

impl EchoMatrix {
    pub fn new(
        params: RadarParams,
        n_chirps: usize,
        data: Vec<Complex64>,
    ) -> Result<Self, RadarIoError> {
        let ns = params.samples_per_chirp;
        if n_chirps == 0 || data.len() != n_chirps * ns {
            return Err(RadarIoError::ShapeMismatch {
                rows: n_chirps,
                cols: if n_chirps == 0 { 0 } else { data.len() / n_chirps },
                expected: ns,
            });
        }
        Ok(Self {
            params,
            n_chirps,
            data,
        })
    }

    pub fn zeros(params: RadarParams, n_chirps: usize) -> Result<Self, RadarIoError> {
        Self::new(
            params,
            n_chirps,
            vec![Complex64::new(0.0, 0.0); n_chirps * params.samples_per_chirp],
        )
    }

    pub fn params(&self) -> &RadarParams {
        &self.params
    }

    pub fn n_chirps(&self) -> usize {
        self.n_chirps
    }

    pub fn n_samples(&self) -> usize {
        self.params.samples_per_chirp
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn get(&self, chirp: usize, sample: usize) -> Complex64 {
        self.data[chirp * self.n_samples() + sample]
    }

    /// Fast-time samples of one chirp.
    pub fn chirp(&self, n: usize) -> &[Complex64] {
        let ns = self.n_samples();
        &self.data[n * ns..(n + 1) * ns]
    }

    pub fn chirps(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks_exact(self.n_samples())
    }
}

/// A decoded recording plus the count of trailing entries that did not
/// fill a whole chirp and were dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub echo: EchoMatrix,
    pub discarded: usize,
}

impl Recording {
    pub fn params(&self) -> &RadarParams {
        self.echo.params()
    }
}

/// Validates a raw header + payload and reshapes the payload row-major.
pub fn assemble(raw: RawRecording) -> Result<Recording, RadarIoError> {
    let params = RadarParams::from_header(raw.header)?;
    let ns = params.samples_per_chirp;
    let entries = raw.payload.len();
    let n_chirps = entries / ns;
    if n_chirps == 0 {
        return Err(RadarIoError::EmptyPayload {
            entries,
            samples_per_chirp: ns,
        });
    }
    let discarded = entries - n_chirps * ns;
    if discarded > 0 {
        log::warn!("dropping {discarded} trailing entries that do not fill a chirp of {ns} samples");
    }
    let mut payload = raw.payload;
    payload.truncate(n_chirps * ns);
    Ok(Recording {
        echo: EchoMatrix::new(params, n_chirps, payload)?,
        discarded,
    })
}

/// Decodes bytes with the given codec.
pub fn parse_with(codec: &dyn EchoCodec, bytes: &[u8]) -> Result<Recording, RadarIoError> {
    assemble(codec.decode(bytes)?)
}

/// Encodes an echo with the given codec after checking it against `params`.
pub fn write_with(
    codec: &dyn EchoCodec,
    params: &RadarParams,
    echo: &EchoMatrix,
) -> Result<Vec<u8>, RadarIoError> {
    if echo.params() != params {
        return Err(RadarIoError::ParamsMismatch);
    }
    Ok(codec.encode(&params.header(), echo.data()))
}

/// Parses an ASCII `.dat` recording.
pub fn parse_dat(bytes: &[u8]) -> Result<Recording, RadarIoError> {
    parse_with(&AsciiCodec, bytes)
}

/// Writes an ASCII `.dat` recording.
pub fn write_dat(params: &RadarParams, echo: &EchoMatrix) -> Result<Vec<u8>, RadarIoError> {
    write_with(&AsciiCodec, params, echo)
}

/// Parses a binary `.datb` recording.
pub fn parse_datb(bytes: &[u8]) -> Result<Recording, RadarIoError> {
    parse_with(&BinaryCodec, bytes)
}

/// Writes a binary `.datb` recording.
pub fn write_datb(params: &RadarParams, echo: &EchoMatrix) -> Result<Vec<u8>, RadarIoError> {
    write_with(&BinaryCodec, params, echo)
}

/// Reads a recording from disk, picking the codec from the extension.
pub fn read_file(path: impl AsRef<std::path::Path>) -> Result<Recording, RadarIoError> {
    let path = path.as_ref();
    let registry = CodecRegistry::default();
    let codec = registry.for_path(path)?;
    let bytes = std::fs::read(path)?;
    parse_with(codec, &bytes)
}

/// Writes a recording to disk, picking the codec from the extension.
pub fn write_file(
    path: impl AsRef<std::path::Path>,
    echo: &EchoMatrix,
) -> Result<(), RadarIoError> {
    let path = path.as_ref();
    let registry = CodecRegistry::default();
    let codec = registry.for_path(path)?;
    let bytes = write_with(codec, echo.params(), echo)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ascii_file(header: [f64; 4], n: usize) -> Vec<u8> {
        let mut s = String::new();
        for h in header {
            s.push_str(&format!("{h}\n"));
        }
        for i in 0..n {
            s.push_str(&format!("{}{:+}i\n", i as f64, -(i as f64) * 0.5));
        }
        s.into_bytes()
    }

    #[test]
    fn exact_division_gives_two_chirps() {
        let rec = parse_dat(&ascii_file([5.8e9, 1e-3, 128.0, 4e8], 256)).unwrap();
        assert_eq!(rec.echo.n_chirps(), 2);
        assert_eq!(rec.echo.n_samples(), 128);
        assert_eq!(rec.discarded, 0);
    }

    #[test]
    fn partial_chirp_is_dropped_and_counted() {
        let rec = parse_dat(&ascii_file([5.8e9, 1e-3, 128.0, 4e8], 300)).unwrap();
        assert_eq!(rec.echo.n_chirps(), 2);
        assert_eq!(rec.discarded, 44);
    }

    #[test]
    fn reshape_is_row_major() {
        let rec = parse_dat(&ascii_file([5.8e9, 1e-3, 4.0, 4e8], 12)).unwrap();
        for n in 0..3 {
            for m in 0..4 {
                let k = (n * 4 + m) as f64;
                assert_eq!(rec.echo.get(n, m), c(k, -k * 0.5));
            }
        }
    }

    #[test]
    fn nominal_derived_constants() {
        let p = RadarParams::c_band_nominal();
        assert!((p.chirp_slope() - 4.0e11).abs() < 1e-3);
        assert!((p.wavelength_m() - 0.051_688).abs() < 1e-5);
        assert!((p.sample_rate_hz() - 128_000.0).abs() < 1e-9);
        assert!((p.range_resolution_m() - 0.374_740_57).abs() < 1e-8);
    }

    #[test]
    fn header_errors() {
        assert_eq!(
            parse_dat(b"5.8e9\n1e-3\n128\n").unwrap_err(),
            RadarIoError::TruncatedHeader { found: 3 }
        );
        assert!(matches!(
            parse_dat(b"5.8e9\n-1e-3\n128\n4e8\n1+1i\n").unwrap_err(),
            RadarIoError::NonPositiveParam { name: "chirp_duration_s", .. }
        ));
        assert!(matches!(
            parse_dat(b"5.8e9\n1e-3\n0\n4e8\n1+1i\n").unwrap_err(),
            RadarIoError::NonPositiveParam { name: "samples_per_chirp", .. }
        ));
        assert!(matches!(
            parse_dat(b"5.8e9\n1e-3\n2.5\n4e8\n1+1i\n").unwrap_err(),
            RadarIoError::InvalidSampleCount { .. }
        ));
        assert!(matches!(
            parse_dat(b"5.8e9\n1e-3\nNaN\n4e8\n").unwrap_err(),
            RadarIoError::NonPositiveParam { .. }
        ));
        assert_eq!(
            parse_dat(b"5.8e9\n1e-3\n4\n4e8\n1\n2\n3\n").unwrap_err(),
            RadarIoError::EmptyPayload { entries: 3, samples_per_chirp: 4 }
        );
    }

    #[test]
    fn write_rejects_foreign_params() {
        let p = RadarParams::c_band_nominal();
        let other = RadarParams::new(24e9, 1e-3, 128, 4e8).unwrap();
        let echo = EchoMatrix::zeros(p, 1).unwrap();
        assert_eq!(write_dat(&other, &echo).unwrap_err(), RadarIoError::ParamsMismatch);
    }

    #[test]
    fn echo_shape_is_checked() {
        let p = RadarParams::new(5.8e9, 1e-3, 4, 4e8).unwrap();
        assert!(matches!(
            EchoMatrix::new(p, 2, vec![c(0.0, 0.0); 7]),
            Err(RadarIoError::ShapeMismatch { .. })
        ));
        assert!(EchoMatrix::new(p, 0, vec![]).is_err());
    }
}
