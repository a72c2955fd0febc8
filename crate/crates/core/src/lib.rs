//! Signal-side building blocks for radar human-activity recognition.
//!
//! The pipeline runs raw FMCW recordings ([`radar_io`]) through reusable
//! numeric kernels ([`dsp`]) into three spectrogram domains ([`maps`]):
//! range-time, Doppler-time and range-Doppler. [`synth`] produces
//! point-scatterer echoes with known ground truth, and [`augment`] applies
//! power-stratified noise to finished maps.

pub mod augment;
pub mod dsp;
pub mod maps;
pub mod parallel;
pub mod radar_io;
pub mod synth;

pub use maps::{Axis, Domain, SpectroMap};
pub use radar_io::{EchoMatrix, RadarParams};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
