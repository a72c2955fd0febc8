//! Point-scatterer FMCW echo synthesis.
//!
//! Each scatterer contributes `a·exp(j(2π f_b t_m + 4πR(t_n)/λ))` with
//! `f_b = 2kR(t_n)/c`, range sampled once per chirp. Velocities are radial
//! and positive when closing, so `R(t) = r0 - ∫v`.

mod templates;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::radar_io::{EchoMatrix, RadarParams};
use crate::SPEED_OF_LIGHT;

pub use templates::{activity_template, ActivityKind, TEMPLATE_DURATION_S};

/// Noise generator in use; recorded in run manifests.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha), seeded by u64, one stream per chirp";

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("scatterer {scatterer} reaches range {range_m} m at chirp {chirp}")]
    RangeWentNonpositive {
        scatterer: usize,
        chirp: usize,
        range_m: f64,
    },
    #[error("duration {duration_s} s is not a whole number of {chirp_s} s chirps")]
    DurationNotMultiple { duration_s: f64, chirp_s: f64 },
    #[error("invalid scene: {0}")]
    InvalidScene(String),
}

/// Radial velocity taking effect at `start_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocitySegment {
    pub start_s: f64,
    pub velocity_mps: f64,
}

/// Point scatterer with a piecewise-constant velocity schedule. Each
/// segment holds until the next one starts, the last one indefinitely;
/// before the first segment the scatterer stands still.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scatterer {
    pub r0_m: f64,
    pub velocity: Vec<VelocitySegment>,
    pub amplitude: f64,
}

impl Scatterer {
    pub fn stationary(r0_m: f64, amplitude: f64) -> Self {
        Self {
            r0_m,
            velocity: Vec::new(),
            amplitude,
        }
    }

    pub fn constant(r0_m: f64, velocity_mps: f64, amplitude: f64) -> Self {
        Self {
            r0_m,
            velocity: vec![VelocitySegment {
                start_s: 0.0,
                velocity_mps,
            }],
            amplitude,
        }
    }

    fn segment_end(&self, i: usize) -> f64 {
        self.velocity.get(i + 1).map_or(f64::INFINITY, |s| s.start_s)
    }

    pub fn velocity_at(&self, t: f64) -> f64 {
        self.velocity
            .iter()
            .rev()
            .find(|s| s.start_s <= t)
            .map_or(0.0, |s| s.velocity_mps)
    }

    pub fn range_at(&self, t: f64) -> f64 {
        let mut r = self.r0_m;
        for (i, seg) in self.velocity.iter().enumerate() {
            if t <= seg.start_s {
                break;
            }
            let dt = t.min(self.segment_end(i)) - seg.start_s;
            r -= seg.velocity_mps * dt;
        }
        r
    }

    pub fn max_speed(&self) -> f64 {
        self.velocity
            .iter()
            .map(|s| s.velocity_mps.abs())
            .fold(0.0, f64::max)
    }

    fn validate(&self) -> Result<(), String> {
        if !self.amplitude.is_finite() || !self.r0_m.is_finite() {
            return Err("amplitude and initial range must be finite".into());
        }
        let mut prev = f64::NEG_INFINITY;
        for s in &self.velocity {
            if !s.start_s.is_finite() || !s.velocity_mps.is_finite() || s.start_s < prev {
                return Err("velocity segments must be finite and ordered by start".into());
            }
            prev = s.start_s;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub scatterers: Vec<Scatterer>,
    pub duration_s: f64,
    /// Standard deviation of the additive white noise. For the analytic
    /// signal it is split evenly between real and imaginary parts.
    pub noise_std: f64,
    pub seed: u64,
}

impl Scene {
    pub fn max_speed(&self) -> f64 {
        self.scatterers.iter().map(Scatterer::max_speed).fold(0.0, f64::max)
    }

    pub fn n_chirps(&self, params: &RadarParams) -> Result<usize, SynthError> {
        let ratio = self.duration_s / params.chirp_duration_s;
        let n = ratio.round();
        if !(self.duration_s > 0.0) || n < 1.0 || (ratio - n).abs() > 1e-9 * n.max(1.0) {
            return Err(SynthError::DurationNotMultiple {
                duration_s: self.duration_s,
                chirp_s: params.chirp_duration_s,
            });
        }
        Ok(n as usize)
    }

    fn validate(&self, params: &RadarParams) -> Result<usize, SynthError> {
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(SynthError::InvalidScene(format!(
                "noise_std must be finite and non-negative, got {}",
                self.noise_std
            )));
        }
        let nc = self.n_chirps(params)?;
        for (i, s) in self.scatterers.iter().enumerate() {
            s.validate()
                .map_err(|e| SynthError::InvalidScene(format!("scatterer {i}: {e}")))?;
            for n in 0..nc {
                let r = s.range_at(n as f64 * params.chirp_duration_s);
                if !(r > 0.0) {
                    return Err(SynthError::RangeWentNonpositive {
                        scatterer: i,
                        chirp: n,
                        range_m: r,
                    });
                }
            }
        }
        Ok(nc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthOptions {
    /// Emit the complex analytic beat signal; otherwise the real cosine IF
    /// signal in a complex container with zero imaginary part.
    pub analytic: bool,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self { analytic: true }
    }
}

pub fn generate(scene: &Scene, params: &RadarParams) -> Result<EchoMatrix, SynthError> {
    generate_with(scene, params, SynthOptions::default())
}

pub fn generate_with(
    scene: &Scene,
    params: &RadarParams,
    opts: SynthOptions,
) -> Result<EchoMatrix, SynthError> {
    let nc = scene.validate(params)?;
    let ns = params.samples_per_chirp;
    let fs = params.sample_rate_hz();
    let slope = params.chirp_slope();
    let lambda = params.wavelength_m();
    let t_chirp = params.chirp_duration_s;
    let noise_std = if opts.analytic {
        scene.noise_std / 2f64.sqrt()
    } else {
        scene.noise_std
    };
    let noise = Normal::new(0.0, noise_std).expect("validated noise std");

    let mut data = vec![Complex64::new(0.0, 0.0); nc * ns];
    crate::parallel::pool().install(|| {
        data.par_chunks_mut(ns).enumerate().for_each(|(n, row)| {
            let t_n = n as f64 * t_chirp;
            for s in &scene.scatterers {
                let r = s.range_at(t_n);
                let fb = 2.0 * slope * r / SPEED_OF_LIGHT;
                let phi = 4.0 * PI * r / lambda;
                for (m, out) in row.iter_mut().enumerate() {
                    let arg = 2.0 * PI * fb * (m as f64 / fs) + phi;
                    *out += if opts.analytic {
                        Complex64::from_polar(s.amplitude, arg)
                    } else {
                        Complex64::new(s.amplitude * arg.cos(), 0.0)
                    };
                }
            }
            if scene.noise_std > 0.0 {
                let mut rng = ChaCha8Rng::seed_from_u64(scene.seed);
                rng.set_stream(n as u64);
                for out in row.iter_mut() {
                    out.re += noise.sample(&mut rng);
                    if opts.analytic {
                        out.im += noise.sample(&mut rng);
                    }
                }
            }
        });
    });
    Ok(EchoMatrix::new(*params, nc, data).expect("shape built to match"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::{dft, WindowSpec};

    fn scene(scatterers: Vec<Scatterer>, noise_std: f64) -> Scene {
        Scene {
            scatterers,
            duration_s: 0.064,
            noise_std,
            seed: 11,
        }
    }

    #[test]
    fn stationary_target_beat_frequency() {
        let p = RadarParams::c_band_nominal();
        let echo = generate(&scene(vec![Scatterer::stationary(3.0, 1.0)], 0.0), &p).unwrap();
        // f_b = 2kR/c with k = 4e11 Hz/s -> 8.0055 kHz; one bin is 1 kHz.
        let fb = p.beat_frequency_hz(3.0);
        assert!((fb - 8005.538).abs() < 0.01, "{fb}");
        let spec = dft(echo.chirp(0), &WindowSpec::rectangular(128)).unwrap();
        let mags = spec.at_sample_rate(p.sample_rate_hz()).magnitudes();
        let peak = (0..128).max_by(|&a, &b| mags[a].total_cmp(&mags[b])).unwrap();
        assert_eq!(peak, 8);
    }

    #[test]
    fn empty_scene_is_silent() {
        let p = RadarParams::c_band_nominal();
        let echo = generate(&scene(vec![], 0.0), &p).unwrap();
        assert_eq!(echo.n_chirps(), 64);
        assert!(echo.data().iter().all(|z| z.re == 0.0 && z.im == 0.0));
    }

    #[test]
    fn superposition() {
        let p = RadarParams::c_band_nominal();
        let a = Scatterer::constant(2.0, 1.0, 1.0);
        let b = Scatterer::constant(4.5, -0.7, 0.3);
        let ea = generate(&scene(vec![a.clone()], 0.0), &p).unwrap();
        let eb = generate(&scene(vec![b.clone()], 0.0), &p).unwrap();
        let eab = generate(&scene(vec![a, b], 0.0), &p).unwrap();
        for k in 0..eab.data().len() {
            assert!((eab.data()[k] - ea.data()[k] - eb.data()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn amplitude_scales_linearly() {
        let p = RadarParams::c_band_nominal();
        let e1 = generate(&scene(vec![Scatterer::constant(2.0, 1.0, 1.0)], 0.0), &p).unwrap();
        let e2 = generate(&scene(vec![Scatterer::constant(2.0, 1.0, 2.0)], 0.0), &p).unwrap();
        for (a, b) in e1.data().iter().zip(e2.data()) {
            assert_eq!(a * 2.0, *b);
        }
    }

    #[test]
    fn deterministic_with_noise() {
        let p = RadarParams::c_band_nominal();
        let s = scene(vec![Scatterer::constant(2.0, 1.0, 1.0)], 0.1);
        assert_eq!(generate(&s, &p).unwrap(), generate(&s, &p).unwrap());
        let mut other = s.clone();
        other.seed += 1;
        assert_ne!(generate(&s, &p).unwrap(), generate(&other, &p).unwrap());
    }

    #[test]
    fn real_if_is_the_cosine() {
        let p = RadarParams::c_band_nominal();
        let s = scene(vec![Scatterer::constant(2.0, 1.0, 1.0)], 0.0);
        let analytic = generate(&s, &p).unwrap();
        let real = generate_with(&s, &p, SynthOptions { analytic: false }).unwrap();
        for (a, r) in analytic.data().iter().zip(real.data()) {
            assert!((a.re - r.re).abs() < 1e-12);
            assert_eq!(r.im, 0.0);
        }
    }

    #[test]
    fn range_schedule() {
        let s = Scatterer {
            r0_m: 5.0,
            velocity: vec![
                VelocitySegment { start_s: 0.0, velocity_mps: 1.0 },
                VelocitySegment { start_s: 1.0, velocity_mps: -2.0 },
                VelocitySegment { start_s: 1.5, velocity_mps: 0.0 },
            ],
            amplitude: 1.0,
        };
        assert_eq!(s.range_at(0.0), 5.0);
        assert!((s.range_at(0.5) - 4.5).abs() < 1e-12);
        assert!((s.range_at(1.25) - 4.5).abs() < 1e-12);
        assert!((s.range_at(10.0) - 5.0).abs() < 1e-12);
        assert_eq!(s.velocity_at(1.2), -2.0);
        assert_eq!(s.velocity_at(3.0), 0.0);
        assert_eq!(s.max_speed(), 2.0);
    }

    #[test]
    fn invalid_scenes() {
        let p = RadarParams::c_band_nominal();
        let mut s = scene(vec![Scatterer::constant(0.05, 1.0, 1.0)], 0.0);
        assert!(matches!(
            generate(&s, &p),
            Err(SynthError::RangeWentNonpositive { scatterer: 0, .. })
        ));
        s.scatterers.clear();
        s.duration_s = 0.0105;
        assert!(matches!(generate(&s, &p), Err(SynthError::DurationNotMultiple { .. })));
        s.duration_s = 0.01;
        s.noise_std = -1.0;
        assert!(matches!(generate(&s, &p), Err(SynthError::InvalidScene(_))));
    }

    #[test]
    fn scene_json_round_trip() {
        let s = scene(vec![Scatterer::constant(2.0, 1.0, 1.0), Scatterer::stationary(3.0, 0.5)], 0.1);
        let json = serde_json::to_string(&s).unwrap();
        let back: Scene = serde_json::from_str(&json).unwrap();
        assert_eq!(back.scatterers[1], s.scatterers[1]);
        assert_eq!(back.seed, 11);
    }
}
