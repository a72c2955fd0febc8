//! Power-stratified Gaussian noise injection on spectrogram maps.
//!
//! Pixels are split by power relative to the map's peak into LOW, MID and
//! HIGH bands. LOW pixels get strong noise, MID pixels moderate noise and
//! HIGH pixels are left untouched. Noise is added to the dB values the
//! network consumes.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::SpectroMap;

#[derive(Debug, Error, PartialEq)]
pub enum AugmentError {
    #[error("thresholds must satisfy 0 < low < high < 1, got low={low} high={high}")]
    InvalidThresholds { low: f64, high: f64 },
    #[error("variances must be finite and non-negative")]
    InvalidVariance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AugmentPolicy {
    /// Fraction of peak linear power below which a pixel is LOW.
    pub low_threshold: f64,
    /// Fraction of peak linear power above which a pixel is HIGH.
    pub high_threshold: f64,
    pub var_low: f64,
    pub var_mid: f64,
    pub seed: u64,
}

impl Default for AugmentPolicy {
    fn default() -> Self {
        Self {
            low_threshold: 0.30,
            high_threshold: 0.60,
            var_low: 1.0,
            var_mid: 0.5,
            seed: 0,
        }
    }
}

impl AugmentPolicy {
    pub fn validate(&self) -> Result<(), AugmentError> {
        let (low, high) = (self.low_threshold, self.high_threshold);
        if !(low > 0.0 && low < high && high < 1.0) {
            return Err(AugmentError::InvalidThresholds { low, high });
        }
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(self.var_low) || !ok(self.var_mid) {
            return Err(AugmentError::InvalidVariance);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Low,
    Mid,
    High,
}

/// Labels every pixel of a dB map, row-major.
///
/// The comparison `p < f·p_max` on linear power `p = 10^(v/10)` is done as
/// `v - v_max < 10·log10(f)`, which is the same test without overflow.
/// The MID band is closed: exactly 30 % or 60 % of peak power is MID.
pub fn segment_regions(
    map: &SpectroMap,
    policy: &AugmentPolicy,
) -> Result<Vec<Region>, AugmentError> {
    policy.validate()?;
    let (_, peak) = map.min_max();
    let low_db = 10.0 * policy.low_threshold.log10();
    let high_db = 10.0 * policy.high_threshold.log10();
    Ok(map
        .values
        .iter()
        .map(|&v| {
            let rel = v - peak;
            if rel < low_db {
                Region::Low
            } else if rel > high_db {
                Region::High
            } else {
                Region::Mid
            }
        })
        .collect())
}

/// Adds zero-mean Gaussian noise with the band's variance to every LOW and
/// MID pixel. HIGH pixels come back bit-identical.
///
/// The draw at `(row, col)` comes from a ChaCha8 stream keyed by
/// `(seed, row)` at word offset `4·col`, so results do not depend on
/// evaluation order.
pub fn inject(map: &SpectroMap, policy: &AugmentPolicy) -> Result<SpectroMap, AugmentError> {
    let regions = segment_regions(map, policy)?;
    let (std_low, std_mid) = (policy.var_low.sqrt(), policy.var_mid.sqrt());
    let cols = map.cols;
    let mut out = map.clone();
    crate::parallel::pool().install(|| {
        out.values
            .par_chunks_mut(cols)
            .zip(regions.par_chunks(cols))
            .enumerate()
            .for_each(|(row, (vals, labels))| {
                let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
                rng.set_stream(row as u64);
                for (col, (v, region)) in vals.iter_mut().zip(labels).enumerate() {
                    let std = match region {
                        Region::Low => std_low,
                        Region::Mid => std_mid,
                        Region::High => continue,
                    };
                    rng.set_word_pos(4 * col as u128);
                    *v += std * standard_normal(&mut rng);
                }
            });
    });
    Ok(out)
}

/// Box-Muller draw from exactly two `u64`s.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * SCALE;
    let u2 = (rng.next_u64() >> 11) as f64 * SCALE;
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Axis, Domain};
    use crate::radar_io::RadarParams;
    use proptest::prelude::*;

    fn map(rows: usize, cols: usize, values: Vec<f64>) -> SpectroMap {
        SpectroMap::new(
            Domain::DopplerTime,
            rows,
            cols,
            values,
            Axis::new("doppler", "Hz", 0.0, 1.0),
            Axis::new("time", "s", 0.0, 1.0),
            RadarParams::c_band_nominal(),
        )
        .unwrap()
    }

    fn db_of_fraction(f: f64) -> f64 {
        10.0 * f.log10()
    }

    #[test]
    fn all_peak_is_high() {
        let m = map(2, 2, vec![7.0; 4]);
        let r = segment_regions(&m, &AugmentPolicy::default()).unwrap();
        assert!(r.iter().all(|&x| x == Region::High));
        assert_eq!(inject(&m, &AugmentPolicy::default()).unwrap(), m);
    }

    #[test]
    fn threshold_bands() {
        let m = map(
            1,
            3,
            vec![db_of_fraction(0.1), db_of_fraction(0.5), db_of_fraction(1.0)],
        );
        let r = segment_regions(&m, &AugmentPolicy::default()).unwrap();
        assert_eq!(r, vec![Region::Low, Region::Mid, Region::High]);
    }

    #[test]
    fn band_edges_are_mid() {
        let m = map(1, 3, vec![db_of_fraction(0.3), db_of_fraction(0.6), 0.0]);
        let r = segment_regions(&m, &AugmentPolicy::default()).unwrap();
        assert_eq!(r, vec![Region::Mid, Region::Mid, Region::High]);
    }

    #[test]
    fn low_region_statistics() {
        let n = 100_000;
        let mut values = vec![-100.0; n + 1];
        values[0] = 0.0;
        let m = map(1, n + 1, values);
        let out = inject(&m, &AugmentPolicy { seed: 3, ..Default::default() }).unwrap();
        assert_eq!(out.values[0], 0.0);
        let noise: Vec<f64> = out.values[1..].iter().map(|v| v + 100.0).collect();
        let mean = noise.iter().sum::<f64>() / n as f64;
        let var = noise.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
        // Neighbouring draws are uncorrelated.
        let lag1 = noise.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum::<f64>()
            / ((n - 1) as f64 * var);
        assert!(lag1.abs() < 0.02, "lag-1 correlation {lag1}");
    }

    #[test]
    fn mid_variance() {
        let n = 50_000;
        let mut values = vec![db_of_fraction(0.45); n + 1];
        values[0] = 0.0;
        let out = inject(&map(1, n + 1, values.clone()), &AugmentPolicy::default()).unwrap();
        let noise: Vec<f64> = out.values[1..].iter().zip(&values[1..]).map(|(a, b)| a - b).collect();
        let var = noise.iter().map(|x| x * x).sum::<f64>() / n as f64;
        assert!((var - 0.5).abs() < 0.025, "var {var}");
    }

    #[test]
    fn deterministic_and_seed_dependent() {
        let values: Vec<f64> = (0..400).map(|k| -((k % 37) as f64)).collect();
        let m = map(20, 20, values);
        let p = AugmentPolicy { seed: 9, ..Default::default() };
        assert_eq!(inject(&m, &p).unwrap(), inject(&m, &p).unwrap());
        let q = AugmentPolicy { seed: 10, ..Default::default() };
        assert_ne!(inject(&m, &p).unwrap(), inject(&m, &q).unwrap());
    }

    #[test]
    fn invalid_policies() {
        let m = map(1, 1, vec![0.0]);
        for (low, high) in [(0.0, 0.5), (0.6, 0.3), (0.3, 1.0)] {
            let p = AugmentPolicy { low_threshold: low, high_threshold: high, ..Default::default() };
            assert!(matches!(inject(&m, &p), Err(AugmentError::InvalidThresholds { .. })));
        }
        let p = AugmentPolicy { var_mid: -1.0, ..Default::default() };
        assert_eq!(inject(&m, &p).unwrap_err(), AugmentError::InvalidVariance);
    }

    #[test]
    fn policy_json_defaults() {
        let p: AugmentPolicy = serde_json::from_str(r#"{"seed": 4}"#).unwrap();
        assert_eq!(p, AugmentPolicy { seed: 4, ..Default::default() });
    }

    proptest! {
        #[test]
        fn high_pixels_preserved(values in prop::collection::vec(-60.0f64..0.0, 1..200), seed in any::<u64>()) {
            let n = values.len();
            let m = map(1, n, values);
            let p = AugmentPolicy { seed, ..Default::default() };
            let regions = segment_regions(&m, &p).unwrap();
            let out = inject(&m, &p).unwrap();
            for k in 0..n {
                if regions[k] == Region::High {
                    prop_assert_eq!(out.values[k].to_bits(), m.values[k].to_bits());
                }
            }
        }

        #[test]
        fn raising_low_threshold_never_jumps_low_to_high(
            values in prop::collection::vec(-20.0f64..0.0, 1..100),
            low_a in 0.05f64..0.5,
            bump in 0.0f64..0.3,
        ) {
            let m = map(1, values.len(), values);
            let a = AugmentPolicy { low_threshold: low_a, high_threshold: 0.9, ..Default::default() };
            let b = AugmentPolicy { low_threshold: (low_a + bump).min(0.89), ..a.clone() };
            let ra = segment_regions(&m, &a).unwrap();
            let rb = segment_regions(&m, &b).unwrap();
            for (x, y) in ra.iter().zip(&rb) {
                prop_assert!(!(*x == Region::Low && *y == Region::High));
                if *x == Region::Low {
                    prop_assert_eq!(*y, Region::Low);
                }
            }
        }
    }
}
