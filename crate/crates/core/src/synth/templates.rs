use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Scatterer, Scene, VelocitySegment};

pub const TEMPLATE_DURATION_S: f64 = 1.0;
const TEMPLATE_NOISE_STD: f64 = 0.05;

/// The six activity classes, in label order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivityKind {
    Walk,
    Sit,
    Stand,
    Pick,
    Drink,
    Fall,
}

impl ActivityKind {
    pub const ALL: [ActivityKind; 6] = [
        ActivityKind::Walk,
        ActivityKind::Sit,
        ActivityKind::Stand,
        ActivityKind::Pick,
        ActivityKind::Drink,
        ActivityKind::Fall,
    ];

    pub fn label(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ActivityKind::Walk => "walk",
            ActivityKind::Sit => "sit",
            ActivityKind::Stand => "stand",
            ActivityKind::Pick => "pick",
            ActivityKind::Drink => "drink",
            ActivityKind::Fall => "fall",
        }
    }
}

impl fmt::Display for ActivityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ActivityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown activity `{s}` (walk, sit, stand, pick, drink, fall)"))
    }
}

fn seg(start_s: f64, velocity_mps: f64) -> VelocitySegment {
    VelocitySegment {
        start_s,
        velocity_mps,
    }
}

fn sign(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Stylised one-second scene for an activity class, randomised by `seed`
/// within fixed ranges:
///
/// | kind  | motion |
/// |-------|--------|
/// | walk  | torso at 1.0–1.2 m/s either way, limb swinging ±0.1–0.3 m/s around it every 0.25 s |
/// | sit   | still, then receding at 0.4–0.7 m/s for 0.4–0.6 s |
/// | stand | still, then closing at 0.4–0.7 m/s for 0.4–0.6 s |
/// | pick  | one reach-and-return stroke at 0.3–0.5 m/s, 0.15–0.25 s each way |
/// | drink | one slow stroke at 0.1–0.25 m/s, 0.3–0.4 s each way |
/// | fall  | still, a 2.2–3.0 m/s burst for 0.2–0.45 s, then still |
///
/// Every scene also holds one stationary clutter return.
pub fn activity_template(kind: ActivityKind, seed: u64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(kind.label() as u64 + 1);

    let clutter = Scatterer::stationary(rng.random_range(1.0..4.5), rng.random_range(1.0..2.0));
    let delay = rng.random_range(0.1..0.3);
    let mut scatterers = vec![clutter];
    match kind {
        ActivityKind::Walk => {
            let dir = sign(&mut rng);
            let speed = rng.random_range(1.0..1.2);
            let swing = rng.random_range(0.1..0.3);
            let r0 = rng.random_range(3.0..4.5);
            scatterers.push(Scatterer::constant(r0, dir * speed, 1.0));
            let limb = (0..4)
                .map(|i| {
                    let s = if i % 2 == 0 { swing } else { -swing };
                    seg(0.25 * i as f64, dir * (speed + s))
                })
                .collect();
            scatterers.push(Scatterer {
                r0_m: r0 + 0.1,
                velocity: limb,
                amplitude: 0.4,
            });
        }
        ActivityKind::Sit | ActivityKind::Stand => {
            let dir = if kind == ActivityKind::Sit { -1.0 } else { 1.0 };
            let speed = rng.random_range(0.4..0.7);
            let dur = rng.random_range(0.4..0.6);
            scatterers.push(Scatterer {
                r0_m: rng.random_range(2.0..4.0),
                velocity: vec![seg(delay, dir * speed), seg(delay + dur, 0.0)],
                amplitude: 1.0,
            });
        }
        ActivityKind::Pick | ActivityKind::Drink => {
            let (speed, dur) = if kind == ActivityKind::Pick {
                (rng.random_range(0.3..0.5), rng.random_range(0.15..0.25))
            } else {
                (rng.random_range(0.1..0.25), rng.random_range(0.3..0.4))
            };
            scatterers.push(Scatterer {
                r0_m: rng.random_range(2.0..4.0),
                velocity: vec![
                    seg(delay, speed),
                    seg(delay + dur, -speed),
                    seg(delay + 2.0 * dur, 0.0),
                ],
                amplitude: 1.0,
            });
        }
        ActivityKind::Fall => {
            let dir = sign(&mut rng);
            let speed = rng.random_range(2.2..3.0);
            let dur = rng.random_range(0.2..0.45);
            scatterers.push(Scatterer {
                r0_m: rng.random_range(3.0..5.0),
                velocity: vec![seg(delay, dir * speed), seg(delay + dur, 0.0)],
                amplitude: 1.0,
            });
        }
    }
    Scene {
        scatterers,
        duration_s: TEMPLATE_DURATION_S,
        noise_std: TEMPLATE_NOISE_STD,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radar_io::RadarParams;
    use crate::synth::generate;

    #[test]
    fn walk_speed_range() {
        for seed in 0..50 {
            let s = activity_template(ActivityKind::Walk, seed);
            let v = s.max_speed();
            assert!((1.0..=1.5).contains(&v), "seed {seed}: {v}");
        }
    }

    #[test]
    fn fall_is_a_short_burst() {
        for seed in 0..50 {
            let s = activity_template(ActivityKind::Fall, seed);
            let body = &s.scatterers[1];
            let t: Vec<f64> = (0..1000).map(|n| n as f64 * 1e-3).collect();
            let fast: Vec<&f64> = t.iter().filter(|&&t| body.velocity_at(t).abs() > 2.0).collect();
            let burst = fast.len() as f64 * 1e-3;
            assert!(burst > 0.0 && burst < 0.5, "seed {seed}: {burst}");
            let end = **fast.last().unwrap();
            assert!(t.iter().filter(|&&x| x > end).all(|&x| body.velocity_at(x) == 0.0));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        for kind in ActivityKind::ALL {
            assert_eq!(activity_template(kind, 5), activity_template(kind, 5));
            assert_ne!(activity_template(kind, 5), activity_template(kind, 6));
        }
    }

    #[test]
    fn every_template_generates() {
        let p = RadarParams::c_band_nominal();
        for kind in ActivityKind::ALL {
            for seed in 0..10 {
                let echo = generate(&activity_template(kind, seed), &p).unwrap();
                assert_eq!(echo.n_chirps(), 1000);
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for kind in ActivityKind::ALL {
            assert_eq!(kind.name().parse::<ActivityKind>().unwrap(), kind);
        }
        assert!("jump".parse::<ActivityKind>().is_err());
        assert_eq!(ActivityKind::Fall.label(), 5);
    }
}
