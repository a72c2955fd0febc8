//! Three-domain samples built from synthetic activity echoes.

use std::fmt::Write as _;
use std::path::Path;

use pecl_core::maps::{resize_bilinear, MapperRegistry, SpectroMap};
use pecl_core::parallel::pool;
use pecl_core::synth::{activity_template, generate, ActivityKind};
use pecl_core::{EchoMatrix, RadarParams};
use pecl_nn::{PeclInput, Tensor4};
use rayon::prelude::*;

use crate::TrainError;

pub const DOMAINS: [&str; 3] = ["rt", "dt", "rd"];
const INDEX: &str = "index.csv";

/// One labelled recording as three `size × size` maps scaled to `[0, 1]`.
/// The range-time map is stored range × time so that width is time in
/// every temporal domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub id: String,
    pub label: usize,
    pub maps: [SpectroMap; 3],
}

/// Scales to `[0, 1]`; a constant map becomes all zeros.
pub fn min_max_normalize(map: &SpectroMap) -> SpectroMap {
    let (lo, hi) = map.min_max();
    let span = hi - lo;
    let mut out = map.clone();
    for v in &mut out.values {
        *v = if span > 0.0 { (*v - lo) / span } else { 0.0 };
    }
    out
}

impl Sample {
    pub fn from_echo(id: String, label: usize, echo: &EchoMatrix, size: usize) -> Result<Self, TrainError> {
        let built = MapperRegistry::default().build_all(echo, &DOMAINS)?;
        let mut maps = Vec::with_capacity(3);
        for (key, m) in DOMAINS.iter().zip(built) {
            let m = if *key == "rt" { m.transposed() } else { m };
            maps.push(min_max_normalize(&resize_bilinear(&m, size, size)?));
        }
        let maps: [SpectroMap; 3] = maps.try_into().expect("three domains");
        Ok(Self { id, label, maps })
    }

    pub fn size(&self) -> (usize, usize) {
        (self.maps[0].rows, self.maps[0].cols)
    }
}

/// Stacks samples into single-channel network inputs.
pub fn batch_input(batch: &[&Sample]) -> Result<PeclInput, TrainError> {
    let (h, w) = batch
        .first()
        .map(|s| s.size())
        .ok_or_else(|| TrainError::ShapeMismatch("empty batch".into()))?;
    let mut planes: [Vec<f64>; 3] = Default::default();
    for s in batch {
        if s.size() != (h, w) || s.maps.iter().any(|m| (m.rows, m.cols) != (h, w)) {
            return Err(TrainError::ShapeMismatch(format!("sample {} is not {h}x{w}", s.id)));
        }
        for (p, m) in planes.iter_mut().zip(&s.maps) {
            p.extend_from_slice(&m.values);
        }
    }
    let shape = [batch.len(), 1, h, w];
    let [rt, dt, rd] = planes;
    Ok(PeclInput {
        rt: Tensor4::from_vec(shape, rt)?,
        dt: Tensor4::from_vec(shape, dt)?,
        rd: Tensor4::from_vec(shape, rd)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub class_names: Vec<String>,
    pub samples: Vec<Sample>,
}

impl Dataset {
    pub fn activity_class_names() -> Vec<String> {
        ActivityKind::ALL.iter().map(|k| k.name().to_string()).collect()
    }

    /// `per_class` template recordings of every activity at the nominal
    /// C-band setting. Sample `i` of a class uses scene seed
    /// `seed + 1000·label + i`.
    pub fn synthetic(per_class: usize, size: usize, seed: u64) -> Result<Self, TrainError> {
        let params = RadarParams::c_band_nominal();
        let jobs: Vec<(ActivityKind, usize)> = ActivityKind::ALL
            .iter()
            .flat_map(|&k| (0..per_class).map(move |i| (k, i)))
            .collect();
        let samples = pool().install(|| {
            jobs.par_iter()
                .map(|&(kind, i)| {
                    let scene_seed = seed.wrapping_add(1000 * kind.label() as u64 + i as u64);
                    let echo = generate(&activity_template(kind, scene_seed), &params)?;
                    Sample::from_echo(format!("{}_{i:03}", kind.name()), kind.label(), &echo, size)
                })
                .collect::<Result<Vec<_>, TrainError>>()
        })?;
        Ok(Self {
            class_names: Self::activity_class_names(),
            samples,
        })
    }

    pub fn labels(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.label).collect()
    }

    pub fn subset(&self, idx: &[usize]) -> Vec<&Sample> {
        idx.iter().map(|&i| &self.samples[i]).collect()
    }

    /// Writes `index.csv` and one `.smap` file (plus sidecar) per map.
    pub fn save(&self, dir: &Path) -> Result<(), TrainError> {
        std::fs::create_dir_all(dir).map_err(|e| TrainError::io(dir, e))?;
        let mut index = String::from("id,label,class,rt,dt,rd\n");
        for s in &self.samples {
            let mut files = Vec::new();
            for (key, m) in DOMAINS.iter().zip(&s.maps) {
                let file = format!("{}_{key}.smap", s.id);
                m.save(dir.join(&file))?;
                files.push(file);
            }
            let class = self.class_names.get(s.label).map_or("", String::as_str);
            let _ = writeln!(index, "{},{},{class},{}", s.id, s.label, files.join(","));
        }
        let p = dir.join(INDEX);
        std::fs::write(&p, index).map_err(|e| TrainError::io(&p, e))
    }

    pub fn load(dir: &Path) -> Result<Self, TrainError> {
        let p = dir.join(INDEX);
        let text = std::fs::read_to_string(&p).map_err(|e| TrainError::io(&p, e))?;
        let mut class_names = Self::activity_class_names();
        let mut samples = Vec::new();
        for (n, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 6 {
                return Err(TrainError::Format(format!("{}:{}: expected 6 fields", p.display(), n + 1)));
            }
            let label: usize = f[1]
                .parse()
                .map_err(|_| TrainError::Format(format!("{}:{}: bad label {:?}", p.display(), n + 1, f[1])))?;
            if label >= class_names.len() {
                class_names.resize_with(label + 1, String::new);
            }
            if class_names[label].is_empty() {
                class_names[label] = f[2].to_string();
            }
            let maps = [
                SpectroMap::load(dir.join(f[3]))?,
                SpectroMap::load(dir.join(f[4]))?,
                SpectroMap::load(dir.join(f[5]))?,
            ];
            samples.push(Sample {
                id: f[0].to_string(),
                label,
                maps,
            });
        }
        Ok(Self { class_names, samples })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pecl_core::maps::{Axis, Domain};

    fn map(values: Vec<f64>, rows: usize, cols: usize) -> SpectroMap {
        SpectroMap::new(
            Domain::RangeDoppler,
            rows,
            cols,
            values,
            Axis::new("r", "m", 0.0, 1.0),
            Axis::new("d", "Hz", 0.0, 1.0),
            RadarParams::c_band_nominal(),
        )
        .unwrap()
    }

    #[test]
    fn normalization_range() {
        let m = min_max_normalize(&map(vec![-3.0, 1.0, 5.0, 1.0], 2, 2));
        assert_eq!(m.values, vec![0.0, 0.5, 1.0, 0.5]);
        assert_eq!(min_max_normalize(&map(vec![2.0; 4], 2, 2)).values, vec![0.0; 4]);
    }

    #[test]
    fn batching_stacks_in_order() {
        let s = |v: f64, l| Sample {
            id: format!("s{v}"),
            label: l,
            maps: [map(vec![v; 4], 2, 2), map(vec![v + 10.0; 4], 2, 2), map(vec![v + 20.0; 4], 2, 2)],
        };
        let (a, b) = (s(1.0, 0), s(2.0, 1));
        let x = batch_input(&[&a, &b]).unwrap();
        assert_eq!(x.dt.shape(), [2, 1, 2, 2]);
        assert_eq!(x.dt.get(1, 0, 1, 1), 12.0);
        assert_eq!(x.rd.get(0, 0, 0, 0), 21.0);
        assert!(batch_input(&[]).is_err());
    }
}
