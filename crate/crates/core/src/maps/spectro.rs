use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::MapError;
use crate::radar_io::RadarParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    RangeTime,
    DopplerTime,
    RangeDoppler,
}

impl Domain {
    pub fn short_name(&self) -> &'static str {
        match self {
            Domain::RangeTime => "rt",
            Domain::DopplerTime => "dt",
            Domain::RangeDoppler => "rd",
        }
    }
}

/// Uniform axis: coordinate of index `i` is `start + i·step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    pub start: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(name: &str, unit: &str, start: f64, step: f64) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
            start,
            step,
        }
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    /// Index whose coordinate is nearest to `value`.
    pub fn nearest(&self, value: f64) -> isize {
        ((value - self.start) / self.step).round() as isize
    }
}

/// Real-valued 2-D map with axis metadata, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectroMap {
    pub domain: Domain,
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
    pub row_axis: Axis,
    pub col_axis: Axis,
    pub params: RadarParams,
}

/// JSON sidecar written next to every `.smap` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectroMapHeader {
    pub domain: Domain,
    pub shape: [usize; 2],
    pub row_axis: Axis,
    pub col_axis: Axis,
    pub params: RadarParams,
    pub dtype: String,
}

impl SpectroMap {
    pub fn new(
        domain: Domain,
        rows: usize,
        cols: usize,
        values: Vec<f64>,
        row_axis: Axis,
        col_axis: Axis,
        params: RadarParams,
    ) -> Result<Self, MapError> {
        if values.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(MapError::ShapeMismatch {
                rows,
                cols,
                len: values.len(),
            });
        }
        Ok(Self {
            domain,
            rows,
            cols,
            values,
            row_axis,
            col_axis,
            params,
        })
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.cols..(r + 1) * self.cols]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Position of the largest value; first occurrence wins.
    pub fn argmax(&self) -> (usize, usize) {
        let k = argmax(&self.values);
        (k / self.cols, k % self.cols)
    }

    /// Argmax along the columns of row `r`.
    pub fn row_argmax(&self, r: usize) -> usize {
        argmax(self.row(r))
    }

    /// Argmax along the rows of column `c`.
    pub fn col_argmax(&self, c: usize) -> usize {
        let col: Vec<f64> = (0..self.rows).map(|r| self.get(r, c)).collect();
        argmax(&col)
    }

    /// Swaps rows and columns, axes included.
    pub fn transposed(&self) -> Self {
        let mut values = Vec::with_capacity(self.values.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                values.push(self.get(r, c));
            }
        }
        Self {
            domain: self.domain,
            rows: self.cols,
            cols: self.rows,
            values,
            row_axis: self.col_axis.clone(),
            col_axis: self.row_axis.clone(),
            params: self.params,
        }
    }

    pub fn header(&self) -> SpectroMapHeader {
        SpectroMapHeader {
            domain: self.domain,
            shape: [self.rows, self.cols],
            row_axis: self.row_axis.clone(),
            col_axis: self.col_axis.clone(),
            params: self.params,
            dtype: "f32le".into(),
        }
    }

    /// Little-endian f32 row-major payload.
    pub fn to_smap_bytes(&self) -> Vec<u8> {
        self.values
            .iter()
            .flat_map(|&v| (v as f32).to_le_bytes())
            .collect()
    }

    pub fn from_parts(header: SpectroMapHeader, payload: &[u8]) -> Result<Self, MapError> {
        if header.dtype != "f32le" {
            return Err(MapError::Format(format!("unsupported dtype `{}`", header.dtype)));
        }
        let [rows, cols] = header.shape;
        if payload.len() != rows.saturating_mul(cols).saturating_mul(4) {
            return Err(MapError::Format(format!(
                "payload has {} bytes, shape {rows}x{cols} needs {}",
                payload.len(),
                rows * cols * 4
            )));
        }
        let values = payload
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().unwrap()) as f64)
            .collect();
        Self::new(
            header.domain,
            rows,
            cols,
            values,
            header.row_axis,
            header.col_axis,
            header.params,
        )
    }

    /// Sidecar path for a `.smap` path.
    pub fn sidecar_path(smap: &Path) -> PathBuf {
        smap.with_extension("json")
    }

    /// Writes `<path>` (payload) and its `.json` sidecar.
    pub fn save(&self, smap: impl AsRef<Path>) -> Result<(), MapError> {
        let smap = smap.as_ref();
        std::fs::write(smap, self.to_smap_bytes())?;
        let header = serde_json::to_vec_pretty(&self.header())
            .map_err(|e| MapError::Format(e.to_string()))?;
        std::fs::write(Self::sidecar_path(smap), header)?;
        Ok(())
    }

    pub fn load(smap: impl AsRef<Path>) -> Result<Self, MapError> {
        let smap = smap.as_ref();
        let header: SpectroMapHeader =
            serde_json::from_slice(&std::fs::read(Self::sidecar_path(smap))?)
                .map_err(|e| MapError::Format(e.to_string()))?;
        Self::from_parts(header, &std::fs::read(smap)?)
    }

    /// Binary PGM (P5), 8-bit, min-max normalised; constant maps render black.
    pub fn to_pgm(&self) -> Vec<u8> {
        let (lo, hi) = self.min_max();
        let span = hi - lo;
        let mut out = Vec::with_capacity(self.values.len() + 32);
        let _ = write!(out, "P5\n{} {}\n255\n", self.cols, self.rows);
        out.extend(self.values.iter().map(|&v| {
            if span > 0.0 {
                ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            }
        }));
        out
    }

    pub fn save_pgm(&self, path: impl AsRef<Path>) -> Result<(), MapError> {
        std::fs::write(path, self.to_pgm())?;
        Ok(())
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}
