use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    doppler_bin_order, mti_columns, range_profiles, Axis, Domain, MapError, MtiOptions,
    SpectroMap,
};
use crate::dsp::{self, Dft, WindowKind, WindowSpec, CONCENTRATION_EPS, LOG_FLOOR};
use crate::radar_io::{EchoMatrix, RadarParams};

pub const DEFAULT_WINDOW_LEN: usize = 128;
pub const DEFAULT_HOP: usize = 16;
pub const DEFAULT_ALPHAS: [f64; 8] = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
const DEFAULT_RANGE_M: (f64, f64) = (0.5, 5.0);

/// Adaptive STFT settings for the Doppler-time map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AstftConfig {
    /// Gaussian windows of one shared length, shape parameter strictly increasing.
    pub window_bank: Vec<WindowSpec>,
    pub hop: usize,
    pub range_bin_lo: usize,
    pub range_bin_hi: usize,
    /// DFT length per frame; defaults to the window length.
    #[serde(default)]
    pub nfft: Option<usize>,
    #[serde(default)]
    pub mti: MtiOptions,
    #[serde(default = "default_eps")]
    pub concentration_eps: f64,
}

fn default_eps() -> f64 {
    CONCENTRATION_EPS
}

impl AstftConfig {
    /// Default bank and hop, range interval covering 0.5 m to 5 m.
    pub fn for_params(params: &RadarParams) -> Self {
        let res = params.range_resolution_m();
        let last = params.samples_per_chirp - 1;
        let lo = ((DEFAULT_RANGE_M.0 / res).ceil() as usize).min(last);
        let hi = ((DEFAULT_RANGE_M.1 / res).floor() as usize).clamp(lo, last);
        Self::with_bank(
            DEFAULT_ALPHAS
                .iter()
                .map(|&a| WindowSpec::gaussian(DEFAULT_WINDOW_LEN, a))
                .collect(),
            DEFAULT_HOP,
            lo,
            hi,
        )
    }

    pub fn with_bank(window_bank: Vec<WindowSpec>, hop: usize, lo: usize, hi: usize) -> Self {
        Self {
            window_bank,
            hop,
            range_bin_lo: lo,
            range_bin_hi: hi,
            nfft: None,
            mti: MtiOptions::default(),
            concentration_eps: CONCENTRATION_EPS,
        }
    }

    pub fn window_len(&self) -> usize {
        self.window_bank.first().map_or(0, |w| w.length)
    }

    pub fn nfft(&self) -> usize {
        self.nfft.unwrap_or(self.window_len())
    }

    pub fn n_frames(&self, n_chirps: usize) -> usize {
        n_chirps.div_ceil(self.hop)
    }

    pub fn validate(&self, n_chirps: usize, n_samples: usize) -> Result<(), MapError> {
        let first = self.window_bank.first().ok_or(MapError::BankEmpty)?;
        let len = first.length;
        let mut prev = f64::NEG_INFINITY;
        for w in &self.window_bank {
            w.validate()?;
            let WindowKind::Gaussian { alpha } = w.kind else {
                return Err(MapError::InvalidBank("bank members must be gaussian".into()));
            };
            if w.length != len {
                return Err(MapError::InvalidBank("bank members must share one length".into()));
            }
            if alpha <= prev {
                return Err(MapError::InvalidBank(
                    "shape parameters must be strictly increasing".into(),
                ));
            }
            prev = alpha;
        }
        if len > n_chirps {
            return Err(MapError::WindowTooLong {
                window: len,
                n_chirps,
            });
        }
        if self.hop == 0 {
            return Err(MapError::InvalidHop);
        }
        if self.nfft() < len {
            return Err(MapError::NfftTooShort {
                nfft: self.nfft(),
                window: len,
            });
        }
        if self.range_bin_lo > self.range_bin_hi || self.range_bin_hi >= n_samples {
            return Err(MapError::RangeIntervalOutOfBounds {
                lo: self.range_bin_lo,
                hi: self.range_bin_hi,
                n_bins: n_samples,
            });
        }
        Ok(())
    }
}

/// Per-frame window choices made while building a Doppler-time map.
#[derive(Debug, Clone, PartialEq)]
pub struct AstftTrace {
    /// `selection[r - lo][frame]`: chosen bank index.
    pub selection: Vec<Vec<usize>>,
    /// `concentrations[r - lo][frame][j]`: measure for bank member `j`.
    pub concentrations: Vec<Vec<Vec<f64>>>,
}

pub fn doppler_time_map(echo: &EchoMatrix, cfg: &AstftConfig) -> Result<SpectroMap, MapError> {
    doppler_time_map_traced(echo, cfg).map(|(m, _)| m)
}

/// Doppler-time map via adaptive STFT. Rows are centred Doppler bins,
/// columns frames centred on chirps `0, hop, 2·hop, …`.
///
/// For each range bin in the interval and each frame, every bank window is
/// tried, and the one whose magnitude spectrum has the smallest
/// concentration measure is kept (lowest index on exact ties). Kept
/// magnitudes are summed over range bins in ascending order, then
/// converted to dB.
pub fn doppler_time_map_traced(
    echo: &EchoMatrix,
    cfg: &AstftConfig,
) -> Result<(SpectroMap, AstftTrace), MapError> {
    let (nc, ns) = (echo.n_chirps(), echo.n_samples());
    cfg.validate(nc, ns)?;
    let bank: Vec<Vec<f64>> = cfg
        .window_bank
        .iter()
        .map(|w| w.coefficients())
        .collect::<Result<_, _>>()?;
    let nfft = cfg.nfft();
    let n_frames = cfg.n_frames(nc);
    let dft = Dft::new(nfft);

    let profiles = range_profiles(echo);
    let columns = mti_columns(&profiles, ns, cfg.range_bin_lo..=cfg.range_bin_hi, &cfg.mti)?;

    let per_bin: Vec<BinResult> = crate::parallel::pool().install(|| {
        columns
            .par_iter()
            .map(|s| adaptive_column(s, &bank, cfg.hop, n_frames, &dft, cfg.concentration_eps))
            .collect()
    });

    let mut acc = vec![0.0; n_frames * nfft];
    let mut trace = AstftTrace {
        selection: Vec::with_capacity(per_bin.len()),
        concentrations: Vec::with_capacity(per_bin.len()),
    };
    for bin in per_bin {
        for (a, m) in acc.iter_mut().zip(&bin.magnitudes) {
            *a += m;
        }
        trace.selection.push(bin.selection);
        trace.concentrations.push(bin.concentrations);
    }
    Ok((assemble(echo.params(), acc, nfft, n_frames, cfg.hop)?, trace))
}

/// Plain STFT with one fixed window over the same range interval and frame
/// grid; the reference the adaptive map reduces to for a one-window bank.
pub fn fixed_window_stft_map(
    echo: &EchoMatrix,
    window: &WindowSpec,
    cfg: &AstftConfig,
) -> Result<SpectroMap, MapError> {
    let (nc, ns) = (echo.n_chirps(), echo.n_samples());
    let cfg = AstftConfig {
        window_bank: vec![*window],
        ..cfg.clone()
    };
    cfg.validate(nc, ns)?;
    let w = window.coefficients()?;
    let (nfft, n_frames) = (cfg.nfft(), cfg.n_frames(nc));
    let dft = Dft::new(nfft);
    let profiles = range_profiles(echo);
    let columns = mti_columns(&profiles, ns, cfg.range_bin_lo..=cfg.range_bin_hi, &cfg.mti)?;

    let mut acc = vec![0.0; n_frames * nfft];
    let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
    for s in &columns {
        for f in 0..n_frames {
            frame_into(s, &w, f * cfg.hop, &mut buf);
            dft.process(&mut buf);
            for (a, z) in acc[f * nfft..(f + 1) * nfft].iter_mut().zip(&buf) {
                *a += z.norm();
            }
        }
    }
    assemble(echo.params(), acc, nfft, n_frames, cfg.hop)
}

struct BinResult {
    magnitudes: Vec<f64>,
    selection: Vec<usize>,
    concentrations: Vec<Vec<f64>>,
}

fn adaptive_column(
    s: &[Complex64],
    bank: &[Vec<f64>],
    hop: usize,
    n_frames: usize,
    dft: &Dft,
    eps: f64,
) -> BinResult {
    let nfft = dft.len();
    let mut magnitudes = vec![0.0; n_frames * nfft];
    let mut selection = Vec::with_capacity(n_frames);
    let mut concentrations = Vec::with_capacity(n_frames);
    let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
    let mut best_mag = vec![0.0; nfft];
    let mut mag = vec![0.0; nfft];
    for f in 0..n_frames {
        let mut best = (0, f64::INFINITY);
        let mut scores = Vec::with_capacity(bank.len());
        for (j, w) in bank.iter().enumerate() {
            frame_into(s, w, f * hop, &mut buf);
            dft.process(&mut buf);
            for (m, z) in mag.iter_mut().zip(&buf) {
                *m = z.norm();
            }
            let score = dsp::concentration(&mag, eps);
            scores.push(score);
            if score < best.1 {
                best = (j, score);
                best_mag.copy_from_slice(&mag);
            }
        }
        magnitudes[f * nfft..(f + 1) * nfft].copy_from_slice(&best_mag);
        selection.push(best.0);
        concentrations.push(scores);
    }
    BinResult {
        magnitudes,
        selection,
        concentrations,
    }
}

/// Windowed segment centred on chirp `centre`, zero outside the recording
/// and zero-padded to the buffer length.
fn frame_into(s: &[Complex64], w: &[f64], centre: usize, buf: &mut [Complex64]) {
    let zero = Complex64::new(0.0, 0.0);
    buf.fill(zero);
    let start = centre as isize - (w.len() / 2) as isize;
    for (k, &wk) in w.iter().enumerate() {
        let n = start + k as isize;
        if n >= 0 && (n as usize) < s.len() {
            buf[k] = s[n as usize] * wk;
        }
    }
}

fn assemble(
    params: &RadarParams,
    acc: Vec<f64>,
    nfft: usize,
    n_frames: usize,
    hop: usize,
) -> Result<SpectroMap, MapError> {
    let order = doppler_bin_order(nfft);
    let mut values = Vec::with_capacity(acc.len());
    for &k in &order {
        for f in 0..n_frames {
            values.push(dsp::db(acc[f * nfft + k], LOG_FLOOR));
        }
    }
    let t = params.chirp_duration_s;
    let df = 1.0 / (nfft as f64 * t);
    SpectroMap::new(
        Domain::DopplerTime,
        nfft,
        n_frames,
        values,
        Axis::new("doppler", "Hz", -((nfft / 2) as f64) * df, df),
        Axis::new("time", "s", 0.0, hop as f64 * t),
        *params,
    )
}
