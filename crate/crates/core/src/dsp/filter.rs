use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::IirCoeffs;

/// How a filter is run over a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterMode {
    /// Causal difference equation, zero initial state.
    #[default]
    Causal,
    /// Forward pass, then a second causal pass over the reversed output.
    ZeroPhase,
}

/// Sample types the difference equation can run on. Complex samples are
/// filtered on their real and imaginary parts independently, which for
/// real coefficients is the same arithmetic.
pub trait FilterSample:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    const ZERO: Self;
}

impl FilterSample for f64 {
    const ZERO: Self = 0.0;
}

impl FilterSample for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
}

/// `y[n] = Σ_{k≥0} b_k x[n-k] - Σ_{k≥1} a_k y[n-k]`, zero initial state.
pub fn iir_filter<T: FilterSample>(coeffs: &IirCoeffs, x: &[T]) -> Vec<T> {
    let mut y = Vec::with_capacity(x.len());
    for n in 0..x.len() {
        let mut acc = T::ZERO;
        for (k, &bk) in coeffs.b.iter().enumerate().take(n + 1) {
            acc = acc + x[n - k] * bk;
        }
        for (k, &ak) in coeffs.a.iter().enumerate().skip(1).take(n) {
            acc = acc - y[n - k] * ak;
        }
        y.push(acc);
    }
    y
}

pub fn iir_filter_with<T: FilterSample>(coeffs: &IirCoeffs, x: &[T], mode: FilterMode) -> Vec<T> {
    match mode {
        FilterMode::Causal => iir_filter(coeffs, x),
        FilterMode::ZeroPhase => {
            let mut y = iir_filter(coeffs, x);
            y.reverse();
            let mut y = iir_filter(coeffs, &y);
            y.reverse();
            y
        }
    }
}
