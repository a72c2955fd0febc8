use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DspError;

/// Transfer function `H(z) = Σ b_k z^-k / Σ a_k z^-k` with `a[0] = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IirCoeffs {
    pub b: Vec<f64>,
    pub a: Vec<f64>,
}

impl IirCoeffs {
    pub fn new(b: Vec<f64>, a: Vec<f64>) -> Self {
        let mut c = Self { b, a };
        c.normalize();
        c
    }

    /// Scales so that `a[0] == 1`.
    pub fn normalize(&mut self) {
        let a0 = self.a[0];
        if a0 != 1.0 {
            self.b.iter_mut().for_each(|v| *v /= a0);
            self.a.iter_mut().for_each(|v| *v /= a0);
        }
    }

    pub fn order(&self) -> usize {
        self.a.len().max(self.b.len()) - 1
    }

    /// Evaluates `H` at a point of the z-plane.
    pub fn response(&self, z: Complex64) -> Complex64 {
        let zi = z.inv();
        let eval = |c: &[f64]| {
            c.iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &v| acc * zi + v)
        };
        eval(&self.b) / eval(&self.a)
    }

    /// `|H(e^{jπf})|` for `f` a fraction of Nyquist.
    pub fn gain_at(&self, fraction_of_nyquist: f64) -> f64 {
        self.response(Complex64::from_polar(1.0, PI * fraction_of_nyquist))
            .norm()
    }

    /// Poles as eigenvalues of the companion matrix of the denominator.
    pub fn poles(&self) -> Vec<Complex64> {
        let n = self.a.len() - 1;
        if n == 0 {
            return Vec::new();
        }
        let mut m = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            m[(0, j)] = -self.a[j + 1] / self.a[0];
        }
        for i in 1..n {
            m[(i, i - 1)] = 1.0;
        }
        m.complex_eigenvalues().iter().copied().collect()
    }

    pub fn is_stable(&self) -> bool {
        self.poles().iter().all(|p| p.norm() < 1.0)
    }
}

/// Zero/pole/gain form of a digital Butterworth high-pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ButterworthDesign {
    pub zeros: Vec<Complex64>,
    pub poles: Vec<Complex64>,
    pub gain: f64,
}

impl ButterworthDesign {
    /// Analog prototype, pre-warped high-pass transform, then the bilinear
    /// map with `fs = 2` so frequencies are fractions of Nyquist.
    pub fn highpass(order: usize, cutoff: f64) -> Result<Self, DspError> {
        if order == 0 {
            return Err(DspError::InvalidOrder);
        }
        if !(cutoff > 0.0 && cutoff < 1.0) {
            return Err(DspError::InvalidCutoff(cutoff));
        }
        let n = order as f64;
        let fs2 = 4.0;
        let warped = fs2 * (PI * cutoff / 2.0).tan();

        // Unit-cutoff prototype poles on the left half of the unit circle.
        let proto: Vec<Complex64> = (0..order)
            .map(|k| {
                let m = 2.0 * k as f64 - n + 1.0;
                -Complex64::from_polar(1.0, PI * m / (2.0 * n))
            })
            .collect();

        // s -> warped / s: poles invert, all zeros land at s = 0.
        let hp_poles: Vec<Complex64> = proto.iter().map(|p| warped / p).collect();
        let hp_gain = (Complex64::new(1.0, 0.0)
            / proto.iter().fold(Complex64::new(1.0, 0.0), |acc, p| acc * -p))
        .re;

        // Bilinear transform; s = 0 maps to z = 1.
        let poles: Vec<Complex64> = hp_poles.iter().map(|p| (fs2 + p) / (fs2 - p)).collect();
        let denom = hp_poles
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, p| acc * (fs2 - p));
        let gain = hp_gain * (Complex64::new(fs2.powi(order as i32), 0.0) / denom).re;

        Ok(Self {
            zeros: vec![Complex64::new(1.0, 0.0); order],
            poles,
            gain,
        })
    }

    /// Evaluates `H` from the factored form, which avoids the cancellation
    /// the expanded polynomials suffer near `z = 1`.
    pub fn response(&self, z: Complex64) -> Complex64 {
        let num = self.zeros.iter().fold(Complex64::new(self.gain, 0.0), |acc, q| acc * (z - q));
        let den = self.poles.iter().fold(Complex64::new(1.0, 0.0), |acc, p| acc * (z - p));
        num / den
    }

    pub fn coeffs(&self) -> IirCoeffs {
        let b = poly(&self.zeros).into_iter().map(|c| c.re * self.gain).collect();
        let a = poly(&self.poles).into_iter().map(|c| c.re).collect();
        IirCoeffs::new(b, a)
    }
}

/// Monic polynomial coefficients (highest power first) from its roots.
fn poly(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = c.clone();
        next.push(Complex64::new(0.0, 0.0));
        for (k, v) in c.iter().enumerate() {
            next[k + 1] -= v * r;
        }
        c = next;
    }
    c
}

/// Digital Butterworth high-pass of the given order, `cutoff` a fraction of
/// Nyquist.
pub fn butterworth_highpass(order: usize, cutoff: f64) -> Result<IirCoeffs, DspError> {
    Ok(ButterworthDesign::highpass(order, cutoff)?.coeffs())
}
