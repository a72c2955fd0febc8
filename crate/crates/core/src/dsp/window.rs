use serde::{Deserialize, Serialize};

use super::DspError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowKind {
    Rectangular,
    /// `w[k] = exp(-alpha · ((k - c) / c)²)` with `c = (L-1)/2`; larger
    /// `alpha` gives a narrower window.
    Gaussian { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    #[serde(flatten)]
    pub kind: WindowKind,
    pub length: usize,
}

impl WindowSpec {
    pub fn rectangular(length: usize) -> Self {
        Self {
            kind: WindowKind::Rectangular,
            length,
        }
    }

    pub fn gaussian(length: usize, alpha: f64) -> Self {
        Self {
            kind: WindowKind::Gaussian { alpha },
            length,
        }
    }

    pub fn validate(&self) -> Result<(), DspError> {
        if self.length == 0 {
            return Err(DspError::EmptyWindow);
        }
        if let WindowKind::Gaussian { alpha } = self.kind {
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(DspError::InvalidAlpha(alpha));
            }
        }
        Ok(())
    }

    pub fn coefficients(&self) -> Result<Vec<f64>, DspError> {
        self.validate()?;
        let l = self.length;
        Ok(match self.kind {
            WindowKind::Rectangular => vec![1.0; l],
            WindowKind::Gaussian { .. } if l == 1 => vec![1.0],
            WindowKind::Gaussian { alpha } => {
                let c = (l - 1) as f64 / 2.0;
                (0..l)
                    .map(|k| {
                        let x = (k as f64 - c) / c;
                        (-alpha * x * x).exp()
                    })
                    .collect()
            }
        })
    }
}
