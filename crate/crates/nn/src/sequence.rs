//! Feature map to time sequence: width is time.

use serde::{Deserialize, Serialize};

use crate::tensor::{Sequence, Tensor4};
use crate::NnError;

/// How the `(C, H)` slice of one width column becomes a feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum SequenceRule {
    /// `D = H·C`, index `h·C + c`.
    #[default]
    #[serde(rename = "hxc")]
    HxC,
    /// `D = C`, mean over height.
    #[serde(rename = "c_only")]
    COnly,
}

impl SequenceRule {
    pub fn feature_dim(self, channels: usize, height: usize) -> usize {
        match self {
            Self::HxC => channels * height,
            Self::COnly => channels,
        }
    }

    pub fn parse(s: &str) -> Result<Self, NnError> {
        match s.to_ascii_lowercase().as_str() {
            "hxc" | "h_x_c" => Ok(Self::HxC),
            "c" | "c_only" | "conly" => Ok(Self::COnly),
            _ => Err(NnError::Unknown {
                kind: "sequence rule",
                name: s.to_string(),
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::HxC => "hxc",
            Self::COnly => "c_only",
        }
    }
}

/// `(B, C, H, W)` to `(B, W, D)`.
pub fn to_sequence(x: &Tensor4, rule: SequenceRule) -> Sequence {
    let (b, c, h, w) = x.dims();
    let d = rule.feature_dim(c, h);
    let mut seq = Sequence::zeros(b, w, d);
    for s in 0..b {
        for ch in 0..c {
            let plane = x.plane(s, ch);
            for row in 0..h {
                for t in 0..w {
                    let v = plane[row * w + t];
                    match rule {
                        SequenceRule::HxC => seq.step_mut(s, t)[row * c + ch] = v,
                        SequenceRule::COnly => seq.step_mut(s, t)[ch] += v / h as f64,
                    }
                }
            }
        }
    }
    seq
}

/// Inverse of [`to_sequence`] under `HxC`; the adjoint for both rules.
pub fn from_sequence(seq: &Sequence, rule: SequenceRule, shape: [usize; 4]) -> Result<Tensor4, NnError> {
    let [b, c, h, w] = shape;
    let want = [b, w, rule.feature_dim(c, h)];
    if seq.shape() != want {
        return Err(NnError::shape("sequence", want.to_vec(), seq.shape().to_vec()));
    }
    let mut x = Tensor4::zeros(shape);
    for s in 0..b {
        for ch in 0..c {
            let plane = x.plane_mut(s, ch);
            for row in 0..h {
                for t in 0..w {
                    plane[row * w + t] = match rule {
                        SequenceRule::HxC => seq.step(s, t)[row * c + ch],
                        SequenceRule::COnly => seq.step(s, t)[ch] / h as f64,
                    };
                }
            }
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(SequenceRule::HxC.feature_dim(1280, 7), 8960);
        assert_eq!(SequenceRule::COnly.feature_dim(1280, 7), 1280);
        let x = Tensor4::zeros([2, 1280, 7, 7]);
        assert_eq!(to_sequence(&x, SequenceRule::HxC).shape(), [2, 7, 8960]);
        assert_eq!(to_sequence(&x, SequenceRule::COnly).shape(), [2, 7, 1280]);
    }

    #[test]
    fn hxc_round_trip_and_layout() {
        let x = Tensor4::from_vec([2, 3, 4, 5], (0..120).map(f64::from).collect()).unwrap();
        let seq = to_sequence(&x, SequenceRule::HxC);
        assert_eq!(seq.step(1, 4)[2 * 3 + 1], x.get(1, 1, 2, 4));
        assert_eq!(from_sequence(&seq, SequenceRule::HxC, x.shape()).unwrap(), x);
    }

    #[test]
    fn c_only_averages_height() {
        let x = Tensor4::from_vec([1, 2, 2, 1], vec![1.0, 3.0, -2.0, 6.0]).unwrap();
        let seq = to_sequence(&x, SequenceRule::COnly);
        assert_eq!(seq.data, vec![2.0, 2.0]);
    }

    #[test]
    fn rule_names() {
        assert_eq!(SequenceRule::parse("c").unwrap(), SequenceRule::COnly);
        assert_eq!(SequenceRule::parse("HxC").unwrap(), SequenceRule::HxC);
        assert!(SequenceRule::parse("w").is_err());
        assert_eq!(serde_json::to_string(&SequenceRule::COnly).unwrap(), "\"c_only\"");
    }
}
