//! CPU reference network: EfficientNet-style backbones with CBAM attention,
//! LSTM and linear/max-pool heads, late fusion, and finite-difference
//! verified backward passes.
//!
//! Everything computes in `f64`. Forward and backward passes are
//! single-threaded so identical inputs give bitwise identical outputs.

pub mod accounting;
pub mod attention;
pub mod checkpoint;
pub mod config;
pub mod gradcheck;
pub mod heads;
pub mod layers;
pub mod lstm;
pub mod mbconv;
pub mod model;
pub mod param;
pub mod sequence;
pub mod tensor;

pub use config::{AttentionKind, ModelConfig, PresetRegistry, SequenceRule, StageConfig, Topology};
pub use model::{ImageClassifier, Pecl, PeclInput};
pub use param::{Init, Module, Param};
pub use tensor::{Matrix, Sequence, Tensor4};

#[derive(Debug, thiserror::Error)]
pub enum NnError {
    #[error("shape mismatch in {what}: expected {expected:?}, got {got:?}")]
    Shape {
        what: String,
        expected: Vec<usize>,
        got: Vec<usize>,
    },
    #[error("backward called before forward on {0}")]
    NoForward(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed {0}")]
    Format(String),
}

impl NnError {
    pub fn shape(what: &str, expected: Vec<usize>, got: Vec<usize>) -> Self {
        Self::Shape {
            what: what.to_string(),
            expected,
            got,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
