//! Training and evaluation at desk scale: Adam with a step schedule,
//! softmax cross-entropy, stratified splits, synthetic toy data and
//! confusion-matrix metrics.

pub mod data;
pub mod loss;
pub mod metrics;
pub mod optim;
pub mod split;
pub mod trainer;

pub use data::{Dataset, Sample};
pub use loss::cross_entropy;
pub use metrics::{evaluate, Classifier, MetricsReport};
pub use optim::{adam_step, learning_rate, Adam, AdamConfig, AdamState};
pub use split::{stratified_split, Split};
pub use trainer::{load_model, train, EpochRecord, TrainConfig, TrainOutcome};

use pecl_core::maps::MapError;
use pecl_core::synth::SynthError;
use pecl_nn::NnError;

#[derive(Debug, thiserror::Error)]
pub enum TrainError {
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("label {label} outside 0..{classes}")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("class {class} has {count} samples; at least {min} are needed")]
    TooFewSamples { class: usize, count: usize, min: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed {0}")]
    Format(String),
}

impl TrainError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
