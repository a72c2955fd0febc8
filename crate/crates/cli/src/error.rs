use pecl_core::augment::AugmentError;
use pecl_core::maps::MapError;
use pecl_core::radar_io::RadarIoError;
use pecl_core::synth::SynthError;
use pecl_nn::NnError;
use pecl_train::TrainError;
use serde::Serialize;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed input, bad arguments or configuration.
    #[error("{0}")]
    Input(String),
    /// The command ran but a check it performs did not hold.
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Internal(String),
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    kind: &'a str,
    exit_code: i32,
    message: String,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => EXIT_INPUT,
            Self::Verification(_) => EXIT_VERIFICATION,
            Self::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Input(_) => "input",
            Self::Verification(_) => "verification",
            Self::Internal(_) => "internal",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&serde_json::json!({ "error": ErrorJson {
            kind: self.kind(),
            exit_code: self.exit_code(),
            message: self.to_string(),
        }}))
        .expect("error serializes")
    }

    pub fn write(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        Self::Internal(format!("writing {}: {e}", path.display()))
    }
}

impl From<RadarIoError> for CliError {
    fn from(e: RadarIoError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<AugmentError> for CliError {
    fn from(e: AugmentError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<NnError> for CliError {
    fn from(e: NnError) -> Self {
        match e {
            NnError::Io { .. } | NnError::Format(_) | NnError::InvalidConfig(_) | NnError::Unknown { .. } => {
                Self::Input(e.to_string())
            }
            _ => Self::Internal(e.to_string()),
        }
    }
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        match e {
            TrainError::Nn(n) => n.into(),
            TrainError::ShapeMismatch(_) => Self::Internal(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}
