use pentapod_core::geometry::GeometryError;
use pentapod_core::selfmotion::SelfMotionError;
use pentapod_core::study::StudyError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("degenerate design: {0}")]
    Degenerate(String),
    #[error("unrealizable: {0}")]
    Unrealizable(String),
    #[error("inconsistent: {0}")]
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Unrealizable(_) => 4,
            CliError::Inconsistent(_) => 5,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Schema(s) => CliError::Schema(s),
            e => CliError::Degenerate(e.to_string()),
        }
    }
}

impl From<SelfMotionError> for CliError {
    fn from(e: SelfMotionError) -> Self {
        match e {
            SelfMotionError::Unrealizable(_) => CliError::Unrealizable(e.to_string()),
            SelfMotionError::InconsistentSystem { .. } | SelfMotionError::NoRealPose => CliError::Inconsistent(e.to_string()),
            SelfMotionError::Geometry(g) => g.into(),
            e => CliError::Degenerate(e.to_string()),
        }
    }
}

impl From<StudyError> for CliError {
    fn from(e: StudyError) -> Self {
        CliError::Degenerate(e.to_string())
    }
}
