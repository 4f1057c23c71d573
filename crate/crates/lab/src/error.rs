use shifted_subset::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("capacity: {0}")]
    Capacity(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("verification failed: {0}")]
    Failed(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl LabError {
    pub fn exit_code(&self) -> u8 {
        match self {
            LabError::Usage(_) => 2,
            LabError::Capacity(_) => 3,
            LabError::Inconclusive(_) => 4,
            LabError::Failed(_) | LabError::Io(_) | LabError::Json(_) | LabError::Csv(_) => 1,
        }
    }
}

impl From<CoreError> for LabError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Capacity { .. } => LabError::Capacity(e.to_string()),
            CoreError::Inconclusive { .. } => LabError::Inconclusive(e.to_string()),
            _ => LabError::Usage(e.to_string()),
        }
    }
}

pub type LabResult<T> = Result<T, LabError>;
