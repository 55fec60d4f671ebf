use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(genecluster::Error),
    #[error("{0}")]
    Algorithm(genecluster::Error),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Csv(#[from] csv::Error),
    #[error("output error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 1 usage, 2 data, 3 algorithm.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 2,
            CliError::Algorithm(_) => 3,
        }
    }
}

impl From<genecluster::Error> for CliError {
    fn from(e: genecluster::Error) -> Self {
        if e.is_data_error() {
            CliError::Data(e)
        } else {
            CliError::Algorithm(e)
        }
    }
}
