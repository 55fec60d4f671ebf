use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected {expected} fields, found {found}")]
    InconsistentColumns {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("input contains no data rows")]
    NoDataRows,
    #[error("all rows dropped: every row has at least one missing value")]
    AllRowsDropped,
    #[error("row '{label}' has zero standard deviation and cannot be normalized")]
    ConstantRow { label: String },
    #[error("row '{label}' has fewer than 2 columns and cannot be normalized")]
    TooFewColumns { label: String },
    #[error("duplicate row label '{label}'")]
    DuplicateLabel { label: String },
    #[error("non-finite value in row {row}, column {column}")]
    NonFinite { row: usize, column: usize },
    #[error("invalid matrix shape: {0}")]
    Shape(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid cluster count k={k} for n={n} points")]
    InvalidK { k: usize, n: usize },
    #[error("CCIA seeding needs n >= 2k, got n={n}, k={k}")]
    InsufficientPoints { n: usize, k: usize },
    #[error("cluster {cluster} is empty")]
    EmptyCluster { cluster: usize },
    #[error("label {label} out of range for k={k}")]
    LabelOutOfRange { label: usize, k: usize },
    #[error("cluster split needs at least 2 members, got {0}")]
    TooFewMembers(usize),
    #[error("invalid merge of clusters {i} and {j} among {k}")]
    InvalidMerge { i: usize, j: usize, k: usize },
    #[error("need at least {needed} clusters, got {found}")]
    TooFewClusters { needed: usize, found: usize },
    #[error("all clusters were discarded")]
    AllClustersDiscarded,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for failures caused by the input data rather than by clustering.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::InconsistentColumns { .. }
                | Error::NoDataRows
                | Error::AllRowsDropped
                | Error::ConstantRow { .. }
                | Error::TooFewColumns { .. }
                | Error::DuplicateLabel { .. }
                | Error::NonFinite { .. }
                | Error::Shape(_)
        )
    }
}
