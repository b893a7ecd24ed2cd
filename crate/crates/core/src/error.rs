use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("binding error: {0}")]
    Binding(String),
    #[error("invalid ansatz: {0}")]
    Ansatz(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("degenerate partition: {0}")]
    DegeneratePartition(String),
    #[error("numeric fault: {0}")]
    NumericFault(String),
    #[error("ingestion error at row {row}: {msg}")]
    Ingestion { row: usize, msg: String },
    #[error("degenerate feature: column {0} is constant")]
    DegenerateFeature(usize),
    #[error("lookup error: {0}")]
    Lookup(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
