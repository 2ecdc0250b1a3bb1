use thiserror::Error;

#[derive(Error, Debug)]
pub enum CliError {
    /// Bad configuration; exit status 2.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Sim(#[from] qdwalk::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// The run finished but its result is a failure (unconverged search,
    /// spurious transitions); outputs are still written.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}
