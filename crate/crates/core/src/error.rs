use thiserror::Error;

#[derive(Debug, Error)]
pub enum MixcutError {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("node set mismatch: cut covers {cut} nodes but graph has {graph}")]
    NodeSetMismatch { cut: usize, graph: usize },

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("instance has {nodes} nodes, above the exact enumeration cap of {cap}")]
    AboveEnumerationCap { nodes: usize, cap: usize },

    #[error("degenerate instance: {0}")]
    Degenerate(String),

    #[error("zero divergence: the two components are identical and cannot be separated")]
    ZeroDivergence,

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl MixcutError {
    /// True for refusals caused by caps or invalid inputs rather than I/O.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Self::Io(_) | Self::Csv(_))
    }
}

pub type Result<T> = std::result::Result<T, MixcutError>;
