use thiserror::Error;

/// Errors produced anywhere in the detection pipeline.
#[derive(Debug, Error)]
pub enum FrodError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("label error: {0}")]
    Label(String),

    #[error("split error: {0}")]
    Split(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("relations are defined over different object subsets")]
    SubsetMismatch,

    #[error("fuzzy set universe does not match the relation subset")]
    UniverseMismatch,

    #[error("degenerate fuzzy set: {0}")]
    DegenerateSet(String),

    #[error("index {index} out of range for universe of size {len}")]
    Index { index: usize, len: usize },

    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    #[error("fuzzy entropy is zero; the relation does not distinguish any objects")]
    ZeroEntropy,

    #[error("attribute mismatch: {0}")]
    AttributeMismatch(String),

    #[error("no labeled normal objects available to derive a threshold")]
    EmptyNormals,

    #[error("degenerate ground truth: {0}")]
    DegenerateTruth(String),

    #[error("column `{0}` has not been normalized")]
    NotNormalized(String),
}

impl FrodError {
    /// True for errors caused by the label configuration rather than by the data itself.
    pub fn is_degenerate_labels(&self) -> bool {
        matches!(
            self,
            FrodError::DegenerateLabels(_) | FrodError::EmptyNormals | FrodError::Split(_)
        )
    }
}

pub type Result<T, E = FrodError> = std::result::Result<T, E>;
