use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("index slot {slot} out of range for rank {rank}")]
    SlotOutOfRange { slot: usize, rank: usize },
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("degenerate map: {0}")]
    DegenerateMap(String),
    #[error("no local inverse: {0}")]
    NoLocalInverse(String),
    #[error("jet order budget exceeded: need {needed}, maximum is {max}")]
    OrderBudget { needed: usize, max: usize },
    #[error("density weight {found} not supported here (expected {expected})")]
    Weight { found: f64, expected: f64 },
    #[error("invalid difference tensor: {0}")]
    InvalidDifferenceTensor(String),
    #[error("not a contact projective structure: {0}")]
    NotContactProjective(String),
    #[error("identity is vacuous: {0}")]
    Vacuous(String),
    #[error("integration step rejected: {0}")]
    StepRejected(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
