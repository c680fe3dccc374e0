use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected} bits, got {actual}")]
    WidthMismatch { expected: u32, actual: u32 },

    #[error("value {value:#x} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: u32 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown register `{0}`")]
    UnknownRegister(String),

    #[error("matrix is singular over GF(2)")]
    SingularMatrix,

    #[error("linear map must be non-zero")]
    ZeroMap,

    #[error("enumeration budget exceeded: {bits} bits requested, at most {limit} allowed")]
    EnumerationBudget { bits: u32, limit: u32 },

    #[error("variant {0} has no decoupled (public-function) split")]
    UnsupportedVariant(String),

    #[error("degenerate key material rejected by policy: {0}")]
    Degenerate(String),

    #[error("attack did not produce a verified result after {attempts} attempts")]
    RetriesExhausted { attempts: u32 },

    #[error("prepared state was already consumed by an earlier run")]
    StaleState,

    #[error("first-stage result is not verified against ground truth")]
    FirstStageUnverified,

    #[error("period system is indeterminate (nullspace dimension {nullspace_dim})")]
    IndeterminateRank { nullspace_dim: u32 },

    #[error("instance mismatch: {0}")]
    InstanceMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
