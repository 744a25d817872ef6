use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt header: {0}")]
    CorruptHeader(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("quantization factor out of range: {0} (must be >= 1)")]
    QOutOfRange(u32),
    #[error("register too small: {0}")]
    RegisterTooSmall(String),
    #[error("image too large: {width}x{height} (limit {limit}x{limit})")]
    ImageTooLarge { width: u32, height: u32, limit: u32 },
    #[error("too many qubits: {total} (limit {limit})")]
    TooManyQubits { total: usize, limit: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("register mismatch between circuits")]
    RegisterMismatch,
    #[error("nondeterministic reset on qubit {qubit}: pre-reset probability {probability}")]
    NondeterministicReset { qubit: usize, probability: f64 },
    #[error("malformed group: {0}")]
    MalformedGroup(String),
    #[error("missing group metadata")]
    MissingGroupMetadata,
    #[error("coefficient out of bounds: block ({block_row},{block_col}) position ({x},{y})")]
    CoefficientOutOfBounds {
        block_row: u32,
        block_col: u32,
        x: u8,
        y: u8,
    },
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),
    #[error("not a power of two: {0}")]
    NotPowerOfTwo(u64),
    #[error("circuit serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("manifest: {0}")]
    Manifest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
