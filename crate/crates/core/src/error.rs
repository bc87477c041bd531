use thiserror::Error;

/// Errors raised while building codes, decoders and simulation runs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed CRC polynomial: {0}")]
    Polynomial(String),

    #[error("CRC degree {0} unsupported (1..=64)")]
    CrcDegree(usize),

    #[error("message length must be at least 1")]
    EmptyMessage,

    #[error("length mismatch: expected {expected}, got {actual}")]
    Length { expected: usize, actual: usize },

    #[error("interleaver size {k} out of range ({min}..=164)")]
    InterleaverSize { k: usize, min: usize },

    #[error("bit index {index} out of range for message length {len}")]
    BitIndex { index: usize, len: usize },

    #[error("bit index {0} absorbed twice")]
    DuplicateBit(usize),

    #[error("block length {0} is not a power of two")]
    BlockLength(usize),

    #[error("K = {k} exceeds block length N = {n}")]
    RateAboveOne { k: usize, n: usize },

    #[error("invalid reliability sequence: {0}")]
    Reliability(String),

    #[error("invalid decoder configuration: {0}")]
    Decoder(String),

    #[error("invalid run configuration: {0}")]
    Config(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
