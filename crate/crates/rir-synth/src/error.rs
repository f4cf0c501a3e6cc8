use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The response already sits more than the acceptance band above the
    /// requested DRR before any ray has been deleted, which signals an
    /// inconsistent parameter set rather than a recoverable state.
    #[error(
        "initial DRR {initial_db:.2} dB already exceeds the {target_db:.2} dB target \
         by more than {band_db} dB"
    )]
    InfeasibleDrr {
        initial_db: f64,
        target_db: f64,
        band_db: f64,
    },

    #[error(
        "DRR target {target_db:.2} dB unreachable: {survivors} reflection(s) left \
         at {reached_db:.2} dB"
    )]
    ExhaustedRays {
        target_db: f64,
        reached_db: f64,
        survivors: usize,
    },

    #[error("invalid band layout: {0}")]
    InvalidBandLayout(String),

    /// A per-band generation failure, tagged with the band index.
    #[error("band {band}: {source}")]
    Band { band: usize, source: Box<Error> },

    #[error("sample rate mismatch: {left} Hz vs {right} Hz")]
    SampleRateMismatch { left: u32, right: u32 },

    #[error("invalid band edges: [{low} Hz, {high} Hz] at sample rate {sample_rate} Hz")]
    InvalidBandEdges {
        low: f64,
        high: f64,
        sample_rate: u32,
    },

    #[error("silent input")]
    SilentInput,

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("unsatisfiable parameter ranges: {0}")]
    UnsatisfiableRanges(String),

    #[error(transparent)]
    Metric(#[from] MetricError),

    #[error("sample {value} outside [-1, 1], cannot quantize to pcm16")]
    Clipping { value: f64 },

    #[error("unsupported WAV format: {0}")]
    UnsupportedFormat(String),

    #[error("corrupt file {path}: {detail}")]
    CorruptFile { path: PathBuf, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Estimator failures. Each acoustic metric can fail independently of the
/// others, so these are kept cheap to clone and carry per-field in reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("silent input")]
    SilentInput,

    #[error("insufficient decay: curve reaches {reached_db:.1} dB, need {required_db:.1} dB")]
    InsufficientDecay { reached_db: f64, required_db: f64 },

    #[error("no reverberant energy after the direct window")]
    NoReverberantEnergy,

    #[error("no reflection above the detection threshold")]
    NoReflectionFound,

    #[error("detection threshold must be negative, got {0} dB")]
    InvalidThreshold(f64),

    #[error("direct window must be a finite non-negative duration, got {0} s")]
    InvalidWindow(f64),
}
