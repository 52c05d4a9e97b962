use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuaternionError {
    #[error("zero quaternion has no inverse")]
    ZeroInverse,
    #[error("logarithm of the zero quaternion is undefined")]
    ZeroLog,
    #[error("log axis undefined for negative real quaternion {value}")]
    LogAxisUndefined { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series has {len} samples, at least {min} required")]
    TooShort { len: usize, min: usize },
    #[error("sample interval must be positive and finite, got {0}")]
    InvalidInterval(f64),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Failures inside the polar decomposition. Sample-level variants carry the
/// offending index.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolarError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("magnitude {magnitude:e} at sample {index} is below the degeneracy threshold")]
    NearZeroMagnitude { index: usize, magnitude: f64 },
    #[error("complex part vanishes at sample {index}; axis undefined there")]
    DegenerateAxis { index: usize },
    #[error("local minimum at series boundary (sample {index}) cannot be classified")]
    BoundaryMinimum { index: usize },
    #[error("envelope inconsistent with signal at sample {index} (carrier i-part {residual:e})")]
    InconsistentEnvelope { index: usize, residual: f64 },
    #[error("envelope magnitude differs from signal magnitude at sample {index} (relative {relative:e})")]
    EnvelopeMagnitude { index: usize, relative: f64 },
    #[error("carrier not normalized at sample {index} (alpha = {alpha})")]
    CarrierNormalization { index: usize, alpha: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl PolarError {
    /// Sample index the error refers to, when there is one.
    pub fn index(&self) -> Option<usize> {
        match *self {
            PolarError::NearZeroMagnitude { index, .. }
            | PolarError::DegenerateAxis { index }
            | PolarError::BoundaryMinimum { index }
            | PolarError::InconsistentEnvelope { index, .. }
            | PolarError::EnvelopeMagnitude { index, .. }
            | PolarError::CarrierNormalization { index, .. } => Some(index),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Transform,
    AxisNormalize,
    RecoverEnvelope,
    ExtractCarrier,
    RecoverPhase,
    InstantaneousFrequency,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Transform => "hyperanalytic",
            Stage::AxisNormalize => "axis_normalize",
            Stage::RecoverEnvelope => "recover_envelope",
            Stage::ExtractCarrier => "extract_carrier",
            Stage::RecoverPhase => "recover_phase",
            Stage::InstantaneousFrequency => "instantaneous_frequency",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{stage}: {source}")]
pub struct DecomposeError {
    pub stage: Stage,
    #[source]
    pub source: PolarError,
}

impl DecomposeError {
    pub fn at(stage: Stage) -> impl FnOnce(PolarError) -> DecomposeError {
        move |source| DecomposeError { stage, source }
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("non-uniform time grid at row {row} (line {line})")]
    NonUniform { row: usize, line: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    Config(String),
}

/// Top-level error for the pipeline and CLI. Each variant maps onto a
/// process exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Model(_) | Error::Series(_) | Error::Config(_) => 2,
            Error::Decompose(e) => match e.source {
                PolarError::Series(_) | PolarError::InvalidConfig(_) => 2,
                _ => 3,
            },
        }
    }
}
