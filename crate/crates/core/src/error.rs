use thiserror::Error;

use crate::kernel::Fuel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("fuel exhausted after {fuel} steps: {context}")]
    FuelExhausted { fuel: Fuel, context: String },
    #[error("index {index} not yet available ({available} emitted)")]
    IndexUnavailable { index: u64, available: u64 },
    #[error("set is finite: only {size} elements")]
    NotInfinite { size: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("precision exhausted: needed 2^-{needed} but the grid stops at 2^-{precision}")]
    PrecisionExhausted { needed: u32, precision: u32 },
    #[error("name(0) = {value} exceeds the busy-beaver table cutoff {cutoff}")]
    CutoffExceeded { value: u64, cutoff: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("stage {stage}: candidate stalls beyond fuel {fuel}")]
    CandidateStalls { stage: usize, fuel: Fuel },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
