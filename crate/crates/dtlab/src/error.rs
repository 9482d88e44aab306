//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point is not in the function's domain")]
    OutOfDomain,

    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        needed: usize,
        cap: usize,
    },

    #[error("function is not monotone")]
    NotMonotone,

    #[error("vertex set is not a vertex cover")]
    NotACover,

    #[error("gadget graph has no edges")]
    EmptyGadget,

    #[error("operation does not apply to a constant function")]
    ConstantFunction,

    #[error("pmf support contains a point outside the function's domain")]
    SupportMismatch,

    #[error("no feasible padding parameter below the cap {cap}")]
    NoFeasibleEll { cap: u64 },

    #[error("error budget must be strictly below 2^-3r")]
    EpsTooLarge,

    #[error("invalid cutoff threshold {tau}, must be at most r = {r}")]
    InvalidCutoff { tau: usize, r: usize },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
