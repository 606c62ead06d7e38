use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse grouping of errors, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    Precondition,
    Numeric,
    Refused,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::InvalidInput => 2,
            ErrorClass::Precondition => 3,
            ErrorClass::Numeric => 4,
            ErrorClass::Refused => 5,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature did not converge (estimate {estimate:e}, error bound {error_bound:e})")]
    Convergence { estimate: f64, error_bound: f64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("function is not radial")]
    NotRadial,
    #[error("no tail certificate: {0}")]
    UncertifiableTail(String),
    #[error("function exceeds tolerance within one step of the scan end {r_max}; increase R_max")]
    RmaxTooSmall { r_max: f64 },
    #[error("clearance region T is empty")]
    EmptyRegion,
    #[error("no zero-free gap of width {width} at or beyond {from}")]
    GapNotFound { from: f64, width: f64 },
    #[error("witness set measure {0} does not exceed 1")]
    InsufficientMeasure(f64),
    #[error("no clearance: sup of f over T is {margin:e}")]
    NoClearance { margin: f64 },
    #[error("no dual clearance: min of transform over S-S is {min:e}")]
    NoDualClearance { min: f64 },
    #[error("alpha too large: F(0) = {f0:e} is not positive")]
    AlphaTooLarge { f0: f64 },
    #[error("transform vanishes on [0, r]: min {min:e} at {at}")]
    DualVanishes { min: f64, at: f64 },
    #[error("sharpening constant too large: transform of result reaches {min:e} at {at}")]
    CTooLarge { min: f64, at: f64 },
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("simplex exceeded {0} pivots")]
    SolverStall(usize),
    #[error("invalid bisection bracket: {0}")]
    BracketInvalid(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid eps {0}: fixture intervals overlap")]
    InvalidEps(f64),
    #[error("malformed descriptor: {0}")]
    Descriptor(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidDimension(_)
            | DimensionMismatch { .. }
            | Domain(_)
            | InvalidParameter(_)
            | DegenerateGrid(_)
            | InvalidEps(_)
            | Descriptor(_)
            | Json(_) => ErrorClass::InvalidInput,
            PreconditionFailed(_)
            | NotRadial
            | UncertifiableTail(_)
            | RmaxTooSmall { .. }
            | EmptyRegion
            | BracketInvalid(_)
            | InsufficientData(_) => ErrorClass::Precondition,
            Convergence { .. } | SolverStall(_) => ErrorClass::Numeric,
            GapNotFound { .. }
            | InsufficientMeasure(_)
            | NoClearance { .. }
            | NoDualClearance { .. }
            | AlphaTooLarge { .. }
            | DualVanishes { .. }
            | CTooLarge { .. } => ErrorClass::Refused,
        }
    }
}
