use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation dimension {0} must be even and at least 2")]
    InvalidDimension(usize),

    #[error("number of modes must be positive, got {0}")]
    InvalidModeCount(usize),

    #[error("dimension {requested} exceeds size budget {budget}")]
    SizeBudget { requested: u128, budget: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry ({row}, {col}) out of range for dimension {dim}")]
    EntryOutOfRange { row: usize, col: usize, dim: usize },

    #[error("kron of an empty factor list")]
    EmptyKron,

    #[error("operator `{0}` is not Hermitian")]
    NotHermitian(String),

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("expectation has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error(
        "power iteration did not converge after {iterations} iterations (last estimate {last})"
    )]
    NotConverged { last: f64, iterations: usize },

    #[error("vector ({x}, {y}, {z}) is not a unit vector")]
    NotUnitVector { x: f64, y: f64, z: f64 },

    #[error("invalid parity profile: {0}")]
    InvalidProfile(String),

    #[error("profile of length {len} does not fit dimension {dim} (at most {max} coefficients)")]
    ProfileTooLong { len: usize, dim: usize, max: usize },

    #[error("squeezing parameter must be positive and finite, got {0}")]
    InvalidSqueezing(f64),

    #[error("invalid measurement settings: {0}")]
    InvalidSettings(String),

    #[error("expected a {expected}-mode state, got {found} modes")]
    WrongModeCount { expected: usize, found: usize },

    #[error("{what} = {value} outside supported range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("grid of {points} points exceeds budget {budget}")]
    GridBudget { points: u128, budget: u128 },

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownName {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
