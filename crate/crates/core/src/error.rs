use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible spaces: expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    EmptySpace,

    #[error("null vector cannot be normalized")]
    NullVector,

    #[error("state not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("eigenstates are not orthonormal (states {first} and {second})")]
    NotOrthonormal { first: usize, second: usize },

    #[error("basis needs {expected} eigenstates, found {found}")]
    IncompleteBasis { expected: usize, found: usize },

    #[error("eigenvalue count {values} does not match eigenstate count {states}")]
    EigenvalueCount { values: usize, states: usize },

    #[error("no eigenstate carries eigenvalue {0}")]
    UnknownEigenvalue(f64),

    #[error("outcome has zero probability")]
    ImpossibleOutcome,

    #[error("measurement device has no states")]
    EmptyDevice,

    #[error("duplicate measurement-state label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown measurement-state label {0:?}")]
    UnknownLabel(String),

    #[error("device has {size} states; at most {max} are supported")]
    DeviceTooLarge { size: usize, max: usize },

    #[error(
        "exact enumeration is capped at {cap} measurement states (device has {size}); use sampled mode"
    )]
    CapacityExceeded { size: usize, cap: usize },

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("resolution amplitudes for true value {value} (column {column}) have squared sum {sum}, expected 1")]
    ResolutionNormalization { column: usize, value: f64, sum: f64 },

    #[error("resolution matrix shape: {0}")]
    ResolutionShape(String),

    #[error("resolution true values do not match the basis eigenvalues")]
    MisalignedEigenvalues,

    #[error("imprecise measurement requires a nondegenerate basis")]
    DegenerateBasis,

    #[error("unknown reported value {0}")]
    UnknownReportedValue(f64),

    #[error("reduced operator needs 0/1 resolution amplitudes (row {row}, column {column})")]
    NotZeroOne { row: usize, column: usize },

    #[error("reported value {0} does not cover a contiguous range of true values")]
    NonContiguousRange(f64),

    #[error("unknown example {0:?}")]
    UnknownExample(String),

    #[error("operation requires a real two-dimensional state")]
    NotRealPlanar,
}
