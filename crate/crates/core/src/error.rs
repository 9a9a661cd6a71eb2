use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },
    #[error("enumeration of k = {k} ladder pairs exceeds the cap of {cap}")]
    EnumerationTooLarge { k: usize, cap: usize },
    #[error("entry ({row}, {col}) lies in the truncation guard of a dim-{dim} operator with guard {guard}")]
    GuardedEntry {
        row: usize,
        col: usize,
        dim: usize,
        guard: usize,
    },
    #[error("operator dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("density matrix trace is {trace}, expected 1")]
    Trace { trace: f64 },
    #[error("density matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("density matrix has negative eigenvalue {eigenvalue:e}")]
    NegativeEigenvalue { eigenvalue: f64 },
    #[error("Fock tail weight {tail_mass:e} above level {level} exceeds {limit:e}")]
    Truncation {
        tail_mass: f64,
        level: usize,
        limit: f64,
    },
    #[error("invalid state parameter: {0}")]
    InvalidState(String),
}

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("invalid state spec: {0}")]
    Spec(String),
    #[error("sample count must be positive")]
    EmptyBatch,
    #[error("carrier {carrier_hz} Hz is undersampled at {fs} Hz (need fs > {factor} x carrier)")]
    Aliasing {
        carrier_hz: f64,
        fs: f64,
        factor: f64,
    },
    #[error("invalid trace parameter: {0}")]
    Trace(String),
}

#[derive(Debug, Error)]
pub enum MomentsError {
    #[error("need at least {required} samples, got {got}")]
    InsufficientSamples { required: usize, got: usize },
    #[error("need at least {required} bootstrap resamples, got {got}")]
    InsufficientResamples { required: usize, got: usize },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("k_sigma = {0} requires bootstrap error bars on the input statistics")]
    MissingErrors(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("boundary grid must be sorted and nonnegative")]
    InvalidGrid,
}

#[derive(Debug, Error)]
pub enum WidebandError {
    #[error("trace has {len} samples, need at least {min}")]
    Degenerate { len: usize, min: usize },
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("malformed data file: {0}")]
    Malformed(String),
}

/// Crate-wide error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Moments(#[from] MomentsError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Wideband(#[from] WidebandError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
