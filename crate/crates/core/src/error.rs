use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Hilbert space: {0}")]
    InvalidSpec(String),

    #[error("emitter index {index} out of range 1..={n_emitters}")]
    EmitterIndex { index: usize, n_emitters: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("position r = {r} nm lies outside the tabulated mode profile (r_max = {r_max} nm)")]
    OutsideProfile { r: f64, r_max: f64 },

    #[error("invalid mode profile: {0}")]
    InvalidProfile(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("{what} of size {size} exceeds the limit {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("step size underflow at t = {t} fs (h = {step:e} fs)")]
    StepUnderflow { t: f64, step: f64 },

    #[error("steady-state solve failed: {0}")]
    SteadyState(String),

    #[error("{required} or more emitters required, found {found}")]
    TooFewEmitters { required: usize, found: usize },

    #[error("sweep of {cells} cells exceeds the cell budget {budget}")]
    CellBudget { cells: usize, budget: usize },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}
