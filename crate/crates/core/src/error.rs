use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite state at integration step {step}")]
    NonFiniteState { step: usize },

    #[error("non-finite integrand sample at ({x}, {y})")]
    NonFiniteSample { x: f64, y: f64 },

    #[error("non-finite function value at t = {at}")]
    NonFiniteEval { at: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("abscissae not strictly increasing at index {index}")]
    NotIncreasing { index: usize },

    #[error("nonpositive coordinate at point {index}: ({x}, {y})")]
    NonPositivePoint { index: usize, x: f64, y: f64 },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("time must be nonnegative, got {t}")]
    NegativeTime { t: f64 },

    #[error("{what} diverges at t = 0 for an unbounded spectrum")]
    DivergentAtZero { what: &'static str },

    #[error("degenerate point at t = {t}: time derivative vanishes")]
    DegeneratePoint { t: f64 },

    #[error("probability grids do not match")]
    GridMismatch,

    #[error("negative information rate at index {index}")]
    NegativeInfoRate { index: usize },

    #[error("information rate vanishes; relative residual undefined")]
    ZeroInfoRate,

    #[error("emitted density mass {mass} deviates from 1 beyond tolerance")]
    MassDeficit { mass: f64 },

    #[error("no threshold crossing up to t = {t_max}")]
    NoCrossing { t_max: f64 },

    #[error("fit window contains no samples")]
    EmptyWindow,

    #[error("map is not strictly monotone over the ensemble support")]
    NonMonotoneMap,

    #[error("initial velocity is compressible: |k.v|/(|k||v|) = {residual}")]
    Compressible { residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
