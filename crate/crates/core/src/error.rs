//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Rectangle construction rejected degenerate or non-finite input.
    #[error("invalid rectangle [{a}, {b}] x [{c}, {d}]: {reason}")]
    InvalidRectangle {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        reason: &'static str,
    },

    /// A rule parameter left its admissible half-interval.
    #[error("parameter {name} = {value} violates {lo} <= {name} <= {hi}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// A point argument fell outside the interval or rectangle it must lie in.
    #[error("{name} = {value} lies outside [{lo}, {hi}]")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// Gauss–Legendre order outside the supported range.
    #[error("unsupported Gauss-Legendre order {order} (supported: 1..={max})")]
    UnsupportedOrder { order: usize, max: usize },

    /// Bad quadrature configuration (zero panels and the like).
    #[error("invalid quadrature config: {reason}")]
    InvalidConfig { reason: &'static str },

    /// The panel-refinement self check of a line integral failed.
    #[error(
        "line quadrature did not converge: refinement delta {delta:e} exceeds tolerance {tol:e}"
    )]
    QuadratureFailure { delta: f64, tol: f64 },

    /// An integrand evaluation produced NaN or infinity.
    #[error("function evaluation returned a non-finite value at ({t}, {s})")]
    NonFiniteEvaluation { t: f64, s: f64 },

    /// An operation needed the mixed partial but the function carries none.
    #[error("operation requires a mixed-partial evaluator but none was supplied")]
    MissingMixedPartial,

    /// The reference integrator exhausted its refinement budget.
    #[error(
        "reference integral did not reach tolerance {tol:e} after {levels} refinement levels \
         (value {value}, last delta {est_error:e})"
    )]
    OracleNonConvergent {
        value: f64,
        est_error: f64,
        tol: f64,
        levels: usize,
    },

    /// A requested tolerance lies below what double precision supports.
    #[error("tolerance {given:e} below the supported minimum {min:e}")]
    ToleranceTooTight { given: f64, min: f64 },

    /// The finite-difference cross stencil cannot fit inside the rectangle.
    #[error(
        "finite-difference stencil of half-width {h} cannot be kept inside a \
         {width} x {height} rectangle"
    )]
    StencilOutOfDomain { h: f64, width: f64, height: f64 },

    /// A composite cell failed; carries the cell index and the root cause.
    #[error("cell ({i}, {j}) failed: {source}")]
    CellFailure {
        i: u32,
        j: u32,
        #[source]
        source: Box<Error>,
    },

    /// Expression text could not be parsed.
    #[error("parse error at byte {offset}: expected {expected}, found {found}")]
    Parse {
        offset: usize,
        expected: String,
        found: String,
    },

    /// Expression evaluation hit a real-arithmetic domain error.
    #[error("evaluation domain error: {reason}")]
    EvalDomain { reason: String },

    /// The symbolic differentiator does not support the expression.
    #[error("unsupported derivative: {reason}")]
    UnsupportedDerivative { reason: String },

    /// Catch-all for precondition violations on scalar arguments.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Index of the cell an error originated from, if any.
    pub fn cell_index(&self) -> Option<(u32, u32)> {
        match self {
            Error::CellFailure { i, j, .. } => Some((*i, *j)),
            _ => None,
        }
    }
}
