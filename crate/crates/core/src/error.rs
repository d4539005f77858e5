use thiserror::Error;

use crate::fitting::RationalFit;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: the single-system dimension must be at least 2")]
    InvalidDimension(usize),

    #[error("invalid coherent point (theta = {theta}, phi = {phi}): need 0 <= theta <= pi and 0 <= phi < 2 pi")]
    InvalidPoint { theta: f64, phi: f64 },

    #[error("index {index} out of range for {what} of size {bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("angular momentum quantum number {0} is not a non-negative multiple of 1/2")]
    NotHalfInteger(f64),

    #[error("eigensolver failure: {0}")]
    Numeric(String),

    #[error("top eigenspace has multiplicity {multiplicity}, fewer than the {required} vectors an isometry needs")]
    DegeneracyDeficit {
        multiplicity: usize,
        required: usize,
    },

    #[error("isometry constraints have no positive semidefinite solution (best residual {residual:.3e})")]
    ConstraintInfeasible { residual: f64 },

    #[error("dimension {d} exceeds the dense limit {max} for d^3 x d^3 operators")]
    DimensionTooLarge { d: usize, max: usize },

    #[error("rational fit needs at least {required} points, got {found}")]
    TooFewPoints { required: usize, found: usize },

    #[error("invalid fidelity curve: {0}")]
    InvalidCurve(String),

    #[error("linearized fit system is singular")]
    SingularSystem,

    #[error("fit pole d = {pole} lies on a data abscissa")]
    PoleOnData { pole: f64 },

    #[error("Gauss-Newton did not converge in {iterations} steps")]
    NotConverged {
        iterations: usize,
        best: Box<RationalFit>,
    },

    #[error("invalid tolerance {0}: must be positive and finite")]
    InvalidTolerance(f64),

    #[error("at dimension d = {d}: {source}")]
    AtDimension {
        d: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}
