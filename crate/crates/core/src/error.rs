use thiserror::Error;

/// Errors raised by state construction, bound evaluation and the scenario builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Hilbert-space dimension must be at least 2 (got {0})")]
    DimensionTooSmall(usize),

    #[error("state is not normalized: norm = {norm:.3e} deviates from 1 by more than {tolerance:e}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| entry = {max_asymmetry:.3e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("expectation value has imaginary part {imag:.3e}; operator is not Hermitian")]
    NonRealExpectation { imag: f64 },

    #[error("deviation vector vanishes (norm {norm:.3e}); the state is an eigenstate of the observable")]
    ZeroDeviation { norm: f64 },

    #[error("deviation vectors were built on different base states")]
    MismatchedBase,

    #[error("seed states are not orthonormal: max Gram-matrix error {max_error:.3e}")]
    SeedsNotOrthonormal { max_error: f64 },

    #[error("{seeds} seed states cannot fit in a {dim}-dimensional space")]
    TooManySeeds { seeds: usize, dim: usize },

    #[error("auxiliary state '{label}' is not orthogonal to the base state: |overlap| = {overlap:.3e}")]
    AuxNotOrthogonal { label: String, overlap: f64 },

    #[error("lambda must be a positive real number (got {0})")]
    InvalidLambda(f64),

    #[error("combined deviation Psi_A + Psi_B vanishes; canonical auxiliary state undefined")]
    ZeroCombinedDeviation,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid spin quantum number {0}: 2j must be a positive integer")]
    InvalidSpin(f64),

    #[error("all expansion coefficients are zero")]
    ZeroCoefficients,

    #[error("basis does not start with (Psi, normalized Psi_A, normalized Psi_B): {0}")]
    BasisSeedMismatch(String),

    #[error("grid too narrow: normalization deficit {deficit:.3e}")]
    GridTooNarrow { deficit: f64 },

    #[error("squared modulus is not even under x -> -x (max asymmetry {max_asymmetry:.3e})")]
    EvennessViolated { max_asymmetry: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that signal a violated mathematical precondition of an
    /// evaluator (as opposed to malformed input).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::PreconditionViolated(_)
                | Error::AuxNotOrthogonal { .. }
                | Error::ZeroDeviation { .. }
                | Error::ZeroCombinedDeviation
                | Error::InvalidLambda(_)
        )
    }
}
