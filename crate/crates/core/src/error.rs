//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A map marked as an automorphism of W produced a (numerically) zero image.
    #[error("domain error: {0}")]
    Domain(String),
    /// Composition would exceed the configured polynomial degree cap.
    #[error("composed degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },
    /// Inversion was requested for a polynomial shape outside the supported families.
    #[error("map shape is not invertible: {0}")]
    NotInvertibleShape(String),
    /// Monomial support does not match any Wehler class.
    #[error("not a Wehler normal form: {0}")]
    NotWehlerForm(String),
    /// A diagonal coefficient modulus lies outside (0, 1).
    #[error("not a contraction: {0}")]
    NotContraction(String),
    /// Two maps that were required to commute do not.
    #[error("maps do not commute (residual {residual:.3e})")]
    NotCommuting { residual: f64 },
    /// A lift was expected to be anti-holomorphic.
    #[error("lift is not anti-holomorphic")]
    NotAntiholomorphic,
    /// No integer n with lift^2 = f^n could be verified.
    #[error("lift square is not a deck power: {0}")]
    NotDeckPower(String),
    /// The requested Real structure does not exist for this contraction.
    #[error("no such Real structure: {0}")]
    NoSuchStructure(String),
    /// A map required to be an involution is not one.
    #[error("map is not an involution (residual {residual:.3e})")]
    NotInvolution { residual: f64 },
    /// The lift square does not equal f.
    #[error("lift square is not f (residual {residual:.3e})")]
    NotOddSquare { residual: f64 },
    /// A linear solve was rank-deficient beyond tolerance and no least-norm solution verified.
    #[error("numerically singular: {0}")]
    NumericallySingular(String),
    /// The contraction admits no anti-holomorphic automorphisms.
    #[error("no anti-holomorphic automorphisms exist for this contraction")]
    NoAntiholomorphic,
    /// Flow or root construction requires positive diagonal coefficients.
    #[error("diagonal coefficients are not positive")]
    NotPositiveDiagonal,
    /// Flow or root construction requires real coefficients.
    #[error("coefficients are not real")]
    NotRealCoefficients,
    /// A root finder failed to converge.
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),
    /// Picard operations require a real, nonzero zeta.
    #[error("zeta is not a nonzero real number")]
    NotRealZeta,
    /// Picard involution of zero is undefined.
    #[error("zeta must be nonzero")]
    ZeroArgument,
    /// The matrix is not of the quaternionic shape [[a, -conj b], [b, conj a]].
    #[error("matrix is not of quaternionic shape")]
    NotQuaternionicShape,
    /// A chain node was applied to a point of the wrong kind.
    #[error("chain node applied to incompatible point: {0}")]
    ChainPointMismatch(String),
    /// Malformed or out-of-contract input (CLI payloads, parameter counts, non-finite scalars).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
