//! Error type shared across the library.
//!
//! Every fallible operation returns [`Result`]. Variants carry the measured
//! violation where one exists so callers can report how far an input was from
//! satisfying a precondition instead of a bare rejection.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error enumeration for matrix kernels, channel representations,
/// decompositions, and dilations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Matrix data or operand shapes are incompatible.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Raw matrix data failed validation (shape/entry checks).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// Input was expected to be Hermitian; the Frobenius deviation from its
    /// adjoint exceeded the tolerance.
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    /// Input was expected to be unitary; `‖U†U − 𝟙‖_F` exceeded the tolerance.
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    /// A matrix expected to be real had a non-negligible imaginary part.
    #[error("matrix has a non-negligible imaginary part (max {0:.3e})")]
    NotReal(f64),

    /// A Choi matrix had an eigenvalue below the positivity tolerance.
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    /// A channel failed the trace-preservation check.
    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    /// A channel failed the unitality check `T(𝟙) = 𝟙`.
    #[error("channel is not unital (deviation {0:.3e})")]
    NotUnital(f64),

    /// A map failed complete positivity beyond the clamping tolerance.
    #[error("channel is not completely positive: {0}")]
    NotCp(String),

    /// A Kraus decomposition failed structural validation.
    #[error("invalid Kraus decomposition: {0}")]
    InvalidKraus(String),

    /// Probability-vector data failed validation (negative entry or bad sum).
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    /// Weight quadruple for a two-term exchange failed validation.
    #[error("invalid rebalance weights: {0}")]
    InvalidWeights(String),

    /// A 3×3 matrix expected to lie in SO(3) failed orthogonality or had
    /// determinant different from +1.
    #[error("matrix is not a rotation: {0}")]
    NotRotation(String),

    /// The source weights do not majorize the requested target distribution.
    #[error("source weights do not majorize the target distribution")]
    NotMajorized,

    /// All four exchange weights vanish; the phase equation is undefined.
    #[error("degenerate rebalance weights (largest weight is zero)")]
    DegenerateWeights,

    /// The phase `α` handed to the second-phase solver is inconsistent with
    /// the weight quadruple.
    #[error("phase alpha inconsistent with weights (|residual modulus − c| = {0:.3e})")]
    InconsistentAlpha(f64),

    /// An iterative kernel failed to reach its convergence target.
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    /// Requested environment dimension is below the Kraus rank of the channel.
    #[error("environment dimension {requested} is below the channel's Kraus rank {required}")]
    KTooSmall { requested: usize, required: usize },

    /// A dilation was requested from a non-uniform mixed-unitary decomposition.
    #[error("weights are not uniform (max deviation from 1/k is {0:.3e})")]
    NonUniformWeights(f64),
}
