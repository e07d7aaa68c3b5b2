//! Error type shared across the library.

use thiserror::Error;

/// Everything that can go wrong when building geometric data or running a
/// certification. Variants carry enough context to be actionable from the
/// CLI without a stack trace.
#[derive(Debug, Clone, Error)]
pub enum PinchError {
    /// A second-fundamental-form coefficient block was not symmetric in its
    /// two tangent indices beyond the admitted rounding slack.
    #[error("asymmetric coefficients: h[{a}][{i}][{j}] and h[{a}][{j}][{i}] differ by {delta:.3e}")]
    AsymmetricSff { a: usize, i: usize, j: usize, delta: f64 },

    /// An input contained NaN or infinity.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Input length does not match the declared dimensions.
    #[error("wrong coefficient count: expected {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },

    /// The two vectors supposed to span a 2-plane are linearly dependent
    /// (or close enough that the sectional-curvature quotient is meaningless).
    #[error("degenerate 2-plane (gram determinant {0:.3e})")]
    DegeneratePlane(f64),

    /// A matrix expected to have orthonormal columns did not.
    #[error("frame is not orthonormal (deviation {0:.3e})")]
    NotOrthonormal(f64),

    /// A curvature-type tensor failed one of the Riemann symmetries.
    #[error("curvature symmetry violated ({which}, worst deviation {delta:.3e})")]
    BrokenSymmetry { which: &'static str, delta: f64 },

    /// Dimension outside the supported range.
    #[error("dimension {got} unsupported here (need {need})")]
    BadDimension { got: usize, need: &'static str },

    /// Splitting index p outside 1..=n-1.
    #[error("split index p={p} invalid for dimension {n}")]
    BadSplit { p: usize, n: usize },

    /// An operation that only makes sense for four-dimensional data was
    /// called with something else.
    #[error("requires dimension 4, got {0}")]
    NotDimensionFour(usize),

    /// The Bochner matrix stopped commuting with the Hodge star, which
    /// signals corrupted input rather than geometry.
    #[error("star-invariance broken (commutator norm {0:.3e})")]
    StarInvarianceBroken(f64),

    /// A conditional certificate was invoked on data that does not satisfy
    /// its hypothesis; distinguishes "not applicable" from "fails".
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    /// Equality-case analysis was requested at a point that is not within
    /// tolerance of the equality locus.
    #[error("not an equality point: {0}")]
    NotEqualityPoint(String),

    /// The chart's Jacobian lost rank at the evaluation point.
    #[error("degenerate parametrization: {0}")]
    DegenerateParametrization(String),

    /// A chart flagged as spherical produced a point off the sphere.
    #[error("sphere violation: {0}")]
    SphereViolation(String),

    /// A putative complex structure was not orthogonal/skew or J^2 != -I.
    #[error("invalid complex structure: {0}")]
    InvalidComplexStructure(String),

    /// Bad search or run configuration.
    #[error("invalid configuration: {0}")]
    BadConfig(String),

    /// Unknown example name or malformed --param value.
    #[error("invalid parameter: {0}")]
    BadParameter(String),

    /// Report could not be written.
    #[error("report output failed: {0}")]
    ReportIo(String),
}

pub type Result<T> = std::result::Result<T, PinchError>;
