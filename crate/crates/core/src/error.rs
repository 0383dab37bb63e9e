use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("triangle inequality violated: cos = {cos:.6e} for sides ({a}, {b}, {c})")]
    TriangleInequalityViolated { a: f64, b: f64, c: f64, cos: f64 },

    #[error("triangle not realizable: cos = {cos:.6e} out of range")]
    NotRealizable { cos: f64 },

    #[error("angle sum {sum} is not hyperbolic (must be < π)")]
    AngleSumNotHyperbolic { sum: f64 },

    #[error("fan from Q_4g leaves the polygon at vertex Q_{vertex}: remaining angle {angle}")]
    FanNotInterior { vertex: usize, angle: f64 },

    #[error("genus {genus} too small (need at least {min})")]
    GenusTooSmall { genus: usize, min: usize },

    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),

    #[error("parameter outside chart domain: {0}")]
    ParameterDomainError(String),

    #[error("parameters not in the image of the chart: {0}")]
    ImageConsistencyError(String),

    #[error("no bracket: target {target} outside attainable range [{lo}, {hi}]")]
    NoBracket { target: f64, lo: f64, hi: f64 },

    #[error("hinge has no bracket: target {target} outside attainable range [{lo}, {hi}]")]
    HingeNoBracket { target: f64, lo: f64, hi: f64 },

    #[error("polygon is not hyperelliptic (opposite angle residual {residual:.3e})")]
    NotHyperelliptic { residual: f64 },

    #[error("diagonal midpoints scatter by {scatter:.3e}")]
    MidpointMismatch { scatter: f64 },

    #[error("polygon does not close: gap {gap:.3e}")]
    ClosureFailure { gap: f64 },

    #[error("side a_{index} is degenerate (length {length:.3e})")]
    DegenerateSide { index: usize, length: f64 },

    #[error("points belong to different models")]
    ModelMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
