//! Error types shared across the engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Series inversion needs a nonzero constant term.
    #[error("cannot invert a series whose constant term vanishes")]
    ZeroConstantTerm,

    /// The mirror-map correction must vanish at q = 0.
    #[error("mirror map correction has a nonzero constant term")]
    NotAMirrorMap,

    /// A residue target collapsed: the cofactor vanishes identically on the locus.
    #[error("pole at variable z_{var} is not isolated (stage {stage})")]
    NonIsolatedPole { var: usize, stage: usize },

    /// A linear factor divides the denominator more than once where a simple
    /// pole was required.
    #[error("higher-order pole in variable z_{var} (stage {stage})")]
    HigherOrderPole { var: usize, stage: usize },

    /// A logarithmic part survived a chain that must produce a pure series.
    #[error("logarithmic part failed to cancel in {context}")]
    CancellationFailure { context: &'static str },

    /// Localization graphs are tabulated only through degree 5.
    #[error("no localization graphs for disk degree {0}")]
    UnsupportedDegree(u64),

    /// Geometry constraints violated (odd degrees, CY-only operation, ...).
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
