use thiserror::Error;

/// Everything that can go wrong in the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The orbit reached 0, i.e. the input was a G_q-rational.
    #[error("expansion terminated at a G_q-rational")]
    GqRationalTermination,

    /// `ε/(λx) + 1/2` sits on an integer to working precision.
    #[error("digit boundary ambiguity{}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    BoundaryAmbiguity { step: Option<usize> },

    #[error("value {0} lies outside [-λ/2, λ/2)")]
    OutsideInterval(f64),

    #[error("ill-formed expansion: near-zero partial denominator at depth {depth}")]
    IllFormedExpansion { depth: usize },

    /// `1 + t·v ≤ 0`; the point cannot carry approximation coefficients.
    #[error("point outside the domain of the Θ formulas (1 + t·v ≤ 0)")]
    OutsideDomain,

    #[error("point ({t}, {v}) has no preimage in Ω")]
    NoPreimage { t: f64, v: f64 },

    #[error("point ({t}, {v}) has {count} preimages in Ω")]
    AmbiguousPreimage { t: f64, v: f64, count: usize },

    #[error("domain construction failed: {0}")]
    DomainConstructionFailure(String),

    #[error("integration failed: {0}")]
    IntegrationFailure(String),

    #[error("point ({t}, {v}) is outside Ω")]
    OutsideOmega { t: f64, v: f64 },

    #[error("fixed point search failed: {0}")]
    FixedPointFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
