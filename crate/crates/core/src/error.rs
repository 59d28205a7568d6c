//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("values are not Galois conjugates: {0}")]
    NotConjugate(String),

    #[error("variable {0:?} absent from both resultant inputs")]
    ResultantVariable(char),

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("center is not a smooth point of the curve")]
    NonSmoothCenter,

    #[error("function is identically infinite on the curve")]
    IdenticallyInfinite,

    #[error("cannot determine exact valuation within the degree bound")]
    ValuationUnresolved,

    #[error("the all-zero tuple is not a point of weighted projective space")]
    ZeroPoint,

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("point does not lie on the surface")]
    NotOnSurface,

    #[error("the base point has no fiber parameter before blow-up")]
    BasePointFiber,

    #[error("singular fiber: g(t) = 0")]
    SingularFiber,

    #[error("point does not lie on the fiber curve")]
    NotOnFiber,

    #[error("base point violates the construction hypothesis: {0}")]
    BadBasePoint(String),

    #[error("torsion tests disagree: {0}")]
    InconsistentTorsion(String),

    #[error("linear algebra: {0}")]
    Linear(String),

    #[error("model construction failed: {0}")]
    ModelConstruction(String),

    #[error("certificate: {0}")]
    Certificate(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
