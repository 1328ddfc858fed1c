use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("composite of consecutive maps is nonzero")]
    CompositionNonzero,
    #[error("parity mismatch: {0}")]
    Parity(String),
    #[error("not a topology: {0}")]
    NotTopology(String),
    #[error("space is not T0")]
    NotT0,
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("unknown built-in {0:?}")]
    UnknownBuiltin(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("hom groups did not stabilise up to path length {0}; raise max_len")]
    NotStabilised(usize),
    #[error("hom group {0} has torsion; only free hom groups are supported")]
    TorsionHom(String),
    #[error("module is invalid: {0}")]
    InvalidModule(String),
    #[error("no catalogued resolution for {0}")]
    MissingResolution(String),
    #[error("hypothesis not verified: {0}")]
    HypothesisNotVerified(String),
    #[error("inconclusive: projective dimension exceeds {0}")]
    Inconclusive(usize),
    #[error("graph error: {0}")]
    Graph(String),
    #[error("{0}")]
    Computation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
