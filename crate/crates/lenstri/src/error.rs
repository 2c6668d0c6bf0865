use thiserror::Error;

/// Errors produced by triangulation operations and constructions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid gluing structure: {0}")]
    InvalidGluing(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("triangulation is not closed")]
    NotClosed,

    #[error("triangulation does not have exactly one vertex")]
    NotOneVertex,

    #[error("no nontrivial Z2 class: order of H1 is odd")]
    NoZ2Class,

    #[error("lens space parameters out of range: {0}")]
    LensParameters(String),

    #[error("census cap exceeded: n = {n} is above the hard cap {cap}; use the distributed mode")]
    CensusCap { n: usize, cap: usize },

    #[error("catalog characterisation for {label} matched {count} census classes")]
    CatalogAmbiguity { label: String, count: usize },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
