use thiserror::Error;

use crate::snc::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown label [{0}]")]
    UnknownLabel(String),

    #[error("invalid catalog: {0}")]
    Catalog(String),

    #[error("malformed f-vector: {0}")]
    MalformedFVector(String),

    #[error("invalid model: {}", format_violations(.0))]
    InvalidModel(Vec<Violation>),

    #[error("stratum {0} is empty")]
    EmptyStratum(String),

    #[error("invalid blow-up center: {0}")]
    InvalidCenter(String),

    #[error("component id {0} already in use")]
    IdCollision(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid period point: {0}")]
    InvalidPeriod(String),

    #[error("not a Kulikov monodromy: (T - id)^3 != 0")]
    NotKulikov,

    #[error("block shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("bad orbit data: {0}")]
    BadOrbit(String),

    #[error("bad type II chain: {0}")]
    BadChain(String),

    #[error("not a simplicial complex: {0}")]
    NotAComplex(String),
}

impl Error {
    /// Errors caused by unreadable input rather than by the mathematics.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
