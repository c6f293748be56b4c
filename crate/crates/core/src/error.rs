use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("morphisms are not composable: {0}")]
    NotComposable(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("degree {needed} exceeds the truncation bound {bound}")]
    Truncation { needed: usize, bound: usize },
    #[error("site is not monoidal: {0}")]
    NotMonoidal(String),
    #[error("invalid crossed group table: {0}")]
    CrossedTable(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("functoriality failure: {0}")]
    Functoriality(String),
    #[error("malformed diagram: {0}")]
    Diagram(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
