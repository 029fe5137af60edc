use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Invalid construction input: non-prime field order, cyclic quiver, bad shapes.
    #[error("construction error: {0}")]
    Construction(String),
    /// Arithmetic domain violation, e.g. inverting zero.
    #[error("domain error: {0}")]
    Domain(String),
    /// Caller violated an operation contract (dimension mismatch, non-acyclic input, ...).
    #[error("contract error: {0}")]
    Contract(String),
    /// A representation or class falls outside the enumerated iso-class table.
    #[error("bound error: {0}")]
    Bound(String),
    /// A configured resource guard was exceeded.
    #[error("resource guard exceeded: {0}")]
    Resource(String),
    /// An exactness or sign check failed; indicates a bug in a counting routine.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
