use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} (requested {requested}, limit {limit}){hint}")]
    Capacity {
        what: String,
        requested: u64,
        limit: u64,
        hint: String,
    },

    /// Adaptive quadrature ran out of depth; `intervals` holds the panels
    /// still unresolved when it gave up.
    #[error("quadrature did not converge: {} unresolved interval(s), first {:?}", intervals.len(), intervals.first())]
    Quadrature { intervals: Vec<(f64, f64)> },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
