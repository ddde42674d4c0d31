use thiserror::Error;

/// Errors raised by the numerical kernels, models and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: domain error: {detail}")]
    Domain { op: &'static str, detail: String },

    /// The requested value sits on a boundary where the answer is degenerate
    /// (for instance inverting a CDF at 0 or 1).
    #[error("{op}: degenerate boundary input: {detail}")]
    Boundary { op: &'static str, detail: String },

    /// An iterative solver failed to bracket or converge.
    #[error("{op}: numeric failure: {detail}")]
    Numeric { op: &'static str, detail: String },

    /// Internal consistency check failed; indicates parameters outside the
    /// regime the closed forms are valid for.
    #[error("{op}: invariant violated: {detail}")]
    Invariant { op: &'static str, detail: String },

    /// The closed-form radius is only available for free-space path loss.
    #[error("closed-form radius requires path-loss exponent 2, got {0}")]
    WrongExponent(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}

pub(crate) fn numeric(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Numeric {
        op,
        detail: detail.into(),
    }
}

pub(crate) fn invariant(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Invariant {
        op,
        detail: detail.into(),
    }
}
