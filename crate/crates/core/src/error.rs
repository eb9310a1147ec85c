use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A structural invariant of an input type is violated.
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    /// A ratio denominator or logarithm argument vanished (the identifiability
    /// quantity is numerically zero for this input).
    #[error("degenerate observation in {op}: {detail}")]
    Degenerate { op: &'static str, detail: String },

    /// A documented precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The regularized normal equations could not be factorized.
    #[error("singular system: {0}")]
    Singular(String),

    /// Newton iteration and the bisection fallback both failed at a node.
    #[error("nonlinear solve did not converge at node {node} (t = {t})")]
    Nonconvergence { node: usize, t: f64 },

    /// A non-finite value appeared while time stepping.
    #[error("solution diverged at node {node} (t = {t})")]
    Divergence { node: usize, t: f64 },

    /// Quasi-optimality selection found no admissible difference.
    #[error("parameter selection failed: {0}")]
    Selection(String),

    /// Selection failed inside a full estimation run; the swept tables are kept
    /// for inspection.
    #[error("parameter selection failed: {message}")]
    SelectionWithDiagnostics {
        message: String,
        diagnostics: Box<crate::orderest::Diagnostics>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn degenerate(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Degenerate {
            op,
            detail: detail.into(),
        }
    }
}
