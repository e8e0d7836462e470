use thiserror::Error;

use crate::graph::EdgeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-domain user input.
    #[error("invalid input: {0}")]
    Input(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate graph, empty flow polytope")]
    DegenerateGraph,

    #[error("not planar in this arc order: edges {0} and {1} cross")]
    NotPlanar(EdgeId, EdgeId),

    #[error("flow not realizable: {0}")]
    FlowNotRealizable(String),

    /// An internal consistency check failed; indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// True for errors caused by the caller's data rather than by a failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Input(_) | Error::DegenerateGraph | Error::NotPlanar(..) | Error::FlowNotRealizable(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
