use std::io;

use thiserror::Error;

/// Errors raised anywhere in the two-party runtime and its tooling.
#[derive(Debug, Error)]
pub enum Error {
    /// A value or argument outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// A malformed circuit (dangling wire, cycle, mixed worlds).
    #[error("structural error: {0}")]
    Structural(String),

    /// A triple pool ran dry. Triples are never reused.
    #[error("triple pool exhausted: requested {requested}, {available} left")]
    TripleExhausted { requested: usize, available: usize },

    /// The two parties disagree on a negotiated parameter.
    #[error("handshake mismatch on `{field}`: local {local}, peer {peer}")]
    Handshake {
        field: &'static str,
        local: String,
        peer: String,
    },

    /// A well-formed transport delivered something the protocol does not allow.
    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("connection error: {0}")]
    Connection(#[from] io::Error),

    #[error("config error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn protocol(msg: impl Into<String>) -> Error {
    Error::Protocol(msg.into())
}
