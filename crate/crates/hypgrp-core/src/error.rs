//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by parsing, completion and automaton construction.
#[derive(Debug, Error)]
pub enum Error {
    /// A presentation or automaton file failed to parse.
    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        /// File the error occurred in ("<input>" when not file-backed).
        path: String,
        /// 1-based line number.
        line: usize,
        /// Description of the problem.
        msg: String,
    },

    /// An operation received an automaton that violates its preconditions.
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    /// An operation received a word that is not over the expected alphabet.
    #[error("invalid word: {0}")]
    InvalidWord(String),

    /// Knuth–Bendix completion hit a configured cap before reaching confluence.
    #[error("completion cap exceeded: {0}")]
    CompletionCap(String),

    /// A construction exceeded a configured resource cap (states or memory).
    /// Carries a human-readable summary of the partial statistics.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// A fixpoint loop exceeded its iteration cap without converging.
    #[error("iteration cap exceeded: {0}")]
    IterationCap(String),

    /// A precondition of the requested operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Shorthand for a parse error without file context.
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: "<input>".into(),
            line,
            msg: msg.into(),
        }
    }

    /// Attach a file path to a parse error that was produced without one.
    pub fn with_path(self, path: impl AsRef<std::path::Path>) -> Self {
        match self {
            Error::Parse { line, msg, .. } => Error::Parse {
                path: path.as_ref().display().to_string(),
                line,
                msg,
            },
            other => other,
        }
    }
}
