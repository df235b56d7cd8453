//! Crate-wide error type.

use std::path::PathBuf;

use crate::mood::MoodLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input bytes are not valid UTF-8. Never silently repaired.
    #[error("{context}: invalid UTF-8 at byte offset {offset}")]
    Decode { context: String, offset: usize },

    #[error("unknown mood label `{0}` (expected one of happy, sad, romantic, devotional, party)")]
    UnknownMood(String),

    #[error("invalid token `{word}`: {reason}")]
    InvalidToken { word: String, reason: &'static str },

    #[error("document `{0}` has no mood label")]
    MissingLabel(String),

    #[error("duplicate document title `{0}`")]
    DuplicateTitle(String),

    #[error("knowledge base schema mismatch: expected header `{expected}`, found `{found}`")]
    KbSchema { expected: String, found: String },

    #[error("knowledge base row {row}: {message}")]
    KbParse { row: usize, message: String },

    #[error("knowledge base row {row}: duplicate word `{word}`")]
    DuplicateWord { word: String, row: usize },

    #[error("mood `{mood}` has {available} documents, need {required} ({shortfall} short)")]
    InsufficientDocs {
        mood: MoodLabel,
        required: usize,
        available: usize,
        shortfall: usize,
    },

    #[error("empty test set: accuracy is undefined")]
    EmptyTestSet,

    /// No cleaned token of the document matched the knowledge base, so every
    /// mood score is zero and argmax is meaningless.
    #[error("no evidence: no knowledge-base term matched document `{title}`")]
    NoEvidence { title: String },

    #[error("unknown export format `{0}` (expected dot, graphml or cypher)")]
    UnknownFormat(String),

    #[error("graphml import: {0}")]
    GraphImport(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
