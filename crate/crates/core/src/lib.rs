//! Mood classification for Devanagari-script Hindi song lyrics.
//!
//! The model is a word-level knowledge base: per-mood occurrence counts and
//! the derived occurrence probabilities (count / total). Documents are scored
//! by summing term frequency × mood probability over the words the knowledge
//! base knows; the mood with the highest sum wins. Classified songs can be
//! folded back into the knowledge base (incremental learning) and exported as
//! a Song/Mood/Term property graph.
//!
//! ```
//! use lyricmood_core::{
//!     classify_document, KnowledgeBase, MoodLabel, RawDocument, StopwordSet,
//! };
//!
//! let train = vec![
//!     RawDocument::new("भजन", "जय जय मैया", Some(MoodLabel::Devotional)),
//!     RawDocument::new("विदाई", "आँसू आँसू", Some(MoodLabel::Sad)),
//! ];
//! let kb = KnowledgeBase::build_from_corpus(&train, &StopwordSet::empty()).unwrap();
//!
//! let song = RawDocument::new("नया गीत", "जय मैया!", None);
//! let prediction = classify_document(&song, &kb, &StopwordSet::empty()).unwrap();
//! assert_eq!(prediction.mood, MoodLabel::Devotional);
//! ```

pub mod classifier;
pub mod error;
pub mod evaluation;
pub mod knowledge_base;
pub mod knowledge_graph;
pub mod mood;
pub mod text_pipeline;

pub use classifier::{
    classify_document, incremental_update, predict, score_document, MoodScores, Prediction,
    ScoredDocument, TermMatch, UpdatePolicy,
};
pub use error::{Error, Result};
pub use evaluation::{
    evaluate, evaluate_with_policy, ingest_corpus, split_corpus, ConfusionMatrix, Corpus,
    DocOutcome, EvalOutcome, EvalReport, MoodMetrics,
};
pub use knowledge_base::{KnowledgeBase, KnowledgeBaseEntry, ProbMismatch, KB_HEADER};
pub use knowledge_graph::{
    cypher_batches, select_depicting_terms, EdgeKind, ExportFormat, GraphEdge, GraphNode,
    GraphRecord, KnowledgeGraph, NodeKind, SongEntry,
};
pub use mood::{MoodLabel, MOOD_COUNT};
pub use text_pipeline::{
    build_frequency_table, clean, decode_utf8, is_punctuation, normalize, tokenize, RawDocument,
    StopwordSet, Token, TokenFrequencyTable,
};
