//! The word → (per-mood counts, probabilities) table that is the trained
//! model, with CSV persistence.
//!
//! Counts are the source of truth. `total` and the per-mood probabilities are
//! derived by [`KnowledgeBase::recompute`] and validated against stored values
//! on load. Mutations must be externally serialized (single writer); any
//! number of readers may score against a snapshot concurrently.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mood::{MoodLabel, MOOD_COUNT};
use crate::text_pipeline::{decode_utf8, RawDocument, StopwordSet, Token, TokenFrequencyTable};

/// Exact CSV header of a knowledge-base file.
pub const KB_HEADER: [&str; 12] = [
    "word",
    "happy",
    "sad",
    "romantic",
    "devotional",
    "party",
    "Total",
    "prob_happy",
    "prob_sad",
    "prob_romantic",
    "prob_devotional",
    "prob_party",
];

/// Tolerance when validating stored probabilities against recomputed ones.
pub const PROB_VALIDATION_TOLERANCE: f64 = 1e-6;

/// One word's per-mood counts, total, and derived probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeBaseEntry {
    counts: [u64; MOOD_COUNT],
    total: u64,
    probs: [f64; MOOD_COUNT],
}

impl KnowledgeBaseEntry {
    fn new() -> Self {
        KnowledgeBaseEntry {
            counts: [0; MOOD_COUNT],
            total: 0,
            probs: [0.0; MOOD_COUNT],
        }
    }

    pub fn count(&self, mood: MoodLabel) -> u64 {
        self.counts[mood.index()]
    }

    pub fn counts(&self) -> &[u64; MOOD_COUNT] {
        &self.counts
    }

    /// Total occurrences across all moods, as of the last recompute.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn prob(&self, mood: MoodLabel) -> f64 {
        self.probs[mood.index()]
    }

    pub fn probs(&self) -> &[f64; MOOD_COUNT] {
        &self.probs
    }

    fn recompute(&mut self) {
        self.total = self.counts.iter().sum();
        if self.total == 0 {
            // legal zero-total rows score nothing in any mood
            self.probs = [0.0; MOOD_COUNT];
        } else {
            for (p, &c) in self.probs.iter_mut().zip(&self.counts) {
                *p = c as f64 / self.total as f64;
            }
        }
    }
}

/// A stored probability that disagrees with the one recomputed from counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbMismatch {
    pub word: Token,
    pub mood: MoodLabel,
    pub stored: f64,
    pub recomputed: f64,
}

impl std::fmt::Display for ProbMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "word `{}`: stored prob_{} = {} but counts give {}",
            self.word, self.mood, self.stored, self.recomputed
        )
    }
}

/// The trained model: one entry per distinct word.
///
/// Equality compares entries only; `revision` is bookkeeping for staleness
/// detection and is bumped on every mutation.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    entries: BTreeMap<Token, KnowledgeBaseEntry>,
    revision: u64,
}

impl PartialEq for KnowledgeBase {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl KnowledgeBase {
    pub fn new() -> Self {
        KnowledgeBase::default()
    }

    /// Number of distinct words.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Monotone counter incremented on every mutation.
    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn entry(&self, word: &str) -> Option<&KnowledgeBaseEntry> {
        self.entries.get(word)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    /// Entries in word codepoint order.
    pub fn entries(&self) -> impl Iterator<Item = (&Token, &KnowledgeBaseEntry)> {
        self.entries.iter()
    }

    /// Fold a document's frequency table into the counts for one mood.
    ///
    /// Existing words accumulate; new words start with zeros elsewhere.
    /// Totals and probabilities are NOT touched — call [`recompute`] once a
    /// batch of merges is done, mirroring the two-pass table build.
    ///
    /// [`recompute`]: KnowledgeBase::recompute
    pub fn merge_frequency_table(&mut self, freq: &TokenFrequencyTable, mood: MoodLabel) {
        for (token, count) in freq.iter() {
            let entry = self
                .entries
                .entry(token.clone())
                .or_insert_with(KnowledgeBaseEntry::new);
            entry.counts[mood.index()] += count;
        }
        self.revision += 1;
    }

    /// Derive `total` and the probability columns from the counts.
    /// Idempotent on contents.
    pub fn recompute(&mut self) {
        for entry in self.entries.values_mut() {
            entry.recompute();
        }
        self.revision += 1;
    }

    /// Build a knowledge base from a labeled corpus: each document runs
    /// through the text pipeline and is merged under its true mood, followed
    /// by one recompute. The result does not depend on document order.
    pub fn build_from_corpus(docs: &[RawDocument], stopwords: &StopwordSet) -> Result<Self> {
        let mut kb = KnowledgeBase::new();
        for doc in docs {
            let mood = doc
                .true_mood
                .ok_or_else(|| Error::MissingLabel(doc.title.clone()))?;
            kb.merge_frequency_table(&doc.frequency_table(stopwords), mood);
        }
        kb.recompute();
        Ok(kb)
    }

    /// Render the CSV file: exact header, counts as integers, probabilities
    /// in shortest round-trip decimal form, rows in word codepoint order,
    /// LF line endings, no BOM.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&KB_HEADER.join(","));
        out.push('\n');
        for (word, entry) in &self.entries {
            write!(out, "{word}").unwrap();
            for count in &entry.counts {
                write!(out, ",{count}").unwrap();
            }
            write!(out, ",{}", entry.total).unwrap();
            for prob in &entry.probs {
                write!(out, ",{prob}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }

    /// Parse a knowledge-base CSV. Counts are authoritative: a recompute runs
    /// after parsing and stored probabilities that drift beyond
    /// [`PROB_VALIDATION_TOLERANCE`] are returned as warnings.
    pub fn from_csv_str(text: &str) -> Result<(Self, Vec<ProbMismatch>)> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(text.as_bytes());

        let headers = reader
            .headers()
            .map_err(|e| Error::KbParse {
                row: 1,
                message: e.to_string(),
            })?
            .clone();
        if headers.iter().ne(KB_HEADER.iter().copied()) {
            return Err(Error::KbSchema {
                expected: KB_HEADER.join(","),
                found: headers.iter().collect::<Vec<_>>().join(","),
            });
        }

        let mut kb = KnowledgeBase::new();
        let mut stored_probs: BTreeMap<Token, [f64; MOOD_COUNT]> = BTreeMap::new();
        for (i, record) in reader.records().enumerate() {
            let row = i + 2; // header is row 1
            let record = record.map_err(|e| Error::KbParse {
                row,
                message: e.to_string(),
            })?;
            if record.len() != KB_HEADER.len() {
                return Err(Error::KbParse {
                    row,
                    message: format!("expected {} fields, found {}", KB_HEADER.len(), record.len()),
                });
            }
            let word = Token::parse(&record[0])?;
            if kb.entries.contains_key(&word) {
                return Err(Error::DuplicateWord {
                    word: word.to_string(),
                    row,
                });
            }
            let mut entry = KnowledgeBaseEntry::new();
            for mood in MoodLabel::ALL {
                let field = &record[1 + mood.index()];
                entry.counts[mood.index()] = field.parse().map_err(|_| Error::KbParse {
                    row,
                    message: format!("non-integer {} count `{field}`", mood),
                })?;
            }
            // the stored Total is derived; counts win on any disagreement
            let _: u64 = record[6].parse().map_err(|_| Error::KbParse {
                row,
                message: format!("non-integer Total `{}`", &record[6]),
            })?;
            let mut probs = [0.0; MOOD_COUNT];
            for mood in MoodLabel::ALL {
                let field = &record[7 + mood.index()];
                probs[mood.index()] = field.parse().map_err(|_| Error::KbParse {
                    row,
                    message: format!("invalid prob_{} value `{field}`", mood),
                })?;
            }
            stored_probs.insert(word.clone(), probs);
            kb.entries.insert(word, entry);
        }

        kb.recompute();
        let mut mismatches = Vec::new();
        for (word, stored) in &stored_probs {
            let entry = &kb.entries[word];
            for mood in MoodLabel::ALL {
                let recomputed = entry.prob(mood);
                if (stored[mood.index()] - recomputed).abs() > PROB_VALIDATION_TOLERANCE {
                    mismatches.push(ProbMismatch {
                        word: word.clone(),
                        mood,
                        stored: stored[mood.index()],
                        recomputed,
                    });
                }
            }
        }
        Ok((kb, mismatches))
    }

    pub fn load(path: &Path) -> Result<(Self, Vec<ProbMismatch>)> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let text = decode_utf8(bytes, &path.display().to_string())?;
        KnowledgeBase::from_csv_str(&text)
    }
}
