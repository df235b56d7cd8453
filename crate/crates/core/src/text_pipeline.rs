//! Tokenization and normalization for Devanagari lyric text.
//!
//! Raw lyrics go through `normalize` → `tokenize` → `clean` →
//! `build_frequency_table`. All functions here are pure; call them from any
//! thread.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::error::{Error, Result};
use crate::mood::MoodLabel;

/// Devanagari sentence terminator (।).
pub const DANDA: char = '\u{0964}';
/// Devanagari verse terminator (॥).
pub const DOUBLE_DANDA: char = '\u{0965}';

/// One lyric document as loaded from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    /// Unique identifier, typically the filename stem.
    pub title: String,
    /// Lyric text; always valid UTF-8 by construction.
    pub body: String,
    /// Ground-truth mood for labeled corpus items.
    pub true_mood: Option<MoodLabel>,
}

impl RawDocument {
    pub fn new(
        title: impl Into<String>,
        body: impl Into<String>,
        true_mood: Option<MoodLabel>,
    ) -> Self {
        RawDocument {
            title: title.into(),
            body: body.into(),
            true_mood,
        }
    }

    /// Run the full text pipeline on the document body.
    pub fn frequency_table(&self, stopwords: &StopwordSet) -> TokenFrequencyTable {
        let tokens = clean(tokenize(&normalize(&self.body)), stopwords);
        build_frequency_table(&tokens)
    }
}

/// Decode bytes as UTF-8. Invalid sequences are an error naming the byte
/// offset, never silently repaired.
pub fn decode_utf8(bytes: Vec<u8>, context: &str) -> Result<String> {
    String::from_utf8(bytes).map_err(|e| Error::Decode {
        context: context.to_string(),
        offset: e.utf8_error().valid_up_to(),
    })
}

/// Canonically compose the text and collapse every whitespace run (spaces,
/// tabs, newlines, no-break spaces) to a single space, trimming the ends.
///
/// Composed and decomposed spellings of the same Devanagari syllable become
/// byte-identical, which keeps knowledge-base keys stable.
pub fn normalize(raw: &str) -> String {
    let composed: String = raw.nfc().collect();
    composed.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// True for every character the tokenizer splits on besides whitespace:
/// Unicode punctuation and symbol categories, plus danda and double danda.
pub fn is_punctuation(c: char) -> bool {
    if c == DANDA || c == DOUBLE_DANDA {
        return true;
    }
    matches!(
        c.general_category_group(),
        GeneralCategoryGroup::Punctuation | GeneralCategoryGroup::Symbol
    )
}

/// A single normalized word.
///
/// Non-empty, canonically composed, and free of whitespace and punctuation.
/// Ordering is codepoint order, which the knowledge base uses for
/// deterministic output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Token(String);

impl Token {
    /// Validate and normalize an externally supplied word (stopword file
    /// lines, knowledge-base CSV keys).
    pub fn parse(raw: &str) -> Result<Token> {
        let surface: String = raw
            .chars()
            .flat_map(char::to_lowercase)
            .collect::<String>()
            .nfc()
            .collect();
        if surface.is_empty() {
            return Err(Error::InvalidToken {
                word: raw.to_string(),
                reason: "empty",
            });
        }
        if surface.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken {
                word: raw.to_string(),
                reason: "contains whitespace",
            });
        }
        if surface.chars().any(is_punctuation) {
            return Err(Error::InvalidToken {
                word: raw.to_string(),
                reason: "contains punctuation",
            });
        }
        Ok(Token(surface))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Internal constructor for strings the tokenizer already normalized.
    fn from_normalized(surface: String) -> Token {
        debug_assert!(!surface.is_empty());
        Token(surface)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Token {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Split normalized text into unigram tokens.
///
/// The text is cut at whitespace and at every punctuation character;
/// punctuation-only fragments are discarded. Devanagari letters, matras,
/// viramas, nuktas and anusvara/candrabindu marks all stay inside tokens, as
/// do Devanagari and ASCII digits. Latin letters are lowercased for key
/// stability.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if c.is_whitespace() || is_punctuation(c) {
            flush(&mut current, &mut tokens);
        } else {
            current.extend(c.to_lowercase());
        }
    }
    flush(&mut current, &mut tokens);
    tokens
}

fn flush(current: &mut String, tokens: &mut Vec<Token>) {
    if current.is_empty() {
        return;
    }
    // Dropping a separator can make previously distant characters adjacent,
    // so re-compose each token to keep the canonical-form invariant.
    let surface: String = std::mem::take(current).nfc().collect();
    tokens.push(Token::from_normalized(surface));
}

/// Remove every stopword, preserving the order of the remaining tokens.
pub fn clean(tokens: Vec<Token>, stopwords: &StopwordSet) -> Vec<Token> {
    tokens
        .into_iter()
        .filter(|t| !stopwords.contains(t))
        .collect()
}

/// Words removed from documents before counting.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordSet {
    words: BTreeSet<Token>,
}

impl StopwordSet {
    pub fn empty() -> Self {
        StopwordSet::default()
    }

    /// Parse the stopword file format: one token per line, `#` lines and
    /// blank lines ignored.
    pub fn from_lines(text: &str) -> Result<StopwordSet> {
        let mut words = BTreeSet::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            words.insert(Token::parse(line)?);
        }
        Ok(StopwordSet { words })
    }

    pub fn load(path: &Path) -> Result<StopwordSet> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let text = decode_utf8(bytes, &path.display().to_string())?;
        StopwordSet::from_lines(&text)
    }

    pub fn insert(&mut self, token: Token) {
        self.words.insert(token);
    }

    pub fn contains(&self, token: &Token) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl FromIterator<Token> for StopwordSet {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        StopwordSet {
            words: iter.into_iter().collect(),
        }
    }
}

/// Per-document map from token to occurrence count.
///
/// Every count is at least one and the counts sum to the number of cleaned
/// tokens in the document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenFrequencyTable {
    entries: BTreeMap<Token, u64>,
}

impl TokenFrequencyTable {
    pub fn new() -> Self {
        TokenFrequencyTable::default()
    }

    /// Build a table from explicit counts; zero counts are dropped and
    /// duplicate tokens are summed.
    pub fn from_counts<I: IntoIterator<Item = (Token, u64)>>(counts: I) -> Self {
        let mut table = TokenFrequencyTable::new();
        for (token, count) in counts {
            if count > 0 {
                *table.entries.entry(token).or_insert(0) += count;
            }
        }
        table
    }

    pub fn get(&self, token: &Token) -> u64 {
        self.entries.get(token).copied().unwrap_or(0)
    }

    /// Entries in token codepoint order.
    pub fn iter(&self) -> impl Iterator<Item = (&Token, u64)> {
        self.entries.iter().map(|(t, &c)| (t, c))
    }

    /// Number of distinct tokens.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all counts.
    pub fn token_count(&self) -> u64 {
        self.entries.values().sum()
    }
}

/// Count occurrences of each distinct token.
pub fn build_frequency_table(tokens: &[Token]) -> TokenFrequencyTable {
    let mut table = TokenFrequencyTable::new();
    for token in tokens {
        *table.entries.entry(token.clone()).or_insert(0) += 1;
    }
    table
}
