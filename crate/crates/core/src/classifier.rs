//! Scoring and mood prediction against a knowledge base, plus the
//! incremental-learning update.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::knowledge_base::KnowledgeBase;
use crate::mood::{MoodLabel, MOOD_COUNT};
use crate::text_pipeline::{RawDocument, StopwordSet, Token, TokenFrequencyTable};

/// Two scores within this distance of each other count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Per-mood evidence sums. Always non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MoodScores([f64; MOOD_COUNT]);

impl MoodScores {
    pub fn from_array(scores: [f64; MOOD_COUNT]) -> Self {
        MoodScores(scores)
    }

    pub fn get(&self, mood: MoodLabel) -> f64 {
        self.0[mood.index()]
    }

    pub fn as_array(&self) -> [f64; MOOD_COUNT] {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = (MoodLabel, f64)> + '_ {
        MoodLabel::ALL.iter().map(move |&m| (m, self.0[m.index()]))
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0.0)
    }

    /// The mood with the highest score, flagged as a tie when at least two
    /// moods reach the maximum within [`TIE_TOLERANCE`]. Ties resolve to the
    /// earliest mood in canonical order. `None` when every score is zero.
    pub fn argmax(&self) -> Option<(MoodLabel, bool)> {
        if self.is_all_zero() {
            return None;
        }
        let max = self.0.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut winner = None;
        let mut contenders = 0;
        for mood in MoodLabel::ALL {
            if (max - self.get(mood)).abs() <= TIE_TOLERANCE {
                contenders += 1;
                if winner.is_none() {
                    winner = Some(mood);
                }
            }
        }
        winner.map(|m| (m, contenders >= 2))
    }
}

/// One document term found in the knowledge base.
#[derive(Debug, Clone, PartialEq)]
pub struct TermMatch {
    pub token: Token,
    /// Occurrences in the document.
    pub count: u64,
    /// count × prob for each mood.
    pub contributions: [f64; MOOD_COUNT],
}

/// Scores plus the matched/dropped bookkeeping behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredDocument {
    pub scores: MoodScores,
    /// Terms found in the knowledge base, in token order.
    pub matched_terms: Vec<TermMatch>,
    /// Out-of-vocabulary terms, dropped from scoring, in token order.
    pub oov_terms: Vec<Token>,
}

/// Sum count × probability over every document term present in the knowledge
/// base; terms absent from it contribute nothing and are reported as OOV.
///
/// The knowledge base must have been recomputed since its last merge.
pub fn score_document(freq: &TokenFrequencyTable, kb: &KnowledgeBase) -> ScoredDocument {
    let mut scores = [0.0; MOOD_COUNT];
    let mut matched_terms = Vec::new();
    let mut oov_terms = Vec::new();
    for (token, count) in freq.iter() {
        match kb.entry(token.as_str()) {
            Some(entry) => {
                let mut contributions = [0.0; MOOD_COUNT];
                for mood in MoodLabel::ALL {
                    let c = count as f64 * entry.prob(mood);
                    contributions[mood.index()] = c;
                    scores[mood.index()] += c;
                }
                matched_terms.push(TermMatch {
                    token: token.clone(),
                    count,
                    contributions,
                });
            }
            None => oov_terms.push(token.clone()),
        }
    }
    ScoredDocument {
        scores: MoodScores(scores),
        matched_terms,
        oov_terms,
    }
}

/// A classified document.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub title: String,
    pub mood: MoodLabel,
    pub tie: bool,
    pub scores: MoodScores,
    pub matched_terms: Vec<TermMatch>,
    pub oov_terms: Vec<Token>,
}

/// Pick the mood by argmax over the scores. All-zero scores are a
/// [`NoEvidence`] error rather than an arbitrary genre.
///
/// [`NoEvidence`]: Error::NoEvidence
pub fn predict(scored: ScoredDocument, title: &str) -> Result<Prediction> {
    let (mood, tie) = scored.scores.argmax().ok_or_else(|| Error::NoEvidence {
        title: title.to_string(),
    })?;
    Ok(Prediction {
        title: title.to_string(),
        mood,
        tie,
        scores: scored.scores,
        matched_terms: scored.matched_terms,
        oov_terms: scored.oov_terms,
    })
}

/// Full pipeline: normalize → tokenize → clean → count → score → predict.
pub fn classify_document(
    doc: &RawDocument,
    kb: &KnowledgeBase,
    stopwords: &StopwordSet,
) -> Result<Prediction> {
    predict(score_document(&doc.frequency_table(stopwords), kb), &doc.title)
}

/// Fold a classified document back into the knowledge base under the credited
/// mood and refresh the probability columns.
pub fn incremental_update(kb: &mut KnowledgeBase, freq: &TokenFrequencyTable, mood: MoodLabel) {
    kb.merge_frequency_table(freq, mood);
    kb.recompute();
}

/// What mood, if any, classified documents are credited with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdatePolicy {
    /// Keep the knowledge base frozen.
    #[default]
    Off,
    /// Credit the predicted mood (the self-training loop).
    Predicted,
    /// Credit the supplied ground-truth mood.
    GroundTruth,
}

impl UpdatePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            UpdatePolicy::Off => "off",
            UpdatePolicy::Predicted => "predicted",
            UpdatePolicy::GroundTruth => "ground-truth",
        }
    }
}

impl FromStr for UpdatePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "off" => Ok(UpdatePolicy::Off),
            "predicted" => Ok(UpdatePolicy::Predicted),
            "ground-truth" => Ok(UpdatePolicy::GroundTruth),
            other => Err(format!(
                "unknown update policy `{other}` (expected off, predicted or ground-truth)"
            )),
        }
    }
}

#[derive(Serialize)]
struct ScoresJson {
    happy: f64,
    sad: f64,
    romantic: f64,
    devotional: f64,
    party: f64,
}

#[derive(Serialize)]
struct TopTermJson<'a> {
    word: &'a str,
    count: u64,
    contribution: f64,
}

#[derive(Serialize)]
struct PredictionJson<'a> {
    title: &'a str,
    mood: MoodLabel,
    tie: bool,
    scores: ScoresJson,
    matched_term_count: usize,
    oov_term_count: usize,
    top_terms: Vec<TopTermJson<'a>>,
}

impl Prediction {
    /// The matched terms contributing most to the chosen mood: positive
    /// contributions only, largest first, ties in token codepoint order.
    pub fn top_terms(&self, k: usize) -> Vec<(&Token, u64, f64)> {
        let mut terms: Vec<(&Token, u64, f64)> = self
            .matched_terms
            .iter()
            .map(|m| (&m.token, m.count, m.contributions[self.mood.index()]))
            .filter(|&(_, _, c)| c > 0.0)
            .collect();
        terms.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap().then_with(|| a.0.cmp(b.0)));
        terms.truncate(k);
        terms
    }

    /// Render the line-delimited JSON record (no trailing newline).
    pub fn to_json_line(&self, top_k: usize) -> String {
        let s = self.scores;
        let record = PredictionJson {
            title: &self.title,
            mood: self.mood,
            tie: self.tie,
            scores: ScoresJson {
                happy: s.get(MoodLabel::Happy),
                sad: s.get(MoodLabel::Sad),
                romantic: s.get(MoodLabel::Romantic),
                devotional: s.get(MoodLabel::Devotional),
                party: s.get(MoodLabel::Party),
            },
            matched_term_count: self.matched_terms.len(),
            oov_term_count: self.oov_terms.len(),
            top_terms: self
                .top_terms(top_k)
                .into_iter()
                .map(|(t, count, contribution)| TopTermJson {
                    word: t.as_str(),
                    count,
                    contribution,
                })
                .collect(),
        };
        serde_json::to_string(&record).expect("prediction record serializes")
    }
}
