//! The closed set of mood classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Number of mood classes.
pub const MOOD_COUNT: usize = 5;

/// One of the five song moods.
///
/// The declaration order is the canonical order. It fixes the column layout
/// of the knowledge-base CSV and breaks every tie (earliest wins).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoodLabel {
    Happy,
    Sad,
    Romantic,
    Devotional,
    Party,
}

impl MoodLabel {
    /// All moods in canonical order.
    pub const ALL: [MoodLabel; MOOD_COUNT] = [
        MoodLabel::Happy,
        MoodLabel::Sad,
        MoodLabel::Romantic,
        MoodLabel::Devotional,
        MoodLabel::Party,
    ];

    /// Position in the canonical order, `0..5`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MoodLabel::Happy => "happy",
            MoodLabel::Sad => "sad",
            MoodLabel::Romantic => "romantic",
            MoodLabel::Devotional => "devotional",
            MoodLabel::Party => "party",
        }
    }
}

impl fmt::Display for MoodLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MoodLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "happy" => Ok(MoodLabel::Happy),
            "sad" => Ok(MoodLabel::Sad),
            "romantic" => Ok(MoodLabel::Romantic),
            "devotional" => Ok(MoodLabel::Devotional),
            "party" => Ok(MoodLabel::Party),
            other => Err(Error::UnknownMood(other.to_string())),
        }
    }
}
