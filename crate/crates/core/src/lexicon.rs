//! Lemma-keyed scoring resources.
//!
//! Three independent files: sentiment scores (`lemma<TAB>score`, scores in
//! `[-5, 5]` and non-zero), intensifier strengths (`lemma<TAB>strength`,
//! strength above -1) and negators (one lemma per line). Blank lines and
//! lines starting with `#` are ignored. Lemmas are case-folded on load and on
//! lookup.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use log::warn;
use thiserror::Error;

use crate::conllu::Token;
use crate::scalar::Scalar;

pub const MIN_SENTIMENT: f64 = -5.0;
pub const MAX_SENTIMENT: f64 = 5.0;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `lemma<TAB>value`")]
    Format { line: usize },
    #[error("line {line}: value `{value}` for `{lemma}` is not a number")]
    NotNumeric {
        line: usize,
        lemma: String,
        value: String,
    },
    #[error("line {line}: score {value} for `{lemma}` is outside [-5, 5]")]
    OutOfRange {
        line: usize,
        lemma: String,
        value: f64,
    },
    #[error("line {line}: score for `{lemma}` is zero")]
    ZeroScore { line: usize, lemma: String },
    #[error("line {line}: intensifier strength {value} for `{lemma}` must be greater than -1")]
    StrengthTooLow {
        line: usize,
        lemma: String,
        value: f64,
    },
    #[error("negator list is empty and the Polarity=Neg feature rule is disabled")]
    NoNegators,
}

/// Emitted when a lemma appears twice; the later row is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateLemma {
    pub lemma: String,
    pub first_line: usize,
    pub line: usize,
}

fn fold(lemma: &str) -> String {
    lemma.trim().to_lowercase()
}

fn read(path: &Path) -> Result<String, LexiconError> {
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })
}

struct Row<'a> {
    line: usize,
    lemma: &'a str,
    value: f64,
}

fn rows(text: &str) -> impl Iterator<Item = Result<Row<'_>, LexiconError>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() || raw.starts_with('#') {
            return None;
        }
        let mut cols = raw.split('\t');
        let (Some(lemma), Some(value), None) = (cols.next(), cols.next(), cols.next()) else {
            return Some(Err(LexiconError::Format { line }));
        };
        if lemma.trim().is_empty() {
            return Some(Err(LexiconError::Format { line }));
        }
        Some(match value.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Row { line, lemma, value: v }),
            _ => Err(LexiconError::NotNumeric {
                line,
                lemma: lemma.to_string(),
                value: value.to_string(),
            }),
        })
    })
}

fn insert_row<T>(
    entries: &mut HashMap<String, (T, usize)>,
    duplicates: &mut Vec<DuplicateLemma>,
    lemma: String,
    value: T,
    line: usize,
) {
    if let Some((_, first_line)) = entries.insert(lemma.clone(), (value, line)) {
        warn!("lemma `{lemma}` defined on lines {first_line} and {line}; keeping line {line}");
        duplicates.push(DuplicateLemma {
            lemma,
            first_line,
            line,
        });
    }
}

fn convert<T: Scalar>(row: &Row<'_>) -> Result<T, LexiconError> {
    T::from_decimal(row.value).ok_or_else(|| LexiconError::NotNumeric {
        line: row.line,
        lemma: row.lemma.to_string(),
        value: row.value.to_string(),
    })
}

#[derive(Debug, Clone)]
pub struct SentimentLexicon<T> {
    entries: HashMap<String, (T, usize)>,
    duplicates: Vec<DuplicateLemma>,
}

impl<T: Scalar> SentimentLexicon<T> {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Self::parse(&read(path.as_ref())?)
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        let mut duplicates = Vec::new();
        for row in rows(text) {
            let row = row?;
            if !(MIN_SENTIMENT..=MAX_SENTIMENT).contains(&row.value) {
                return Err(LexiconError::OutOfRange {
                    line: row.line,
                    lemma: row.lemma.to_string(),
                    value: row.value,
                });
            }
            let value: T = convert(&row)?;
            if value.is_zero() {
                return Err(LexiconError::ZeroScore {
                    line: row.line,
                    lemma: row.lemma.to_string(),
                });
            }
            insert_row(&mut entries, &mut duplicates, fold(row.lemma), value, row.line);
        }
        Ok(SentimentLexicon {
            entries,
            duplicates,
        })
    }

    /// Builds a lexicon from in-memory pairs, applying the same checks as a
    /// file load.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self, LexiconError> {
        let text: String = pairs
            .into_iter()
            .map(|(l, v)| format!("{l}\t{v}\n"))
            .collect();
        Self::parse(&text)
    }

    pub fn lookup(&self, lemma: &str) -> Option<T> {
        self.entries.get(&fold(lemma)).map(|e| e.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn duplicates(&self) -> &[DuplicateLemma] {
        &self.duplicates
    }
}

#[derive(Debug, Clone)]
pub struct IntensifierLexicon<T> {
    entries: HashMap<String, (T, usize)>,
    duplicates: Vec<DuplicateLemma>,
}

impl<T: Scalar> IntensifierLexicon<T> {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Self::parse(&read(path.as_ref())?)
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        let mut duplicates = Vec::new();
        for row in rows(text) {
            let row = row?;
            if row.value <= -1.0 {
                return Err(LexiconError::StrengthTooLow {
                    line: row.line,
                    lemma: row.lemma.to_string(),
                    value: row.value,
                });
            }
            let value = convert(&row)?;
            insert_row(&mut entries, &mut duplicates, fold(row.lemma), value, row.line);
        }
        Ok(IntensifierLexicon {
            entries,
            duplicates,
        })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self, LexiconError> {
        let text: String = pairs
            .into_iter()
            .map(|(l, v)| format!("{l}\t{v}\n"))
            .collect();
        Self::parse(&text)
    }

    pub fn strength(&self, lemma: &str) -> Option<T> {
        self.entries.get(&fold(lemma)).map(|e| e.0)
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.entries.contains_key(&fold(lemma))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn duplicates(&self) -> &[DuplicateLemma] {
        &self.duplicates
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegatorSet {
    lemmas: BTreeSet<String>,
    /// Also treat any token carrying `Polarity=Neg` as a negator.
    pub feature_rule: bool,
}

impl NegatorSet {
    pub fn new<I, S>(lemmas: I, feature_rule: bool) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let lemmas: BTreeSet<String> = lemmas
            .into_iter()
            .map(|l| fold(l.as_ref()))
            .filter(|l| !l.is_empty())
            .collect();
        if lemmas.is_empty() && !feature_rule {
            return Err(LexiconError::NoNegators);
        }
        Ok(NegatorSet {
            lemmas,
            feature_rule,
        })
    }

    pub fn load(path: impl AsRef<Path>, feature_rule: bool) -> Result<Self, LexiconError> {
        Self::parse(&read(path.as_ref())?, feature_rule)
    }

    pub fn parse(text: &str, feature_rule: bool) -> Result<Self, LexiconError> {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
            feature_rule,
        )
    }

    pub fn contains_lemma(&self, lemma: &str) -> bool {
        self.lemmas.contains(&fold(lemma))
    }

    pub fn is_negator(&self, token: &Token) -> bool {
        self.contains_lemma(token.key())
            || (self.feature_rule && token.feat("Polarity") == Some("Neg"))
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.lemmas.iter().map(String::as_str)
    }
}

/// The three resources the compositional scorer needs.
#[derive(Debug, Clone)]
pub struct Lexica<T> {
    pub sentiment: SentimentLexicon<T>,
    pub intensifiers: IntensifierLexicon<T>,
    pub negators: NegatorSet,
}

impl<T: Scalar> Lexica<T> {
    pub fn new(
        sentiment: SentimentLexicon<T>,
        intensifiers: IntensifierLexicon<T>,
        negators: NegatorSet,
    ) -> Self {
        Lexica {
            sentiment,
            intensifiers,
            negators,
        }
    }

    pub fn load(
        sentiment: impl AsRef<Path>,
        intensifiers: impl AsRef<Path>,
        negators: impl AsRef<Path>,
    ) -> Result<Self, LexiconError> {
        Ok(Lexica {
            sentiment: SentimentLexicon::load(sentiment)?,
            intensifiers: IntensifierLexicon::load(intensifiers)?,
            negators: NegatorSet::load(negators, true)?,
        })
    }
}
