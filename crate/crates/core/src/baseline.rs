//! Non-compositional baseline: a valence-heuristic scorer that only looks at
//! linear word order.
//!
//! For every lexicon hit the scorer checks the few words before it for
//! boosters and negators, reweights hits around a contrastive "but", sums
//! the results and squashes the total into `(-1, 1)` with
//! `x / sqrt(x^2 + alpha)`. Punctuation tokens are not counted as words.
//! Constants follow the published description of the VADER analyzer and can
//! be overridden from a `key = value` config file.

use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::conllu::{Sentence, Token};
use crate::lexicon::{IntensifierLexicon, NegatorSet, SentimentLexicon};
use crate::scalar::HeuristicScalar;
use crate::scorer::PolarityLabel;

/// Lemmas that trigger but-clause reweighting.
pub const CONTRAST_LEMMAS: [&str; 2] = ["but", "pero"];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Format { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{value}` is not a valid value for `{key}`")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("invalid configuration: {0}")]
    Invariant(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeuristicConfig<T> {
    pub negation_window: usize,
    pub negation_factor: T,
    pub booster_increment: T,
    pub but_before_weight: T,
    pub but_after_weight: T,
    pub normalization_alpha: T,
    pub neutral_band: T,
}

impl<T: HeuristicScalar> Default for HeuristicConfig<T> {
    fn default() -> Self {
        let c = |v: f64| T::from_f64(v).expect("default constant representable");
        HeuristicConfig {
            negation_window: 3,
            negation_factor: c(-0.74),
            booster_increment: c(0.293),
            but_before_weight: c(0.5),
            but_after_weight: c(1.5),
            normalization_alpha: c(15.0),
            neutral_band: c(0.05),
        }
    }
}

impl<T: HeuristicScalar> HeuristicConfig<T> {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.negation_window < 1 {
            return Err(ConfigError::Invariant("negation_window must be at least 1"));
        }
        if self.normalization_alpha <= T::zero() {
            return Err(ConfigError::Invariant("normalization_alpha must be positive"));
        }
        if self.neutral_band < T::zero() || self.neutral_band >= T::one() {
            return Err(ConfigError::Invariant("neutral_band must lie in [0, 1)"));
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Reads `key = value` overrides on top of the defaults. `#` starts a
    /// comment line.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let (key, value) = raw.split_once('=').ok_or(ConfigError::Format { line })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue {
                line,
                key: key.to_string(),
                value: value.to_string(),
            };
            if key == "negation_window" {
                config.negation_window = value.parse().map_err(|_| bad())?;
                continue;
            }
            let number = value
                .parse::<f64>()
                .ok()
                .and_then(T::from_decimal)
                .ok_or_else(bad)?;
            let slot = match key {
                "negation_factor" => &mut config.negation_factor,
                "booster_increment" => &mut config.booster_increment,
                "but_before_weight" => &mut config.but_before_weight,
                "but_after_weight" => &mut config.but_after_weight,
                "normalization_alpha" => &mut config.normalization_alpha,
                "neutral_band" => &mut config.neutral_band,
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            };
            *slot = number;
        }
        config.validate()?;
        Ok(config)
    }
}

/// What happened to one lexicon hit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicHit<T> {
    pub token: usize,
    pub base: T,
    /// Booster tokens found in the window.
    pub boosters: Vec<usize>,
    /// The first negator found in the window, if any.
    pub negated_by: Option<usize>,
    /// But-clause weight applied (1 when there is no contrast word).
    pub weight: T,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicScore<T> {
    /// Normalized score in `(-1, 1)`.
    pub value: T,
    /// Sum of hit values before normalization.
    pub raw: T,
    pub hits: Vec<HeuristicHit<T>>,
}

impl<T: HeuristicScalar> HeuristicScore<T> {
    pub fn label(&self, config: &HeuristicConfig<T>) -> PolarityLabel {
        classify_normalized(self.value, config)
    }
}

/// Resources the baseline consults: its own sentiment lexicon, boosters
/// (taken from an intensifier list) and negators.
#[derive(Debug, Clone)]
pub struct BaselineResources<T> {
    pub lexicon: SentimentLexicon<T>,
    pub boosters: IntensifierLexicon<T>,
    pub negators: NegatorSet,
}

pub fn normalize<T: HeuristicScalar>(x: T, alpha: T) -> T {
    if x.is_zero() {
        return T::zero();
    }
    x / (x * x + alpha).sqrt()
}

fn raw_hits<T: HeuristicScalar>(
    sentence: &Sentence,
    resources: &BaselineResources<T>,
    config: &HeuristicConfig<T>,
) -> Vec<HeuristicHit<T>> {
    let words: Vec<&Token> = sentence
        .tokens
        .iter()
        .filter(|t| t.upos != "PUNCT")
        .collect();
    let contrast = words
        .iter()
        .position(|t| CONTRAST_LEMMAS.contains(&t.key().to_lowercase().as_str()));

    let mut hits = Vec::new();
    for (pos, token) in words.iter().enumerate() {
        if resources.negators.is_negator(token) {
            continue;
        }
        let Some(base) = resources.lexicon.lookup(token.key()) else {
            continue;
        };
        let window = &words[pos.saturating_sub(config.negation_window)..pos];

        let mut value = base;
        let mut boosters = Vec::new();
        for w in window {
            if let Some(strength) = resources.boosters.strength(w.key()) {
                let step = if strength < T::zero() {
                    -config.booster_increment
                } else {
                    config.booster_increment
                };
                value = value + base.signum() * step;
                boosters.push(w.id);
            }
        }
        let negated_by = window
            .iter()
            .find(|w| resources.negators.is_negator(w))
            .map(|w| w.id);
        if negated_by.is_some() {
            value = value * config.negation_factor;
        }
        let weight = match contrast {
            Some(c) if pos < c => config.but_before_weight,
            Some(c) if pos > c => config.but_after_weight,
            _ => T::one(),
        };
        value = value * weight;
        hits.push(HeuristicHit {
            token: token.id,
            base,
            boosters,
            negated_by,
            weight,
            value,
        });
    }
    hits
}

/// Scores one sentence.
pub fn score_heuristic<T: HeuristicScalar>(
    sentence: &Sentence,
    resources: &BaselineResources<T>,
    config: &HeuristicConfig<T>,
) -> HeuristicScore<T> {
    score_heuristic_many(std::slice::from_ref(sentence), resources, config)
}

/// Scores a multi-sentence text: hits are summed over all sentences and the
/// total is normalized once, as the reference analyzer does for a document.
pub fn score_heuristic_many<T: HeuristicScalar>(
    sentences: &[Sentence],
    resources: &BaselineResources<T>,
    config: &HeuristicConfig<T>,
) -> HeuristicScore<T> {
    let hits: Vec<_> = sentences
        .iter()
        .flat_map(|s| raw_hits(s, resources, config))
        .collect();
    let raw = hits.iter().fold(T::zero(), |acc, h| acc + h.value);
    HeuristicScore {
        value: normalize(raw, config.normalization_alpha),
        raw,
        hits,
    }
}

pub fn classify_normalized<T: HeuristicScalar>(score: T, config: &HeuristicConfig<T>) -> PolarityLabel {
    if score >= config.neutral_band {
        PolarityLabel::Positive
    } else if score <= -config.neutral_band {
        PolarityLabel::Negative
    } else {
        PolarityLabel::Neutral
    }
}
