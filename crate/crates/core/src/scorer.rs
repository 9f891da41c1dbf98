//! Compositional polarity scoring over head-child branches.
//!
//! Every token is first labelled as a sentiment word, intensifier, negator or
//! plain word. Branches are then visited from the lowest to the highest. A
//! branch collects its contributions: the head's own sentiment score, scaled
//! by `(1 + b)` for each intensifier child, and the scores already computed
//! for its children. Each negator child shifts every contribution by
//! `sign(v) * -4`, and the shifted contributions are combined into the score
//! the head passes upward. The root branch carries the sentence score.
//!
//! With the coordination fix enabled the sentence is first cut into
//! conjuncts along `conj` relations and every conjunct is traversed on its
//! own, so a negator only reaches sentiment words inside its own conjunct.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conllu::{branch_order, build_head_child_map, HeadChildMap, Sentence, Token};
use crate::lexicon::Lexica;
use crate::scalar::Scalar;

/// Magnitude of the polarity shift a negator applies.
pub const NEGATION_SHIFT: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarityLabel {
    Negative,
    Neutral,
    Positive,
}

impl fmt::Display for PolarityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolarityLabel::Negative => "negative",
            PolarityLabel::Neutral => "neutral",
            PolarityLabel::Positive => "positive",
        })
    }
}

impl std::str::FromStr for PolarityLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "negative" => Ok(PolarityLabel::Negative),
            "neutral" => Ok(PolarityLabel::Neutral),
            "positive" => Ok(PolarityLabel::Positive),
            other => Err(format!("unknown polarity `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    #[default]
    Sum,
    Mean,
}

impl Aggregation {
    pub fn combine<T: Scalar>(self, values: &[T]) -> Option<T> {
        if values.is_empty() {
            return None;
        }
        let total = values.iter().fold(T::zero(), |acc, v| acc + *v);
        match self {
            Aggregation::Sum => Some(total),
            Aggregation::Mean => {
                let n = T::from_usize(values.len()).expect("count representable in score type");
                Some(total / n)
            }
        }
    }
}

impl std::str::FromStr for Aggregation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(Aggregation::Sum),
            "mean" => Ok(Aggregation::Mean),
            other => Err(format!("unknown aggregation `{other}` (expected sum or mean)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScorerOptions {
    /// Score each coordinated conjunct separately so negation does not cross
    /// a `conj` boundary.
    pub coordination_fix: bool,
    pub aggregation: Aggregation,
}

impl Default for ScorerOptions {
    fn default() -> Self {
        ScorerOptions {
            coordination_fix: true,
            aggregation: Aggregation::Sum,
        }
    }
}

impl ScorerOptions {
    pub fn original() -> Self {
        ScorerOptions {
            coordination_fix: false,
            ..Self::default()
        }
    }

    pub fn modified() -> Self {
        Self::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element<T> {
    Sentiment(T),
    Intensifier(T),
    Negator,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnotatedToken<'s, T> {
    pub token: &'s Token,
    pub element: Element<T>,
}

impl<T: Scalar> AnnotatedToken<'_, T> {
    pub fn sentiment(&self) -> Option<T> {
        match self.element {
            Element::Sentiment(a) => Some(a),
            _ => None,
        }
    }
}

/// Labels each token with exactly one element type.
///
/// Negators win over everything, then sentiment words, then intensifiers.
pub fn annotate<'s, T: Scalar>(sentence: &'s Sentence, lexica: &Lexica<T>) -> Vec<AnnotatedToken<'s, T>> {
    sentence
        .tokens
        .iter()
        .map(|token| {
            let key = token.key();
            let element = if lexica.negators.is_negator(token) {
                Element::Negator
            } else if let Some(a) = lexica.sentiment.lookup(key) {
                if lexica.intensifiers.contains(key) {
                    log::warn!("`{key}` is both a sentiment word and an intensifier; using the sentiment score");
                }
                Element::Sentiment(a)
            } else if let Some(b) = lexica.intensifiers.strength(key) {
                Element::Intensifier(b)
            } else {
                Element::Plain
            };
            AnnotatedToken { token, element }
        })
        .collect()
}

/// `a * (1 + b)`, plus `sign(a) * -4` when negated.
///
/// # Panics
///
/// When `a` is zero; the sign of a zero score is undefined and the lexicon
/// loader never produces one.
pub fn branch_score<T: Scalar>(a: T, b: T, negated: bool) -> T {
    assert!(!a.is_zero(), "branch_score needs a non-zero sentiment score");
    let intensified = a * (T::one() + b);
    if negated {
        let shift = T::from_i32(-NEGATION_SHIFT).expect("shift representable");
        intensified + a.signum() * shift
    } else {
        intensified
    }
}

/// One negation step on an already computed score. A zero score has no
/// polarity to shift and is left alone.
fn negate<T: Scalar>(value: T) -> T {
    if value.is_zero() {
        value
    } else {
        branch_score(value, T::zero(), true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjunctScore<T> {
    /// Top token of the conjunct.
    pub root: usize,
    pub tokens: Vec<usize>,
    /// `None` when the conjunct holds no sentiment word.
    pub score: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarityScore<T> {
    pub value: T,
    /// `(head id, branch score)` for every branch that carried sentiment, in
    /// traversal order, ending with the root branch `(0, value)`.
    pub contributing_branches: Vec<(usize, T)>,
    /// Per-conjunct results; empty unless the coordination fix was applied.
    pub conjuncts: Vec<ConjunctScore<T>>,
}

impl<T: Scalar> PolarityScore<T> {
    pub fn zero() -> Self {
        PolarityScore {
            value: T::zero(),
            contributing_branches: Vec::new(),
            conjuncts: Vec::new(),
        }
    }

    pub fn label(&self) -> PolarityLabel {
        classify(self)
    }

    pub fn found_sentiment(&self) -> bool {
        !self.contributing_branches.is_empty()
    }
}

/// Positive above zero, negative below, neutral at exactly zero.
pub fn classify<T: Scalar>(score: &PolarityScore<T>) -> PolarityLabel {
    label_of(score.value)
}

pub fn label_of<T: Scalar>(value: T) -> PolarityLabel {
    if value > T::zero() {
        PolarityLabel::Positive
    } else if value < T::zero() {
        PolarityLabel::Negative
    } else {
        PolarityLabel::Neutral
    }
}

/// Splits token ids into coordination conjuncts.
///
/// A token belongs to the conjunct headed by its nearest ancestor-or-self
/// attached with `conj`; tokens with no such ancestor form the base
/// conjunct, which is returned first. The other conjuncts follow in
/// ascending order of their `conj` token.
pub fn conjunct_partition(sentence: &Sentence, map: &HeadChildMap) -> Vec<BTreeSet<usize>> {
    // label 0 is the base conjunct
    let mut label = vec![0usize; sentence.len() + 1];
    let mut stack: Vec<usize> = map.children(0).to_vec();
    while let Some(id) = stack.pop() {
        let token = match sentence.token(id) {
            Some(t) => t,
            None => continue,
        };
        label[id] = if token.base_deprel() == "conj" {
            id
        } else {
            label[token.head]
        };
        stack.extend_from_slice(map.children(id));
    }
    let mut groups: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
    for (id, &conjunct) in label.iter().enumerate().skip(1) {
        groups.entry(conjunct).or_default().insert(id);
    }
    groups.into_values().collect()
}

/// Bottom-up walk over one tree. Returns the score reaching the root branch,
/// or `None` when no sentiment word was found.
fn traverse<T: Scalar>(
    map: &HeadChildMap,
    annotated: &[AnnotatedToken<'_, T>],
    aggregation: Aggregation,
    trace: &mut Vec<(usize, T)>,
) -> Option<T> {
    let element = |id: usize| annotated[id - 1].element;
    let mut acc: Vec<Option<T>> = annotated.iter().map(|t| t.sentiment()).collect();
    acc.insert(0, None);

    for (head, children) in branch_order(map) {
        if head == 0 {
            return children.first().and_then(|&root| acc[root]);
        }
        let mut contributions = Vec::with_capacity(children.len() + 1);
        if let Element::Sentiment(a) = element(head) {
            let scaled = children.iter().fold(a, |score, &c| match element(c) {
                Element::Intensifier(b) => score * (T::one() + b),
                _ => score,
            });
            contributions.push(scaled);
        }
        contributions.extend(children.iter().filter_map(|&c| acc[c]));
        let negators = children
            .iter()
            .filter(|&&c| element(c) == Element::Negator)
            .count();
        for value in contributions.iter_mut() {
            for _ in 0..negators {
                *value = negate(*value);
            }
        }
        acc[head] = aggregation.combine(&contributions);
        if let Some(score) = acc[head] {
            trace.push((head, score));
        }
    }
    None
}

/// Scores one sentence.
pub fn score_sentence<T: Scalar>(
    sentence: &Sentence,
    lexica: &Lexica<T>,
    options: ScorerOptions,
) -> PolarityScore<T> {
    let annotated = annotate(sentence, lexica);
    score_annotated(sentence, &annotated, options)
}

/// Scores a sentence whose tokens have already been annotated.
pub fn score_annotated<T: Scalar>(
    sentence: &Sentence,
    annotated: &[AnnotatedToken<'_, T>],
    options: ScorerOptions,
) -> PolarityScore<T> {
    let map = build_head_child_map(sentence);
    let mut trace = Vec::new();
    let mut conjuncts = Vec::new();

    let total = if options.coordination_fix {
        let mut scores = Vec::new();
        for members in conjunct_partition(sentence, &map) {
            let sub = HeadChildMap::from_edges(
                members
                    .iter()
                    .map(|&id| (id, sentence.tokens[id - 1].head)),
            );
            let score = traverse(&sub, annotated, options.aggregation, &mut trace);
            scores.extend(score);
            conjuncts.push(ConjunctScore {
                root: sub.root().unwrap_or(0),
                tokens: members.into_iter().collect(),
                score,
            });
        }
        options.aggregation.combine(&scores)
    } else {
        traverse(&map, annotated, options.aggregation, &mut trace)
    };

    match total {
        Some(value) => {
            trace.push((0, value));
            PolarityScore {
                value,
                contributing_branches: trace,
                conjuncts,
            }
        }
        None => PolarityScore {
            conjuncts,
            ..PolarityScore::zero()
        },
    }
}

/// Review score: the sum of its sentence scores.
pub fn score_review<T: Scalar>(
    sentences: &[Sentence],
    lexica: &Lexica<T>,
    options: ScorerOptions,
) -> (T, Vec<PolarityScore<T>>) {
    let per_sentence: Vec<_> = sentences
        .iter()
        .map(|s| score_sentence(s, lexica, options))
        .collect();
    let total = per_sentence.iter().fold(T::zero(), |acc, s| acc + s.value);
    (total, per_sentence)
}
