//! Compositional, dependency-tree based sentiment scoring.
//!
//! The crate reads Universal Dependencies parses in CoNLL-U form, annotates
//! tokens against lemma-keyed sentiment, intensifier and negator resources,
//! and scores each sentence by walking its head-child branches from the
//! lowest branch up to the root. A linear-order heuristic scorer is provided
//! as a non-compositional point of comparison, together with corpus loading,
//! gold-label aggregation and an evaluation harness.
//!
//! The [`focus`] module is a small, independent interpreter for alternative
//! semantics: it computes ordinary and focus semantic values in parallel over
//! a finite model.
//!
//! Numeric code is generic over the score type (see [`Scalar`]). The aliases
//! at the crate root fix it to `f64`, which is what the CLI and the evaluation
//! harness use; [`ExactScore`] fixes it to an exact rational.

pub mod baseline;
pub mod conllu;
pub mod corpus;
pub mod eval;
pub mod focus;
pub mod lexicon;
pub mod scalar;
pub mod scorer;

pub use baseline::{
    classify_normalized, score_heuristic, score_heuristic_many, BaselineResources, HeuristicConfig,
    HeuristicScore,
};
pub use conllu::{
    branch_order, build_head_child_map, parse_conllu, write_conllu, ConlluError, HeadChildMap,
    Sentence, Token,
};
pub use corpus::{
    aggregate_gold, attach_parses, filter_subjective, load_corpus, subset_coordination,
    subset_negation, GoldLabel, OpinionExpression, OpinionPolarity, Review,
};
pub use eval::{
    accuracy, condition_bucket, emit_report, run_comparison, Condition, Dataset, DetailFormat,
    EvalReport, EvalResources, Method, PredictionRecord,
};
pub use lexicon::{IntensifierLexicon, Lexica, NegatorSet, SentimentLexicon};
pub use scalar::{HeuristicScalar, Scalar};
pub use scorer::{
    annotate, branch_score, classify, conjunct_partition, score_review, score_sentence,
    Aggregation, PolarityLabel, PolarityScore, ScorerOptions,
};

/// Exact rational scores, useful for reproducing hand calculations without
/// rounding.
pub type Rational = num_rational::Ratio<i64>;

pub type Score = PolarityScore<f64>;
pub type ExactScore = PolarityScore<Rational>;
pub type Lexicon = SentimentLexicon<f64>;
pub type Intensifiers = IntensifierLexicon<f64>;
pub type Resources = Lexica<f64>;
pub type Config = HeuristicConfig<f64>;
pub type BaselineLexica = BaselineResources<f64>;
pub type EvalInputs = EvalResources<f64>;
pub type Report = EvalReport<f64>;
