//! Review corpus: record loading, gold-label aggregation, parse alignment and
//! the evaluation subsets.
//!
//! Records follow the structured-sentiment release layout: a JSON object per
//! review with `sent_id`, `text` and an `opinions` list whose entries carry a
//! `Polarity` and a `Polar_expression` (`[[texts], [offsets]]`). Files may
//! hold one record per line or a single JSON array. Source and target spans
//! are read past and dropped.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::conllu::Sentence;
use crate::lexicon::NegatorSet;
use crate::scorer::PolarityLabel;

pub type GoldLabel = PolarityLabel;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("review `{0}` has no attached parse")]
    Unparsed(String),
    #[error("parsed sentence `{0}` does not belong to any review in the corpus")]
    UnknownReview(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpinionPolarity {
    Positive,
    Negative,
}

impl From<OpinionPolarity> for PolarityLabel {
    fn from(p: OpinionPolarity) -> Self {
        match p {
            OpinionPolarity::Positive => PolarityLabel::Positive,
            OpinionPolarity::Negative => PolarityLabel::Negative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpinionExpression {
    pub expression_text: String,
    pub polarity: OpinionPolarity,
}

impl OpinionExpression {
    pub fn new(expression_text: &str, polarity: OpinionPolarity) -> Self {
        OpinionExpression {
            expression_text: expression_text.to_string(),
            polarity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Review {
    pub review_id: String,
    pub text: String,
    pub sentences: Vec<Sentence>,
    pub opinions: Vec<OpinionExpression>,
}

impl Review {
    pub fn new(review_id: &str, text: &str, opinions: Vec<OpinionExpression>) -> Self {
        Review {
            review_id: review_id.to_string(),
            text: text.to_string(),
            sentences: Vec::new(),
            opinions,
        }
    }

    pub fn gold(&self) -> Option<GoldLabel> {
        aggregate_gold(&self.opinions)
    }

    fn parsed(&self) -> Result<&[Sentence], CorpusError> {
        if self.sentences.is_empty() {
            Err(CorpusError::Unparsed(self.review_id.clone()))
        } else {
            Ok(&self.sentences)
        }
    }
}

/// A record that was dropped while loading, with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordDiagnostic {
    /// 1-based record position (line number for line-delimited files).
    pub record: usize,
    pub review_id: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct LoadedCorpus {
    pub reviews: Vec<Review>,
    pub diagnostics: Vec<RecordDiagnostic>,
}

fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn parse_polarity(value: &Value) -> Result<OpinionPolarity, String> {
    let s = value
        .as_str()
        .ok_or_else(|| format!("polarity {value} is not a string"))?;
    match s.trim().to_ascii_lowercase().as_str() {
        "positive" | "pos" => Ok(OpinionPolarity::Positive),
        "negative" | "neg" => Ok(OpinionPolarity::Negative),
        other => Err(format!("unparseable polarity `{other}`")),
    }
}

fn expression_text(opinion: &Value) -> String {
    if let Some(s) = opinion.get("expression").and_then(Value::as_str) {
        return s.to_string();
    }
    opinion
        .get("Polar_expression")
        .and_then(|e| e.get(0))
        .and_then(Value::as_array)
        .map(|parts| {
            parts
                .iter()
                .filter_map(Value::as_str)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .unwrap_or_default()
}

fn parse_record(record: &Value) -> Result<Review, (Option<String>, String)> {
    let id = ["sent_id", "review_id", "id"]
        .iter()
        .find_map(|k| record.get(*k).and_then(Value::as_str))
        .map(str::to_string)
        .ok_or((None, "missing required field `sent_id`".to_string()))?;
    let text = record
        .get("text")
        .and_then(Value::as_str)
        .ok_or((Some(id.clone()), "missing required field `text`".to_string()))?;
    let opinions = record
        .get("opinions")
        .and_then(Value::as_array)
        .ok_or((Some(id.clone()), "missing required field `opinions`".to_string()))?;
    let mut parsed = Vec::with_capacity(opinions.len());
    for opinion in opinions {
        let polarity = opinion
            .get("Polarity")
            .or_else(|| opinion.get("polarity"))
            .ok_or((Some(id.clone()), "opinion without a polarity".to_string()))?;
        let polarity = parse_polarity(polarity).map_err(|m| (Some(id.clone()), m))?;
        parsed.push(OpinionExpression {
            expression_text: expression_text(opinion),
            polarity,
        });
    }
    Ok(Review::new(&id, &normalize_whitespace(text), parsed))
}

/// Parses corpus text. Record-level problems become diagnostics and loading
/// continues; only undecodable JSON arrays are fatal.
pub fn parse_corpus(text: &str) -> Result<LoadedCorpus, CorpusError> {
    let records: Vec<(usize, Result<Value, String>)> = if text.trim_start().starts_with('[') {
        let values: Vec<Value> = serde_json::from_str(text)?;
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i + 1, Ok(v)))
            .collect()
    } else {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, serde_json::from_str(l).map_err(|e| e.to_string())))
            .collect()
    };

    let mut out = LoadedCorpus::default();
    let mut seen = HashSet::new();
    for (record, value) in records {
        let mut reject = |review_id: Option<String>, message: String| {
            log::warn!("record {record}: {message}");
            out.diagnostics.push(RecordDiagnostic {
                record,
                review_id,
                message,
            });
        };
        let value = match value {
            Ok(v) => v,
            Err(e) => {
                reject(None, format!("invalid JSON: {e}"));
                continue;
            }
        };
        match parse_record(&value) {
            Ok(review) if review.text.is_empty() => {
                reject(Some(review.review_id), "empty text".into());
            }
            Ok(review) if seen.contains(&review.review_id) => {
                let id = review.review_id.clone();
                reject(Some(review.review_id), format!("duplicate review id `{id}`"));
            }
            Ok(review) => {
                seen.insert(review.review_id.clone());
                out.reviews.push(review);
            }
            Err((id, message)) => reject(id, message),
        }
    }
    Ok(out)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<LoadedCorpus, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_corpus(&text)
}

/// Splits `<review_id>:<k>` into the review id and sentence index.
pub fn split_sent_id(sent_id: &str) -> (&str, Option<usize>) {
    match sent_id.rsplit_once(':') {
        Some((review, k)) => match k.parse() {
            Ok(k) => (review, Some(k)),
            Err(_) => (sent_id, None),
        },
        None => (sent_id, None),
    }
}

/// Attaches parsed sentences to their reviews by `sent_id`. Fails on the
/// first sentence whose review id is not in the corpus.
pub fn attach_parses(reviews: &mut [Review], sentences: Vec<Sentence>) -> Result<(), CorpusError> {
    let index: HashMap<String, usize> = reviews
        .iter()
        .enumerate()
        .map(|(i, r)| (r.review_id.clone(), i))
        .collect();
    let mut grouped: BTreeMap<usize, Vec<(usize, usize, Sentence)>> = BTreeMap::new();
    for (order, sentence) in sentences.into_iter().enumerate() {
        let (review_id, k) = split_sent_id(&sentence.source_id);
        let Some(&slot) = index.get(review_id) else {
            return Err(CorpusError::UnknownReview(sentence.source_id.clone()));
        };
        grouped
            .entry(slot)
            .or_default()
            .push((k.unwrap_or(order), order, sentence));
    }
    for (slot, mut group) in grouped {
        group.sort_by_key(|(k, order, _)| (*k, *order));
        reviews[slot].sentences = group.into_iter().map(|(_, _, s)| s).collect();
    }
    Ok(())
}

pub fn filter_subjective<'a>(reviews: impl IntoIterator<Item = &'a Review>) -> Vec<&'a Review> {
    reviews
        .into_iter()
        .filter(|r| !r.opinions.is_empty())
        .collect()
}

/// Majority polarity of the opinion list; a tie is neutral. `None` for an
/// empty list.
pub fn aggregate_gold(opinions: &[OpinionExpression]) -> Option<GoldLabel> {
    if opinions.is_empty() {
        return None;
    }
    let positive = opinions
        .iter()
        .filter(|o| o.polarity == OpinionPolarity::Positive)
        .count();
    let negative = opinions.len() - positive;
    Some(match positive.cmp(&negative) {
        std::cmp::Ordering::Greater => PolarityLabel::Positive,
        std::cmp::Ordering::Less => PolarityLabel::Negative,
        std::cmp::Ordering::Equal => PolarityLabel::Neutral,
    })
}

/// Reviews with at least one negator token.
pub fn subset_negation<'a>(
    reviews: impl IntoIterator<Item = &'a Review>,
    negators: &NegatorSet,
) -> Result<Vec<&'a Review>, CorpusError> {
    let mut out = Vec::new();
    for review in reviews {
        let hit = review
            .parsed()?
            .iter()
            .flat_map(|s| &s.tokens)
            .any(|t| negators.is_negator(t));
        if hit {
            out.push(review);
        }
    }
    Ok(out)
}

/// Reviews with at least one `conj` or `cc` relation.
pub fn subset_coordination<'a>(
    reviews: impl IntoIterator<Item = &'a Review>,
) -> Result<Vec<&'a Review>, CorpusError> {
    let mut out = Vec::new();
    for review in reviews {
        let hit = review
            .parsed()?
            .iter()
            .flat_map(|s| &s.tokens)
            .any(|t| matches!(t.base_deprel(), "conj" | "cc"));
        if hit {
            out.push(review);
        }
    }
    Ok(out)
}

/// Mean sentences per review and tokens per sentence over parsed reviews.
pub fn statistics<'a>(reviews: impl IntoIterator<Item = &'a Review>) -> (f64, f64) {
    let (mut n_reviews, mut n_sentences, mut n_tokens) = (0usize, 0usize, 0usize);
    for r in reviews {
        n_reviews += 1;
        n_sentences += r.sentences.len();
        n_tokens += r.sentences.iter().map(Sentence::len).sum::<usize>();
    }
    let per_review = if n_reviews == 0 { 0.0 } else { n_sentences as f64 / n_reviews as f64 };
    let per_sentence = if n_sentences == 0 { 0.0 } else { n_tokens as f64 / n_sentences as f64 };
    (per_review, per_sentence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::parse_conllu;
    use OpinionPolarity::*;

    const HONEYMOON: &str = r#"{"sent_id": "en-1", "text": "My best honeymoon.", "opinions": [{"Source": [[], []], "Target": [[], []], "Polar_expression": [["best"], ["3:7"]], "Polarity": "Positive", "Intensity": "Strong"}]}"#;

    #[test]
    fn loads_release_style_record() {
        let corpus = parse_corpus(HONEYMOON).unwrap();
        assert!(corpus.diagnostics.is_empty());
        let r = &corpus.reviews[0];
        assert_eq!(r.review_id, "en-1");
        assert_eq!(r.opinions, vec![OpinionExpression::new("best", Positive)]);
        assert_eq!(r.gold(), Some(PolarityLabel::Positive));
    }

    #[test]
    fn empty_opinion_list() {
        let corpus = parse_corpus(r#"{"sent_id": "x", "text": "We arrived at noon.", "opinions": []}"#).unwrap();
        assert_eq!(corpus.reviews[0].opinions, vec![]);
        assert_eq!(corpus.reviews[0].gold(), None);
    }

    #[test]
    fn array_files_are_accepted() {
        let text = format!("[{HONEYMOON}, {}]", r#"{"sent_id": "en-2", "text": "ok", "opinions": []}"#);
        assert_eq!(parse_corpus(&text).unwrap().reviews.len(), 2);
    }

    #[test]
    fn record_errors_do_not_stop_loading() {
        let text = [
            HONEYMOON,
            r#"{"text": "no id", "opinions": []}"#,
            r#"{"sent_id": "bad", "text": "t", "opinions": [{"Polarity": "Mixed"}]}"#,
            r#"{"sent_id": "blank", "text": "   ", "opinions": []}"#,
            r#"{"sent_id": "en-1", "text": "again", "opinions": []}"#,
            "{not json",
            r#"{"sent_id": "ok", "text": "  two   spaces ", "opinions": [{"Polarity": "negative"}]}"#,
        ]
        .join("\n");
        let corpus = parse_corpus(&text).unwrap();
        let ids: Vec<_> = corpus.reviews.iter().map(|r| r.review_id.as_str()).collect();
        assert_eq!(ids, vec!["en-1", "ok"]);
        assert_eq!(corpus.reviews[1].text, "two spaces");
        let lines: Vec<_> = corpus.diagnostics.iter().map(|d| d.record).collect();
        assert_eq!(lines, vec![2, 3, 4, 5, 6]);
        assert!(corpus.diagnostics[1].message.contains("mixed"));
    }

    #[test]
    fn missing_file_is_fatal() {
        assert!(matches!(load_corpus("/no/such/corpus.jsonl"), Err(CorpusError::Io { .. })));
    }

    #[test]
    fn gold_aggregation() {
        let ops = |ps: &[OpinionPolarity]| -> Vec<_> { ps.iter().map(|p| OpinionExpression::new("", *p)).collect() };
        assert_eq!(aggregate_gold(&ops(&[Negative, Positive])), Some(PolarityLabel::Neutral));
        assert_eq!(aggregate_gold(&ops(&[Positive])), Some(PolarityLabel::Positive));
        assert_eq!(
            aggregate_gold(&ops(&[Negative, Positive, Negative])),
            Some(PolarityLabel::Negative)
        );
        assert_eq!(aggregate_gold(&[]), None);
    }

    #[test]
    fn filter_subjective_counts() {
        let reviews: Vec<Review> = (0..10)
            .map(|i| {
                let ops = if i % 3 == 0 { vec![] } else { vec![OpinionExpression::new("x", Positive)] };
                Review::new(&format!("r{i}"), "t", ops)
            })
            .collect();
        let kept = filter_subjective(&reviews);
        assert_eq!(kept.len(), 6);
        assert_eq!(filter_subjective(kept.iter().copied()).len(), 6);
        assert!(filter_subjective(&reviews[..0]).is_empty());
    }

    fn parsed_reviews() -> Vec<Review> {
        let mut reviews = vec![
            Review::new("a", "My best honeymoon.", vec![OpinionExpression::new("best", Positive)]),
            Review::new("b", "Not clean and noisy.", vec![OpinionExpression::new("not clean", Negative)]),
        ];
        let conllu = "# sent_id = b:1\n\
1\tNot\tnot\tPART\t_\t_\t2\tadvmod\t_\t_\n\
2\tclean\tclean\tADJ\t_\t_\t0\troot\t_\t_\n\
3\tand\tand\tCCONJ\t_\t_\t4\tcc\t_\t_\n\
4\tnoisy\tnoisy\tADJ\t_\t_\t2\tconj\t_\t_\n\
5\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_\n\n\
# sent_id = a:1\n\
1\tMy\tmy\tPRON\t_\t_\t3\tnmod:poss\t_\t_\n\
2\tbest\tgood\tADJ\t_\tDegree=Sup\t3\tamod\t_\t_\n\
3\thoneymoon\thoneymoon\tNOUN\t_\t_\t0\troot\t_\t_\n\
4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n\n";
        attach_parses(&mut reviews, parse_conllu(conllu).unwrap()).unwrap();
        reviews
    }

    #[test]
    fn subsets() {
        let reviews = parsed_reviews();
        let negators = NegatorSet::new(["not", "no"], true).unwrap();
        let neg: Vec<_> = subset_negation(&reviews, &negators).unwrap().iter().map(|r| r.review_id.clone()).collect();
        assert_eq!(neg, vec!["b"]);
        let coord: Vec<_> = subset_coordination(&reviews).unwrap().iter().map(|r| r.review_id.clone()).collect();
        assert_eq!(coord, vec!["b"]);
        assert!(subset_negation(&reviews[..0], &negators).unwrap().is_empty());
        assert!(subset_coordination(&reviews[..0]).unwrap().is_empty());
    }

    #[test]
    fn unparsed_review_is_named() {
        let reviews = vec![Review::new("lonely", "t", vec![])];
        let negators = NegatorSet::new(["not"], false).unwrap();
        match subset_negation(&reviews, &negators) {
            Err(CorpusError::Unparsed(id)) => assert_eq!(id, "lonely"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(subset_coordination(&reviews), Err(CorpusError::Unparsed(_))));
    }

    #[test]
    fn alignment_by_sent_id() {
        let reviews = parsed_reviews();
        assert_eq!(reviews[0].sentences[0].source_id, "a:1");
        let mut reviews = vec![Review::new("a", "t", vec![])];
        let stray = parse_conllu("# sent_id = zz:1\n1\tx\tx\tX\t_\t_\t0\troot\t_\t_\n").unwrap();
        match attach_parses(&mut reviews, stray) {
            Err(CorpusError::UnknownReview(id)) => assert_eq!(id, "zz:1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sentence_order_follows_index() {
        let mut reviews = vec![Review::new("r:x", "t", vec![])];
        let doc = "# sent_id = r:x:2\n1\tb\tb\tX\t_\t_\t0\troot\t_\t_\n\n# sent_id = r:x:1\n1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n";
        attach_parses(&mut reviews, parse_conllu(doc).unwrap()).unwrap();
        let forms: Vec<_> = reviews[0].sentences.iter().map(|s| s.tokens[0].form.clone()).collect();
        assert_eq!(forms, vec!["a", "b"]);
    }

    #[test]
    fn stats() {
        let reviews = parsed_reviews();
        let (per_review, per_sentence) = statistics(&reviews);
        assert_eq!(per_review, 1.0);
        assert_eq!(per_sentence, 4.5);
    }
}
