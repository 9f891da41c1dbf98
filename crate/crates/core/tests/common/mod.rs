//! Helpers shared by the integration tests: fixture paths, resource
//! loaders, a random sentence generator and an independent top-down scorer.

#![allow(dead_code)]

pub mod focus_gen;

use std::path::PathBuf;

use compsent::{
    parse_conllu, Aggregation, BaselineLexica, Config, IntensifierLexicon, Lexica, Lexicon, NegatorSet,
    Resources, SentimentLexicon, Sentence, Token,
};
use proptest::prelude::*;

pub fn data(relative: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(relative)
}

pub fn read_parses(relative: &str) -> Vec<Sentence> {
    parse_conllu(&std::fs::read_to_string(data(relative)).unwrap()).unwrap()
}

pub fn parse_by_id(relative: &str, id: &str) -> Sentence {
    read_parses(relative)
        .into_iter()
        .find(|s| s.source_id == id)
        .unwrap_or_else(|| panic!("no sentence {id} in {relative}"))
}

pub fn spanish() -> Resources {
    Lexica::load(
        data("lexicon/es_sentiment.tsv"),
        data("lexicon/es_intensifiers.tsv"),
        data("lexicon/es_negators.txt"),
    )
    .unwrap()
}

pub fn english() -> Resources {
    Lexica::load(
        data("lexicon/en_sentiment.tsv"),
        data("lexicon/en_intensifiers.tsv"),
        data("lexicon/en_negators.txt"),
    )
    .unwrap()
}

pub fn english_baseline() -> (BaselineLexica, Config) {
    let lexica = english();
    let resources = BaselineLexica {
        lexicon: Lexicon::load(data("lexicon/en_baseline.tsv")).unwrap(),
        boosters: lexica.intensifiers,
        negators: lexica.negators,
    };
    (resources, Config::load(data("lexicon/baseline.conf")).unwrap())
}

/// What a generated token stands for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Role {
    Sentiment(f64),
    Intensifier(f64),
    Negator,
    Plain,
}

/// A generated sentence with the lexica that realise its roles.
#[derive(Debug, Clone)]
pub struct Generated {
    pub sentence: Sentence,
    pub roles: Vec<Role>,
    pub lexica: Lexica<f64>,
}

fn role() -> impl Strategy<Value = Role> {
    prop_oneof![
        3 => (0.1f64..=5.0, any::<bool>()).prop_map(|(a, neg)| Role::Sentiment(if neg { -a } else { a })),
        2 => (-0.9f64..=1.0).prop_map(Role::Intensifier),
        2 => Just(Role::Negator),
        3 => Just(Role::Plain),
    ]
}

/// Random valid tree over `1..=n`: a shuffled order where each token after
/// the first attaches to some token earlier in that order.
fn tree(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max_len)
        .prop_flat_map(|n| {
            (
                Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(any::<prop::sample::Index>(), n),
            )
        })
        .prop_map(|(order, picks)| {
            let mut heads = vec![0; order.len()];
            for (pos, &id) in order.iter().enumerate().skip(1) {
                heads[id - 1] = order[picks[pos].index(pos)];
            }
            heads
        })
}

/// Builds a sentence from heads, roles and relation labels. Each token's
/// lemma is unique so the generated lexica pin its role exactly.
pub fn realise(heads: &[usize], roles: &[Role], deprels: &[&str]) -> Generated {
    let mut sentiment = Vec::new();
    let mut intensifiers = Vec::new();
    let tokens = heads
        .iter()
        .zip(roles)
        .enumerate()
        .map(|(i, (&head, role))| {
            let id = i + 1;
            let lemma = match role {
                Role::Negator => "neg".to_string(),
                _ => format!("w{id}"),
            };
            match role {
                Role::Sentiment(a) => sentiment.push((lemma.clone(), *a)),
                Role::Intensifier(b) => intensifiers.push((lemma.clone(), *b)),
                _ => {}
            }
            let deprel = if head == 0 { "root" } else { deprels[i] };
            Token::new(id, &lemma, &lemma, "X", head, deprel)
        })
        .collect();
    let lexica = Lexica::new(
        SentimentLexicon::from_pairs(sentiment.iter().map(|(l, v)| (l.as_str(), *v))).unwrap(),
        IntensifierLexicon::from_pairs(intensifiers.iter().map(|(l, v)| (l.as_str(), *v))).unwrap(),
        NegatorSet::new(["neg"], false).unwrap(),
    );
    Generated {
        sentence: Sentence::new("gen", tokens).unwrap(),
        roles: roles.to_vec(),
        lexica,
    }
}

/// Coordination-free sentences of at most `max_len` tokens.
pub fn sentence(max_len: usize) -> impl Strategy<Value = Generated> {
    tree(max_len).prop_flat_map(|heads| {
        let n = heads.len();
        proptest::collection::vec(role(), n).prop_map(move |roles| realise(&heads, &roles, &vec!["dep"; n]))
    })
}

/// Sentences where some non-root tokens attach with `conj`.
pub fn coordinated_sentence(max_len: usize) -> impl Strategy<Value = Generated> {
    tree(max_len).prop_flat_map(|heads| {
        let n = heads.len();
        (
            proptest::collection::vec(role(), n),
            proptest::collection::vec(prop_oneof![Just("dep"), Just("conj")], n),
        )
            .prop_map(move |(roles, deprels)| realise(&heads, &roles, &deprels))
    })
}

/// Independent scorer: recursive descent from the root, reading children
/// straight off the token heads.
pub fn oracle(g: &Generated, aggregation: Aggregation) -> f64 {
    fn eval(id: usize, g: &Generated, aggregation: Aggregation) -> Option<f64> {
        let kids: Vec<usize> = g
            .sentence
            .tokens
            .iter()
            .filter(|t| t.head == id)
            .map(|t| t.id)
            .collect();
        let own = match g.roles[id - 1] {
            Role::Sentiment(a) => Some(a),
            _ => None,
        };
        if kids.is_empty() {
            return own;
        }
        let mut parts = Vec::new();
        if let Some(a) = own {
            let mut scaled = a;
            for &k in &kids {
                if let Role::Intensifier(b) = g.roles[k - 1] {
                    scaled *= 1.0 + b;
                }
            }
            parts.push(scaled);
        }
        parts.extend(kids.iter().filter_map(|&k| eval(k, g, aggregation)));
        let negators = kids.iter().filter(|&&k| g.roles[k - 1] == Role::Negator).count();
        for p in parts.iter_mut() {
            for _ in 0..negators {
                *p += if *p > 0.0 {
                    -4.0
                } else if *p < 0.0 {
                    4.0
                } else {
                    0.0
                };
            }
        }
        if parts.is_empty() {
            return None;
        }
        let sum: f64 = parts.iter().sum();
        Some(match aggregation {
            Aggregation::Sum => sum,
            Aggregation::Mean => sum / parts.len() as f64,
        })
    }
    let root = g.sentence.tokens.iter().find(|t| t.head == 0).unwrap().id;
    eval(root, g, aggregation).unwrap_or(0.0)
}
