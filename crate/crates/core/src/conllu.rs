//! CoNLL-U reading and writing, plus the head-child branch structure the
//! scorer walks.
//!
//! Only basic syntactic word lines are kept: multiword-token ranges (`3-4`)
//! and empty nodes (`5.1`) are skipped. Every sentence is validated as a
//! proper tree: ids run `1..=n`, exactly one token attaches to the root, and
//! every head chain reaches the root without a cycle.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConlluError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("sentence `{sentence}`: {message}")]
    Structural { sentence: String, message: String },
}

/// One basic word line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub id: usize,
    pub form: String,
    /// Empty when the column holds `_`.
    pub lemma: String,
    pub upos: String,
    pub xpos: Option<String>,
    pub feats: BTreeMap<String, String>,
    /// 0 marks the root.
    pub head: usize,
    pub deprel: String,
    pub deps: Option<String>,
    pub misc: Option<String>,
}

impl Token {
    pub fn new(id: usize, form: &str, lemma: &str, upos: &str, head: usize, deprel: &str) -> Self {
        Token {
            id,
            form: form.to_string(),
            lemma: lemma.to_string(),
            upos: upos.to_string(),
            xpos: None,
            feats: BTreeMap::new(),
            head,
            deprel: deprel.to_string(),
            deps: None,
            misc: None,
        }
    }

    pub fn with_feat(mut self, key: &str, value: &str) -> Self {
        self.feats.insert(key.to_string(), value.to_string());
        self
    }

    /// The lemma, or the surface form when no lemma was annotated.
    pub fn key(&self) -> &str {
        if self.lemma.is_empty() {
            &self.form
        } else {
            &self.lemma
        }
    }

    pub fn feat(&self, key: &str) -> Option<&str> {
        self.feats.get(key).map(String::as_str)
    }

    /// Universal relation without its subtype (`conj:and` -> `conj`).
    pub fn base_deprel(&self) -> &str {
        self.deprel.split(':').next().unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub source_id: String,
    /// Comment lines without the leading `#`, in file order.
    pub comments: Vec<String>,
    pub tokens: Vec<Token>,
}

impl Sentence {
    /// Builds a sentence and checks the tree invariants.
    pub fn new(source_id: impl Into<String>, tokens: Vec<Token>) -> Result<Self, ConlluError> {
        let sentence = Sentence {
            source_id: source_id.into(),
            comments: Vec::new(),
            tokens,
        };
        sentence.validate()?;
        Ok(sentence)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based id.
    pub fn token(&self, id: usize) -> Option<&Token> {
        id.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn text(&self) -> String {
        self.tokens
            .iter()
            .map(|t| t.form.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn validate(&self) -> Result<(), ConlluError> {
        let err = |message: String| ConlluError::Structural {
            sentence: self.source_id.clone(),
            message,
        };
        let n = self.tokens.len();
        if n == 0 {
            return Err(err("sentence has no word lines".into()));
        }
        let mut roots = 0;
        for (i, tok) in self.tokens.iter().enumerate() {
            if tok.id != i + 1 {
                return Err(err(format!(
                    "token ids must run 1..{n} in order, found {} at position {}",
                    tok.id,
                    i + 1
                )));
            }
            if tok.head > n {
                return Err(err(format!(
                    "token {} has head {} outside 0..={n}",
                    tok.id, tok.head
                )));
            }
            if tok.head == tok.id {
                return Err(err(format!("token {} is its own head", tok.id)));
            }
            if tok.head == 0 {
                roots += 1;
            }
        }
        if roots != 1 {
            return Err(err(format!("expected exactly one root, found {roots}")));
        }
        // 0 = unvisited, 1 = on the current path, 2 = reaches the root
        let mut state = vec![0u8; n + 1];
        state[0] = 2;
        for start in 1..=n {
            let mut path = Vec::new();
            let mut cur = start;
            while state[cur] == 0 {
                state[cur] = 1;
                path.push(cur);
                cur = self.tokens[cur - 1].head;
            }
            if state[cur] == 1 {
                return Err(err(format!("cycle through token {cur}")));
            }
            for id in path {
                state[id] = 2;
            }
        }
        Ok(())
    }
}

fn optional(field: &str) -> Option<String> {
    if field == "_" {
        None
    } else {
        Some(field.to_string())
    }
}

fn required(field: &str) -> String {
    if field == "_" {
        String::new()
    } else {
        field.to_string()
    }
}

fn parse_feats(field: &str, line: usize) -> Result<BTreeMap<String, String>, ConlluError> {
    let mut feats = BTreeMap::new();
    if field == "_" {
        return Ok(feats);
    }
    for pair in field.split('|') {
        let (key, value) = pair.split_once('=').ok_or_else(|| ConlluError::Malformed {
            line,
            message: format!("feature `{pair}` is not key=value"),
        })?;
        if feats.insert(key.to_string(), value.to_string()).is_some() {
            return Err(ConlluError::Malformed {
                line,
                message: format!("duplicate feature key `{key}`"),
            });
        }
    }
    Ok(feats)
}

fn parse_index(field: &str, line: usize, what: &str) -> Result<usize, ConlluError> {
    field.parse().map_err(|_| ConlluError::Malformed {
        line,
        message: format!("{what} `{field}` is not a non-negative integer"),
    })
}

/// Parses a line into a token, or `None` for range and empty-node lines.
fn parse_word_line(raw: &str, line: usize) -> Result<Option<Token>, ConlluError> {
    let cols: Vec<&str> = raw.split('\t').collect();
    if cols.len() != 10 {
        return Err(ConlluError::Malformed {
            line,
            message: format!("expected 10 tab-separated columns, found {}", cols.len()),
        });
    }
    if cols[0].contains('-') || cols[0].contains('.') {
        return Ok(None);
    }
    let id = parse_index(cols[0], line, "id")?;
    if id == 0 {
        return Err(ConlluError::Malformed {
            line,
            message: "token id must be at least 1".into(),
        });
    }
    let head = parse_index(cols[6], line, "head")?;
    Ok(Some(Token {
        id,
        form: cols[1].to_string(),
        lemma: required(cols[2]),
        upos: required(cols[3]),
        xpos: optional(cols[4]),
        feats: parse_feats(cols[5], line)?,
        head,
        deprel: required(cols[7]),
        deps: optional(cols[8]),
        misc: optional(cols[9]),
    }))
}

/// Parses a CoNLL-U document into validated sentences.
///
/// `source_id` comes from a `# sent_id = ...` comment when present, otherwise
/// it is `s<k>` for the k-th sentence of the document (1-based).
pub fn parse_conllu(document: &str) -> Result<Vec<Sentence>, ConlluError> {
    let mut sentences = Vec::new();
    let mut comments: Vec<String> = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut in_block = false;

    let finish = |comments: &mut Vec<String>,
                      tokens: &mut Vec<Token>,
                      sentences: &mut Vec<Sentence>|
     -> Result<(), ConlluError> {
        let ordinal = sentences.len() + 1;
        let source_id = comments
            .iter()
            .find_map(|c| {
                let (key, value) = c.split_once('=')?;
                (key.trim() == "sent_id").then(|| value.trim().to_string())
            })
            .unwrap_or_else(|| format!("s{ordinal}"));
        let sentence = Sentence {
            source_id,
            comments: std::mem::take(comments),
            tokens: std::mem::take(tokens),
        };
        sentence.validate()?;
        sentences.push(sentence);
        Ok(())
    };

    for (idx, raw) in document.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.trim().is_empty() {
            if in_block {
                finish(&mut comments, &mut tokens, &mut sentences)?;
                in_block = false;
            }
            continue;
        }
        in_block = true;
        if let Some(comment) = raw.strip_prefix('#') {
            comments.push(comment.trim_start().to_string());
            continue;
        }
        if let Some(token) = parse_word_line(raw, line)? {
            tokens.push(token);
        }
    }
    if in_block {
        finish(&mut comments, &mut tokens, &mut sentences)?;
    }
    Ok(sentences)
}

fn or_underscore(s: &str) -> &str {
    if s.is_empty() {
        "_"
    } else {
        s
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let feats = if self.feats.is_empty() {
            "_".to_string()
        } else {
            self.feats
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join("|")
        };
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.id,
            self.form,
            or_underscore(&self.lemma),
            or_underscore(&self.upos),
            self.xpos.as_deref().unwrap_or("_"),
            feats,
            self.head,
            or_underscore(&self.deprel),
            self.deps.as_deref().unwrap_or("_"),
            self.misc.as_deref().unwrap_or("_"),
        )
    }
}

/// Serializes sentences back to CoNLL-U. When a sentence has no comments and
/// its id was not generated, a `# sent_id` line is written so the id survives.
pub fn write_conllu(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for (i, sentence) in sentences.iter().enumerate() {
        if sentence.comments.is_empty() && sentence.source_id != format!("s{}", i + 1) {
            let _ = writeln!(out, "# sent_id = {}", sentence.source_id);
        }
        for comment in &sentence.comments {
            let _ = writeln!(out, "# {comment}");
        }
        for token in &sentence.tokens {
            let _ = writeln!(out, "{token}");
        }
        out.push('\n');
    }
    out
}

/// Heads (0 included) mapped to their children in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadChildMap {
    entries: BTreeMap<usize, Vec<usize>>,
}

impl HeadChildMap {
    /// Builds the map from `(id, head)` pairs. Heads that are not themselves
    /// among the ids are treated as the root, which is how a subtree is cut
    /// out of a larger sentence.
    pub(crate) fn from_edges(edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        let members: std::collections::BTreeSet<usize> = edges.iter().map(|e| e.0).collect();
        let mut entries: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (id, head) in edges {
            let head = if head != 0 && members.contains(&head) {
                head
            } else {
                0
            };
            entries.entry(head).or_default().push(id);
        }
        for children in entries.values_mut() {
            children.sort_unstable();
        }
        HeadChildMap { entries }
    }

    pub fn children(&self, head: usize) -> &[usize] {
        self.entries.get(&head).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn entries(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.entries
    }

    pub fn root(&self) -> Option<usize> {
        self.children(0).first().copied()
    }
}

pub fn build_head_child_map(sentence: &Sentence) -> HeadChildMap {
    HeadChildMap::from_edges(sentence.tokens.iter().map(|t| (t.id, t.head)))
}

/// Branches from the lowest to the highest: decreasing depth of the head,
/// ties by ascending head id. The root branch (head 0) always comes last.
pub fn branch_order(map: &HeadChildMap) -> Vec<(usize, Vec<usize>)> {
    let mut depth: HashMap<usize, usize> = HashMap::new();
    depth.insert(0, 0);
    let mut stack = vec![0usize];
    while let Some(head) = stack.pop() {
        let d = depth[&head];
        for &child in map.children(head) {
            depth.insert(child, d + 1);
            stack.push(child);
        }
    }
    let mut branches: Vec<(usize, Vec<usize>)> = map
        .entries
        .iter()
        .map(|(h, c)| (*h, c.clone()))
        .collect();
    branches.sort_by(|a, b| {
        let da = depth.get(&a.0).copied().unwrap_or(0);
        let db = depth.get(&b.0).copied().unwrap_or(0);
        db.cmp(&da).then(a.0.cmp(&b.0))
    });
    branches
}
