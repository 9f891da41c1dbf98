//! Text formats for expressions and models.
//!
//! Expressions are s-expressions, one per line:
//!
//! ```text
//! (left (F John))
//! (not (left (F John)))
//! (left (F (and John Mary)))
//! (~ C (left (F John)))
//! ```
//!
//! `F`, `not`, `and` and `~` are reserved heads; any other head is a
//! predicate and a bare word is an entity.
//!
//! Models are line-based declarations:
//!
//! ```text
//! individuals John Mary Peter
//! pred left/1 John
//! pred saw/2 John,Mary
//! domain e John Mary
//! context C (left John) (left Mary)
//! ```

use std::collections::BTreeSet;

use super::{interpret, Denotation, Expr, FocusError, Model, SemType};

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn syntax(line: usize, message: impl Into<String>) -> FocusError {
    FocusError::Syntax {
        line,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn read_sexp(tokens: &[String], pos: &mut usize, line: usize) -> Result<Sexp, FocusError> {
    let token = tokens
        .get(*pos)
        .ok_or_else(|| syntax(line, "unexpected end of expression"))?;
    *pos += 1;
    match token.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read_sexp(tokens, pos, line)?),
                    None => return Err(syntax(line, "unbalanced parentheses")),
                }
            }
        }
        ")" => Err(syntax(line, "unexpected `)`")),
        atom => Ok(Sexp::Atom(atom.to_string())),
    }
}

/// Reads all s-expressions on a line.
fn read_all(text: &str, line: usize) -> Result<Vec<Sexp>, FocusError> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let mut out = Vec::new();
    while pos < tokens.len() {
        out.push(read_sexp(&tokens, &mut pos, line)?);
    }
    Ok(out)
}

fn to_expr(sexp: &Sexp, line: usize) -> Result<Expr, FocusError> {
    match sexp {
        Sexp::Atom(name) => Ok(Expr::Entity(name.clone())),
        Sexp::List(items) => {
            let (head, rest) = match items.split_first() {
                Some((Sexp::Atom(h), rest)) => (h.as_str(), rest),
                Some((Sexp::List(_), _)) => return Err(syntax(line, "operator must be a word")),
                None => return Err(syntax(line, "empty expression `()`")),
            };
            let arity = |n: usize| {
                if rest.len() == n {
                    Ok(())
                } else {
                    Err(syntax(
                        line,
                        format!("`{head}` takes {n} operand(s), found {}", rest.len()),
                    ))
                }
            };
            match head {
                "F" => {
                    arity(1)?;
                    Ok(Expr::focus(to_expr(&rest[0], line)?))
                }
                "not" => {
                    arity(1)?;
                    Ok(Expr::negation(to_expr(&rest[0], line)?))
                }
                "and" => {
                    arity(2)?;
                    Ok(Expr::and(to_expr(&rest[0], line)?, to_expr(&rest[1], line)?))
                }
                "~" => {
                    arity(2)?;
                    let Sexp::Atom(context) = &rest[0] else {
                        return Err(syntax(line, "`~` needs a context name"));
                    };
                    Ok(Expr::squiggle(context, to_expr(&rest[1], line)?))
                }
                pred => Ok(Expr::pred(
                    pred,
                    rest.iter()
                        .map(|s| to_expr(s, line))
                        .collect::<Result<_, _>>()?,
                )),
            }
        }
    }
}

/// Parses a single expression.
pub fn parse_expr(text: &str) -> Result<Expr, FocusError> {
    parse_expr_at(text, 1)
}

fn parse_expr_at(text: &str, line: usize) -> Result<Expr, FocusError> {
    match read_all(text, line)?.as_slice() {
        [single] => to_expr(single, line),
        [] => Err(syntax(line, "no expression")),
        _ => Err(syntax(line, "more than one expression")),
    }
}

/// Parses an expression file: one expression per line, blank lines and `#`
/// comments skipped. Returns `(line number, expression)` pairs.
pub fn parse_exprs(text: &str) -> Result<Vec<(usize, Expr)>, FocusError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_expr_at(l, i + 1).map(|e| (i + 1, e)))
        .collect()
}

fn denotations(model: &Model, text: &str, line: usize) -> Result<BTreeSet<Denotation>, FocusError> {
    read_all(text, line)?
        .iter()
        .map(|s| {
            let expr = to_expr(s, line)?;
            if expr.has_unreduced_focus() {
                return Err(syntax(line, format!("context member {expr} must not carry focus")));
            }
            Ok(interpret(&expr, model)?.ordinary)
        })
        .collect()
}

/// Parses a model file.
pub fn parse_model(text: &str) -> Result<Model, FocusError> {
    let mut model = Model::default();
    // contexts and domains are evaluated once all predicates are known
    let mut deferred: Vec<(usize, String, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let (keyword, rest) = raw.split_once(char::is_whitespace).unwrap_or((raw, ""));
        let rest = rest.trim();
        match keyword {
            "individuals" => {
                model.individuals.extend(rest.split_whitespace().map(str::to_string));
            }
            "pred" => {
                let mut words = rest.split_whitespace();
                let decl = words
                    .next()
                    .ok_or_else(|| syntax(line, "expected `pred name/arity ...`"))?;
                let (name, arity) = decl
                    .split_once('/')
                    .and_then(|(n, a)| Some((n, a.parse::<usize>().ok()?)))
                    .ok_or_else(|| syntax(line, format!("bad predicate declaration `{decl}`")))?;
                model.add_predicate(name, arity)?;
                for tuple in words {
                    let members: Vec<&str> = tuple.split(',').collect();
                    model.add_fact(name, &members)?;
                }
            }
            "domain" | "context" => {
                let (first, tail) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                if first.is_empty() {
                    return Err(syntax(line, format!("`{keyword}` needs a name")));
                }
                deferred.push((line, keyword.to_string(), first.to_string(), tail.to_string()));
            }
            other => return Err(syntax(line, format!("unknown declaration `{other}`"))),
        }
    }

    for (line, keyword, name, body) in deferred {
        if keyword == "context" {
            let set = denotations(&model, &body, line)?;
            model.add_context(&name, set);
        } else {
            let ty = match name.as_str() {
                "e" => SemType::Entity,
                "pair" => SemType::Pair,
                "t" => SemType::Prop,
                other => return Err(syntax(line, format!("unknown type `{other}` (expected e, pair or t)"))),
            };
            let set = denotations(&model, &body, line)?;
            model.set_domain(ty, set)?;
        }
    }
    Ok(model)
}
