//! Alternative semantics over a finite model.
//!
//! Every expression gets two values computed in parallel: its ordinary
//! denotation and its focus semantic value, the set of alternatives obtained
//! by varying focus-marked parts. Composition is pointwise: a predicate
//! applied to arguments yields one proposition per combination of argument
//! alternatives; negation and conjunction map over the alternative sets. The
//! `~C` operator checks a contextual set against the focus value and resets
//! the focus value to the ordinary one.
//!
//! Propositions are kept as symbolic terms so that alternatives stay distinct
//! even when they share a truth value; [`Model::holds`] evaluates them.

mod syntax;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use syntax::{parse_expr, parse_exprs, parse_model};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FocusError {
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{name}` takes {expected} argument(s), got {found} in {node}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        node: String,
    },
    #[error("type error in {node}: {message}")]
    Type { node: String, message: String },
    #[error("directly nested focus in {0}")]
    NestedFocus(String),
    #[error("coordination of identical entities in {0}")]
    IdenticalConjuncts(String),
    #[error("no alternative domain for {0}")]
    NoDomain(String),
    #[error("unknown context `{0}`")]
    UnknownContext(String),
    #[error("context `{context}` contains {alternative}, which is not in the focus value")]
    ContextNotSubset { context: String, alternative: String },
    #[error("context `{context}` does not contain the ordinary value {ordinary}")]
    OrdinaryNotInContext { context: String, ordinary: String },
    #[error("{0} is false in the model")]
    OrdinaryFalse(String),
    #[error("{0} has no focused coordination of entities")]
    NotCoordinatedFocus(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// An entity, or the plural individual denoted by a coordination of entities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Individual {
    Atom(String),
    Sum(BTreeSet<String>),
}

impl Individual {
    fn members(&self) -> Vec<&str> {
        match self {
            Individual::Atom(a) => vec![a.as_str()],
            Individual::Sum(s) => s.iter().map(String::as_str).collect(),
        }
    }

    fn join(a: &Individual, b: &Individual) -> Individual {
        let members: BTreeSet<String> = a
            .members()
            .into_iter()
            .chain(b.members())
            .map(str::to_string)
            .collect();
        if members.len() == 1 {
            Individual::Atom(members.into_iter().next().unwrap_or_default())
        } else {
            Individual::Sum(members)
        }
    }
}

impl fmt::Display for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.members().join("∧"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prop {
    Atom { pred: String, args: Vec<Individual> },
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn atom(pred: &str, args: &[&str]) -> Prop {
        Prop::Atom {
            pred: pred.to_string(),
            args: args.iter().map(|a| Individual::Atom(a.to_string())).collect(),
        }
    }

    pub fn negated(self) -> Prop {
        Prop::Not(Box::new(self))
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Atom { pred, args } => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "{pred}({})", args.join(", "))
            }
            Prop::Not(p) => write!(f, "¬{p}"),
            Prop::And(p, q) => write!(f, "({p} ∧ {q})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Denotation {
    Individual(Individual),
    Prop(Prop),
}

impl fmt::Display for Denotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Denotation::Individual(i) => i.fmt(f),
            Denotation::Prop(p) => p.fmt(f),
        }
    }
}

/// Semantic types that can carry an alternative domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemType {
    /// Single entities.
    Entity,
    /// Coordinated pairs of entities.
    Pair,
    /// Propositions.
    Prop,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Entity(String),
    Pred(String, Vec<Expr>),
    Neg(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Focus(Box<Expr>),
    Squiggle(String, Box<Expr>),
}

impl Expr {
    pub fn entity(name: &str) -> Expr {
        Expr::Entity(name.to_string())
    }

    pub fn pred(name: &str, args: Vec<Expr>) -> Expr {
        Expr::Pred(name.to_string(), args)
    }

    pub fn negation(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn focus(e: Expr) -> Expr {
        Expr::Focus(Box::new(e))
    }

    pub fn squiggle(context: &str, e: Expr) -> Expr {
        Expr::Squiggle(context.to_string(), Box::new(e))
    }

    /// True if a Focus node occurs outside every `~` operator.
    pub fn has_unreduced_focus(&self) -> bool {
        match self {
            Expr::Entity(_) => false,
            Expr::Pred(_, args) => args.iter().any(Expr::has_unreduced_focus),
            Expr::Neg(e) => e.has_unreduced_focus(),
            Expr::And(a, b) => a.has_unreduced_focus() || b.has_unreduced_focus(),
            Expr::Focus(_) => true,
            Expr::Squiggle(..) => false,
        }
    }

    fn has_coordinated_focus(&self) -> bool {
        match self {
            Expr::Focus(inner) => matches!(
                inner.as_ref(),
                Expr::And(a, b) if matches!(**a, Expr::Entity(_)) && matches!(**b, Expr::Entity(_))
            ),
            Expr::Entity(_) => false,
            Expr::Pred(_, args) => args.iter().any(Expr::has_coordinated_focus),
            Expr::Neg(e) | Expr::Squiggle(_, e) => e.has_coordinated_focus(),
            Expr::And(a, b) => a.has_coordinated_focus() || b.has_coordinated_focus(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Entity(n) => f.write_str(n),
            Expr::Pred(n, args) => {
                write!(f, "({n}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Expr::Neg(e) => write!(f, "(not {e})"),
            Expr::And(a, b) => write!(f, "(and {a} {b})"),
            Expr::Focus(e) => write!(f, "(F {e})"),
            Expr::Squiggle(c, e) => write!(f, "(~ {c} {e})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Predicate {
    arity: usize,
    extension: BTreeSet<Vec<String>>,
}

/// A finite model: individuals, predicate extensions, optional alternative
/// domains per type, and named contextual alternative sets for `~`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    individuals: BTreeSet<String>,
    predicates: BTreeMap<String, Predicate>,
    alternative_domains: BTreeMap<SemType, BTreeSet<Denotation>>,
    contexts: BTreeMap<String, BTreeSet<Denotation>>,
}

impl Model {
    pub fn new<I, S>(individuals: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Model {
            individuals: individuals.into_iter().map(Into::into).collect(),
            ..Model::default()
        }
    }

    pub fn individuals(&self) -> impl Iterator<Item = &str> {
        self.individuals.iter().map(String::as_str)
    }

    /// Declares a predicate. Every tuple must have `arity` declared
    /// individuals.
    pub fn with_predicate(mut self, name: &str, arity: usize, extension: &[&[&str]]) -> Result<Self, FocusError> {
        self.add_predicate(name, arity)?;
        for tuple in extension {
            self.add_fact(name, tuple)?;
        }
        Ok(self)
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), FocusError> {
        if !(1..=2).contains(&arity) {
            return Err(FocusError::Type {
                node: name.to_string(),
                message: "only 1- and 2-place predicates are supported".into(),
            });
        }
        self.predicates.insert(
            name.to_string(),
            Predicate {
                arity,
                extension: BTreeSet::new(),
            },
        );
        Ok(())
    }

    pub fn add_fact(&mut self, name: &str, tuple: &[&str]) -> Result<(), FocusError> {
        for member in tuple {
            if !self.individuals.contains(*member) {
                return Err(FocusError::UnknownEntity(member.to_string()));
            }
        }
        let pred = self
            .predicates
            .get_mut(name)
            .ok_or_else(|| FocusError::UnknownPredicate(name.to_string()))?;
        if tuple.len() != pred.arity {
            return Err(FocusError::Arity {
                name: name.to_string(),
                expected: pred.arity,
                found: tuple.len(),
                node: format!("{name}{tuple:?}"),
            });
        }
        pred.extension.insert(tuple.iter().map(|s| s.to_string()).collect());
        Ok(())
    }

    /// Overrides the alternative domain of a type. Entity domains may only
    /// name declared individuals.
    pub fn set_domain(&mut self, ty: SemType, domain: BTreeSet<Denotation>) -> Result<(), FocusError> {
        for d in &domain {
            if let Denotation::Individual(i) = d {
                for m in i.members() {
                    if !self.individuals.contains(m) {
                        return Err(FocusError::UnknownEntity(m.to_string()));
                    }
                }
            }
        }
        self.alternative_domains.insert(ty, domain);
        Ok(())
    }

    pub fn add_context(&mut self, name: &str, alternatives: BTreeSet<Denotation>) {
        self.contexts.insert(name.to_string(), alternatives);
    }

    pub fn context(&self, name: &str) -> Result<&BTreeSet<Denotation>, FocusError> {
        self.contexts
            .get(name)
            .ok_or_else(|| FocusError::UnknownContext(name.to_string()))
    }

    /// Alternatives for a focused value of the given type.
    pub fn domain(&self, ty: SemType) -> Result<BTreeSet<Denotation>, FocusError> {
        if let Some(d) = self.alternative_domains.get(&ty) {
            return Ok(d.clone());
        }
        match ty {
            SemType::Entity => Ok(self
                .individuals
                .iter()
                .map(|i| Denotation::Individual(Individual::Atom(i.clone())))
                .collect()),
            SemType::Pair => {
                let all: Vec<&String> = self.individuals.iter().collect();
                let mut pairs = BTreeSet::new();
                for (i, a) in all.iter().enumerate() {
                    for b in &all[i + 1..] {
                        pairs.insert(Denotation::Individual(Individual::Sum(
                            [(*a).clone(), (*b).clone()].into_iter().collect(),
                        )));
                    }
                }
                Ok(pairs)
            }
            SemType::Prop => Err(FocusError::NoDomain("propositions".into())),
        }
    }

    /// Truth of a proposition. Predicates distribute over plural arguments.
    pub fn holds(&self, prop: &Prop) -> Result<bool, FocusError> {
        match prop {
            Prop::Atom { pred, args } => {
                let p = self
                    .predicates
                    .get(pred)
                    .ok_or_else(|| FocusError::UnknownPredicate(pred.clone()))?;
                let mut tuples: Vec<Vec<String>> = vec![vec![]];
                for arg in args {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t| {
                            arg.members().into_iter().map(move |m| {
                                let mut t = t.clone();
                                t.push(m.to_string());
                                t
                            })
                        })
                        .collect();
                }
                Ok(tuples.iter().all(|t| p.extension.contains(t)))
            }
            Prop::Not(p) => Ok(!self.holds(p)?),
            Prop::And(p, q) => Ok(self.holds(p)? && self.holds(q)?),
        }
    }
}

/// Ordinary value paired with its focus semantic value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticValue {
    pub ordinary: Denotation,
    pub focus_set: BTreeSet<Denotation>,
}

impl SemanticValue {
    fn plain(ordinary: Denotation) -> Self {
        SemanticValue {
            focus_set: BTreeSet::from([ordinary.clone()]),
            ordinary,
        }
    }

    /// Focus alternatives that are propositions, in order.
    pub fn propositions(&self) -> Vec<&Prop> {
        self.focus_set
            .iter()
            .filter_map(|d| match d {
                Denotation::Prop(p) => Some(p),
                _ => None,
            })
            .collect()
    }
}

fn type_error(node: &Expr, message: &str) -> FocusError {
    FocusError::Type {
        node: node.to_string(),
        message: message.to_string(),
    }
}

fn individual(d: &Denotation, node: &Expr) -> Result<Individual, FocusError> {
    match d {
        Denotation::Individual(i) => Ok(i.clone()),
        Denotation::Prop(_) => Err(type_error(node, "expected an entity, found a proposition")),
    }
}

fn proposition(d: &Denotation, node: &Expr) -> Result<Prop, FocusError> {
    match d {
        Denotation::Prop(p) => Ok(p.clone()),
        Denotation::Individual(_) => Err(type_error(node, "expected a proposition, found an entity")),
    }
}

/// Computes the ordinary and focus values of `expr` in `model`.
pub fn interpret(expr: &Expr, model: &Model) -> Result<SemanticValue, FocusError> {
    match expr {
        Expr::Entity(name) => {
            if !model.individuals.contains(name) {
                return Err(FocusError::UnknownEntity(name.clone()));
            }
            Ok(SemanticValue::plain(Denotation::Individual(Individual::Atom(name.clone()))))
        }
        Expr::Pred(name, args) => {
            let pred = model
                .predicates
                .get(name)
                .ok_or_else(|| FocusError::UnknownPredicate(name.clone()))?;
            if pred.arity != args.len() {
                return Err(FocusError::Arity {
                    name: name.clone(),
                    expected: pred.arity,
                    found: args.len(),
                    node: expr.to_string(),
                });
            }
            let values = args
                .iter()
                .map(|a| interpret(a, model))
                .collect::<Result<Vec<_>, _>>()?;
            let atom = |parts: Vec<Individual>| {
                Denotation::Prop(Prop::Atom {
                    pred: name.clone(),
                    args: parts,
                })
            };
            let ordinary = atom(
                values
                    .iter()
                    .zip(args)
                    .map(|(v, a)| individual(&v.ordinary, a))
                    .collect::<Result<_, _>>()?,
            );
            // pointwise application over the product of argument alternatives
            let mut combos: Vec<Vec<Individual>> = vec![vec![]];
            for (value, arg) in values.iter().zip(args) {
                let alts = value
                    .focus_set
                    .iter()
                    .map(|d| individual(d, arg))
                    .collect::<Result<Vec<_>, _>>()?;
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        alts.iter().map(move |a| {
                            let mut c = c.clone();
                            c.push(a.clone());
                            c
                        })
                    })
                    .collect();
            }
            Ok(SemanticValue {
                ordinary,
                focus_set: combos.into_iter().map(atom).collect(),
            })
        }
        Expr::Neg(inner) => {
            let v = interpret(inner, model)?;
            let ordinary = Denotation::Prop(proposition(&v.ordinary, inner)?.negated());
            let focus_set = v
                .focus_set
                .iter()
                .map(|d| proposition(d, inner).map(|p| Denotation::Prop(p.negated())))
                .collect::<Result<_, _>>()?;
            Ok(SemanticValue { ordinary, focus_set })
        }
        Expr::And(a, b) => {
            let va = interpret(a, model)?;
            let vb = interpret(b, model)?;
            match (&va.ordinary, &vb.ordinary) {
                (Denotation::Individual(x), Denotation::Individual(y)) => {
                    if x == y {
                        return Err(FocusError::IdenticalConjuncts(expr.to_string()));
                    }
                    let mut focus_set = BTreeSet::new();
                    for p in &va.focus_set {
                        for q in &vb.focus_set {
                            focus_set.insert(Denotation::Individual(Individual::join(
                                &individual(p, a)?,
                                &individual(q, b)?,
                            )));
                        }
                    }
                    Ok(SemanticValue {
                        ordinary: Denotation::Individual(Individual::join(x, y)),
                        focus_set,
                    })
                }
                (Denotation::Prop(p), Denotation::Prop(q)) => {
                    let and = |p: Prop, q: Prop| Denotation::Prop(Prop::And(Box::new(p), Box::new(q)));
                    let mut focus_set = BTreeSet::new();
                    for x in &va.focus_set {
                        for y in &vb.focus_set {
                            focus_set.insert(and(proposition(x, a)?, proposition(y, b)?));
                        }
                    }
                    Ok(SemanticValue {
                        ordinary: and(p.clone(), q.clone()),
                        focus_set,
                    })
                }
                _ => Err(type_error(expr, "cannot coordinate an entity with a proposition")),
            }
        }
        Expr::Focus(inner) => {
            if matches!(**inner, Expr::Focus(_)) {
                return Err(FocusError::NestedFocus(expr.to_string()));
            }
            let v = interpret(inner, model)?;
            let ty = match &v.ordinary {
                Denotation::Individual(Individual::Atom(_)) => SemType::Entity,
                Denotation::Individual(Individual::Sum(s)) if s.len() == 2 => SemType::Pair,
                Denotation::Individual(_) => {
                    return Err(FocusError::NoDomain(format!("plural individuals in {expr}")))
                }
                Denotation::Prop(_) => SemType::Prop,
            };
            let focus_set = model.domain(ty)?;
            if !focus_set.contains(&v.ordinary) {
                return Err(type_error(expr, "focused value is missing from its alternative domain"));
            }
            Ok(SemanticValue {
                ordinary: v.ordinary,
                focus_set,
            })
        }
        Expr::Squiggle(context, inner) => {
            let v = interpret(inner, model)?;
            squiggle(context, model.context(context)?, &v)
        }
    }
}

/// Checks `context` against the focus value and resets the focus value to
/// the ordinary value.
pub fn squiggle(
    name: &str,
    context: &BTreeSet<Denotation>,
    value: &SemanticValue,
) -> Result<SemanticValue, FocusError> {
    if let Some(extra) = context.iter().find(|c| !value.focus_set.contains(c)) {
        return Err(FocusError::ContextNotSubset {
            context: name.to_string(),
            alternative: extra.to_string(),
        });
    }
    if !context.contains(&value.ordinary) {
        return Err(FocusError::OrdinaryNotInContext {
            context: name.to_string(),
            ordinary: value.ordinary.to_string(),
        });
    }
    Ok(SemanticValue::plain(value.ordinary.clone()))
}

/// Focus alternatives of a coordinated-entity focus: propositions over
/// unordered pairs of distinct individuals.
pub fn coordinated_alternatives(expr: &Expr, model: &Model) -> Result<BTreeSet<Prop>, FocusError> {
    if !expr.has_coordinated_focus() {
        return Err(FocusError::NotCoordinatedFocus(expr.to_string()));
    }
    let value = interpret(expr, model)?;
    value
        .focus_set
        .iter()
        .map(|d| proposition(d, expr))
        .collect()
}

/// Negations of every alternative other than the ordinary value, which must
/// itself be true in the model.
pub fn exhaustive_inference(value: &SemanticValue, model: &Model) -> Result<BTreeSet<Prop>, FocusError> {
    let Denotation::Prop(ordinary) = &value.ordinary else {
        return Err(FocusError::Type {
            node: value.ordinary.to_string(),
            message: "exhaustive inference needs a proposition".into(),
        });
    };
    if !model.holds(ordinary)? {
        return Err(FocusError::OrdinaryFalse(ordinary.to_string()));
    }
    Ok(value
        .focus_set
        .iter()
        .filter(|d| *d != &value.ordinary)
        .filter_map(|d| match d {
            Denotation::Prop(p) => Some(p.clone().negated()),
            _ => None,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jmp() -> Model {
        Model::new(["John", "Mary", "Peter"])
            .with_predicate("left", 1, &[&["John"]])
            .unwrap()
    }

    fn props(v: &SemanticValue) -> Vec<String> {
        v.focus_set.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn focus_on_subject_gives_all_alternatives() {
        let e = Expr::pred("left", vec![Expr::focus(Expr::entity("John"))]);
        let v = interpret(&e, &jmp()).unwrap();
        assert_eq!(v.ordinary, Denotation::Prop(Prop::atom("left", &["John"])));
        assert_eq!(props(&v), vec!["left(John)", "left(Mary)", "left(Peter)"]);
    }

    #[test]
    fn negation_maps_over_alternatives() {
        let e = Expr::negation(Expr::pred("left", vec![Expr::focus(Expr::entity("John"))]));
        let v = interpret(&e, &jmp()).unwrap();
        assert_eq!(props(&v), vec!["¬left(John)", "¬left(Mary)", "¬left(Peter)"]);
    }

    #[test]
    fn no_focus_is_singleton() {
        let e = Expr::pred("left", vec![Expr::entity("John")]);
        let v = interpret(&e, &jmp()).unwrap();
        assert_eq!(props(&v), vec!["left(John)"]);
    }

    #[test]
    fn errors_name_the_problem() {
        let m = jmp();
        assert_eq!(
            interpret(&Expr::pred("left", vec![Expr::entity("Zed")]), &m),
            Err(FocusError::UnknownEntity("Zed".into()))
        );
        assert_eq!(
            interpret(&Expr::pred("arrived", vec![Expr::entity("John")]), &m),
            Err(FocusError::UnknownPredicate("arrived".into()))
        );
        assert!(matches!(
            interpret(&Expr::pred("left", vec![Expr::entity("John"), Expr::entity("Mary")]), &m),
            Err(FocusError::Arity { expected: 1, found: 2, .. })
        ));
        assert!(matches!(
            interpret(&Expr::negation(Expr::entity("John")), &m),
            Err(FocusError::Type { .. })
        ));
        assert!(matches!(
            interpret(&Expr::pred("left", vec![Expr::focus(Expr::focus(Expr::entity("John")))]), &m),
            Err(FocusError::NestedFocus(_))
        ));
        assert!(matches!(
            interpret(&Expr::and(Expr::entity("John"), Expr::pred("left", vec![Expr::entity("John")])), &m),
            Err(FocusError::Type { .. })
        ));
    }

    #[test]
    fn coordinated_focus_over_pairs() {
        let m = Model::new(["John", "Mary", "Peter", "Susan"])
            .with_predicate("left", 1, &[&["John"], &["Mary"]])
            .unwrap();
        let e = Expr::pred(
            "left",
            vec![Expr::focus(Expr::and(Expr::entity("John"), Expr::entity("Mary")))],
        );
        let alts = coordinated_alternatives(&e, &m).unwrap();
        let shown: Vec<String> = alts.iter().map(ToString::to_string).collect();
        assert_eq!(
            shown,
            vec![
                "left(John∧Mary)",
                "left(John∧Peter)",
                "left(John∧Susan)",
                "left(Mary∧Peter)",
                "left(Mary∧Susan)",
                "left(Peter∧Susan)"
            ]
        );
        assert!(m.holds(alts.iter().next().unwrap()).unwrap());
        assert!(!m.holds(&alts.iter().nth(1).unwrap().clone()).unwrap());
    }

    #[test]
    fn coordination_of_identical_entities() {
        let e = Expr::pred(
            "left",
            vec![Expr::focus(Expr::and(Expr::entity("John"), Expr::entity("John")))],
        );
        assert!(matches!(
            coordinated_alternatives(&e, &jmp()),
            Err(FocusError::IdenticalConjuncts(_))
        ));
        let plain = Expr::pred("left", vec![Expr::focus(Expr::entity("John"))]);
        assert!(matches!(
            coordinated_alternatives(&plain, &jmp()),
            Err(FocusError::NotCoordinatedFocus(_))
        ));
    }

    #[test]
    fn two_individuals_have_one_pair() {
        let m = Model::new(["John", "Mary"]).with_predicate("left", 1, &[]).unwrap();
        let e = Expr::pred(
            "left",
            vec![Expr::focus(Expr::and(Expr::entity("Mary"), Expr::entity("John")))],
        );
        assert_eq!(coordinated_alternatives(&e, &m).unwrap().len(), 1);
    }

    fn left_of(names: &[&str]) -> BTreeSet<Denotation> {
        names
            .iter()
            .map(|n| Denotation::Prop(Prop::atom("left", &[n])))
            .collect()
    }

    #[test]
    fn squiggle_resets_focus() {
        let v = interpret(&Expr::pred("left", vec![Expr::focus(Expr::entity("John"))]), &jmp()).unwrap();
        let reset = squiggle("C", &left_of(&["John", "Mary"]), &v).unwrap();
        assert_eq!(reset.ordinary, v.ordinary);
        assert_eq!(props(&reset), vec!["left(John)"]);
        let full = squiggle("C", &v.focus_set, &v).unwrap();
        assert_eq!(full, reset);
        // idempotent on its own output
        let again = squiggle("C", &BTreeSet::from([reset.ordinary.clone()]), &reset).unwrap();
        assert_eq!(again, reset);
    }

    #[test]
    fn squiggle_rejects_foreign_alternatives() {
        let v = interpret(&Expr::pred("left", vec![Expr::focus(Expr::entity("John"))]), &jmp()).unwrap();
        assert_eq!(
            squiggle("C", &left_of(&["John", "Susan"]), &v),
            Err(FocusError::ContextNotSubset {
                context: "C".into(),
                alternative: "left(Susan)".into()
            })
        );
        assert!(matches!(
            squiggle("C", &left_of(&["Mary"]), &v),
            Err(FocusError::OrdinaryNotInContext { .. })
        ));
    }

    #[test]
    fn squiggle_inside_expression() {
        let mut m = jmp();
        m.add_context("C", left_of(&["John", "Mary"]));
        let e = Expr::squiggle("C", Expr::pred("left", vec![Expr::focus(Expr::entity("John"))]));
        let v = interpret(&e, &m).unwrap();
        assert_eq!(v.focus_set.len(), 1);
        assert!(!e.has_unreduced_focus());
        assert!(matches!(
            interpret(&Expr::squiggle("D", Expr::entity("John")), &m),
            Err(FocusError::UnknownContext(_))
        ));
    }

    #[test]
    fn exhaustivity() {
        let m = jmp();
        let v = interpret(&Expr::pred("left", vec![Expr::focus(Expr::entity("John"))]), &m).unwrap();
        let inferred: Vec<String> = exhaustive_inference(&v, &m).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(inferred, vec!["¬left(Mary)", "¬left(Peter)"]);

        let plain = interpret(&Expr::pred("left", vec![Expr::entity("John")]), &m).unwrap();
        assert!(exhaustive_inference(&plain, &m).unwrap().is_empty());

        let false_one = interpret(&Expr::pred("left", vec![Expr::focus(Expr::entity("Mary"))]), &m).unwrap();
        assert!(matches!(exhaustive_inference(&false_one, &m), Err(FocusError::OrdinaryFalse(_))));
    }

    #[test]
    fn two_place_and_conjunction() {
        let m = Model::new(["John", "Mary"])
            .with_predicate("saw", 2, &[&["John", "Mary"]])
            .unwrap()
            .with_predicate("left", 1, &[&["Mary"]])
            .unwrap();
        let e = Expr::and(
            Expr::pred("saw", vec![Expr::entity("John"), Expr::focus(Expr::entity("Mary"))]),
            Expr::pred("left", vec![Expr::entity("Mary")]),
        );
        let v = interpret(&e, &m).unwrap();
        assert_eq!(
            props(&v),
            vec![
                "(saw(John, John) ∧ left(Mary))",
                "(saw(John, Mary) ∧ left(Mary))"
            ]
        );
        if let Denotation::Prop(p) = &v.ordinary {
            assert!(m.holds(p).unwrap());
        }
    }

    #[test]
    fn domain_override() {
        let mut m = jmp();
        m.set_domain(
            SemType::Entity,
            ["John", "Mary"]
                .iter()
                .map(|n| Denotation::Individual(Individual::Atom(n.to_string())))
                .collect(),
        )
        .unwrap();
        let v = interpret(&Expr::pred("left", vec![Expr::focus(Expr::entity("John"))]), &m).unwrap();
        assert_eq!(v.focus_set.len(), 2);
        let out = interpret(&Expr::pred("left", vec![Expr::focus(Expr::entity("Peter"))]), &m);
        assert!(matches!(out, Err(FocusError::Type { .. })));
    }

    #[test]
    fn extension_must_use_declared_individuals() {
        assert!(matches!(
            Model::new(["John"]).with_predicate("left", 1, &[&["Zed"]]),
            Err(FocusError::UnknownEntity(_))
        ));
    }
}
