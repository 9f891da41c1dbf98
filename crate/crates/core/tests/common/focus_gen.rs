//! Random models and expressions for the focus interpreter, plus a
//! brute-force substitution oracle for focus values.

use std::collections::BTreeSet;

use compsent::focus::{interpret, Denotation, Expr, Individual, Model, SemType};
use proptest::prelude::*;

pub const NAMES: [&str; 5] = ["John", "Mary", "Peter", "Susan", "Ann"];

/// Random model over the first `n` names with random `left` and `saw`
/// extensions.
pub fn model() -> impl Strategy<Value = Model> {
    (2usize..=5).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n * n),
        )
            .prop_map(|(n, left, saw)| {
                let mut m = Model::new(NAMES[..n].iter().copied());
                m.add_predicate("left", 1).unwrap();
                m.add_predicate("saw", 2).unwrap();
                for i in 0..n {
                    if left[i] {
                        m.add_fact("left", &[NAMES[i]]).unwrap();
                    }
                    for j in 0..n {
                        if saw[i * n + j] {
                            m.add_fact("saw", &[NAMES[i], NAMES[j]]).unwrap();
                        }
                    }
                }
                m
            })
    })
}

pub fn size(model: &Model) -> usize {
    model.individuals().count()
}

pub fn entity(n: usize) -> impl Strategy<Value = Expr> {
    (0..n, any::<bool>()).prop_map(|(i, focus)| {
        let e = Expr::entity(NAMES[i]);
        if focus {
            Expr::focus(e)
        } else {
            e
        }
    })
}

pub fn subject(n: usize) -> impl Strategy<Value = Expr> {
    let pair = (0..n, 1..n, any::<bool>()).prop_map(move |(i, step, focus)| {
        let j = (i + step) % n;
        let e = Expr::and(Expr::entity(NAMES[i]), Expr::entity(NAMES[j]));
        if focus {
            Expr::focus(e)
        } else {
            e
        }
    });
    prop_oneof![entity(n), pair]
}

/// Well-typed proposition expressions without `~`.
pub fn proposition(n: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        subject(n).prop_map(|s| Expr::pred("left", vec![s])),
        (entity(n), entity(n)).prop_map(|(a, b)| Expr::pred("saw", vec![a, b])),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::negation),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::and(a, b)),
        ]
    })
}

pub fn case() -> impl Strategy<Value = (Model, Expr)> {
    model().prop_flat_map(|m| {
        let n = size(&m);
        (Just(m), proposition(n))
    })
}

/// Every focus-marked subterm in pre-order.
pub fn focus_sites(e: &Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::Focus(inner) => out.push((**inner).clone()),
        Expr::Entity(_) => {}
        Expr::Pred(_, args) => args.iter().for_each(|a| focus_sites(a, out)),
        Expr::Neg(x) | Expr::Squiggle(_, x) => focus_sites(x, out),
        Expr::And(a, b) => {
            focus_sites(a, out);
            focus_sites(b, out);
        }
    }
}

/// Replaces the focus sites, in pre-order, with the given terms.
pub fn substitute(e: &Expr, fillers: &mut std::slice::Iter<'_, Expr>) -> Expr {
    match e {
        Expr::Focus(_) => fillers.next().unwrap().clone(),
        Expr::Entity(_) => e.clone(),
        Expr::Pred(p, args) => Expr::pred(p, args.iter().map(|a| substitute(a, fillers)).collect()),
        Expr::Neg(x) => Expr::negation(substitute(x, fillers)),
        Expr::And(a, b) => {
            let a = substitute(a, fillers);
            Expr::and(a, substitute(b, fillers))
        }
        Expr::Squiggle(c, x) => Expr::squiggle(c, substitute(x, fillers)),
    }
}

pub fn as_term(d: &Denotation) -> Expr {
    match d {
        Denotation::Individual(Individual::Atom(a)) => Expr::entity(a),
        Denotation::Individual(Individual::Sum(members)) => {
            let names: Vec<&String> = members.iter().collect();
            Expr::and(Expr::entity(names[0]), Expr::entity(names[1]))
        }
        Denotation::Prop(_) => unreachable!("no propositional focus is generated"),
    }
}

/// Alternatives by brute force: try every combination of domain members in
/// the focused positions and interpret the focus-free result.
pub fn substitution_oracle(e: &Expr, model: &Model) -> BTreeSet<Denotation> {
    let mut sites = Vec::new();
    focus_sites(e, &mut sites);
    let domains: Vec<Vec<Expr>> = sites
        .iter()
        .map(|s| {
            let ty = if matches!(s, Expr::And(..)) { SemType::Pair } else { SemType::Entity };
            model.domain(ty).unwrap().iter().map(as_term).collect()
        })
        .collect();
    let mut combos: Vec<Vec<Expr>> = vec![vec![]];
    for domain in &domains {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                domain.iter().map(move |d| {
                    let mut c = c.clone();
                    c.push(d.clone());
                    c
                })
            })
            .collect();
    }
    combos
        .iter()
        .map(|fillers| {
            let plain = substitute(e, &mut fillers.iter());
            let v = interpret(&plain, model).unwrap();
            assert_eq!(v.focus_set.len(), 1);
            v.ordinary
        })
        .collect()
}
