//! Random constraint stacks and their meaning under full assignments.

#![allow(dead_code)]

use std::collections::BTreeMap;

use coflow_core::calculus::{flatten, Type};
use coflow_core::constraints::CmpOp;
use coflow_core::{Predicate, Term};
use proptest::prelude::*;

use super::gen;

/// Bindings are only generated with matching sorts: `x`/`y` to symbols,
/// `i`/`j`/`k` to integers.
pub fn binding() -> BoxedStrategy<Predicate> {
    prop_oneof![
        (prop::sample::select(vec!["x", "y"]), gen::symbol())
            .prop_map(|(v, k)| Predicate::bind(v, Term::Sym(k))),
        (prop::sample::select(vec!["i", "j", "k"]), -3i64..4)
            .prop_map(|(v, c)| Predicate::bind(v, Term::Int(c))),
    ]
    .boxed()
}

pub fn layer() -> BoxedStrategy<Predicate> {
    prop_oneof![
        3 => gen::int_atom(),
        2 => gen::sym_atom(),
        2 => binding(),
        1 => any::<bool>().prop_map(Predicate::from),
        2 => prop::collection::vec(prop_oneof![gen::int_atom(), binding()], 2..4).prop_map(Predicate::all),
    ]
    .boxed()
}

/// `τ / ρ1 / ... / ρn` with `n ≤ 8`; constraints may also sit inside the
/// base's sequence items.
pub fn stack() -> BoxedStrategy<Type> {
    let base = gen::open_type().prop_flat_map(|t| {
        (Just(t.clone()), layer(), any::<bool>()).prop_map(|(t, p, inner)| {
            if inner {
                Type::Seq(vec![Type::constrained(t, p), Type::concrete("A")])
            } else {
                t
            }
        })
    });
    (base, prop::collection::vec(layer(), 1..=8))
        .prop_map(|(b, layers)| layers.into_iter().fold(b, Type::constrained))
        .boxed()
}

pub type Sigma = BTreeMap<String, Term>;

pub fn sigma() -> BoxedStrategy<Sigma> {
    (
        gen::symbol(),
        gen::symbol(),
        gen::symbol(),
        gen::symbol(),
        -3i64..4,
        -3i64..4,
        -3i64..4,
    )
        .prop_map(|(x, y, s, t, i, j, k)| {
            BTreeMap::from([
                ("x".into(), Term::Sym(x)),
                ("y".into(), Term::Sym(y)),
                ("s".into(), Term::Sym(s)),
                ("t".into(), Term::Sym(t)),
                ("i".into(), Term::Int(i)),
                ("j".into(), Term::Int(j)),
                ("k".into(), Term::Int(k)),
            ])
        })
        .boxed()
}

fn value(t: &Term, s: &Sigma) -> Term {
    match t {
        Term::Var(v) => s[v].clone(),
        other => other.clone(),
    }
}

pub fn holds(p: &Predicate, s: &Sigma) -> bool {
    match p {
        Predicate::True => true,
        Predicate::False => false,
        Predicate::And(ps) => ps.iter().all(|q| holds(q, s)),
        Predicate::Or(ps) => ps.iter().any(|q| holds(q, s)),
        Predicate::Not(q) => !holds(q, s),
        Predicate::Bind(..) => panic!("bindings are handled per stack"),
        Predicate::Cmp(a, op, b) => match (value(a, s), value(b, s)) {
            (Term::Int(x), Term::Int(y)) => op.eval(x, y),
            (x, y) => match op {
                CmpOp::Eq => x == y,
                CmpOp::Ne => x != y,
                _ => panic!("ordering on symbols"),
            },
        },
        Predicate::Rel(..) => panic!("relations are not generated"),
    }
}

/// What a constrained type stands for under a full assignment: its base
/// with variables replaced, or nothing when a guard fails. Bindings anywhere
/// in a stack of guards fix their variable for the whole stack and the base;
/// a variable already fixed further out turns a binding into an equality
/// test.
pub fn denote(t: &Type, s: &Sigma) -> Type {
    denote_in(t, s, &BTreeMap::new())
}

fn denote_in(t: &Type, s: &Sigma, outer: &BTreeMap<String, Term>) -> Type {
    let d = match t {
        Type::Constrained(..) => {
            let mut layers = Vec::new();
            let mut base = t;
            while let Type::Constrained(inner, p) = base {
                layers.extend(p.conjuncts());
                base = inner;
            }
            let mut local = s.clone();
            let mut fixed = outer.clone();
            for c in &layers {
                if let Predicate::Bind(v, value) = c {
                    if fixed.get(v).is_some_and(|prev| prev != value) {
                        return Type::Zero;
                    }
                    fixed.insert(v.clone(), value.clone());
                    local.insert(v.clone(), value.clone());
                }
            }
            if layers
                .iter()
                .all(|c| matches!(c, Predicate::Bind(..)) || holds(c, &local))
            {
                denote_in(base, &local, &fixed)
            } else {
                Type::Zero
            }
        }
        Type::Var(v) => match &s[v] {
            Term::Sym(k) => Type::Concrete(k.clone()),
            other => panic!("type variable bound to {other}"),
        },
        Type::Seq(xs) => Type::Seq(xs.iter().map(|x| denote_in(x, s, outer)).collect()),
        Type::Tuple(xs) => Type::Tuple(xs.iter().map(|x| denote_in(x, s, outer)).collect()),
        other => other.clone(),
    };
    flatten(&d)
}

pub fn has_redex(t: &Type) -> bool {
    let mut found = false;
    t.visit(&mut |sub| {
        if let Type::Constrained(inner, p) = sub {
            found |= p.is_true()
                || p.is_false()
                || matches!(**inner, Type::Constrained(..))
                || p.conjuncts()
                    .iter()
                    .any(|c| matches!(c, Predicate::Bind(..)));
        }
    });
    found
}

pub fn substitute_x(t: &Type, k: &str) -> Type {
    match t {
        Type::Var(v) if v == "x" => Type::concrete(k),
        Type::Seq(xs) => Type::Seq(xs.iter().map(|x| substitute_x(x, k)).collect()),
        Type::Tuple(xs) => Type::Tuple(xs.iter().map(|x| substitute_x(x, k)).collect()),
        other => other.clone(),
    }
}
