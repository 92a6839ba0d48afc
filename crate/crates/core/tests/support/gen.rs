//! Proptest strategies for calculus terms and predicates.

#![allow(dead_code)]

use coflow_core::calculus::Type;
use coflow_core::constraints::CmpOp;
use coflow_core::{FlowItem, Predicate, Term};
use proptest::prelude::*;

pub const SYMBOLS: [&str; 3] = ["A", "B", "C"];

pub fn symbol() -> BoxedStrategy<String> {
    prop::sample::select(SYMBOLS.to_vec())
        .prop_map(String::from)
        .boxed()
}

pub fn cmp_op() -> BoxedStrategy<CmpOp> {
    prop::sample::select(vec![
        CmpOp::Eq,
        CmpOp::Ne,
        CmpOp::Lt,
        CmpOp::Le,
        CmpOp::Gt,
        CmpOp::Ge,
    ])
    .boxed()
}

/// Ground types without variables: concrete symbols, sequences, tuples and
/// unions.
pub fn ground_type() -> BoxedStrategy<Type> {
    let leaf = prop_oneof![4 => symbol().prop_map(Type::Concrete), 1 => Just(Type::Zero)];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..3).prop_map(Type::Seq),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Type::Tuple),
            (inner.clone(), inner).prop_map(|(l, r)| Type::union(l, r)),
        ]
    })
    .boxed()
}

/// Types whose atoms may be the variables `x`/`y`, with no unions.
pub fn open_type() -> BoxedStrategy<Type> {
    let leaf = prop_oneof![
        3 => symbol().prop_map(Type::Concrete),
        2 => prop::sample::select(vec!["x", "y"]).prop_map(Type::var),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..3).prop_map(Type::Seq),
            prop::collection::vec(inner, 2..3).prop_map(Type::Tuple),
        ]
    })
    .boxed()
}

/// Integer comparison atoms over `i`, `j`, `k` and small constants.
pub fn int_atom() -> BoxedStrategy<Predicate> {
    let var = prop::sample::select(vec!["i", "j", "k"]);
    prop_oneof![
        (var.clone(), cmp_op(), -3i64..4).prop_map(|(v, op, c)| Predicate::cmp(
            Term::var(v),
            op,
            Term::Int(c)
        )),
        (var.clone(), cmp_op(), var).prop_map(|(a, op, b)| Predicate::cmp(
            Term::var(a),
            op,
            Term::var(b)
        )),
    ]
    .boxed()
}

/// Type-valued atoms over `s`, `t`.
pub fn sym_atom() -> BoxedStrategy<Predicate> {
    let var = prop::sample::select(vec!["s", "t"]);
    let eq = prop::sample::select(vec![CmpOp::Eq, CmpOp::Ne]);
    prop_oneof![
        (var.clone(), eq.clone(), symbol()).prop_map(|(v, op, k)| Predicate::cmp(
            Term::var(v),
            op,
            Term::Sym(k)
        )),
        (var.clone(), eq, var).prop_map(|(a, op, b)| Predicate::cmp(
            Term::var(a),
            op,
            Term::var(b)
        )),
    ]
    .boxed()
}

pub fn predicate() -> BoxedStrategy<Predicate> {
    let atom =
        prop_oneof![3 => int_atom(), 2 => sym_atom(), 1 => any::<bool>().prop_map(Predicate::from)];
    atom.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Predicate::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Predicate::Or),
            inner.prop_map(|p| Predicate::Not(Box::new(p))),
        ]
    })
    .boxed()
}

/// Instances and definitions with yields and receives of open types.
pub fn coroutine_type() -> BoxedStrategy<Type> {
    let item = (any::<bool>(), open_type()).prop_map(|(y, t)| {
        if y {
            FlowItem::Yield(t)
        } else {
            FlowItem::Receive(t)
        }
    });
    (any::<bool>(), prop::collection::vec(item, 0..4))
        .prop_map(|(def, flow)| {
            if def {
                Type::definition(flow)
            } else {
                Type::instance(flow)
            }
        })
        .boxed()
}
