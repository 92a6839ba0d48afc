mod support;

use std::collections::BTreeMap;

use coflow_core::calculus::{flatten, parse_predicate, parse_type, Type};
use coflow_core::constraints::{match_types, CmpOp};
use coflow_core::{Predicate, Term, Universe};
use proptest::prelude::*;

use support::gen;
use support::unify_oracle::{correlated, oracle_ground, oracle_open};

fn universe() -> Universe {
    Universe::new(gen::SYMBOLS)
}

#[test]
fn power_length_is_bound() {
    let u = Universe::new(["Int"]);
    let cs = match_types(
        &parse_type("Int^5").unwrap(),
        &parse_type("Int^n").unwrap(),
        &Predicate::True,
        &u,
    )
    .unwrap()
    .unwrap();
    assert_eq!(
        cs.bindings,
        BTreeMap::from([("n".to_string(), Term::Int(5))])
    );
    assert!(cs.residual.is_true());
}

#[test]
fn only_unique_bindings_are_kept() {
    let u = Universe::new(["X", "Y"]);
    let pending = parse_type("<X, Y^j> / j < 5").unwrap();
    let pattern = parse_type("<X^i, Y^j>").unwrap();
    let context = parse_predicate("j > 0").unwrap();
    let cs = match_types(&pending, &pattern, &context, &u)
        .unwrap()
        .unwrap();
    assert_eq!(
        cs.bindings,
        BTreeMap::from([("i".to_string(), Term::Int(1))])
    );
    assert!(!cs.bindings.contains_key("j"));
    assert_eq!(
        cs.residual,
        parse_predicate("j > 0 && j < 5").unwrap().canonical()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ground_match_commutes_and_agrees_with_enumeration((a, b) in correlated(gen::ground_type())) {
        let (a, b) = (flatten(&a), flatten(&b));
        let u = universe();
        let ab = match_types(&a, &b, &Predicate::True, &u).unwrap();
        let ba = match_types(&b, &a, &Predicate::True, &u).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(ab.is_some(), oracle_ground(&a, &b), "{} vs {}", a, b);
        if let Some(cs) = ab {
            prop_assert!(cs.bindings.is_empty());
        }
    }

    #[test]
    fn open_match_finds_exactly_the_forced_bindings((a, b) in correlated(gen::open_type())) {
        let (a, b) = (flatten(&a), flatten(&b));
        let u = universe();
        let ab = match_types(&a, &b, &Predicate::True, &u).unwrap();
        let ba = match_types(&b, &a, &Predicate::True, &u).unwrap();
        prop_assert_eq!(ab.as_ref().map(|c| &c.bindings), ba.as_ref().map(|c| &c.bindings));
        prop_assert_eq!(ab.map(|c| c.bindings), oracle_open(&a, &b), "{} vs {}", a, b);
    }

    #[test]
    fn residual_never_mentions_a_bound_variable((a, b) in correlated(gen::open_type())) {
        let u = universe();
        if let Some(cs) = match_types(&flatten(&a), &flatten(&b), &Predicate::True, &u).unwrap() {
            let free = cs.residual.vars();
            prop_assert!(cs.bindings.keys().all(|v| !free.contains(v)));
        }
    }
}

#[test]
fn mismatched_comparison_is_bottom() {
    let u = universe();
    let a = Type::constrained(
        Type::var("x"),
        Predicate::cmp(Term::var("x"), CmpOp::Eq, Term::sym("A")),
    );
    assert!(match_types(&a, &Type::concrete("B"), &Predicate::True, &u)
        .unwrap()
        .is_none());
    assert!(match_types(&a, &Type::concrete("A"), &Predicate::True, &u)
        .unwrap()
        .is_some());
}
