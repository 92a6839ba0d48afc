mod support;

use std::collections::BTreeMap;

use coflow_core::calculus::Type;
use coflow_core::constraints::reduce_constrained;
use coflow_core::{Predicate, Term};
use proptest::prelude::*;

use support::gen;
use support::rewrite_oracle::{denote, has_redex, layer, sigma, stack, substitute_x};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn false_guard_is_zero(t in gen::open_type()) {
        prop_assert_eq!(reduce_constrained(&Type::constrained(t, Predicate::False)), Type::Zero);
    }

    #[test]
    fn true_guard_disappears(t in stack()) {
        prop_assert_eq!(
            reduce_constrained(&Type::constrained(t.clone(), Predicate::True)),
            reduce_constrained(&t)
        );
    }

    #[test]
    fn nested_guards_conjoin(t in gen::open_type(), p in layer(), q in layer()) {
        let nested = Type::constrained(Type::constrained(t.clone(), p.clone()), q.clone());
        prop_assert_eq!(reduce_constrained(&nested), reduce_constrained(&Type::constrained(t, p.and(q))));
    }

    #[test]
    fn binding_substitutes(t in gen::open_type(), rest in gen::int_atom(), k in gen::symbol()) {
        let bind = Predicate::bind("x", Term::Sym(k.clone()));
        let lhs = Type::constrained(t.clone(), rest.clone().and(bind));
        let map = BTreeMap::from([("x".to_string(), Term::Sym(k.clone()))]);
        let substituted = substitute_x(&t, &k);
        let rhs = Type::constrained(substituted, rest.substitute(&map));
        prop_assert_eq!(reduce_constrained(&lhs), reduce_constrained(&rhs));
    }

    #[test]
    fn stacks_reach_a_normal_fixpoint(t in stack()) {
        let once = reduce_constrained(&t);
        prop_assert_eq!(reduce_constrained(&once), once.clone());
        prop_assert!(!has_redex(&once), "{} left {}", t, once);
    }

    #[test]
    fn rewriting_preserves_meaning(t in stack(), assignments in prop::collection::vec(sigma(), 16)) {
        let reduced = reduce_constrained(&t);
        for s in &assignments {
            prop_assert_eq!(denote(&reduced, s), denote(&t, s), "{} ⇒ {}", t, reduced);
        }
    }
}
