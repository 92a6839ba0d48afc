mod support;

use coflow_core::calculus::{flatten, parse_predicate, parse_type, Type};
use proptest::prelude::*;

use support::gen;

fn constrained_type() -> BoxedStrategy<Type> {
    (gen::open_type(), gen::predicate())
        .prop_map(|(t, p)| Type::constrained(t, p))
        .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn printed_types_parse_back(t in prop_oneof![gen::ground_type(), gen::coroutine_type(), constrained_type()]) {
        let t = flatten(&t);
        let printed = t.to_string();
        let parsed = parse_type(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert_eq!(flatten(&parsed), t, "{}", printed);
    }

    #[test]
    fn printed_predicates_parse_back(p in gen::predicate()) {
        let printed = p.to_string();
        let parsed = parse_predicate(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert_eq!(parsed.canonical(), p.canonical(), "{}", printed);
    }

    #[test]
    fn flatten_is_idempotent(t in prop_oneof![gen::ground_type(), gen::coroutine_type(), constrained_type()]) {
        let once = flatten(&t);
        prop_assert_eq!(flatten(&once), once);
    }
}
