//! The built-in solver against plain enumeration: integers over −16..=16,
//! type variables over the universe.

mod support;

use std::collections::BTreeMap;

use coflow_core::constraints::{infer_domains, solve, Domain};
use coflow_core::{Predicate, Term, Universe};
use proptest::prelude::*;

use support::gen;
use support::rewrite_oracle::{holds, Sigma};

const BOUND: i64 = 16;

fn enumerate_sat(p: &Predicate, u: &Universe) -> bool {
    let domains = infer_domains(p, u).unwrap();
    let vars: Vec<(String, Vec<Term>)> = domains
        .into_iter()
        .map(|(v, d)| {
            let values = match d {
                Domain::Int => (-BOUND..=BOUND).map(Term::Int).collect(),
                Domain::Concrete => gen::SYMBOLS.iter().map(|s| Term::sym(*s)).collect(),
            };
            (v, values)
        })
        .collect();
    let mut sigma = Sigma::new();
    search(p, &vars, &mut sigma)
}

fn search(p: &Predicate, vars: &[(String, Vec<Term>)], sigma: &mut Sigma) -> bool {
    let Some(((name, values), rest)) = vars.split_first() else {
        return holds(p, sigma);
    };
    values.iter().any(|v| {
        sigma.insert(name.clone(), v.clone());
        search(p, rest, sigma)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn satisfiability_matches_enumeration(p in gen::predicate()) {
        let u = Universe::new(gen::SYMBOLS);
        let ints = infer_domains(&p, &u).unwrap().values().filter(|d| matches!(d, Domain::Int)).count();
        // 33^3 assignments is the most worth enumerating per case.
        prop_assume!(ints <= 3);
        let witness = solve(&p, &u).unwrap();
        prop_assert_eq!(witness.is_some(), enumerate_sat(&p, &u), "{}", p);
        if let Some(w) = witness {
            let full: BTreeMap<String, Term> = w.into_iter().collect();
            prop_assert!(full.values().all(|t| !matches!(t, Term::Int(n) if n.abs() > BOUND)));
            prop_assert!(holds(&p, &full), "witness {:?} fails {}", full, p);
        }
    }
}
