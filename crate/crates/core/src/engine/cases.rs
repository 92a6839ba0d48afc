//! Forking one reduction per case when branch conditions cannot be decided
//! statically.

use std::collections::BTreeMap;

use super::{Engine, EngineError, Outcome, Reduction};
use crate::calculus::Type;
use crate::constraints::{partition, Interval, Predicate};

/// Outcome of one analysis case; `label` is `None` when no split occurred.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOutcome {
    pub label: Option<String>,
    pub constraint: Predicate,
    pub outcome: Outcome,
}

const MAX_REFINEMENTS: usize = 32;

/// Reduce `initial`, splitting on undecided guards until every case is
/// decided. Guards accumulate across rounds and the cases are recomputed
/// from all of them, so labels describe the final partition.
pub fn reduce_cases(
    engine: &Engine<'_>,
    initial: &[Type],
    domains: &BTreeMap<String, Interval>,
) -> Result<Vec<CaseOutcome>, EngineError> {
    let mut guards: Vec<Predicate> = Vec::new();
    let base = engine.context.clone();
    'refine: for _ in 0..MAX_REFINEMENTS {
        let cases = if guards.is_empty() {
            vec![(None, Predicate::True)]
        } else {
            partition(&guards, domains, engine.universe)?
                .into_iter()
                .map(|c| (Some(c.label), c.constraint))
                .collect()
        };
        let mut out = Vec::with_capacity(cases.len());
        for (label, constraint) in cases {
            let mut context = base.clone().and(constraint.clone());
            for (var, iv) in domains {
                if constraint.vars().contains(var) || guards.iter().any(|g| g.vars().contains(var))
                {
                    context = context.and(iv.to_predicate(var));
                }
            }
            let case_engine = Engine {
                context,
                ..engine.clone()
            };
            match case_engine.reduce(initial)? {
                Reduction::Done(outcome) => out.push(CaseOutcome {
                    label,
                    constraint,
                    outcome,
                }),
                Reduction::Split(new) => {
                    let before = guards.len();
                    for g in new {
                        if !guards.contains(&g) {
                            guards.push(g);
                        }
                    }
                    if guards.len() == before {
                        return Err(EngineError::SplitDiverged);
                    }
                    continue 'refine;
                }
            }
        }
        return Ok(out);
    }
    Err(EngineError::SplitDiverged)
}
