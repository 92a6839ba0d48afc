//! Constraint handling: the predicate language, rewriting of constrained
//! types, the concrete universe, a built-in finite-domain/interval solver,
//! `Match` with uniqueness filtering, case partitioning and SMT-LIB export.

mod matching;
mod partition;
mod predicate;
mod rewrite;
mod smtlib;
mod solver;
mod universe;

use thiserror::Error;

pub use matching::{match_types, unify, ConditionSet};
pub use partition::{partition, Case, Interval};
pub use predicate::{CmpOp, Predicate, Term};
pub use rewrite::{collect_concrete, reduce_constrained};
pub use smtlib::emit_smtlib;
pub use solver::{
    entails, infer_domains, satisfiable, solve, unique_bindings, Domain, Interpretation,
};
pub use universe::Universe;

pub(crate) use predicate::eval_ground;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("variable `{0}` is used both as an integer and as a concrete type")]
    DomainConflict(String),
    #[error("relation `{0}` has no registered interpretation")]
    UnsupportedPredicate(String),
    #[error("relation `{0}` is already registered")]
    RedefinedRelation(String),
    #[error("relation `{name}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("cannot split cases on `{0}`")]
    UnsupportedSplit(String),
}
