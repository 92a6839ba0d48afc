//! Static deadlock analysis for a subset of Go based on coroutine behavioral
//! types with flow.
//!
//! Programs are typed into coroutine definitions ([`gofront`]), started and
//! reduced by a deterministic rule system ([`engine`]) whose `Match` step is
//! backed by a small constraint solver ([`constraints`]). A residual of `0`
//! means every channel operation pairs up.

pub mod calculus;
pub mod constraints;
pub mod engine;
pub mod gofront;

pub use calculus::{Coroutine, Direction, FlowItem, Type};
pub use constraints::{ConditionSet, Predicate, Term, Universe};
