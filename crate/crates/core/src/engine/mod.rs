//! The reduction machine `⊚`: a deterministic rule system over a list of
//! live coroutine instances with a pending type and external yields.

mod cases;
mod machine;
mod start;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::calculus::{CalculusError, Type};
use crate::constraints::{ConstraintError, Predicate};

pub use cases::{reduce_cases, CaseOutcome};
pub use machine::{Engine, Reduction, DEFAULT_MAX_STEPS};
pub use start::{inline, start, InlinePosition, Started};

/// Named coroutine definitions, referenced by `Start(name)`/`Inline(name)`.
pub type Definitions = BTreeMap<String, Type>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error("unknown coroutine definition `{0}`")]
    UnknownDefinition(String),
    #[error("no branch of `{0}` is satisfiable")]
    NoSatisfiableBranch(String),
    #[error("`{0}` cannot be started")]
    NotStartable(String),
    #[error("case splitting did not converge")]
    SplitDiverged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    StartEval,
    InlineEval,
    RemoveVoid,
    Yield,
    YieldCo,
    Resume,
    External,
    ResumeCo,
    MainExit,
    CoToExt,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::StartEval => "StartEval",
            Rule::InlineEval => "InlineEval",
            Rule::RemoveVoid => "RemoveVoid",
            Rule::Yield => "Yield",
            Rule::YieldCo => "YieldCo",
            Rule::Resume => "Resume",
            Rule::External => "External",
            Rule::ResumeCo => "ResumeCo",
            Rule::MainExit => "MainExit",
            Rule::CoToExt => "CoToExt",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One rule firing and the printed state right after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: usize,
    pub rule: Rule,
    pub state: String,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} [{}] {}", self.step, self.rule, self.state)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NoDeadlock,
    /// `residual` is never `0`.
    Deadlock {
        residual: Type,
        externals: Vec<Type>,
    },
    Inconclusive {
        steps: usize,
    },
    Unsupported(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::NoDeadlock => "no-deadlock",
            Verdict::Deadlock { .. } => "deadlock",
            Verdict::Inconclusive { .. } => "inconclusive",
            Verdict::Unsupported(_) => "unsupported",
        }
    }

    pub fn is_deadlock(&self) -> bool {
        matches!(self, Verdict::Deadlock { .. })
    }

    /// Build the verdict for a terminal residual.
    pub fn from_residual(residual: Type, externals: Vec<Type>) -> Verdict {
        if residual.is_zero() {
            Verdict::NoDeadlock
        } else {
            Verdict::Deadlock {
                residual,
                externals,
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NoDeadlock => f.write_str("no deadlock"),
            Verdict::Deadlock { residual, .. } => write!(f, "deadlock, residual {residual}"),
            Verdict::Inconclusive { steps } => write!(f, "inconclusive after {steps} steps"),
            Verdict::Unsupported(reason) => write!(f, "unsupported: {reason}"),
        }
    }
}

/// Result of a complete reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub trace: Vec<TraceEntry>,
    pub steps: usize,
}

/// Conditions that must be known before a reduction can proceed.
pub type Guards = Vec<Predicate>;
