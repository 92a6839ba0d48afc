//! Go frontend: parse a single-file program, reject unsupported
//! concurrency features, translate to coroutine definitions and reduce.

pub mod ast;
mod gate;
mod lexer;
mod parser;
mod printer;
mod translate;

use std::time::Instant;

use thiserror::Error;

use crate::engine::{reduce_cases, Engine, EngineError, TraceEntry, Verdict};

pub use parser::parse_file;
pub use printer::{print_expr, print_file};
pub use translate::{translate, type_name, Program, INHERIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontError {
    #[error("line {line}: syntax error: expected {expected}")]
    Syntax { line: usize, expected: String },
    #[error("line {line}: unsupported feature: {feature}")]
    Unsupported { feature: String, line: usize },
    #[error("line {line}: cannot resolve the element type of channel `{expr}`")]
    UnknownChannel { expr: String, line: usize },
    #[error("no `main` function")]
    NoMain,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Verdict for one case of the analysis. `label` names the case when
/// undecidable branches forced a split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseVerdict {
    pub label: Option<String>,
    pub verdict: Verdict,
    pub trace: Vec<TraceEntry>,
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub cases: Vec<CaseVerdict>,
    pub warnings: Vec<String>,
    /// `None` when the program was rejected before translation finished.
    pub program: Option<Program>,
    pub elapsed_ms: f64,
}

impl Analysis {
    fn unsupported(feature: &str, line: usize, started: Instant) -> Self {
        Analysis {
            cases: vec![CaseVerdict {
                label: None,
                verdict: Verdict::Unsupported(format!("{feature} (line {line})")),
                trace: Vec::new(),
                steps: 0,
            }],
            warnings: Vec::new(),
            program: None,
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }

    /// The verdict that decides the exit status: unsupported over deadlock
    /// over inconclusive over no-deadlock.
    pub fn overall(&self) -> &Verdict {
        let rank = |v: &Verdict| match v {
            Verdict::Unsupported(_) => 3,
            Verdict::Deadlock { .. } => 2,
            Verdict::Inconclusive { .. } => 1,
            Verdict::NoDeadlock => 0,
        };
        self.cases
            .iter()
            .map(|c| &c.verdict)
            .max_by_key(|v| rank(v))
            .unwrap_or(&Verdict::NoDeadlock)
    }

    pub fn total_steps(&self) -> usize {
        self.cases.iter().map(|c| c.steps).sum()
    }
}

/// Analyze a Go source file. Unsupported features yield an `Unsupported`
/// verdict without reduction; other failures are errors.
pub fn analyze(source: &str, max_steps: usize) -> Result<Analysis, FrontError> {
    let started = Instant::now();
    let file = match parse_file(source) {
        Ok(f) => f,
        Err(FrontError::Unsupported { feature, line }) => {
            return Ok(Analysis::unsupported(&feature, line, started))
        }
        Err(e) => return Err(e),
    };
    if let Err(FrontError::Unsupported { feature, line }) = gate::check(&file) {
        return Ok(Analysis::unsupported(&feature, line, started));
    }
    let program = match translate(&file) {
        Ok(p) => p,
        Err(FrontError::Unsupported { feature, line }) => {
            return Ok(Analysis::unsupported(&feature, line, started))
        }
        Err(e) => return Err(e),
    };
    let engine = Engine::new(&program.definitions, &program.universe).with_max_steps(max_steps);
    let outcomes = reduce_cases(&engine, &[program.entry()], &program.domains)?;
    let cases = outcomes
        .into_iter()
        .map(|c| CaseVerdict {
            label: c.label,
            verdict: c.outcome.verdict,
            trace: c.outcome.trace,
            steps: c.outcome.steps,
        })
        .collect();
    Ok(Analysis {
        cases,
        warnings: program.warnings.clone(),
        program: Some(program),
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}
