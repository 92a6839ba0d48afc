use std::collections::HashSet;
use std::fmt::Write;
use std::rc::Rc;

use super::start::{start, Started};
use super::{Definitions, EngineError, Guards, Outcome, Rule, TraceEntry, Verdict};
use crate::calculus::{flatten_flow, substitute_flow, App, Coroutine, FlowItem, Type};
use crate::constraints::{match_types, reduce_constrained, Predicate, Universe};

pub const DEFAULT_MAX_STEPS: usize = 500;

/// Distinct states visited while looking for a deadlocking schedule.
pub const DEFAULT_EXPLORE_BUDGET: usize = 20_000;

/// Result of one reduction run: a finished outcome, or guards on which the
/// caller must split before the run can be decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Done(Outcome),
    Split(Guards),
}

/// Configuration shared by every reduction of one analysis.
#[derive(Clone, Debug)]
pub struct Engine<'a> {
    pub defs: &'a Definitions,
    pub universe: &'a Universe,
    /// Assumptions under which branch points are resolved.
    pub context: Predicate,
    pub max_steps: usize,
    /// When the priority schedule deadlocks, try the other yielder and
    /// receiver choices (up to this many states). `0` keeps the single
    /// greedy run.
    pub explore_budget: usize,
}

#[derive(Clone, Debug)]
struct Live {
    flow: Vec<FlowItem>,
    constraint: Predicate,
    main: bool,
}

impl Live {
    fn to_type(&self) -> Type {
        Coroutine::instance(self.flow.clone())
            .with_constraint(self.constraint.clone())
            .to_type()
    }
}

#[derive(Clone)]
struct State {
    pending: Type,
    pending_from_main: bool,
    externals: Vec<Type>,
    live: Vec<Live>,
    /// Set when main ran out of items through a send or receive.
    main_finished: bool,
    steps: usize,
    trace: Trace,
}

/// Shared-tail list so branching states clone cheaply; newest entry first.
#[derive(Clone, Default)]
struct Trace(Option<Rc<(TraceEntry, Trace)>>);

impl Trace {
    fn push(&mut self, entry: TraceEntry) {
        let tail = std::mem::take(self);
        *self = Trace(Some(Rc::new((entry, tail))));
    }

    fn to_vec(&self) -> Vec<TraceEntry> {
        let mut out = Vec::new();
        let mut cur = &self.0;
        while let Some(node) = cur {
            out.push(node.0.clone());
            cur = &node.1 .0;
        }
        out.reverse();
        out
    }
}

enum Step {
    Continue,
    Terminal(Verdict),
    Split(Guards),
}

/// A firing together with how many sibling choices the same rule had.
struct Fired {
    step: Step,
    alternatives: usize,
}

impl From<Step> for Fired {
    fn from(step: Step) -> Self {
        Fired {
            step,
            alternatives: 1,
        }
    }
}

impl<'a> Engine<'a> {
    pub fn new(defs: &'a Definitions, universe: &'a Universe) -> Self {
        Engine {
            defs,
            universe,
            context: Predicate::True,
            max_steps: DEFAULT_MAX_STEPS,
            explore_budget: DEFAULT_EXPLORE_BUDGET,
        }
    }

    pub fn with_context(mut self, context: Predicate) -> Self {
        self.context = context;
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    /// Single run in rule-priority order, no schedule exploration.
    pub fn greedy(mut self) -> Self {
        self.explore_budget = 0;
        self
    }

    /// `⊚⟨initial⟩`. Each element is a `Start(...)` application or an
    /// instance; the first one is main.
    pub fn reduce(&self, initial: &[Type]) -> Result<Reduction, EngineError> {
        let mut st = State {
            pending: Type::Zero,
            pending_from_main: false,
            externals: Vec::new(),
            live: Vec::new(),
            main_finished: false,
            steps: 0,
            trace: Trace::default(),
        };
        for (i, t) in initial.iter().enumerate() {
            if st.steps >= self.max_steps {
                return Ok(Reduction::Done(self.finish(st, None)));
            }
            let (inst, evaluated) = match t {
                Type::Start(app) => match self.instantiate(app)? {
                    Started::Instance(c) => (c, true),
                    Started::Split(g) => return Ok(Reduction::Split(g)),
                },
                other => (Coroutine::from_type(&reduce_constrained(other))?, false),
            };
            st.live.push(Live {
                flow: inst.flow,
                constraint: inst.constraint,
                main: i == 0,
            });
            if evaluated {
                self.record(&mut st, Rule::StartEval);
            }
        }
        st.live.retain(|l| !l.flow.is_empty() || l.main);
        self.explore(st)
    }

    /// Depth-first over schedules, choice 0 first, so the first terminal
    /// reached is the priority run. A deadlocking priority run is only
    /// reported if no other schedule cancels every type; otherwise the
    /// cancelling schedule is reported. Alternatives cut by the step cap or
    /// the state budget count as no evidence.
    fn explore(&self, st: State) -> Result<Reduction, EngineError> {
        let mut stack: Vec<(State, usize)> = vec![(st, 0)];
        let mut seen: HashSet<String> = HashSet::new();
        let mut first: Option<Outcome> = None;
        while let Some((mut st, mut pick)) = stack.pop() {
            loop {
                if st.steps >= self.max_steps {
                    if first.is_none() {
                        return Ok(Reduction::Done(self.finish(st, None)));
                    }
                    break;
                }
                let before = (self.explore_budget > 0 && pick == 0).then(|| st.clone());
                let fired = self.step(&mut st, pick)?;
                if let Some(before) = before {
                    for alt in (1..fired.alternatives).rev() {
                        stack.push((before.clone(), alt));
                    }
                }
                pick = 0;
                match fired.step {
                    Step::Continue => {}
                    Step::Split(g) => return Ok(Reduction::Split(g)),
                    Step::Terminal(v) => {
                        let outcome = self.finish(st, Some(v));
                        if !outcome.verdict.is_deadlock() || self.explore_budget == 0 {
                            return Ok(Reduction::Done(outcome));
                        }
                        first.get_or_insert(outcome);
                        break;
                    }
                }
                if first.is_some()
                    && (seen.len() >= self.explore_budget || !seen.insert(state_key(&st)))
                {
                    break;
                }
            }
        }
        Ok(Reduction::Done(
            first.expect("the priority run reaches a terminal or returns"),
        ))
    }

    fn finish(&self, st: State, verdict: Option<Verdict>) -> Outcome {
        let verdict = verdict.unwrap_or(Verdict::Inconclusive { steps: st.steps });
        Outcome {
            verdict,
            trace: st.trace.to_vec(),
            steps: st.steps,
        }
    }

    fn instantiate(&self, app: &App) -> Result<Started, EngineError> {
        start(
            &app.target,
            &app.args,
            self.defs,
            &self.context,
            self.universe,
        )
    }

    fn record(&self, st: &mut State, rule: Rule) {
        st.steps += 1;
        let state = render_state(st);
        st.trace.push(TraceEntry {
            step: st.steps,
            rule,
            state,
        });
    }

    fn record_terminal(&self, st: &mut State, rule: Rule, residual: &Type) {
        st.steps += 1;
        st.trace.push(TraceEntry {
            step: st.steps,
            rule,
            state: format!("⇒ {residual}"),
        });
    }

    /// Drop exhausted instances other than main; main is dropped too unless
    /// it finished through communication (the exit rule handles that case).
    fn sweep(st: &mut State) {
        st.live
            .retain(|l| !l.flow.is_empty() || (l.main && st.main_finished));
    }

    /// Fire the highest-priority enabled rule. `pick` selects among the
    /// instances that rule could act on, in list order.
    fn step(&self, st: &mut State, pick: usize) -> Result<Fired, EngineError> {
        // Main returned: every other goroutine is abandoned, unless a value
        // main itself sent is still waiting for a receiver.
        if st.main_finished && (st.pending.is_zero() || !st.pending_from_main) {
            let residual = externals_residual(&st.externals);
            self.record_terminal(st, Rule::MainExit, &residual);
            return Ok(
                Step::Terminal(Verdict::from_residual(residual, st.externals.clone())).into(),
            );
        }

        if let Some(idx) = st
            .live
            .iter()
            .position(|l| l.flow.iter().any(FlowItem::is_void))
        {
            st.live[idx].flow.retain(|i| !i.is_void());
            Self::sweep(st);
            self.record(st, Rule::RemoveVoid);
            return Ok(Step::Continue.into());
        }

        if let Some(idx) = st
            .live
            .iter()
            .position(|l| matches!(l.flow.first(), Some(FlowItem::Yield(Type::Inline(_)))))
        {
            let Some(FlowItem::Yield(Type::Inline(app))) = st.live[idx].flow.first().cloned()
            else {
                unreachable!()
            };
            let inst = match self.instantiate(&app)? {
                Started::Instance(c) => c,
                Started::Split(g) => return Ok(Step::Split(g).into()),
            };
            let target = &mut st.live[idx];
            let mut flow = inst.flow;
            flow.extend(target.flow.drain(1..));
            target.flow = flatten_flow(&flow);
            target.constraint = target.constraint.clone().and(inst.constraint);
            Self::sweep(st);
            self.record(st, Rule::InlineEval);
            return Ok(Step::Continue.into());
        }

        if !st.pending.is_zero() {
            let pending = st.pending.clone();
            let mut receivers = Vec::new();
            for idx in 0..st.live.len() {
                let Some(FlowItem::Receive(pattern)) = st.live[idx].flow.first() else {
                    continue;
                };
                if let Some(cs) =
                    match_types(&pending, pattern, &st.live[idx].constraint, self.universe)?
                {
                    receivers.push((idx, cs));
                }
            }
            let alternatives = receivers.len();
            if let Some((idx, cs)) = receivers.into_iter().nth(pick) {
                let inst = &mut st.live[idx];
                let tail = substitute_flow(&inst.flow[1..], &cs.bindings)?;
                inst.flow = tail
                    .iter()
                    .map(|i| match i {
                        FlowItem::Yield(t) => FlowItem::Yield(reduce_constrained(t)),
                        FlowItem::Receive(t) => FlowItem::Receive(reduce_constrained(t)),
                        other => other.clone(),
                    })
                    .collect();
                inst.flow = flatten_flow(&inst.flow);
                inst.constraint = cs.residual;
                if inst.main && inst.flow.is_empty() {
                    st.main_finished = true;
                }
                st.pending = Type::Zero;
                st.pending_from_main = false;
                Self::sweep(st);
                self.record(st, Rule::Resume);
                return Ok(Fired {
                    step: Step::Continue,
                    alternatives,
                });
            }
            st.externals.push(pending);
            st.pending = Type::Zero;
            st.pending_from_main = false;
            self.record(st, Rule::External);
            return Ok(Step::Continue.into());
        }

        if let Some(fired) = self.resume_co(st, pick)? {
            return Ok(fired);
        }

        let yielders: Vec<usize> = (0..st.live.len())
            .filter(|&i| st.live[i].flow.first().is_some_and(FlowItem::is_yield))
            .collect();
        if let Some(&idx) = yielders.get(pick) {
            let alternatives = yielders.len();
            let Some(FlowItem::Yield(payload)) = st.live[idx].flow.first().cloned() else {
                unreachable!()
            };
            if payload.is_coroutine_payload() {
                let started = match &payload {
                    Type::Start(app) => self.instantiate(app)?,
                    other => Started::Instance(Coroutine::from_type(other)?),
                };
                let inst = match started {
                    Started::Instance(c) => c,
                    Started::Split(g) => return Ok(Step::Split(g).into()),
                };
                st.live[idx].flow.remove(0);
                st.live.push(Live {
                    flow: inst.flow,
                    constraint: inst.constraint,
                    main: false,
                });
                Self::sweep(st);
                self.record(st, Rule::YieldCo);
            } else {
                let from = &mut st.live[idx];
                from.flow.remove(0);
                st.pending_from_main = from.main;
                if from.main && from.flow.is_empty() {
                    st.main_finished = true;
                }
                st.pending = payload;
                Self::sweep(st);
                self.record(st, Rule::Yield);
            }
            return Ok(Fired {
                step: Step::Continue,
                alternatives,
            });
        }

        // No yielding head and nothing pending.
        let mut items: Vec<FlowItem> = st.externals.iter().cloned().map(FlowItem::Yield).collect();
        items.extend(
            st.live
                .iter()
                .filter(|l| !l.flow.is_empty())
                .map(|l| FlowItem::Yield(l.to_type())),
        );
        let residual = if items.is_empty() {
            Type::Zero
        } else {
            Type::CorIns(items)
        };
        self.record_terminal(st, Rule::CoToExt, &residual);
        Ok(Step::Terminal(Verdict::from_residual(residual, st.externals.clone())).into())
    }

    /// An instance whose head receives a coroutine consumes another live
    /// instance matching that pattern.
    fn resume_co(&self, st: &mut State, pick: usize) -> Result<Option<Fired>, EngineError> {
        let mut pairs = Vec::new();
        for idx in 0..st.live.len() {
            let Some(FlowItem::Receive(pattern)) = st.live[idx].flow.first() else {
                continue;
            };
            if !matches!(pattern.split_constraint().0, Type::CorIns(_)) {
                continue;
            }
            for other in 0..st.live.len() {
                if other == idx {
                    continue;
                }
                let candidate = st.live[other].to_type();
                if let Some(cs) =
                    match_types(&candidate, pattern, &st.live[idx].constraint, self.universe)?
                {
                    pairs.push((idx, other, cs));
                }
            }
        }
        let alternatives = pairs.len();
        let Some((idx, other, cs)) = pairs.into_iter().nth(pick) else {
            return Ok(None);
        };
        let inst = &mut st.live[idx];
        inst.flow = flatten_flow(&substitute_flow(&inst.flow[1..], &cs.bindings)?);
        inst.constraint = cs.residual;
        if inst.main && inst.flow.is_empty() {
            st.main_finished = true;
        }
        st.live.remove(other);
        Self::sweep(st);
        self.record(st, Rule::ResumeCo);
        Ok(Some(Fired {
            step: Step::Continue,
            alternatives,
        }))
    }
}

fn externals_residual(externals: &[Type]) -> Type {
    if externals.is_empty() {
        Type::Zero
    } else {
        Type::CorIns(externals.iter().cloned().map(FlowItem::Yield).collect())
    }
}

fn state_key(st: &State) -> String {
    let main_alive = st.live.first().is_some_and(|l| l.main);
    format!(
        "{}|{}|{}|{}",
        st.pending_from_main,
        st.main_finished,
        main_alive,
        render_state(st)
    )
}

fn render_state(st: &State) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "({}, {}) ⊢ ⊚<",
        st.pending,
        Type::seq(st.externals.iter().cloned())
    );
    for (i, l) in st.live.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{}", l.to_type());
    }
    s.push('>');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::parse_type;

    fn t(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn reduce_instances(items: &[&str]) -> Outcome {
        let defs = Definitions::new();
        let u = Universe::new(["A", "B", "C"]);
        let init: Vec<Type> = items.iter().map(|s| t(s)).collect();
        match Engine::new(&defs, &u).reduce(&init).unwrap() {
            Reduction::Done(o) => o,
            Reduction::Split(_) => panic!("unexpected split"),
        }
    }

    fn rules(o: &Outcome) -> Vec<Rule> {
        o.trace.iter().map(|e| e.rule).collect()
    }

    #[test]
    fn resume_consumes_pending() {
        let o = reduce_instances(&["[?A]", "[!A]"]);
        assert_eq!(o.verdict, Verdict::NoDeadlock);
        assert_eq!(rules(&o), [Rule::Yield, Rule::Resume, Rule::MainExit]);
    }

    #[test]
    fn unmatched_pending_goes_external() {
        let o = reduce_instances(&["[?A; ?B]", "[!B]"]);
        assert!(rules(&o).contains(&Rule::External));
        let Verdict::Deadlock {
            residual,
            externals,
        } = o.verdict
        else {
            panic!()
        };
        assert_eq!(externals, vec![t("B")]);
        assert_eq!(residual, t("[!B; ![?A; ?B]]"));
    }

    #[test]
    fn empty_reduction_is_deadlock_free() {
        assert_eq!(reduce_instances(&[]).verdict, Verdict::NoDeadlock);
    }

    #[test]
    fn self_cancel_is_allowed() {
        let o = reduce_instances(&["[!A; ?A]", "[?A; !A]"]);
        assert_eq!(o.verdict, Verdict::NoDeadlock);
    }

    #[test]
    fn remove_void_runs_first() {
        let o = reduce_instances(&["[!0; ?A]", "[!A]"]);
        assert_eq!(o.trace[0].rule, Rule::RemoveVoid);
        assert_eq!(o.verdict, Verdict::NoDeadlock);
    }

    #[test]
    fn resume_co_removes_the_matched_instance() {
        let o = reduce_instances(&["[?[!A]]", "[!A]"]);
        assert_eq!(rules(&o), [Rule::ResumeCo, Rule::MainExit]);
        assert_eq!(o.verdict, Verdict::NoDeadlock);
    }

    #[test]
    fn self_starting_definition_hits_the_cap() {
        let defs = Definitions::from([("main".to_string(), t("corDef[Start(main); ?A]"))]);
        let u = Universe::new(["A"]);
        let Reduction::Done(o) = Engine::new(&defs, &u)
            .reduce(&[Type::start(Type::var("main"))])
            .unwrap()
        else {
            panic!()
        };
        assert_eq!(
            o.verdict,
            Verdict::Inconclusive {
                steps: DEFAULT_MAX_STEPS
            }
        );
        assert_eq!(o.steps, DEFAULT_MAX_STEPS);
    }
}
