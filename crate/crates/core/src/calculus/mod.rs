//! The behavioral-type term algebra: coroutine definitions and instances made
//! of flow items, sequences, tuples, unions, constrained types and the
//! `Start`/`Inline` type-level applications.
//!
//! Every constructor in this module returns canonical (flattened) terms so
//! structural equality coincides with syntactic equality.

mod parse;
mod print;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::constraints::{Predicate, Term};

pub use parse::{parse_predicate, parse_type, ParseError};

/// Argument bindings of a `Start`/`Inline` application: parameter ↦ value.
pub type Bindings = BTreeMap<String, Term>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// `!τ`
    Yield,
    /// `?τ`
    Receive,
}

impl Direction {
    pub fn symbol(self) -> char {
        match self {
            Direction::Yield => '!',
            Direction::Receive => '?',
        }
    }
}

/// One alternative of a branch point inside a coroutine definition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch {
    pub flow: Vec<FlowItem>,
    pub guard: Predicate,
}

/// A flow item `ω`.
///
/// `Choice` is the union of flows produced by conditional code, e.g.
/// `(<!A, ?B> / p | 0 / ~p)`. It may appear in definitions only; starting or
/// inlining a definition resolves every choice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlowItem {
    Yield(Type),
    Receive(Type),
    Choice(Vec<Branch>),
}

impl FlowItem {
    pub fn new(direction: Direction, payload: Type) -> Self {
        match direction {
            Direction::Yield => FlowItem::Yield(payload),
            Direction::Receive => FlowItem::Receive(payload),
        }
    }

    pub fn direction(&self) -> Option<Direction> {
        match self {
            FlowItem::Yield(_) => Some(Direction::Yield),
            FlowItem::Receive(_) => Some(Direction::Receive),
            FlowItem::Choice(_) => None,
        }
    }

    pub fn payload(&self) -> Option<&Type> {
        match self {
            FlowItem::Yield(t) | FlowItem::Receive(t) => Some(t),
            FlowItem::Choice(_) => None,
        }
    }

    pub fn is_yield(&self) -> bool {
        matches!(self, FlowItem::Yield(_))
    }

    pub fn is_receive(&self) -> bool {
        matches!(self, FlowItem::Receive(_))
    }

    /// `ψ(0)`: an item carrying no behavior.
    pub fn is_void(&self) -> bool {
        matches!(self.payload(), Some(Type::Zero))
    }

    fn map_types(&self, f: &mut impl FnMut(&Type) -> Type) -> FlowItem {
        match self {
            FlowItem::Yield(t) => FlowItem::Yield(f(t)),
            FlowItem::Receive(t) => FlowItem::Receive(f(t)),
            FlowItem::Choice(bs) => FlowItem::Choice(
                bs.iter()
                    .map(|b| Branch {
                        flow: b.flow.iter().map(|i| i.map_types(f)).collect(),
                        guard: b.guard.clone(),
                    })
                    .collect(),
            ),
        }
    }
}

/// Target and arguments of `Start(...)` / `Inline(...)`.
///
/// The target is either an inline `corDef[...]`, an instance, or a
/// [`Type::Var`] naming a definition (which is how recursion is expressed).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct App {
    pub target: Box<Type>,
    pub args: Bindings,
}

impl App {
    pub fn new(target: Type) -> Self {
        App {
            target: Box::new(target),
            args: Bindings::new(),
        }
    }

    pub fn with_args(target: Type, args: Bindings) -> Self {
        App {
            target: Box::new(target),
            args,
        }
    }

    /// The name of the referenced definition, if the target is a name.
    pub fn def_name(&self) -> Option<&str> {
        match &*self.target {
            Type::Var(name) => Some(name),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Concrete(String),
    Var(String),
    Seq(Vec<Type>),
    Tuple(Vec<Type>),
    Union(Box<Type>, Box<Type>),
    Constrained(Box<Type>, Predicate),
    CorDef(Vec<FlowItem>),
    CorIns(Vec<FlowItem>),
    Start(App),
    Inline(App),
    /// `τ^n` with a symbolic length; concrete lengths are expanded.
    Power(Box<Type>, String),
    Zero,
}

impl Type {
    pub fn concrete(name: impl Into<String>) -> Self {
        Type::Concrete(name.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Type::Var(name.into())
    }

    /// A flattened sequence.
    pub fn seq(items: impl IntoIterator<Item = Type>) -> Self {
        flatten(&Type::Seq(items.into_iter().collect()))
    }

    pub fn tuple(items: impl IntoIterator<Item = Type>) -> Self {
        flatten(&Type::Tuple(items.into_iter().collect()))
    }

    pub fn union(l: Type, r: Type) -> Self {
        Type::Union(Box::new(flatten(&l)), Box::new(flatten(&r)))
    }

    /// `τ / ρ`, collapsing nested constraints.
    pub fn constrained(t: Type, p: Predicate) -> Self {
        flatten(&Type::Constrained(Box::new(t), p))
    }

    pub fn instance(flow: Vec<FlowItem>) -> Self {
        flatten(&Type::CorIns(flow))
    }

    pub fn definition(flow: Vec<FlowItem>) -> Self {
        flatten(&Type::CorDef(flow))
    }

    /// `τ^n` for a concrete `n`: a sequence of `n` copies.
    pub fn power(t: Type, n: usize) -> Self {
        Type::seq(std::iter::repeat_n(t, n))
    }

    pub fn power_sym(t: Type, n: impl Into<String>) -> Self {
        flatten(&Type::Power(Box::new(t), n.into()))
    }

    pub fn start(target: Type) -> Self {
        Type::Start(App::new(flatten(&target)))
    }

    pub fn inline(target: Type) -> Self {
        Type::Inline(App::new(flatten(&target)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Type::Zero)
    }

    /// The items of a sequence, or the type itself as a one-item list.
    /// `Zero` is the empty sequence.
    pub fn seq_items(&self) -> Vec<Type> {
        match self {
            Type::Seq(items) => items.clone(),
            Type::Zero => Vec::new(),
            other => vec![other.clone()],
        }
    }

    /// The type and its constraint, splitting off a top-level `τ / ρ`.
    pub fn split_constraint(&self) -> (&Type, Predicate) {
        match self {
            Type::Constrained(t, p) => (t, p.clone()),
            other => (other, Predicate::True),
        }
    }

    /// True for instance-like payloads whose yield starts a new coroutine.
    pub fn is_coroutine_payload(&self) -> bool {
        match self {
            Type::CorIns(_) | Type::Start(_) => true,
            Type::Constrained(t, _) => t.is_coroutine_payload(),
            _ => false,
        }
    }

    /// True if a `Union` occurs anywhere in the term.
    pub fn contains_union(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if let Type::Union(..) = t {
                found = true;
            }
        });
        found
    }

    /// Pre-order visit of every subterm, including payloads of flow items
    /// and targets of applications.
    pub fn visit(&self, f: &mut impl FnMut(&Type)) {
        f(self);
        match self {
            Type::Concrete(_) | Type::Var(_) | Type::Zero => {}
            Type::Seq(items) | Type::Tuple(items) => items.iter().for_each(|t| t.visit(f)),
            Type::Union(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Type::Constrained(t, _) | Type::Power(t, _) => t.visit(f),
            Type::CorDef(flow) | Type::CorIns(flow) => visit_flow(flow, f),
            Type::Start(app) | Type::Inline(app) => app.target.visit(f),
        }
    }
}

fn visit_flow(flow: &[FlowItem], f: &mut impl FnMut(&Type)) {
    for item in flow {
        match item {
            FlowItem::Yield(t) | FlowItem::Receive(t) => t.visit(f),
            FlowItem::Choice(bs) => {
                for b in bs {
                    visit_flow(&b.flow, f);
                }
            }
        }
    }
}

/// Canonical form: nested sequences merged, singleton sequences unwrapped,
/// empty sequences replaced by `Zero`, nested constraints collapsed, and
/// sequence payloads of flow items distributed. Idempotent.
pub fn flatten(t: &Type) -> Type {
    match t {
        Type::Concrete(_) | Type::Var(_) | Type::Zero => t.clone(),
        Type::Seq(items) => {
            let mut out = Vec::with_capacity(items.len());
            for item in items {
                match flatten(item) {
                    Type::Seq(inner) => out.extend(inner),
                    Type::Zero => {}
                    other => out.push(other),
                }
            }
            match out.len() {
                0 => Type::Zero,
                1 => out.pop().unwrap(),
                _ => Type::Seq(out),
            }
        }
        Type::Tuple(items) => Type::Tuple(items.iter().map(flatten).collect()),
        Type::Union(l, r) => Type::Union(Box::new(flatten(l)), Box::new(flatten(r))),
        Type::Constrained(inner, p) => match flatten(inner) {
            Type::Constrained(base, q) => Type::Constrained(base, q.and(p.clone())),
            other => Type::Constrained(Box::new(other), p.clone()),
        },
        Type::CorDef(flow) => Type::CorDef(flatten_flow(flow)),
        Type::CorIns(flow) => Type::CorIns(flatten_flow(flow)),
        Type::Start(app) => Type::Start(flatten_app(app)),
        Type::Inline(app) => Type::Inline(flatten_app(app)),
        Type::Power(base, n) => Type::Power(Box::new(flatten(base)), n.clone()),
    }
}

fn flatten_app(app: &App) -> App {
    App {
        target: Box::new(flatten(&app.target)),
        args: app.args.clone(),
    }
}

/// Flatten every payload of a flow and distribute directions over sequences.
pub fn flatten_flow(flow: &[FlowItem]) -> Vec<FlowItem> {
    let mut out = Vec::with_capacity(flow.len());
    for item in flow {
        match item {
            FlowItem::Yield(t) => out.extend(distribute(Direction::Yield, &flatten(t))),
            FlowItem::Receive(t) => out.extend(distribute(Direction::Receive, &flatten(t))),
            FlowItem::Choice(bs) => out.push(FlowItem::Choice(
                bs.iter()
                    .map(|b| Branch {
                        flow: flatten_flow(&b.flow),
                        guard: b.guard.clone(),
                    })
                    .collect(),
            )),
        }
    }
    out
}

/// `ψ<τ1, τ2, ...>` ⇒ `<ψτ1, ψτ2, ...>`. Non-sequences (including `Zero`)
/// produce a single item.
pub fn distribute(direction: Direction, t: &Type) -> Vec<FlowItem> {
    match t {
        Type::Seq(items) => items
            .iter()
            .map(|i| FlowItem::new(direction, i.clone()))
            .collect(),
        other => vec![FlowItem::new(direction, other.clone())],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoroutineKind {
    Definition,
    Instance,
}

/// View over `corDef[...]` / `[...]`, optionally constrained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coroutine {
    pub kind: CoroutineKind,
    pub flow: Vec<FlowItem>,
    pub constraint: Predicate,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("head/tail taken of a coroutine definition")]
    HeadOfDefinition,
    #[error("head/tail taken of an exhausted coroutine instance")]
    EmptyInstance,
    #[error("variable `{var}` bound to `{value}`; only concrete types, integers and variables are allowed")]
    IllegalBinding { var: String, value: String },
    #[error("`{0}` is not a coroutine")]
    NotACoroutine(String),
}

impl Coroutine {
    pub fn instance(flow: Vec<FlowItem>) -> Self {
        Coroutine {
            kind: CoroutineKind::Instance,
            flow: flatten_flow(&flow),
            constraint: Predicate::True,
        }
    }

    pub fn definition(flow: Vec<FlowItem>) -> Self {
        Coroutine {
            kind: CoroutineKind::Definition,
            flow: flatten_flow(&flow),
            constraint: Predicate::True,
        }
    }

    pub fn with_constraint(mut self, p: Predicate) -> Self {
        self.constraint = p;
        self
    }

    pub fn from_type(t: &Type) -> Result<Self, CalculusError> {
        match t {
            Type::CorDef(flow) => Ok(Coroutine::definition(flow.clone())),
            Type::CorIns(flow) => Ok(Coroutine::instance(flow.clone())),
            Type::Constrained(inner, p) => {
                let c = Coroutine::from_type(inner)?;
                let constraint = c.constraint.clone().and(p.clone());
                Ok(c.with_constraint(constraint))
            }
            other => Err(CalculusError::NotACoroutine(other.to_string())),
        }
    }

    pub fn to_type(&self) -> Type {
        let base = match self.kind {
            CoroutineKind::Definition => Type::CorDef(self.flow.clone()),
            CoroutineKind::Instance => Type::CorIns(self.flow.clone()),
        };
        if self.constraint.is_true() {
            base
        } else {
            Type::Constrained(Box::new(base), self.constraint.clone())
        }
    }

    pub fn is_exhausted(&self) -> bool {
        self.flow.is_empty()
    }
}

/// `Hd`: first flow item of an instance.
pub fn head(c: &Coroutine) -> Result<&FlowItem, CalculusError> {
    if c.kind == CoroutineKind::Definition {
        return Err(CalculusError::HeadOfDefinition);
    }
    c.flow.first().ok_or(CalculusError::EmptyInstance)
}

/// `Tl`: the instance without its first flow item.
pub fn tail(c: &Coroutine) -> Result<Coroutine, CalculusError> {
    head(c)?;
    Ok(Coroutine {
        kind: c.kind,
        flow: c.flow[1..].to_vec(),
        constraint: c.constraint.clone(),
    })
}

/// Result of [`first`]: the earliest element satisfying the predicate and the
/// elements before and after it.
#[derive(Debug, PartialEq, Eq)]
pub struct Found<'a, T> {
    pub found: Option<&'a T>,
    pub before: &'a [T],
    pub after: &'a [T],
}

/// Haskell `break`-style search.
pub fn first<'a, T>(s: &'a [T], mut p: impl FnMut(&T) -> bool) -> Found<'a, T> {
    match s.iter().position(&mut p) {
        Some(i) => Found {
            found: Some(&s[i]),
            before: &s[..i],
            after: &s[i + 1..],
        },
        None => Found {
            found: None,
            before: s,
            after: &[],
        },
    }
}

pub fn none<T>(s: &[T], p: impl FnMut(&T) -> bool) -> bool {
    first(s, p).found.is_none()
}

/// Turn a type into a binding value. Complex types and `Zero` are rejected.
pub fn binding_value(var: &str, value: &Type) -> Result<Term, CalculusError> {
    match value {
        Type::Concrete(k) => Ok(Term::Sym(k.clone())),
        Type::Var(v) => Ok(Term::Var(v.clone())),
        other => Err(CalculusError::IllegalBinding {
            var: var.to_string(),
            value: other.to_string(),
        }),
    }
}

/// Build a binding map from type-valued bindings.
pub fn bindings_from_types<'a>(
    pairs: impl IntoIterator<Item = (&'a str, &'a Type)>,
) -> Result<Bindings, CalculusError> {
    pairs
        .into_iter()
        .map(|(k, v)| Ok((k.to_string(), binding_value(k, v)?)))
        .collect()
}

/// `τ[x ↦ v]`. Bound type variables become concrete types or variables;
/// bound exponents expand; predicates are substituted too. Definition
/// references (`Start(name)`) are never renamed.
pub fn substitute(t: &Type, binding: &Bindings) -> Result<Type, CalculusError> {
    if binding.is_empty() {
        return Ok(t.clone());
    }
    Ok(flatten(&subst(t, binding)?))
}

fn subst(t: &Type, b: &Bindings) -> Result<Type, CalculusError> {
    Ok(match t {
        Type::Concrete(_) | Type::Zero => t.clone(),
        Type::Var(x) => match b.get(x) {
            None => t.clone(),
            Some(Term::Sym(k)) => Type::Concrete(k.clone()),
            Some(Term::Var(y)) => Type::Var(y.clone()),
            Some(Term::Int(n)) => {
                return Err(CalculusError::IllegalBinding {
                    var: x.clone(),
                    value: n.to_string(),
                })
            }
        },
        Type::Seq(items) => Type::Seq(
            items
                .iter()
                .map(|i| subst(i, b))
                .collect::<Result<_, _>>()?,
        ),
        Type::Tuple(items) => Type::Tuple(
            items
                .iter()
                .map(|i| subst(i, b))
                .collect::<Result<_, _>>()?,
        ),
        Type::Union(l, r) => Type::Union(Box::new(subst(l, b)?), Box::new(subst(r, b)?)),
        Type::Constrained(inner, p) => {
            Type::Constrained(Box::new(subst(inner, b)?), p.substitute(b))
        }
        Type::CorDef(flow) => Type::CorDef(subst_flow(flow, b)?),
        Type::CorIns(flow) => Type::CorIns(subst_flow(flow, b)?),
        Type::Start(app) => Type::Start(subst_app(app, b)?),
        Type::Inline(app) => Type::Inline(subst_app(app, b)?),
        Type::Power(base, n) => {
            let base = subst(base, b)?;
            match b.get(n) {
                None => Type::Power(Box::new(base), n.clone()),
                Some(Term::Var(m)) => Type::Power(Box::new(base), m.clone()),
                Some(Term::Int(k)) if *k >= 0 => Type::Seq(vec![base; *k as usize]),
                Some(other) => {
                    return Err(CalculusError::IllegalBinding {
                        var: n.clone(),
                        value: other.to_string(),
                    })
                }
            }
        }
    })
}

fn subst_app(app: &App, b: &Bindings) -> Result<App, CalculusError> {
    let args = app
        .args
        .iter()
        .map(|(k, v)| {
            let v = match v {
                Term::Var(x) => b.get(x).cloned().unwrap_or_else(|| v.clone()),
                _ => v.clone(),
            };
            (k.clone(), v)
        })
        .collect();
    let target = match &*app.target {
        name @ Type::Var(_) => name.clone(),
        other => subst(other, b)?,
    };
    Ok(App {
        target: Box::new(target),
        args,
    })
}

pub(crate) fn subst_flow(flow: &[FlowItem], b: &Bindings) -> Result<Vec<FlowItem>, CalculusError> {
    flow.iter()
        .map(|item| {
            Ok(match item {
                FlowItem::Yield(t) => FlowItem::Yield(subst(t, b)?),
                FlowItem::Receive(t) => FlowItem::Receive(subst(t, b)?),
                FlowItem::Choice(bs) => FlowItem::Choice(
                    bs.iter()
                        .map(|br| {
                            Ok(Branch {
                                flow: subst_flow(&br.flow, b)?,
                                guard: br.guard.substitute(b),
                            })
                        })
                        .collect::<Result<_, CalculusError>>()?,
                ),
            })
        })
        .collect()
}

/// Substitute bindings into every item of a flow and re-flatten.
pub fn substitute_flow(
    flow: &[FlowItem],
    binding: &Bindings,
) -> Result<Vec<FlowItem>, CalculusError> {
    if binding.is_empty() {
        return Ok(flow.to_vec());
    }
    Ok(flatten_flow(&subst_flow(flow, binding)?))
}

/// Apply a function to every payload of a flow (recursing into choices).
pub fn map_flow(flow: &[FlowItem], mut f: impl FnMut(&Type) -> Type) -> Vec<FlowItem> {
    flow.iter().map(|i| i.map_types(&mut f)).collect()
}
