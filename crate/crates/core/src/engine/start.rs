//! The type-level functions `Start` and `Inline`: instantiate a definition,
//! substituting arguments and resolving every branch point.

use super::{Definitions, EngineError, Guards};
use crate::calculus::{flatten_flow, substitute_flow, Bindings, Coroutine, FlowItem, Type};
use crate::constraints::{entails, reduce_constrained, satisfiable, Predicate, Universe};

/// An instance, or the guards that must be decided before instantiating.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Started {
    Instance(Coroutine),
    Split(Guards),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InlinePosition {
    /// Replace the item at this index.
    Here(usize),
    /// Append after every existing item (`defer`).
    AtEnd,
}

/// `Start(def)` under `args`. A branch is taken when `context` entails its
/// guard; branches that are neither entailed nor refuted are returned as
/// guards to split on.
pub fn start(
    def: &Type,
    args: &Bindings,
    defs: &Definitions,
    context: &Predicate,
    u: &Universe,
) -> Result<Started, EngineError> {
    let (flow, constraint) = lookup(def, defs)?;
    let flow = substitute_flow(&flow, args)?;
    let constraint = constraint.substitute(args).simplify();
    if constraint.is_false() {
        return Ok(Started::Instance(Coroutine::instance(Vec::new())));
    }
    let ctx = context.clone().and(constraint.clone());
    let mut guards = Guards::new();
    let resolved = resolve_flow(&flow, &def.to_string(), &ctx, u, &mut guards)?;
    if !guards.is_empty() {
        return Ok(Started::Split(guards));
    }
    let flow: Vec<FlowItem> = resolved
        .into_iter()
        .map(|item| match item {
            FlowItem::Yield(t) => FlowItem::Yield(reduce_constrained(&t)),
            FlowItem::Receive(t) => FlowItem::Receive(reduce_constrained(&t)),
            choice => choice,
        })
        .collect();
    Ok(Started::Instance(
        Coroutine::instance(flow).with_constraint(constraint),
    ))
}

/// `Inline(def)` spliced into `target`.
pub fn inline(
    target: &Coroutine,
    def: &Type,
    args: &Bindings,
    position: InlinePosition,
    defs: &Definitions,
    context: &Predicate,
    u: &Universe,
) -> Result<Started, EngineError> {
    let inst = match start(def, args, defs, context, u)? {
        Started::Instance(i) => i,
        split => return Ok(split),
    };
    let mut flow = target.flow.clone();
    match position {
        InlinePosition::Here(i) if i < flow.len() => {
            flow.splice(i..=i, inst.flow);
        }
        _ => flow.extend(inst.flow),
    }
    let constraint = target.constraint.clone().and(inst.constraint);
    Ok(Started::Instance(Coroutine {
        kind: target.kind,
        flow: flatten_flow(&flow),
        constraint,
    }))
}

fn lookup(def: &Type, defs: &Definitions) -> Result<(Vec<FlowItem>, Predicate), EngineError> {
    match def {
        Type::Var(name) => {
            let body = defs
                .get(name)
                .ok_or_else(|| EngineError::UnknownDefinition(name.clone()))?;
            lookup(body, defs)
        }
        Type::CorDef(flow) | Type::CorIns(flow) => Ok((flow.clone(), Predicate::True)),
        Type::Constrained(inner, p) => {
            let (flow, q) = lookup(inner, defs)?;
            Ok((flow, q.and(p.clone())))
        }
        Type::Zero => Ok((Vec::new(), Predicate::True)),
        other => Err(EngineError::NotStartable(other.to_string())),
    }
}

enum Decision {
    Take(usize),
    Undecided,
}

fn decide(
    guards: &[Predicate],
    what: &str,
    ctx: &Predicate,
    u: &Universe,
    out: &mut Guards,
) -> Result<Decision, EngineError> {
    for (i, g) in guards.iter().enumerate() {
        if entails(ctx, g, u)? {
            return Ok(Decision::Take(i));
        }
    }
    let mut feasible = Vec::new();
    for g in guards {
        if satisfiable(&ctx.clone().and(g.clone()), u)? {
            feasible.push(g.clone());
        }
    }
    if feasible.is_empty() {
        return Err(EngineError::NoSatisfiableBranch(what.to_string()));
    }
    for g in feasible {
        if !out.contains(&g) {
            out.push(g);
        }
    }
    Ok(Decision::Undecided)
}

fn resolve_flow(
    flow: &[FlowItem],
    what: &str,
    ctx: &Predicate,
    u: &Universe,
    guards: &mut Guards,
) -> Result<Vec<FlowItem>, EngineError> {
    let mut out = Vec::with_capacity(flow.len());
    for item in flow {
        match item {
            FlowItem::Choice(branches) => {
                let gs: Vec<Predicate> = branches.iter().map(|b| b.guard.simplify()).collect();
                if let Decision::Take(i) = decide(&gs, what, ctx, u, guards)? {
                    out.extend(resolve_flow(&branches[i].flow, what, ctx, u, guards)?);
                }
            }
            FlowItem::Yield(t) => out.push(FlowItem::Yield(resolve_type(t, what, ctx, u, guards)?)),
            FlowItem::Receive(t) => {
                out.push(FlowItem::Receive(resolve_type(t, what, ctx, u, guards)?))
            }
        }
    }
    Ok(flatten_flow(&out))
}

fn resolve_type(
    t: &Type,
    what: &str,
    ctx: &Predicate,
    u: &Universe,
    guards: &mut Guards,
) -> Result<Type, EngineError> {
    if !t.contains_union() {
        return Ok(t.clone());
    }
    Ok(match t {
        Type::Union(..) => {
            let mut alts = Vec::new();
            union_alternatives(t, &mut alts);
            let gs: Vec<Predicate> = alts
                .iter()
                .map(|a| a.split_constraint().1.simplify())
                .collect();
            match decide(&gs, what, ctx, u, guards)? {
                Decision::Take(i) => {
                    let (base, guard) = alts[i].split_constraint();
                    let chosen = if has_binding(&guard) {
                        reduce_constrained(&Type::Constrained(Box::new(base.clone()), guard))
                    } else {
                        base.clone()
                    };
                    resolve_type(&chosen, what, ctx, u, guards)?
                }
                Decision::Undecided => Type::Zero,
            }
        }
        Type::Seq(items) => Type::seq(
            items
                .iter()
                .map(|i| resolve_type(i, what, ctx, u, guards))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Type::Tuple(items) => Type::Tuple(
            items
                .iter()
                .map(|i| resolve_type(i, what, ctx, u, guards))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Type::Constrained(inner, p) => Type::Constrained(
            Box::new(resolve_type(inner, what, ctx, u, guards)?),
            p.clone(),
        ),
        other => other.clone(),
    })
}

fn union_alternatives(t: &Type, out: &mut Vec<Type>) {
    match t {
        Type::Union(l, r) => {
            union_alternatives(l, out);
            union_alternatives(r, out);
        }
        other => out.push(other.clone()),
    }
}

fn has_binding(p: &Predicate) -> bool {
    p.conjuncts()
        .iter()
        .any(|c| matches!(c, Predicate::Bind(..)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{parse_type, Coroutine};
    use crate::constraints::Term;

    fn t(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn instance(s: &str) -> Coroutine {
        Coroutine::from_type(&t(s)).unwrap()
    }

    fn run(def: &str, args: &[(&str, i64)]) -> Result<Started, EngineError> {
        let args: Bindings = args
            .iter()
            .map(|(k, v)| (k.to_string(), Term::Int(*v)))
            .collect();
        start(
            &t(def),
            &args,
            &Definitions::new(),
            &Predicate::True,
            &Universe::default(),
        )
    }

    #[test]
    fn start_picks_the_satisfied_union_branch() {
        let def = "corDef[!(Int / v < 10 | Bool / ~(v < 10))]";
        assert_eq!(
            run(def, &[("v", 2)]).unwrap(),
            Started::Instance(instance("[!Int]"))
        );
        assert_eq!(
            run(def, &[("v", 20)]).unwrap(),
            Started::Instance(instance("[!Bool]"))
        );
    }

    #[test]
    fn start_without_branches() {
        assert_eq!(
            run("corDef[?A; !B]", &[]).unwrap(),
            Started::Instance(instance("[?A; !B]"))
        );
    }

    #[test]
    fn unresolved_branches_request_a_split() {
        let Started::Split(g) = run("corDef[(<!Int> / v < 10 | <> / ~(v < 10))]", &[]).unwrap()
        else {
            panic!("expected a split")
        };
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn unsatisfiable_branches_are_an_error() {
        let err = run("corDef[(<!Int> / v < 0 | <!Bool> / v > 5)]", &[("v", 3)]).unwrap_err();
        assert!(matches!(err, EngineError::NoSatisfiableBranch(_)));
    }

    #[test]
    fn inline_here_and_at_end() {
        let defs = Definitions::from([("run".to_string(), t("corDef[Start(corDef[!Error])]"))]);
        let main = instance("[Inline(run); ?Error]");
        let out = inline(
            &main,
            &Type::var("run"),
            &Bindings::new(),
            InlinePosition::Here(0),
            &defs,
            &Predicate::True,
            &Universe::default(),
        )
        .unwrap();
        assert_eq!(
            out,
            Started::Instance(instance("[Start(corDef[!Error]); ?Error]"))
        );

        let deferred = inline(
            &instance("[?Int]"),
            &t("corDef[!Bool]"),
            &Bindings::new(),
            InlinePosition::AtEnd,
            &defs,
            &Predicate::True,
            &Universe::default(),
        )
        .unwrap();
        assert_eq!(deferred, Started::Instance(instance("[?Int; !Bool]")));

        let empty = inline(
            &instance("[?Int]"),
            &t("corDef[]"),
            &Bindings::new(),
            InlinePosition::AtEnd,
            &defs,
            &Predicate::True,
            &Universe::default(),
        )
        .unwrap();
        assert_eq!(empty, Started::Instance(instance("[?Int]")));
    }
}
