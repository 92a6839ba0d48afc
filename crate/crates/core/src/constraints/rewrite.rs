use std::collections::BTreeSet;

use super::{Predicate, Term};
use crate::calculus::{flatten, substitute, App, Bindings, Branch, FlowItem, Type};

/// Apply the constrained-type rewrites everywhere in `t` until none fires:
///
/// * `τ / false ⇒ 0`
/// * `τ / true ⇒ τ`
/// * `τ / ρ1 / ρ2 ⇒ τ / (ρ1 ∧ ρ2)`
/// * `τ / (ρ ∧ x ↦ v) ⇒ τ[x ↦ v] / ρ[x ↦ v]`
///
/// Ground comparisons are evaluated along the way. A binding that cannot be
/// substituted (e.g. an integer bound to a type variable) makes the term `0`.
pub fn reduce_constrained(t: &Type) -> Type {
    flatten(&reduce(&flatten(t)))
}

fn reduce(t: &Type) -> Type {
    match t {
        Type::Concrete(_) | Type::Var(_) | Type::Zero => t.clone(),
        Type::Constrained(base, p) => reduce_pair(base, p.clone()),
        Type::Seq(items) => Type::Seq(items.iter().map(reduce).collect()),
        Type::Tuple(items) => Type::Tuple(items.iter().map(reduce).collect()),
        Type::Union(l, r) => Type::Union(Box::new(reduce(l)), Box::new(reduce(r))),
        Type::CorDef(flow) => Type::CorDef(reduce_flow(flow)),
        Type::CorIns(flow) => Type::CorIns(reduce_flow(flow)),
        Type::Start(app) => Type::Start(reduce_app(app)),
        Type::Inline(app) => Type::Inline(reduce_app(app)),
        Type::Power(base, n) => Type::Power(Box::new(reduce(base)), n.clone()),
    }
}

fn reduce_app(app: &App) -> App {
    App {
        target: Box::new(reduce(&app.target)),
        args: app.args.clone(),
    }
}

fn reduce_flow(flow: &[FlowItem]) -> Vec<FlowItem> {
    flow.iter()
        .map(|item| match item {
            FlowItem::Yield(t) => FlowItem::Yield(reduce(t)),
            FlowItem::Receive(t) => FlowItem::Receive(reduce(t)),
            FlowItem::Choice(bs) => FlowItem::Choice(
                bs.iter()
                    .map(|b| Branch {
                        flow: reduce_flow(&b.flow),
                        guard: b.guard.simplify(),
                    })
                    .collect(),
            ),
        })
        .collect()
}

fn reduce_pair(base: &Type, mut p: Predicate) -> Type {
    let mut base = base.clone();
    loop {
        // τ / ρ1 / ρ2
        if let Type::Constrained(inner, q) = base {
            p = q.and(p);
            base = *inner;
            continue;
        }
        p = p.simplify();
        match p {
            Predicate::False => return Type::Zero,
            Predicate::True => return reduce(&base),
            _ => {}
        }
        let conjuncts = p.conjuncts();
        let Some(pos) = conjuncts
            .iter()
            .position(|c| matches!(c, Predicate::Bind(..)))
        else {
            return match reduce(&base) {
                Type::Zero => Type::Zero,
                b => Type::Constrained(Box::new(b), p),
            };
        };
        let Predicate::Bind(var, value) = &conjuncts[pos] else {
            unreachable!()
        };
        let binding = Bindings::from([(var.clone(), value.clone())]);
        base = match substitute(&base, &binding) {
            Ok(b) => b,
            Err(_) => return Type::Zero,
        };
        let rest = conjuncts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, c)| c.substitute(&binding));
        p = Predicate::all(rest);
    }
}

/// The concrete type symbols occurring in `t`, including those mentioned in
/// predicates. Variables and `0` contribute nothing.
pub fn collect_concrete(t: &Type) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_into(t, &mut out);
    out
}

fn collect_into(t: &Type, out: &mut BTreeSet<String>) {
    t.visit(&mut |sub| match sub {
        Type::Concrete(k) => {
            out.insert(k.clone());
        }
        Type::Constrained(_, p) => out.extend(p.symbols()),
        Type::Start(app) | Type::Inline(app) => {
            for v in app.args.values() {
                if let Term::Sym(k) = v {
                    out.insert(k.clone());
                }
            }
        }
        Type::CorDef(flow) | Type::CorIns(flow) => collect_guards(flow, out),
        _ => {}
    });
}

fn collect_guards(flow: &[FlowItem], out: &mut BTreeSet<String>) {
    for item in flow {
        if let FlowItem::Choice(bs) = item {
            for b in bs {
                out.extend(b.guard.symbols());
                collect_guards(&b.flow, out);
            }
        }
    }
}
