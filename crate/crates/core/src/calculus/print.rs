use std::fmt::{self, Display, Formatter, Write};

use super::{App, Branch, FlowItem, Type};

impl Display for Type {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Type::Concrete(name) | Type::Var(name) => f.write_str(name),
            Type::Zero => f.write_str("0"),
            Type::Seq(items) => {
                f.write_char('<')?;
                write_list(f, items, ", ", write_nested)?;
                f.write_char('>')
            }
            Type::Tuple(items) => {
                f.write_char('(')?;
                write_list(f, items, ", ", write_nested)?;
                if items.len() == 1 {
                    f.write_char(',')?;
                }
                f.write_char(')')
            }
            Type::Union(l, r) => write!(f, "({l} | {r})"),
            Type::Constrained(t, p) => {
                write_nested(f, t)?;
                write!(f, " / {p}")
            }
            Type::CorDef(flow) => {
                f.write_str("corDef")?;
                write_flow(f, flow)
            }
            Type::CorIns(flow) => write_flow(f, flow),
            Type::Start(app) => write_app(f, "Start", app),
            Type::Inline(app) => write_app(f, "Inline", app),
            Type::Power(base, n) => {
                write_nested(f, base)?;
                write!(f, "^{n}")
            }
        }
    }
}

impl Display for FlowItem {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            FlowItem::Yield(t @ (Type::Start(_) | Type::Inline(_))) => write!(f, "{t}"),
            FlowItem::Yield(t) => {
                f.write_char('!')?;
                write_nested(f, t)
            }
            FlowItem::Receive(t) => {
                f.write_char('?')?;
                write_nested(f, t)
            }
            FlowItem::Choice(branches) => {
                f.write_char('(')?;
                write_list(f, branches, " | ", |f, b| write!(f, "{b}"))?;
                f.write_char(')')
            }
        }
    }
}

impl Display for Branch {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_char('<')?;
        write_list(f, &self.flow, ", ", |f, i| write!(f, "{i}"))?;
        f.write_char('>')?;
        if !self.guard.is_true() {
            write!(f, " / {}", self.guard)?;
        }
        Ok(())
    }
}

/// Constrained types are parenthesized wherever a trailing predicate would
/// be ambiguous.
fn write_nested(f: &mut Formatter<'_>, t: &Type) -> fmt::Result {
    match t {
        Type::Constrained(..) => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}

fn write_flow(f: &mut Formatter<'_>, flow: &[FlowItem]) -> fmt::Result {
    f.write_char('[')?;
    write_list(f, flow, "; ", |f, i| write!(f, "{i}"))?;
    f.write_char(']')
}

fn write_app(f: &mut Formatter<'_>, name: &str, app: &App) -> fmt::Result {
    write!(f, "{name}(")?;
    write_nested(f, &app.target)?;
    for (k, v) in &app.args {
        write!(f, ", {k} ↦ {v}")?;
    }
    f.write_char(')')
}

fn write_list<T>(
    f: &mut Formatter<'_>,
    items: &[T],
    sep: &str,
    mut each: impl FnMut(&mut Formatter<'_>, &T) -> fmt::Result,
) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        each(f, item)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{CmpOp, Predicate, Term};

    fn k(n: &str) -> Type {
        Type::concrete(n)
    }

    #[test]
    fn prints_instances_and_definitions() {
        let i = Type::instance(vec![FlowItem::Yield(k("A")), FlowItem::Receive(k("B"))]);
        assert_eq!(i.to_string(), "[!A; ?B]");
        assert_eq!(Type::instance(vec![]).to_string(), "[]");
        let d = Type::definition(vec![
            FlowItem::Yield(Type::start(Type::var("work"))),
            FlowItem::Yield(k("String")),
        ]);
        assert_eq!(d.to_string(), "corDef[Start(work); !String]");
    }

    #[test]
    fn prints_structural_types() {
        assert_eq!(Type::seq([k("A"), k("B")]).to_string(), "<A, B>");
        assert_eq!(Type::Tuple(vec![k("A")]).to_string(), "(A,)");
        assert_eq!(Type::union(k("A"), k("B")).to_string(), "(A | B)");
        assert_eq!(Type::Zero.to_string(), "0");
        assert_eq!(Type::power_sym(k("Int"), "n").to_string(), "Int^n");
        let p = Predicate::cmp(Term::var("v"), CmpOp::Lt, Term::Int(10));
        let c = Type::constrained(k("Int"), p.clone());
        assert_eq!(c.to_string(), "Int / v < 10");
        assert_eq!(Type::seq([c, k("B")]).to_string(), "<(Int / v < 10), B>");
    }

    #[test]
    fn prints_choice_items() {
        let p = Predicate::cmp(Term::var("v"), CmpOp::Lt, Term::Int(10));
        let item = FlowItem::Choice(vec![
            Branch {
                flow: vec![FlowItem::Yield(k("Int"))],
                guard: p.clone(),
            },
            Branch {
                flow: vec![],
                guard: p.not(),
            },
        ]);
        assert_eq!(item.to_string(), "(<!Int> / v < 10 | <> / ~(v < 10))");
    }
}
