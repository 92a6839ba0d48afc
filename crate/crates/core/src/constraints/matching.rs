//! `Match`: commutative unification of two possibly constrained types.

use std::collections::BTreeMap;
use std::fmt;

use super::solver::{simplify_in, solve, unique_bindings};
use super::{CmpOp, ConstraintError, Predicate, Term, Universe};
use crate::calculus::{FlowItem, Type};

/// Conditions under which two types are equal: the uniquely determined
/// variable bindings plus whatever constraint remains.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConditionSet {
    pub bindings: BTreeMap<String, Term>,
    pub residual: Predicate,
}

impl ConditionSet {
    /// The condition set as a single predicate: bindings followed by the
    /// residual.
    pub fn to_predicate(&self) -> Predicate {
        Predicate::all(
            self.bindings
                .iter()
                .map(|(v, t)| Predicate::bind(v.clone(), t.clone()))
                .chain(std::iter::once(self.residual.clone())),
        )
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} ↦ {t}")?;
        }
        f.write_str("}")?;
        if !self.residual.is_true() {
            write!(f, " / {}", self.residual)?;
        }
        Ok(())
    }
}

/// Match `a` against `b`: solve `(a = b) ∧ ρa ∧ ρb ∧ context` and keep the
/// bindings that are uniquely determined. `None` is ⊥.
pub fn match_types(
    a: &Type,
    b: &Type,
    context: &Predicate,
    u: &Universe,
) -> Result<Option<ConditionSet>, ConstraintError> {
    let expr = Predicate::all([unify(a, b), context.clone()]);
    let expr = simplify_in(&expr, u).canonical();
    if expr.is_false() {
        return Ok(None);
    }
    let Some(interp) = solve(&expr, u)? else {
        return Ok(None);
    };
    unique_bindings(&expr, &interp, u).map(Some)
}

/// The predicate under which two types are structurally equal, including the
/// constraints they carry. A variable never equals a composite type or `0`.
pub fn unify(a: &Type, b: &Type) -> Predicate {
    match (a, b) {
        (Type::Constrained(t, p), other) | (other, Type::Constrained(t, p)) => {
            Predicate::all([unify(t, other), p.clone()])
        }
        (Type::Union(l, r), other) | (other, Type::Union(l, r)) => {
            unify(l, other).or(unify(r, other))
        }
        (Type::Seq(_) | Type::Power(..) | Type::Zero, _)
        | (_, Type::Seq(_) | Type::Power(..) | Type::Zero) => {
            unify_lists(&a.seq_items(), &b.seq_items())
        }
        (Type::Concrete(x), Type::Concrete(y)) => Predicate::from(x == y),
        (Type::Var(x), Type::Var(y)) if x == y => Predicate::True,
        (Type::Var(x), Type::Var(y)) => {
            Predicate::cmp(Term::var(x.clone()), CmpOp::Eq, Term::var(y.clone()))
        }
        (Type::Var(x), Type::Concrete(k)) | (Type::Concrete(k), Type::Var(x)) => {
            Predicate::cmp(Term::var(x.clone()), CmpOp::Eq, Term::sym(k.clone()))
        }
        (Type::Var(_), _) | (_, Type::Var(_)) => Predicate::False,
        (Type::Tuple(xs), Type::Tuple(ys)) => {
            if xs.len() != ys.len() {
                return Predicate::False;
            }
            Predicate::all(xs.iter().zip(ys).map(|(x, y)| unify(x, y)))
        }
        (Type::CorIns(xs), Type::CorIns(ys)) | (Type::CorDef(xs), Type::CorDef(ys)) => {
            unify_flows(xs, ys)
        }
        (Type::Start(x), Type::Start(y)) | (Type::Inline(x), Type::Inline(y)) => {
            Predicate::from(x == y)
        }
        _ => Predicate::False,
    }
}

fn unify_flows(xs: &[FlowItem], ys: &[FlowItem]) -> Predicate {
    if xs.len() != ys.len() {
        return Predicate::False;
    }
    Predicate::all(xs.iter().zip(ys).map(|(x, y)| match (x, y) {
        (FlowItem::Yield(s), FlowItem::Yield(t)) | (FlowItem::Receive(s), FlowItem::Receive(t)) => {
            unify(s, t)
        }
        (FlowItem::Choice(_), FlowItem::Choice(_)) => Predicate::from(x == y),
        _ => Predicate::False,
    }))
}

/// Unify two sequences whose items may include symbolic powers `τ^n`, which
/// stand for any number of copies of `τ`.
fn unify_lists(xs: &[Type], ys: &[Type]) -> Predicate {
    match (xs.split_first(), ys.split_first()) {
        (None, None) => Predicate::True,
        (None, Some(_)) => all_empty(ys),
        (Some(_), None) => all_empty(xs),
        (Some((x, xrest)), Some((y, yrest))) => match (x, y) {
            (Type::Power(xb, n), Type::Power(yb, m)) => {
                let same = Predicate::all([
                    Predicate::cmp(Term::var(n.clone()), CmpOp::Eq, Term::var(m.clone())),
                    unify(xb, yb),
                    unify_lists(xrest, yrest),
                ]);
                same.or(power_prefix(xb, n, xrest, ys))
                    .or(power_prefix(yb, m, yrest, xs))
            }
            (Type::Power(xb, n), _) => power_prefix(xb, n, xrest, ys),
            (_, Type::Power(yb, m)) => power_prefix(yb, m, yrest, xs),
            _ => Predicate::all([unify(x, y), unify_lists(xrest, yrest)]),
        },
    }
}

/// `base^n` followed by `rest` against `other`: `n` copies of `base` absorb a
/// prefix of the non-power items of `other`.
fn power_prefix(base: &Type, n: &str, rest: &[Type], other: &[Type]) -> Predicate {
    let limit = other
        .iter()
        .take_while(|t| !matches!(t, Type::Power(..)))
        .count();
    let mut alternatives = Vec::with_capacity(limit + 1);
    for k in 0..=limit {
        // For k = 0 with a power at the head of `other`, the power/power case
        // already covers alignment.
        if k == 0 && matches!(other.first(), Some(Type::Power(..))) {
            alternatives.push(Predicate::all([
                Predicate::cmp(Term::var(n.to_string()), CmpOp::Eq, Term::Int(0)),
                unify_lists(rest, other),
            ]));
            continue;
        }
        let mut parts = vec![Predicate::cmp(
            Term::var(n.to_string()),
            CmpOp::Eq,
            Term::Int(k as i64),
        )];
        parts.extend(other[..k].iter().map(|t| unify(base, t)));
        parts.push(unify_lists(rest, &other[k..]));
        alternatives.push(Predicate::all(parts));
    }
    Predicate::any(alternatives)
}

fn all_empty(items: &[Type]) -> Predicate {
    Predicate::all(items.iter().map(|t| match t {
        Type::Power(_, n) => Predicate::cmp(Term::var(n.clone()), CmpOp::Eq, Term::Int(0)),
        Type::Constrained(inner, p) if matches!(**inner, Type::Power(..)) => {
            Predicate::all([all_empty(std::slice::from_ref(inner)), p.clone()])
        }
        _ => Predicate::False,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::parse_type;

    fn t(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn m(a: &str, b: &str) -> Option<ConditionSet> {
        match_types(
            &t(a),
            &t(b),
            &Predicate::True,
            &Universe::new(["Int", "String", "X", "Y"]),
        )
        .unwrap()
    }

    #[test]
    fn power_against_concrete_length() {
        let cs = m("Int^5", "Int^n").unwrap();
        assert_eq!(
            cs.bindings,
            BTreeMap::from([("n".to_string(), Term::Int(5))])
        );
        assert!(cs.residual.is_true());
    }

    #[test]
    fn distinct_symbols_are_bottom() {
        assert_eq!(m("Int", "String"), None);
        assert_eq!(m("x", "<Int, String>"), None);
        assert_eq!(m("x", "0"), None);
    }

    #[test]
    fn ground_types_match_themselves() {
        for s in ["Int", "<Int, String>", "(Int, X)", "[!Int; ?String]", "0"] {
            assert_eq!(m(s, s), Some(ConditionSet::default()), "{s}");
        }
    }

    #[test]
    fn uniqueness_example() {
        let pending = t("<X, Y^j> / j < 5");
        let pattern = t("<X^i, Y^j>");
        let ctx = Predicate::cmp(Term::var("j"), CmpOp::Gt, Term::Int(0));
        let cs = match_types(&pending, &pattern, &ctx, &Universe::new(["X", "Y"]))
            .unwrap()
            .unwrap();
        assert_eq!(
            cs.bindings,
            BTreeMap::from([("i".to_string(), Term::Int(1))])
        );
        assert_eq!(
            cs.residual,
            parse_predicate("j > 0 && j < 5").unwrap().canonical()
        );
    }

    #[test]
    fn variable_binds_to_symbol() {
        let cs = m("x", "Int").unwrap();
        assert_eq!(cs.bindings["x"], Term::sym("Int"));
    }

    use crate::calculus::parse_predicate;
}
