//! The predicate language attached to constrained types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// An atomic value inside a predicate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Int(i64),
    /// A concrete type symbol such as `Int` or `User`.
    Sym(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn sym(name: impl Into<String>) -> Self {
        Term::Sym(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        !matches!(self, Term::Var(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Gt => CmpOp::Le,
        }
    }

    /// The operator with its operands swapped: `a op b` iff `b op.flip() a`.
    pub fn flip(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Gt,
            CmpOp::Le => CmpOp::Ge,
            CmpOp::Gt => CmpOp::Lt,
            CmpOp::Ge => CmpOp::Le,
            other => other,
        }
    }

    pub fn is_ordering(self) -> bool {
        !matches!(self, CmpOp::Eq | CmpOp::Ne)
    }

    pub fn eval<T: Ord>(self, a: T, b: T) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

/// Boolean constraint `ρ` of a constrained type `τ / ρ`.
///
/// `And`/`Or` are kept n-ary and flat when built through [`Predicate::and`]
/// and [`Predicate::or`]. `Bind` is the substitution marker `x ↦ v`; it is
/// semantically an equality but the rewrite rules of constrained types treat it
/// as an instruction to substitute.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Predicate {
    #[default]
    True,
    False,
    And(Vec<Predicate>),
    Or(Vec<Predicate>),
    Not(Box<Predicate>),
    Cmp(Term, CmpOp, Term),
    Bind(String, Term),
    Rel(String, Vec<Term>),
}

impl Predicate {
    pub fn cmp(lhs: Term, op: CmpOp, rhs: Term) -> Self {
        Predicate::Cmp(lhs, op, rhs)
    }

    pub fn bind(var: impl Into<String>, value: Term) -> Self {
        Predicate::Bind(var.into(), value)
    }

    pub fn rel(name: impl Into<String>, args: Vec<Term>) -> Self {
        Predicate::Rel(name.into(), args)
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Predicate::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Predicate::False)
    }

    /// Conjunction; flattens nested `And`, drops `True`, absorbs `False`.
    pub fn and(self, other: Predicate) -> Predicate {
        Predicate::all([self, other])
    }

    pub fn all(parts: impl IntoIterator<Item = Predicate>) -> Predicate {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Predicate::True => {}
                Predicate::False => return Predicate::False,
                Predicate::And(items) => {
                    for item in items {
                        if item.is_false() {
                            return Predicate::False;
                        }
                        if !item.is_true() && !out.contains(&item) {
                            out.push(item);
                        }
                    }
                }
                other => {
                    if !out.contains(&other) {
                        out.push(other)
                    }
                }
            }
        }
        match out.len() {
            0 => Predicate::True,
            1 => out.pop().unwrap(),
            _ => Predicate::And(out),
        }
    }

    pub fn or(self, other: Predicate) -> Predicate {
        Predicate::any([self, other])
    }

    pub fn any(parts: impl IntoIterator<Item = Predicate>) -> Predicate {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Predicate::False => {}
                Predicate::True => return Predicate::True,
                Predicate::Or(items) => {
                    for item in items {
                        if item.is_true() {
                            return Predicate::True;
                        }
                        if !item.is_false() && !out.contains(&item) {
                            out.push(item);
                        }
                    }
                }
                other => {
                    if !out.contains(&other) {
                        out.push(other)
                    }
                }
            }
        }
        match out.len() {
            0 => Predicate::False,
            1 => out.pop().unwrap(),
            _ => Predicate::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Predicate {
        match self {
            Predicate::True => Predicate::False,
            Predicate::False => Predicate::True,
            Predicate::Not(inner) => *inner,
            other => Predicate::Not(Box::new(other)),
        }
    }

    /// Free variables, in sorted order.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term| {
            if let Term::Var(v) = t {
                out.insert(v.clone());
            }
        };
        match self {
            Predicate::True | Predicate::False => {}
            Predicate::And(ps) | Predicate::Or(ps) => {
                for p in ps {
                    p.collect_vars(out);
                }
            }
            Predicate::Not(p) => p.collect_vars(out),
            Predicate::Cmp(a, _, b) => {
                term(a);
                term(b);
            }
            Predicate::Bind(v, t) => {
                out.insert(v.clone());
                if let Term::Var(w) = t {
                    out.insert(w.clone());
                }
            }
            Predicate::Rel(_, args) => args.iter().for_each(term),
        }
    }

    /// Concrete symbols mentioned anywhere in the predicate.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk_terms(&mut |t| {
            if let Term::Sym(s) = t {
                out.insert(s.clone());
            }
        });
        out
    }

    pub(crate) fn walk_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Predicate::True | Predicate::False => {}
            Predicate::And(ps) | Predicate::Or(ps) => ps.iter().for_each(|p| p.walk_terms(f)),
            Predicate::Not(p) => p.walk_terms(f),
            Predicate::Cmp(a, _, b) => {
                f(a);
                f(b);
            }
            Predicate::Bind(v, t) => {
                f(&Term::Var(v.clone()));
                f(t);
            }
            Predicate::Rel(_, args) => args.iter().for_each(f),
        }
    }

    /// Replace variables by terms. Variables without a mapping are left alone.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Predicate {
        let sub = |t: &Term| match t {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        };
        match self {
            Predicate::True | Predicate::False => self.clone(),
            Predicate::And(ps) => Predicate::all(ps.iter().map(|p| p.substitute(map))),
            Predicate::Or(ps) => Predicate::any(ps.iter().map(|p| p.substitute(map))),
            Predicate::Not(p) => p.substitute(map).not(),
            Predicate::Cmp(a, op, b) => Predicate::Cmp(sub(a), *op, sub(b)),
            Predicate::Bind(v, t) => match map.get(v) {
                // A binding whose variable has been replaced becomes a plain equality.
                Some(value) => Predicate::Cmp(value.clone(), CmpOp::Eq, sub(t)),
                None => Predicate::Bind(v.clone(), sub(t)),
            },
            Predicate::Rel(name, args) => {
                Predicate::Rel(name.clone(), args.iter().map(sub).collect())
            }
        }
    }

    /// Evaluate ground atoms and re-normalize connectives. Relations are left
    /// untouched because their interpretation lives in the universe.
    pub fn simplify(&self) -> Predicate {
        match self {
            Predicate::True | Predicate::False | Predicate::Rel(..) => self.clone(),
            Predicate::And(ps) => Predicate::all(ps.iter().map(Predicate::simplify)),
            Predicate::Or(ps) => Predicate::any(ps.iter().map(Predicate::simplify)),
            Predicate::Not(p) => match p.simplify() {
                Predicate::Cmp(a, op, b) => Predicate::Cmp(a, op.negate(), b),
                other => other.not(),
            },
            Predicate::Cmp(a, op, b) => eval_ground(a, *op, b)
                .map(Predicate::from)
                .unwrap_or_else(|| canonical_cmp(a.clone(), *op, b.clone())),
            Predicate::Bind(v, t) => match t {
                Term::Var(w) if w == v => Predicate::True,
                _ => self.clone(),
            },
        }
    }

    /// Negation normal form: `Not` only wraps relations; comparisons absorb it.
    pub fn nnf(&self) -> Predicate {
        fn go(p: &Predicate, neg: bool) -> Predicate {
            match (p, neg) {
                (Predicate::True, false) | (Predicate::False, true) => Predicate::True,
                (Predicate::True, true) | (Predicate::False, false) => Predicate::False,
                (Predicate::And(ps), false) | (Predicate::Or(ps), true) => {
                    Predicate::all(ps.iter().map(|q| go(q, neg)))
                }
                (Predicate::Or(ps), false) | (Predicate::And(ps), true) => {
                    Predicate::any(ps.iter().map(|q| go(q, neg)))
                }
                (Predicate::Not(q), _) => go(q, !neg),
                (Predicate::Cmp(a, op, b), _) => {
                    let op = if neg { op.negate() } else { *op };
                    Predicate::Cmp(a.clone(), op, b.clone())
                }
                (Predicate::Bind(v, t), _) => {
                    let op = if neg { CmpOp::Ne } else { CmpOp::Eq };
                    Predicate::Cmp(Term::Var(v.clone()), op, t.clone())
                }
                (Predicate::Rel(..), false) => p.clone(),
                (Predicate::Rel(..), true) => Predicate::Not(Box::new(p.clone())),
            }
        }
        go(self, false)
    }

    /// Top-level conjuncts.
    pub fn conjuncts(&self) -> Vec<Predicate> {
        match self {
            Predicate::True => Vec::new(),
            Predicate::And(ps) => ps.clone(),
            other => vec![other.clone()],
        }
    }

    /// A canonical form used when comparing predicates up to commutativity of
    /// `And`/`Or` and orientation of equalities.
    pub fn canonical(&self) -> Predicate {
        match self.simplify() {
            Predicate::And(ps) => {
                let mut items: Vec<_> = ps.iter().map(Predicate::canonical).collect();
                items.sort();
                items.dedup();
                Predicate::all(items)
            }
            Predicate::Or(ps) => {
                let mut items: Vec<_> = ps.iter().map(Predicate::canonical).collect();
                items.sort();
                items.dedup();
                Predicate::any(items)
            }
            Predicate::Not(p) => p.canonical().not(),
            Predicate::Bind(v, t) => canonical_cmp(Term::Var(v), CmpOp::Eq, t),
            other => other,
        }
    }
}

impl From<bool> for Predicate {
    fn from(b: bool) -> Self {
        if b {
            Predicate::True
        } else {
            Predicate::False
        }
    }
}

/// Truth value of a comparison between ground terms, if both sides are ground
/// and comparable (or the same variable on both sides).
pub(crate) fn eval_ground(a: &Term, op: CmpOp, b: &Term) -> Option<bool> {
    match (a, b) {
        (Term::Int(x), Term::Int(y)) => Some(op.eval(x, y)),
        (Term::Sym(x), Term::Sym(y)) => match op {
            CmpOp::Eq => Some(x == y),
            CmpOp::Ne => Some(x != y),
            _ => None,
        },
        // A symbol never equals an integer.
        (Term::Sym(_), Term::Int(_)) | (Term::Int(_), Term::Sym(_)) => match op {
            CmpOp::Eq => Some(false),
            CmpOp::Ne => Some(true),
            _ => None,
        },
        (Term::Var(x), Term::Var(y)) if x == y => Some(op.eval(0, 0)),
        _ => None,
    }
}

/// Orient comparisons with a variable on the left and, between two
/// variables, the lexicographically smaller one first.
fn canonical_cmp(a: Term, op: CmpOp, b: Term) -> Predicate {
    let swap = match (&a, &b) {
        (Term::Var(x), Term::Var(y)) => y < x,
        (Term::Var(_), _) => false,
        (_, Term::Var(_)) => true,
        _ => false,
    };
    if swap {
        Predicate::Cmp(b, op.flip(), a)
    } else {
        Predicate::Cmp(a, op, b)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Int(n) => write!(f, "{n}"),
            Term::Sym(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // precedence: Or = 1, And = 2, unary/atoms = 3
        fn prec(p: &Predicate) -> u8 {
            match p {
                Predicate::Or(_) => 1,
                Predicate::And(_) => 2,
                _ => 3,
            }
        }
        fn write_child(f: &mut fmt::Formatter<'_>, p: &Predicate, min: u8) -> fmt::Result {
            if prec(p) < min {
                write!(f, "({p})")
            } else {
                write!(f, "{p}")
            }
        }
        match self {
            Predicate::True => f.write_str("true"),
            Predicate::False => f.write_str("false"),
            Predicate::And(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" && ")?;
                    }
                    write_child(f, p, 3)?;
                }
                Ok(())
            }
            Predicate::Or(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" || ")?;
                    }
                    write_child(f, p, 2)?;
                }
                Ok(())
            }
            Predicate::Not(p) => match **p {
                Predicate::True | Predicate::False | Predicate::Rel(..) | Predicate::Not(_) => {
                    write!(f, "~{p}")
                }
                _ => write!(f, "~({p})"),
            },
            Predicate::Cmp(a, op, b) => write!(f, "{a} {op} {b}"),
            Predicate::Bind(v, t) => write!(f, "{v} ↦ {t}"),
            Predicate::Rel(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn false_absorbs_conjunction() {
        let p = Predicate::cmp(v("x"), CmpOp::Lt, Term::Int(3)).and(Predicate::False);
        assert_eq!(p, Predicate::False);
    }

    #[test]
    fn and_flattens() {
        let a = Predicate::cmp(v("a"), CmpOp::Lt, Term::Int(1));
        let b = Predicate::cmp(v("b"), CmpOp::Lt, Term::Int(1));
        let c = Predicate::cmp(v("c"), CmpOp::Lt, Term::Int(1));
        let p = a.clone().and(b.clone()).and(c.clone());
        assert_eq!(p, Predicate::And(vec![a, b, c]));
    }

    #[test]
    fn simplify_ground_comparisons() {
        let p = Predicate::cmp(Term::Int(5), CmpOp::Gt, Term::Int(0));
        assert_eq!(p.simplify(), Predicate::True);
        let q = Predicate::cmp(Term::sym("Int"), CmpOp::Eq, Term::sym("String"));
        assert_eq!(q.simplify(), Predicate::False);
        let r = Predicate::cmp(Term::Int(3), CmpOp::Lt, v("n")).simplify();
        assert_eq!(r, Predicate::cmp(v("n"), CmpOp::Gt, Term::Int(3)));
    }

    #[test]
    fn nnf_pushes_negation_into_comparisons() {
        let p = Predicate::cmp(v("x"), CmpOp::Lt, Term::Int(10))
            .or(Predicate::rel("inherit", vec![v("x"), Term::sym("User")]))
            .not();
        let n = p.nnf();
        assert_eq!(
            n,
            Predicate::And(vec![
                Predicate::cmp(v("x"), CmpOp::Ge, Term::Int(10)),
                Predicate::Not(Box::new(Predicate::rel(
                    "inherit",
                    vec![v("x"), Term::sym("User")]
                ))),
            ])
        );
    }

    #[test]
    fn display_parenthesizes_by_precedence() {
        let a = Predicate::cmp(v("a"), CmpOp::Lt, Term::Int(1));
        let b = Predicate::cmp(v("b"), CmpOp::Lt, Term::Int(1));
        let c = Predicate::cmp(v("c"), CmpOp::Eq, Term::sym("K"));
        let p = Predicate::And(vec![Predicate::Or(vec![a.clone(), b.clone()]), c.clone()]);
        assert_eq!(p.to_string(), "(a < 1 || b < 1) && c = K");
        assert_eq!(a.not().to_string(), "~(a < 1)");
        assert_eq!(Predicate::bind("n", Term::Int(5)).to_string(), "n ↦ 5");
    }
}
