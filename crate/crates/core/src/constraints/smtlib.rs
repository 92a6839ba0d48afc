//! SMT-LIB v2 export of a satisfiability query, for cross-checking the
//! built-in solver against an external one.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{infer_domains, CmpOp, Domain, Predicate, Term, Universe};

/// A self-contained script: the `Concrete` sort enumerating the universe,
/// one constant per variable, each relation as a closed-world function, the
/// expression, and `(check-sat)`. Output is deterministic.
pub fn emit_smtlib(expr: &Predicate, u: &Universe) -> String {
    let mut out = String::new();
    let mut symbols: BTreeSet<String> = u.symbols().clone();
    symbols.extend(expr.symbols());
    out.push_str("(set-logic ALL)\n");
    if symbols.is_empty() {
        out.push_str("(declare-sort Concrete 0)\n");
    } else {
        out.push_str("(declare-datatype Concrete (");
        for (i, s) in symbols.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "({})", quote(s));
        }
        out.push_str("))\n");
    }
    let domains = infer_domains(expr, u).unwrap_or_default();
    for v in expr.vars() {
        let sort = match domains.get(&v) {
            Some(Domain::Concrete) => "Concrete",
            _ => "Int",
        };
        let _ = writeln!(out, "(declare-const {} {sort})", quote(&v));
    }
    for (name, arity, tuples) in u.relations() {
        let params: Vec<String> = (0..arity).map(|i| format!("a{i}")).collect();
        let sorts = vec!["Concrete"; arity].join(" ");
        let _ = writeln!(out, "(declare-fun {} ({sorts}) Bool)", quote(name));
        for t in tuples {
            let args: Vec<String> = t.iter().map(|s| quote(s)).collect();
            let _ = writeln!(out, "(assert ({} {}))", quote(name), args.join(" "));
        }
        let known: Vec<String> = tuples
            .iter()
            .map(|t| {
                let eqs: Vec<String> = params
                    .iter()
                    .zip(t)
                    .map(|(p, s)| format!("(= {p} {})", quote(s)))
                    .collect();
                format!("(and {})", eqs.join(" "))
            })
            .collect();
        let r = if known.is_empty() {
            "true".to_string()
        } else {
            format!("(not (or {}))", known.join(" "))
        };
        let binders: Vec<String> = params.iter().map(|p| format!("({p} Concrete)")).collect();
        let _ = writeln!(
            out,
            "(assert (forall ({}) (let ((r {r})) (=> r (= ({} {}) false)))))",
            binders.join(" "),
            quote(name),
            params.join(" ")
        );
    }
    let _ = writeln!(out, "(assert {})", expr_to_smt(expr));
    out.push_str("(check-sat)\n");
    out
}

fn quote(name: &str) -> String {
    if !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
    {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

fn term(t: &Term) -> String {
    match t {
        Term::Var(v) | Term::Sym(v) => quote(v),
        Term::Int(n) if *n < 0 => format!("(- {})", n.unsigned_abs()),
        Term::Int(n) => n.to_string(),
    }
}

fn expr_to_smt(p: &Predicate) -> String {
    let list = |op: &str, ps: &[Predicate]| {
        let parts: Vec<String> = ps.iter().map(expr_to_smt).collect();
        format!("({op} {})", parts.join(" "))
    };
    match p {
        Predicate::True => "true".into(),
        Predicate::False => "false".into(),
        Predicate::And(ps) => list("and", ps),
        Predicate::Or(ps) => list("or", ps),
        Predicate::Not(q) => format!("(not {})", expr_to_smt(q)),
        Predicate::Cmp(a, op, b) => {
            let (a, b) = (term(a), term(b));
            match op {
                CmpOp::Ne => format!("(not (= {a} {b}))"),
                CmpOp::Eq => format!("(= {a} {b})"),
                other => format!("({} {a} {b})", other.symbol()),
            }
        }
        Predicate::Bind(v, t) => format!("(= {} {})", quote(v), term(t)),
        Predicate::Rel(name, args) => {
            let args: Vec<String> = args.iter().map(term).collect();
            format!("({} {})", quote(name), args.join(" "))
        }
    }
}
