//! A decision procedure for the predicate fragment used by constrained
//! types: equalities over the finite concrete universe, closed-world
//! relations, and comparisons between integer variables and constants.
//!
//! Disjunctions are split lazily; each conjunction is solved by backtracking
//! over finite candidate sets. Integer candidates are the comparison
//! constants shifted by at most `k`, where `k` exceeds the number of integer
//! variables plus disequalities, which is enough room to realize any ordering
//! of the variables between and around the constants.

use std::collections::{BTreeMap, BTreeSet};

use super::{eval_ground, CmpOp, ConditionSet, ConstraintError, Predicate, Term, Universe};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Int,
    Concrete,
}

/// A satisfying assignment of every free variable.
pub type Interpretation = BTreeMap<String, Term>;

/// Infer the sort of every variable, scanning atoms left to right. Variables
/// compared with each other share a sort; unconstrained variables are
/// integers.
pub fn infer_domains(
    expr: &Predicate,
    u: &Universe,
) -> Result<BTreeMap<String, Domain>, ConstraintError> {
    let mut uf = Classes::default();
    scan(expr, u, &mut uf)?;
    let mut out = BTreeMap::new();
    for v in expr.vars() {
        let d = uf.domain(&v).unwrap_or(Domain::Int);
        out.insert(v, d);
    }
    Ok(out)
}

#[derive(Default)]
struct Classes {
    parent: BTreeMap<String, String>,
    domain: BTreeMap<String, Domain>,
}

impl Classes {
    fn root(&mut self, v: &str) -> String {
        let mut cur = v.to_string();
        while let Some(p) = self.parent.get(&cur) {
            if *p == cur {
                break;
            }
            cur = p.clone();
        }
        self.parent
            .entry(cur.clone())
            .or_insert_with(|| cur.clone());
        cur
    }

    fn domain(&mut self, v: &str) -> Option<Domain> {
        let r = self.root(v);
        self.domain.get(&r).copied()
    }

    fn assign(&mut self, v: &str, d: Domain) -> Result<(), ConstraintError> {
        let r = self.root(v);
        match self.domain.get(&r) {
            Some(&old) if old != d => Err(ConstraintError::DomainConflict(v.to_string())),
            _ => {
                self.domain.insert(r, d);
                Ok(())
            }
        }
    }

    fn union(&mut self, a: &str, b: &str) -> Result<(), ConstraintError> {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            return Ok(());
        }
        let da = self.domain.get(&ra).copied();
        let db = self.domain.remove(&rb);
        match (da, db) {
            (Some(x), Some(y)) if x != y => {
                return Err(ConstraintError::DomainConflict(b.to_string()))
            }
            (None, Some(y)) => {
                self.domain.insert(ra.clone(), y);
            }
            _ => {}
        }
        self.parent.insert(rb, ra);
        Ok(())
    }
}

fn scan(p: &Predicate, u: &Universe, uf: &mut Classes) -> Result<(), ConstraintError> {
    match p {
        Predicate::True | Predicate::False => Ok(()),
        Predicate::And(ps) | Predicate::Or(ps) => ps.iter().try_for_each(|q| scan(q, u, uf)),
        Predicate::Not(q) => scan(q, u, uf),
        Predicate::Cmp(a, op, b) => scan_cmp(a, *op, b, uf),
        Predicate::Bind(v, t) => scan_cmp(&Term::Var(v.clone()), CmpOp::Eq, t, uf),
        Predicate::Rel(name, args) => {
            let arity = u
                .arity(name)
                .ok_or_else(|| ConstraintError::UnsupportedPredicate(name.clone()))?;
            if arity != args.len() {
                return Err(ConstraintError::ArityMismatch {
                    name: name.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            for a in args {
                if let Term::Var(v) = a {
                    uf.assign(v, Domain::Concrete)?;
                }
            }
            Ok(())
        }
    }
}

fn scan_cmp(a: &Term, op: CmpOp, b: &Term, uf: &mut Classes) -> Result<(), ConstraintError> {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            uf.union(x, y)?;
            if op.is_ordering() {
                uf.assign(x, Domain::Int)?;
            }
            Ok(())
        }
        (Term::Var(x), Term::Int(_)) | (Term::Int(_), Term::Var(x)) => uf.assign(x, Domain::Int),
        (Term::Var(x), Term::Sym(_)) | (Term::Sym(_), Term::Var(x)) => {
            if op.is_ordering() {
                return Err(ConstraintError::DomainConflict(x.clone()));
            }
            uf.assign(x, Domain::Concrete)
        }
        _ => Ok(()),
    }
}

/// Find a satisfying assignment for `expr`, or `None` if it is unsatisfiable.
pub fn solve(expr: &Predicate, u: &Universe) -> Result<Option<Interpretation>, ConstraintError> {
    let domains = infer_domains(expr, u)?;
    let normal = simplify_in(&expr.nnf(), u);
    if normal.is_false() {
        return Ok(None);
    }
    let vars: Vec<String> = domains.keys().cloned().collect();
    let mut symbols: BTreeSet<String> = u.symbols().clone();
    symbols.extend(expr.symbols());
    let search = Search {
        u,
        domains: &domains,
        vars: &vars,
        symbols: &symbols,
    };
    let mut found = None;
    search.disjuncts(&[normal], &mut Vec::new(), &mut found);
    Ok(found)
}

pub fn satisfiable(expr: &Predicate, u: &Universe) -> Result<bool, ConstraintError> {
    Ok(solve(expr, u)?.is_some())
}

/// True if every model of `context` satisfies `goal`.
pub fn entails(
    context: &Predicate,
    goal: &Predicate,
    u: &Universe,
) -> Result<bool, ConstraintError> {
    Ok(!satisfiable(&context.clone().and(goal.clone().not()), u)?)
}

/// Keep only the bindings of `interp` that are forced by `expr`; everything
/// else stays in the residual predicate.
pub fn unique_bindings(
    expr: &Predicate,
    interp: &Interpretation,
    u: &Universe,
) -> Result<ConditionSet, ConstraintError> {
    let mut bindings = BTreeMap::new();
    for (var, value) in interp {
        let other = expr.clone().and(Predicate::cmp(
            Term::Var(var.clone()),
            CmpOp::Ne,
            value.clone(),
        ));
        if !satisfiable(&other, u)? {
            bindings.insert(var.clone(), value.clone());
        }
    }
    let residual = simplify_in(&expr.substitute(&bindings), u).canonical();
    Ok(ConditionSet { bindings, residual })
}

/// Simplify, additionally evaluating ground relation atoms.
pub(crate) fn simplify_in(p: &Predicate, u: &Universe) -> Predicate {
    match p {
        Predicate::And(ps) => Predicate::all(ps.iter().map(|q| simplify_in(q, u))),
        Predicate::Or(ps) => Predicate::any(ps.iter().map(|q| simplify_in(q, u))),
        Predicate::Not(q) => match simplify_in(q, u) {
            Predicate::Cmp(a, op, b) => Predicate::Cmp(a, op.negate(), b),
            other => other.not(),
        },
        Predicate::Rel(name, args) => match ground_rel(name, args, u) {
            Some(b) => Predicate::from(b),
            None => p.clone(),
        },
        other => other.simplify(),
    }
}

fn ground_rel(name: &str, args: &[Term], u: &Universe) -> Option<bool> {
    let mut syms = Vec::with_capacity(args.len());
    for a in args {
        match a {
            Term::Sym(s) => syms.push(s.as_str()),
            Term::Int(_) => return Some(false),
            Term::Var(_) => return None,
        }
    }
    u.holds(name, &syms)
}

struct Search<'a> {
    u: &'a Universe,
    domains: &'a BTreeMap<String, Domain>,
    vars: &'a [String],
    symbols: &'a BTreeSet<String>,
}

impl Search<'_> {
    /// Split disjunctions lazily, collecting literals of one conjunction.
    fn disjuncts(
        &self,
        pending: &[Predicate],
        lits: &mut Vec<Predicate>,
        found: &mut Option<Interpretation>,
    ) {
        if found.is_some() {
            return;
        }
        let Some((first, rest)) = pending.split_first() else {
            *found = self.conjunction(lits);
            return;
        };
        match first {
            Predicate::True => self.disjuncts(rest, lits, found),
            Predicate::False => {}
            Predicate::And(ps) => {
                let mut next: Vec<Predicate> = ps.clone();
                next.extend_from_slice(rest);
                self.disjuncts(&next, lits, found);
            }
            Predicate::Or(ps) => {
                for p in ps {
                    let mut next = vec![p.clone()];
                    next.extend_from_slice(rest);
                    let mark = lits.len();
                    self.disjuncts(&next, lits, found);
                    lits.truncate(mark);
                    if found.is_some() {
                        return;
                    }
                }
            }
            lit => {
                lits.push(lit.clone());
                self.disjuncts(rest, lits, found);
                lits.pop();
            }
        }
    }

    fn conjunction(&self, lits: &[Predicate]) -> Option<Interpretation> {
        let mut int_consts: BTreeSet<i64> = BTreeSet::from([0]);
        let mut ne_count = 0usize;
        for l in lits {
            l.walk_terms(&mut |t| {
                if let Term::Int(n) = t {
                    int_consts.insert(*n);
                }
            });
            if matches!(l, Predicate::Cmp(_, CmpOp::Ne, _)) {
                ne_count += 1;
            }
        }
        let int_vars = self
            .vars
            .iter()
            .filter(|v| self.domains[*v] == Domain::Int)
            .count();
        let spread = (int_vars + ne_count + 1) as i64;

        let mut candidates: Vec<(String, Vec<Term>)> = Vec::with_capacity(self.vars.len());
        for v in self.vars {
            let cands = match self.domains[v] {
                Domain::Int => {
                    let (lo, hi, holes) = unary_bounds(v, lits)?;
                    let mut set = BTreeSet::new();
                    for c in &int_consts {
                        for d in -spread..=spread {
                            let x = c.saturating_add(d);
                            if lo.is_none_or(|l| x >= l)
                                && hi.is_none_or(|h| x <= h)
                                && !holes.contains(&x)
                            {
                                set.insert(x);
                            }
                        }
                    }
                    set.into_iter().map(Term::Int).collect::<Vec<_>>()
                }
                Domain::Concrete => self
                    .symbols
                    .iter()
                    .map(|s| Term::Sym(s.clone()))
                    .filter(|t| unary_ok(v, t, lits, self.u))
                    .collect(),
            };
            if cands.is_empty() {
                return None;
            }
            candidates.push((v.clone(), cands));
        }
        // Variables with fewer candidates first keep the search narrow.
        candidates.sort_by_key(|(_, c)| c.len());
        let mut assignment = Interpretation::new();
        if self.assign(&candidates, 0, lits, &mut assignment) {
            Some(assignment)
        } else {
            None
        }
    }

    fn assign(
        &self,
        cands: &[(String, Vec<Term>)],
        i: usize,
        lits: &[Predicate],
        a: &mut Interpretation,
    ) -> bool {
        let Some((var, values)) = cands.get(i) else {
            return true;
        };
        for value in values {
            a.insert(var.clone(), value.clone());
            let consistent = lits
                .iter()
                .all(|l| eval_partial(l, a, self.u) != Some(false));
            if consistent && self.assign(cands, i + 1, lits, a) {
                return true;
            }
        }
        a.remove(var);
        false
    }
}

/// Interval and excluded points for `v` implied by `v op const` literals.
/// `None` if the interval is empty.
fn unary_bounds(v: &str, lits: &[Predicate]) -> Option<(Option<i64>, Option<i64>, BTreeSet<i64>)> {
    let (mut lo, mut hi): (Option<i64>, Option<i64>) = (None, None);
    let mut holes = BTreeSet::new();
    let mut raise = |x: i64| lo = Some(lo.map_or(x, |l: i64| l.max(x)));
    let lower = |x: i64, hi: &mut Option<i64>| *hi = Some(hi.map_or(x, |h: i64| h.min(x)));
    for l in lits {
        let Predicate::Cmp(a, op, b) = l else {
            continue;
        };
        let (op, c) = match (a, b) {
            (Term::Var(x), Term::Int(c)) if x == v => (*op, *c),
            (Term::Int(c), Term::Var(x)) if x == v => (op.flip(), *c),
            _ => continue,
        };
        match op {
            CmpOp::Lt => lower(c.saturating_sub(1), &mut hi),
            CmpOp::Le => lower(c, &mut hi),
            CmpOp::Gt => raise(c.saturating_add(1)),
            CmpOp::Ge => raise(c),
            CmpOp::Eq => {
                raise(c);
                lower(c, &mut hi);
            }
            CmpOp::Ne => {
                holes.insert(c);
            }
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) if l > h => None,
        _ => Some((lo, hi, holes)),
    }
}

fn unary_ok(v: &str, value: &Term, lits: &[Predicate], u: &Universe) -> bool {
    let a = Interpretation::from([(v.to_string(), value.clone())]);
    lits.iter().all(|l| {
        let single = l.vars().iter().all(|x| x == v);
        !single || eval_partial(l, &a, u) != Some(false)
    })
}

/// Truth value of a literal under a partial assignment, `None` if some
/// variable is still unassigned.
fn eval_partial(l: &Predicate, a: &Interpretation, u: &Universe) -> Option<bool> {
    let get = |t: &Term| -> Option<Term> {
        match t {
            Term::Var(v) => a.get(v).cloned(),
            other => Some(other.clone()),
        }
    };
    match l {
        Predicate::True => Some(true),
        Predicate::False => Some(false),
        Predicate::Cmp(x, op, y) => {
            let (x, y) = (get(x)?, get(y)?);
            Some(eval_ground(&x, *op, &y).unwrap_or(false))
        }
        Predicate::Rel(name, args) => {
            let args: Vec<Term> = args.iter().map(get).collect::<Option<_>>()?;
            ground_rel(name, &args, u)
        }
        Predicate::Not(inner) => eval_partial(inner, a, u).map(|b| !b),
        Predicate::Bind(v, t) => {
            let (x, y) = (get(&Term::Var(v.clone()))?, get(t)?);
            eval_ground(&x, CmpOp::Eq, &y)
        }
        Predicate::And(ps) => {
            let mut all = Some(true);
            for p in ps {
                match eval_partial(p, a, u) {
                    Some(false) => return Some(false),
                    None => all = None,
                    _ => {}
                }
            }
            all
        }
        Predicate::Or(ps) => {
            let mut any = Some(false);
            for p in ps {
                match eval_partial(p, a, u) {
                    Some(true) => return Some(true),
                    None => any = None,
                    _ => {}
                }
            }
            any
        }
    }
}

/// Evaluate a predicate under a total assignment. Used by tests and oracles.
pub(crate) fn eval_total(p: &Predicate, a: &Interpretation, u: &Universe) -> Option<bool> {
    eval_partial(p, a, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::parse_predicate;

    fn p(s: &str) -> Predicate {
        parse_predicate(s).unwrap()
    }

    fn users() -> Universe {
        let mut u = Universe::new(["Faculty", "User", "Student", "Book"]);
        u.register_relation(
            "inherit",
            vec![
                vec!["Faculty".into(), "User".into()],
                vec!["Student".into(), "User".into()],
            ],
        )
        .unwrap();
        u
    }

    #[test]
    fn solves_symbol_equality() {
        let m = solve(&p("x = Faculty"), &users()).unwrap().unwrap();
        assert_eq!(m["x"], Term::sym("Faculty"));
    }

    #[test]
    fn empty_interval_is_unsat() {
        assert_eq!(
            solve(&p("n > 0 && n < 1"), &Universe::default()).unwrap(),
            None
        );
    }

    #[test]
    fn relation_witness_is_any_member() {
        let u = users();
        let m = solve(&p("inherit(x, User)"), &u).unwrap().unwrap();
        let Term::Sym(x) = &m["x"] else { panic!() };
        assert!(x == "Faculty" || x == "Student");
    }

    #[test]
    fn domain_conflict_is_reported() {
        let err = solve(&p("x = Faculty && x < 3"), &users()).unwrap_err();
        assert_eq!(err, ConstraintError::DomainConflict("x".into()));
        let err = solve(&p("x = y && y = 1 && x = Book"), &users()).unwrap_err();
        assert!(matches!(err, ConstraintError::DomainConflict(_)));
    }

    #[test]
    fn unknown_relation_is_unsupported() {
        let err = solve(&p("likes(x, Book)"), &users()).unwrap_err();
        assert_eq!(err, ConstraintError::UnsupportedPredicate("likes".into()));
    }

    #[test]
    fn variable_orderings_and_disequalities() {
        assert_eq!(
            solve(&p("a < b && b < c && c < a"), &Universe::default()).unwrap(),
            None
        );
        let m = solve(
            &p("a < b && b < c && a >= 0 && c <= 2"),
            &Universe::default(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(
            (m["a"].clone(), m["b"].clone(), m["c"].clone()),
            (Term::Int(0), Term::Int(1), Term::Int(2))
        );
        assert_eq!(
            solve(
                &p("a < b && b < c && a >= 0 && c <= 1"),
                &Universe::default()
            )
            .unwrap(),
            None
        );
        let m = solve(
            &p("x != 0 && x != 1 && x >= 0 && x <= 2"),
            &Universe::default(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(m["x"], Term::Int(2));
    }

    #[test]
    fn uniqueness_filtering() {
        let u = Universe::default();
        let expr = p("j < 5 && j > 0");
        let interp = solve(&expr, &u).unwrap().unwrap();
        let cs = unique_bindings(&expr, &interp, &u).unwrap();
        assert!(cs.bindings.is_empty());
        assert_eq!(cs.residual, p("j < 5 && j > 0").canonical());

        let expr = p("i = 1");
        let interp = solve(&expr, &u).unwrap().unwrap();
        let cs = unique_bindings(&expr, &interp, &u).unwrap();
        assert_eq!(
            cs.bindings,
            BTreeMap::from([("i".to_string(), Term::Int(1))])
        );
        assert!(cs.residual.is_true());

        let users = users();
        let expr = p("x = Faculty");
        let interp = solve(&expr, &users).unwrap().unwrap();
        let cs = unique_bindings(&expr, &interp, &users).unwrap();
        assert_eq!(cs.bindings["x"], Term::sym("Faculty"));
    }

    #[test]
    fn entailment() {
        let u = Universe::default();
        assert!(entails(&p("x >= 1 && x <= 2"), &p("x <= 3"), &u).unwrap());
        assert!(!entails(&p("x >= 1 && x <= 4"), &p("x <= 3"), &u).unwrap());
    }
}
