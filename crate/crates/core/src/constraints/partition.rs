//! Splitting the value space of condition variables into analysis cases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::solver::{eval_total, infer_domains, Interpretation};
use super::{CmpOp, ConstraintError, Domain, Predicate, Term, Universe};

/// A closed integer interval; `None` bounds are unbounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Self {
        Interval {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn unbounded() -> Self {
        Interval::default()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo.is_none_or(|l| x >= l) && self.hi.is_none_or(|h| x <= h)
    }

    /// The interval as a predicate over `var`.
    pub fn to_predicate(&self, var: &str) -> Predicate {
        let v = || Term::var(var.to_string());
        match (self.lo, self.hi) {
            (Some(l), Some(h)) if l == h => Predicate::cmp(v(), CmpOp::Eq, Term::Int(l)),
            (lo, hi) => Predicate::all([
                lo.map_or(Predicate::True, |l| {
                    Predicate::cmp(v(), CmpOp::Ge, Term::Int(l))
                }),
                hi.map_or(Predicate::True, |h| {
                    Predicate::cmp(v(), CmpOp::Le, Term::Int(h))
                }),
            ]),
        }
    }

    fn label(&self, var: &str) -> String {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) if l == h => format!("{var} = {l}"),
            (Some(l), Some(h)) => format!("{var} ∈ [{l}, {h}]"),
            (Some(l), None) => format!("{var} ≥ {l}"),
            (None, Some(h)) => format!("{var} ≤ {h}"),
            (None, None) => format!("{var} ∈ ℤ"),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.map_or("-∞".to_string(), |l| l.to_string());
        let hi = self.hi.map_or("+∞".to_string(), |h| h.to_string());
        write!(f, "[{lo}, {hi}]")
    }
}

/// One analysis case: a human-readable label and the constraint that
/// selects it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub label: String,
    pub constraint: Predicate,
}

/// Split the values of every variable mentioned in `guards` into maximal
/// groups on which each guard atom has a constant truth value, and return
/// the product of those groups. Integer variables range over `domains`
/// (unbounded when absent); concrete variables over the universe.
pub fn partition(
    guards: &[Predicate],
    domains: &BTreeMap<String, Interval>,
    u: &Universe,
) -> Result<Vec<Case>, ConstraintError> {
    let all = Predicate::all(guards.iter().cloned());
    let sorts = infer_domains(&all, u)?;
    let mut atoms: BTreeMap<String, Vec<Predicate>> = BTreeMap::new();
    for g in guards {
        collect_atoms(&g.nnf(), &mut atoms)?;
    }
    let mut per_var: Vec<Vec<Case>> = Vec::new();
    for (var, var_atoms) in &atoms {
        let cells = match sorts.get(var).copied().unwrap_or(Domain::Int) {
            Domain::Int => {
                let range = domains.get(var).copied().unwrap_or_default();
                int_cells(var, var_atoms, range, u)
            }
            Domain::Concrete => {
                let mut symbols: BTreeSet<String> = u.symbols().clone();
                symbols.extend(all.symbols());
                concrete_cells(var, var_atoms, &symbols, u)
            }
        };
        per_var.push(cells);
    }
    let mut cases = vec![Case {
        label: String::new(),
        constraint: Predicate::True,
    }];
    for cells in per_var {
        let mut next = Vec::with_capacity(cases.len() * cells.len());
        for c in &cases {
            for cell in &cells {
                let label = if c.label.is_empty() {
                    cell.label.clone()
                } else {
                    format!("{}, {}", c.label, cell.label)
                };
                next.push(Case {
                    label,
                    constraint: c.constraint.clone().and(cell.constraint.clone()),
                });
            }
        }
        cases = next;
    }
    Ok(cases)
}

fn collect_atoms(
    p: &Predicate,
    out: &mut BTreeMap<String, Vec<Predicate>>,
) -> Result<(), ConstraintError> {
    match p {
        Predicate::True | Predicate::False => Ok(()),
        Predicate::And(ps) | Predicate::Or(ps) => ps.iter().try_for_each(|q| collect_atoms(q, out)),
        atom => {
            let vars = atom.vars();
            if vars.len() > 1 {
                return Err(ConstraintError::UnsupportedSplit(atom.to_string()));
            }
            if let Some(v) = vars.into_iter().next() {
                let list = out.entry(v).or_default();
                if !list.contains(atom) {
                    list.push(atom.clone());
                }
            }
            Ok(())
        }
    }
}

fn truth(var: &str, value: Term, atoms: &[Predicate], u: &Universe) -> Vec<Option<bool>> {
    let a = Interpretation::from([(var.to_string(), value)]);
    atoms.iter().map(|p| eval_total(p, &a, u)).collect()
}

fn int_cells(var: &str, atoms: &[Predicate], range: Interval, u: &Universe) -> Vec<Case> {
    // Points where a new segment starts.
    let mut starts = BTreeSet::new();
    for atom in atoms {
        let Predicate::Cmp(a, op, b) = atom else {
            continue;
        };
        let (op, c) = match (a, b) {
            (Term::Var(_), Term::Int(c)) => (*op, *c),
            (Term::Int(c), Term::Var(_)) => (op.flip(), *c),
            _ => continue,
        };
        match op {
            CmpOp::Lt | CmpOp::Ge => {
                starts.insert(c);
            }
            CmpOp::Le | CmpOp::Gt => {
                starts.insert(c.saturating_add(1));
            }
            CmpOp::Eq | CmpOp::Ne => {
                starts.insert(c);
                starts.insert(c.saturating_add(1));
            }
        }
    }
    let starts: Vec<i64> = starts
        .into_iter()
        .filter(|&s| range.lo.is_none_or(|l| s > l) && range.hi.is_none_or(|h| s <= h))
        .collect();
    let mut segments = Vec::with_capacity(starts.len() + 1);
    let mut lo = range.lo;
    for &s in &starts {
        segments.push(Interval {
            lo,
            hi: Some(s - 1),
        });
        lo = Some(s);
    }
    segments.push(Interval { lo, hi: range.hi });

    let mut merged: Vec<(Interval, Vec<Option<bool>>)> = Vec::new();
    for seg in segments {
        let probe = seg.lo.or(seg.hi).unwrap_or(0);
        let vector = truth(var, Term::Int(probe), atoms, u);
        match merged.last_mut() {
            Some((prev, v)) if *v == vector => prev.hi = seg.hi,
            _ => merged.push((seg, vector)),
        }
    }
    merged
        .into_iter()
        .map(|(iv, _)| Case {
            label: iv.label(var),
            constraint: iv.to_predicate(var),
        })
        .collect()
}

fn concrete_cells(
    var: &str,
    atoms: &[Predicate],
    symbols: &BTreeSet<String>,
    u: &Universe,
) -> Vec<Case> {
    let mut groups: Vec<(Vec<Option<bool>>, Vec<String>)> = Vec::new();
    for s in symbols {
        let vector = truth(var, Term::Sym(s.clone()), atoms, u);
        match groups.iter_mut().find(|(v, _)| *v == vector) {
            Some((_, members)) => members.push(s.clone()),
            None => groups.push((vector, vec![s.clone()])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let constraint = Predicate::any(
                members
                    .iter()
                    .map(|m| Predicate::cmp(Term::var(var), CmpOp::Eq, Term::sym(m.clone()))),
            );
            let label = if members.len() == 1 {
                format!("{var} = {}", members[0])
            } else {
                format!("{var} ∈ {{{}}}", members.join(", "))
            };
            Case { label, constraint }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::parse_predicate;

    #[test]
    fn weekday_splits_into_four_groups() {
        let guards = [
            parse_predicate("1 <= weekday <= 3").unwrap(),
            parse_predicate("3 <= weekday <= 5").unwrap(),
        ];
        let domains = BTreeMap::from([("weekday".to_string(), Interval::new(1, 7))]);
        let cases = partition(&guards, &domains, &Universe::default()).unwrap();
        let labels: Vec<_> = cases.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(
            labels,
            [
                "weekday ∈ [1, 2]",
                "weekday = 3",
                "weekday ∈ [4, 5]",
                "weekday ∈ [6, 7]"
            ]
        );
    }

    #[test]
    fn unbounded_variable() {
        let guards = [parse_predicate("v < 10").unwrap()];
        let cases = partition(&guards, &BTreeMap::new(), &Universe::default()).unwrap();
        let labels: Vec<_> = cases.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["v ≤ 9", "v ≥ 10"]);
    }

    #[test]
    fn product_of_variables() {
        let guards = [parse_predicate("a = 1 || b > 0").unwrap()];
        let domains = BTreeMap::from([
            ("a".to_string(), Interval::new(0, 1)),
            ("b".to_string(), Interval::new(0, 1)),
        ]);
        let cases = partition(&guards, &domains, &Universe::default()).unwrap();
        assert_eq!(cases.len(), 4);
        assert_eq!(cases[0].label, "a = 0, b = 0");
    }

    #[test]
    fn relational_atoms_are_rejected() {
        let guards = [parse_predicate("a < b").unwrap()];
        assert!(matches!(
            partition(&guards, &BTreeMap::new(), &Universe::default()),
            Err(ConstraintError::UnsupportedSplit(_))
        ));
    }
}
