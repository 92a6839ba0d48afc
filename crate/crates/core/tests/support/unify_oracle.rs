//! Brute-force reference for `Match` on small types over the symbols
//! `A`, `B`, `C`.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use coflow_core::calculus::{flatten, Type};
use coflow_core::Term;
use proptest::prelude::*;

use super::gen;

/// Ground denotation: unions enumerate alternatives, sequences are item
/// lists and a non-sequence compares as a one-item list.
#[derive(Clone, Debug, PartialEq)]
enum Shape {
    Sym(String),
    List(Vec<Shape>),
    Tup(Vec<Shape>),
}

fn shapes(t: &Type) -> Vec<Shape> {
    match t {
        Type::Concrete(k) => vec![Shape::Sym(k.clone())],
        Type::Zero => vec![Shape::List(Vec::new())],
        Type::Union(l, r) => {
            let mut out = shapes(l);
            out.extend(shapes(r));
            out
        }
        Type::Seq(items) => product(items).into_iter().map(Shape::List).collect(),
        Type::Tuple(items) => product(items).into_iter().map(Shape::Tup).collect(),
        other => panic!("not ground: {other}"),
    }
}

fn product(items: &[Type]) -> Vec<Vec<Shape>> {
    let mut acc = vec![Vec::new()];
    for item in items {
        let alts = shapes(item);
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                alts.iter().map(move |a| {
                    let mut p = prefix.clone();
                    p.push(a.clone());
                    p
                })
            })
            .collect();
    }
    acc
}

fn items(s: &Shape) -> Vec<Shape> {
    match s {
        Shape::List(xs) => xs.clone(),
        other => vec![other.clone()],
    }
}

fn same(a: &Shape, b: &Shape) -> bool {
    match (a, b) {
        (Shape::List(_), _) | (_, Shape::List(_)) => {
            let (xs, ys) = (items(a), items(b));
            xs.len() == ys.len() && xs.iter().zip(&ys).all(|(x, y)| same(x, y))
        }
        (Shape::Sym(x), Shape::Sym(y)) => x == y,
        (Shape::Tup(xs), Shape::Tup(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| same(x, y))
        }
        _ => false,
    }
}

pub fn oracle_ground(a: &Type, b: &Type) -> bool {
    let (sa, sb) = (shapes(a), shapes(b));
    sa.iter().any(|x| sb.iter().any(|y| same(x, y)))
}

fn vars_of(t: &Type, out: &mut BTreeSet<String>) {
    t.visit(&mut |s| {
        if let Type::Var(v) = s {
            out.insert(v.clone());
        }
    });
}

fn assign(t: &Type, sigma: &BTreeMap<String, String>) -> Type {
    match t {
        Type::Var(v) => Type::Concrete(sigma[v].clone()),
        Type::Seq(xs) => Type::Seq(xs.iter().map(|x| assign(x, sigma)).collect()),
        Type::Tuple(xs) => Type::Tuple(xs.iter().map(|x| assign(x, sigma)).collect()),
        other => other.clone(),
    }
}

/// Enumerate every assignment of the free variables; a binding is expected
/// exactly when all satisfying assignments agree on it.
pub fn oracle_open(a: &Type, b: &Type) -> Option<BTreeMap<String, Term>> {
    let mut vars = BTreeSet::new();
    vars_of(a, &mut vars);
    vars_of(b, &mut vars);
    let vars: Vec<String> = vars.into_iter().collect();
    let mut solutions: Vec<BTreeMap<String, String>> = Vec::new();
    let n = gen::SYMBOLS.len().pow(vars.len() as u32);
    for code in 0..n {
        let mut c = code;
        let sigma: BTreeMap<String, String> = vars
            .iter()
            .map(|v| {
                let k = gen::SYMBOLS[c % gen::SYMBOLS.len()].to_string();
                c /= gen::SYMBOLS.len();
                (v.clone(), k)
            })
            .collect();
        if flatten(&assign(a, &sigma)) == flatten(&assign(b, &sigma)) {
            solutions.push(sigma);
        }
    }
    let first = solutions.first()?;
    Some(
        vars.iter()
            .filter(|v| solutions.iter().all(|s| s[*v] == first[*v]))
            .map(|v| (v.clone(), Term::Sym(first[v].clone())))
            .collect(),
    )
}

pub fn correlated<S: Strategy<Value = Type> + Clone>(s: S) -> impl Strategy<Value = (Type, Type)> {
    (s.clone(), s, any::<bool>())
        .prop_map(|(a, b, copy)| if copy { (a.clone(), a) } else { (a, b) })
}
