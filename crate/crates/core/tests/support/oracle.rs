//! Exhaustive reference semantics for ground instance lists: every choice of
//! yielding instance and every matching receiver is explored. Only plain
//! concrete payloads are handled (no starts, no constraints).

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use coflow_core::calculus::Type;
use coflow_core::{Direction, FlowItem};
use rand::Rng;

pub type Op = (Direction, u8);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    flows: Vec<Vec<Op>>,
    alive: Vec<bool>,
    pending: Option<(u8, bool)>,
    externals: Vec<u8>,
    main_done: bool,
}

/// Residual verdicts reachable from the initial configuration; `true` means a
/// path ends in `0`.
pub fn reachable_outcomes(instances: &[Vec<Op>]) -> BTreeSet<bool> {
    let mut out = BTreeSet::new();
    let n = instances.len();
    let start = Node {
        flows: instances.to_vec(),
        alive: (0..n).map(|i| i == 0 || !instances[i].is_empty()).collect(),
        pending: None,
        externals: Vec::new(),
        main_done: false,
    };
    let mut seen = HashSet::new();
    let mut stack = vec![start];
    while let Some(node) = stack.pop() {
        if !seen.insert(node.clone()) {
            continue;
        }
        // Main finished through communication and no value of its own waits.
        if node.main_done && !matches!(node.pending, Some((_, true))) {
            out.insert(node.externals.is_empty());
            continue;
        }
        if let Some((ty, _)) = node.pending {
            let receivers: Vec<usize> = (0..n)
                .filter(|&j| {
                    node.alive[j] && node.flows[j].first() == Some(&(Direction::Receive, ty))
                })
                .collect();
            if receivers.is_empty() {
                let mut next = node.clone();
                next.externals.push(ty);
                next.pending = None;
                stack.push(next);
            }
            for j in receivers {
                let mut next = node.clone();
                next.flows[j].remove(0);
                if j == 0 && next.flows[0].is_empty() {
                    next.main_done = true;
                }
                next.pending = None;
                sweep(&mut next);
                stack.push(next);
            }
            continue;
        }
        let yielders: Vec<usize> = (0..n)
            .filter(|&i| {
                node.alive[i] && matches!(node.flows[i].first(), Some((Direction::Yield, _)))
            })
            .collect();
        if yielders.is_empty() {
            let stuck = (0..n).any(|i| node.alive[i] && !node.flows[i].is_empty());
            out.insert(node.externals.is_empty() && !stuck);
            continue;
        }
        for i in yielders {
            let mut next = node.clone();
            let (_, ty) = next.flows[i].remove(0);
            if i == 0 && next.flows[0].is_empty() {
                next.main_done = true;
            }
            next.pending = Some((ty, i == 0));
            sweep(&mut next);
            stack.push(next);
        }
    }
    out
}

fn sweep(node: &mut Node) {
    for i in 0..node.flows.len() {
        if node.flows[i].is_empty() && !(i == 0 && node.main_done) {
            node.alive[i] = false;
        }
    }
}

pub const TYPES: [&str; 3] = ["A", "B", "C"];

pub fn random_instance(rng: &mut impl Rng) -> Vec<Vec<Op>> {
    let count = rng.gen_range(1..=4);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(0..=3);
            (0..len)
                .map(|_| {
                    let d = if rng.gen_bool(0.5) {
                        Direction::Yield
                    } else {
                        Direction::Receive
                    };
                    (d, rng.gen_range(0..TYPES.len() as u8))
                })
                .collect()
        })
        .collect()
}

pub fn to_types(instances: &[Vec<Op>]) -> Vec<Type> {
    instances
        .iter()
        .map(|flow| {
            Type::instance(
                flow.iter()
                    .map(|&(d, t)| FlowItem::new(d, Type::concrete(TYPES[t as usize])))
                    .collect(),
            )
        })
        .collect()
}

pub fn render(instances: &[Vec<Op>]) -> String {
    to_types(instances)
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
