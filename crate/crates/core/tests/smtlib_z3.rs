//! Cross-check the built-in solver against z3 on the exported SMT-LIB
//! script. Skipped when no `z3` binary is on the path.

mod support;

use std::io::Write;
use std::process::{Command, Stdio};

use coflow_core::constraints::{emit_smtlib, satisfiable};
use coflow_core::{Predicate, Universe};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use support::gen;

fn z3_available() -> bool {
    Command::new("z3")
        .arg("-version")
        .output()
        .is_ok_and(|o| o.status.success())
}

fn z3_sat(script: &str) -> bool {
    let mut child = Command::new("z3")
        .arg("-in")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("spawn z3");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(script.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    match text.trim() {
        "sat" => true,
        "unsat" => false,
        other => panic!("z3 said {other:?} for\n{script}"),
    }
}

#[test]
fn solver_agrees_with_z3() {
    if !z3_available() {
        eprintln!("z3 not found; skipping");
        return;
    }
    let u = Universe::new(gen::SYMBOLS);
    let mut runner = TestRunner::new(Config {
        cases: 300,
        ..Config::default()
    });
    runner
        .run(&gen::predicate(), |p: Predicate| {
            let ours = satisfiable(&p, &u).unwrap();
            let script = emit_smtlib(&p, &u);
            prop_assert_eq!(ours, z3_sat(&script), "{}", p);
            Ok(())
        })
        .unwrap();
}

#[test]
fn relations_are_closed_world_in_both() {
    if !z3_available() {
        return;
    }
    let mut u = Universe::new(gen::SYMBOLS);
    u.register_relation("inherit", [vec!["B".to_string(), "A".to_string()]])
        .unwrap();
    for (src, expected) in [
        ("inherit(s, A) && s != B", false),
        ("inherit(s, A)", true),
        ("~inherit(B, t) && t = A", false),
        ("inherit(s, t) || s = t", true),
    ] {
        let p = coflow_core::calculus::parse_predicate(src).unwrap();
        assert_eq!(satisfiable(&p, &u).unwrap(), expected, "{src}");
        assert_eq!(z3_sat(&emit_smtlib(&p, &u)), expected, "{src}");
    }
}
