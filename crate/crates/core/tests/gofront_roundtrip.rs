use std::fs;
use std::path::{Path, PathBuf};

use coflow_core::calculus::{FlowItem, Type};
use coflow_core::gofront::ast::{Decl, Expr, Stmt};
use coflow_core::gofront::{parse_file, print_expr, print_file, translate};
use proptest::prelude::*;

fn go_files() -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let mut out = Vec::new();
    for dir in [
        "corpus/no-deadlock",
        "corpus/deadlock",
        "testdata/listings",
        "testdata/extra",
    ] {
        for entry in fs::read_dir(root.join(dir)).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "go") {
                out.push(path);
            }
        }
    }
    out.sort();
    out
}

#[test]
fn sample_files_survive_print_and_reparse() {
    let files = go_files();
    assert!(files.len() >= 27);
    for path in files {
        let src = fs::read_to_string(&path).unwrap();
        let ast = parse_file(&src).unwrap();
        let printed = print_file(&ast);
        let again =
            parse_file(&printed).unwrap_or_else(|e| panic!("{}: {e}\n{printed}", path.display()));
        assert_eq!(again, ast, "{}", path.display());
        assert_eq!(print_file(&again), printed);
    }
}

fn referenced(t: &Type, out: &mut Vec<String>) {
    t.visit(&mut |sub| {
        if let Type::Start(app) | Type::Inline(app) = sub {
            if let Some(name) = app.def_name() {
                out.push(name.to_string());
            }
        }
    });
}

#[test]
fn coroutine_set_is_closed_and_stable() {
    for path in go_files() {
        let src = fs::read_to_string(&path).unwrap();
        let file = parse_file(&src).unwrap();
        let a = translate(&file).unwrap();
        let b = translate(&file).unwrap();
        assert_eq!(a.definitions, b.definitions, "{}", path.display());
        assert!(a.iterations >= 1);
        for (name, def) in &a.definitions {
            assert!(
                a.coroutines.contains(name),
                "{}: {name} has a definition but is not a coroutine",
                path.display()
            );
            let mut refs = Vec::new();
            referenced(def, &mut refs);
            for r in refs {
                assert!(
                    a.definitions.contains_key(&r),
                    "{}: {name} refers to missing {r}",
                    path.display()
                );
            }
            let Type::CorDef(flow) = def else {
                panic!("{name} is not a definition")
            };
            assert!(flow
                .iter()
                .all(|i| !matches!(i, FlowItem::Yield(Type::Var(_)))));
        }
        // A function calling a coroutine by name is itself one.
        for decl in &file.decls {
            let Decl::Func(f) = decl else { continue };
            if f.recv.is_some() {
                continue;
            }
            let body = f
                .body
                .as_ref()
                .map(|b| format!("{b:?}"))
                .unwrap_or_default();
            for callee in &a.coroutines {
                let direct = format!("Call {{ func: Ident(\"{callee}\")");
                if body.contains(&direct) {
                    assert!(
                        a.coroutines.contains(&f.name),
                        "{}: {} calls {callee}",
                        path.display(),
                        f.name
                    );
                }
            }
        }
    }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["a", "b", "ch", "x"]).prop_map(Expr::ident),
        (0i64..1000).prop_map(Expr::Int),
        Just(Expr::Lit("\"s\"".into())),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        let binop = prop::sample::select(vec![
            "||", "&&", "==", "!=", "<", "<=", ">", ">=", "+", "-", "|", "^", "*", "/", "%", "<<",
            ">>", "&", "&^",
        ]);
        prop_oneof![
            (inner.clone(), binop, inner.clone()).prop_map(|(l, op, r)| Expr::Binary(
                Box::new(l),
                op.to_string(),
                Box::new(r)
            )),
            (
                prop::sample::select(vec!["!", "-", "<-", "^"]),
                inner.clone()
            )
                .prop_map(|(op, e)| Expr::Unary(op.to_string(), Box::new(e))),
            (
                prop::sample::select(vec!["f", "g"]),
                prop::collection::vec(inner.clone(), 0..3)
            )
                .prop_map(|(f, args)| Expr::Call {
                    func: Box::new(Expr::ident(f)),
                    args,
                    spread: false
                }),
            (inner.clone(), prop::sample::select(vec!["next", "Done"]))
                .prop_map(|(e, f)| Expr::Selector(Box::new(e), f.to_string())),
            (inner.clone(), inner).prop_map(|(a, i)| Expr::Index(Box::new(a), Box::new(i))),
        ]
    })
}

/// Negative literals only arise from folding; the parser keeps `-` as an
/// operator, so the generator never builds them.
fn reparse(e: &Expr) -> Result<Expr, String> {
    let src = format!(
        "package main\n\nfunc main() {{\n\t_ = {}\n}}\n",
        print_expr(e)
    );
    let file = parse_file(&src).map_err(|err| format!("{src}: {err}"))?;
    let Some(Decl::Func(f)) = file.decls.into_iter().next() else {
        return Err("no func".into());
    };
    match f.body.unwrap().0.into_iter().next() {
        Some(Stmt::Assign { mut rhs, .. }) => Ok(rhs.remove(0)),
        other => Err(format!("unexpected {other:?}")),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn expressions_round_trip(e in expr()) {
        let back = reparse(&e).map_err(TestCaseError::fail)?;
        prop_assert_eq!(back, e);
    }
}
