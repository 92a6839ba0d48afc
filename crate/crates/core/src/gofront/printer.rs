//! Go source printer. Parentheses are emitted from precedence, so
//! `parse(print(file)) == file` for every tree the parser can produce.

use std::fmt::Write;

use super::ast::*;
use super::parser::precedence;

pub fn print_file(f: &File) -> String {
    let mut p = Printer {
        out: String::new(),
        indent: 0,
    };
    p.file(f);
    p.out
}

pub fn print_expr(e: &Expr) -> String {
    let mut p = Printer {
        out: String::new(),
        indent: 0,
    };
    p.expr(e, false);
    p.out
}

struct Printer {
    out: String,
    indent: usize,
}

impl Printer {
    fn line(&mut self, s: &str) {
        for _ in 0..self.indent {
            self.out.push('\t');
        }
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn file(&mut self, f: &File) {
        self.line(&format!("package {}", f.package));
        for imp in &f.imports {
            self.out.push('\n');
            self.line(&format!("import \"{imp}\""));
        }
        for d in &f.decls {
            self.out.push('\n');
            self.decl(d);
        }
    }

    fn decl(&mut self, d: &Decl) {
        match d {
            Decl::Func(fd) => {
                let mut head = String::from("func ");
                if let Some(r) = &fd.recv {
                    let _ = write!(head, "({}) ", param(r));
                }
                let _ = write!(head, "{}{}", fd.name, signature(&fd.sig));
                match &fd.body {
                    Some(b) => {
                        head.push_str(" {");
                        self.line(&head);
                        self.block_body(b);
                        self.line("}");
                    }
                    None => self.line(&head),
                }
            }
            Decl::Var(specs) => self.specs("var", specs),
            Decl::Const(specs) => self.specs("const", specs),
            Decl::Type(specs) => self.type_specs(specs),
        }
    }

    fn specs(&mut self, kw: &str, specs: &[VarSpec]) {
        if specs.len() == 1 {
            let s = var_spec(&specs[0]);
            self.line(&format!("{kw} {s}"));
        } else {
            self.line(&format!("{kw} ("));
            self.indent += 1;
            for s in specs {
                let s = var_spec(s);
                self.line(&s);
            }
            self.indent -= 1;
            self.line(")");
        }
    }

    fn type_specs(&mut self, specs: &[TypeSpec]) {
        if specs.len() == 1 {
            self.line(&format!(
                "type {} {}",
                specs[0].name,
                type_expr(&specs[0].ty)
            ));
        } else {
            self.line("type (");
            self.indent += 1;
            for s in specs {
                self.line(&format!("{} {}", s.name, type_expr(&s.ty)));
            }
            self.indent -= 1;
            self.line(")");
        }
    }

    fn block_body(&mut self, b: &Block) {
        self.indent += 1;
        for s in &b.0 {
            self.stmt(s);
        }
        self.indent -= 1;
    }

    fn stmt(&mut self, s: &Stmt) {
        match s {
            Stmt::Var(specs) => self.specs("var", specs),
            Stmt::Const(specs) => self.specs("const", specs),
            Stmt::Type(specs) => self.type_specs(specs),
            Stmt::Block(b) => {
                self.line("{");
                self.block_body(b);
                self.line("}");
            }
            Stmt::If(i) => {
                let head = format!("if {} {{", if_header(i));
                self.line(&head);
                self.if_rest(i);
            }
            Stmt::For(f) => {
                let (head, body) = match f {
                    ForStmt::Loop {
                        init: None,
                        cond: None,
                        post: None,
                        body,
                        ..
                    } => ("for {".to_string(), body),
                    ForStmt::Loop {
                        init: None,
                        cond: Some(c),
                        post: None,
                        body,
                        ..
                    } => (format!("for {} {{", expr_str(c, true)), body),
                    ForStmt::Loop {
                        init,
                        cond,
                        post,
                        body,
                        ..
                    } => {
                        let i = init.as_deref().map(simple_stmt).unwrap_or_default();
                        let c = cond.as_ref().map(|c| expr_str(c, true)).unwrap_or_default();
                        let p = post.as_deref().map(simple_stmt).unwrap_or_default();
                        let p = if p.is_empty() { p } else { format!(" {p}") };
                        (format!("for {i}; {c};{p} {{"), body)
                    }
                    ForStmt::Range {
                        key,
                        value,
                        define,
                        over,
                        body,
                        ..
                    } => {
                        let vars: Vec<String> =
                            key.iter().chain(value).map(|e| expr_str(e, true)).collect();
                        let over = expr_str(over, true);
                        if vars.is_empty() {
                            (format!("for range {over} {{"), body)
                        } else {
                            let op = if *define { ":=" } else { "=" };
                            (
                                format!("for {} {op} range {over} {{", vars.join(", ")),
                                body,
                            )
                        }
                    }
                };
                self.line(&head);
                self.block_body(body);
                self.line("}");
            }
            other => {
                let s = simple_stmt(other);
                self.line(&s);
            }
        }
    }

    fn if_rest(&mut self, i: &IfStmt) {
        self.block_body(&i.then);
        match i.els.as_deref() {
            None => self.line("}"),
            Some(Else::Block(b)) => {
                self.line("} else {");
                self.block_body(b);
                self.line("}");
            }
            Some(Else::If(inner)) => {
                let head = format!("}} else if {} {{", if_header(inner));
                self.line(&head);
                self.if_rest(inner);
            }
        }
    }

    /// `header` wraps named composite literals in parentheses.
    fn expr(&mut self, e: &Expr, header: bool) {
        let s = expr_str(e, header);
        self.out.push_str(&s);
    }
}

fn if_header(i: &IfStmt) -> String {
    match &i.init {
        Some(init) => format!("{}; {}", simple_stmt(init), expr_str(&i.cond, true)),
        None => expr_str(&i.cond, true),
    }
}

fn simple_stmt(s: &Stmt) -> String {
    match s {
        Stmt::Expr(e, _) => expr_str(e, true),
        Stmt::Send { chan, value, .. } => {
            format!("{} <- {}", expr_str(chan, true), expr_str(value, true))
        }
        Stmt::IncDec { target, inc, .. } => format!(
            "{}{}",
            expr_str(target, true),
            if *inc { "++" } else { "--" }
        ),
        Stmt::Assign { lhs, op, rhs, .. } => {
            format!("{} {op} {}", list(lhs, true), list(rhs, true))
        }
        Stmt::Go(e, _) => format!("go {}", expr_str(e, false)),
        Stmt::Defer(e, _) => format!("defer {}", expr_str(e, false)),
        Stmt::Return(v, _) if v.is_empty() => "return".to_string(),
        Stmt::Return(v, _) => format!("return {}", list(v, false)),
        Stmt::Break(_) => "break".to_string(),
        Stmt::Continue(_) => "continue".to_string(),
        other => unreachable!("not a simple statement: {other:?}"),
    }
}

fn var_spec(s: &VarSpec) -> String {
    let mut out = s.names.join(", ");
    if let Some(t) = &s.ty {
        let _ = write!(out, " {}", type_expr(t));
    }
    if !s.values.is_empty() {
        let _ = write!(out, " = {}", list(&s.values, false));
    }
    out
}

fn list(es: &[Expr], header: bool) -> String {
    es.iter()
        .map(|e| expr_str(e, header))
        .collect::<Vec<_>>()
        .join(", ")
}

fn param(p: &Param) -> String {
    match &p.name {
        Some(n) => format!("{n} {}", type_expr(&p.ty)),
        None => type_expr(&p.ty),
    }
}

fn signature(sig: &Signature) -> String {
    let params: Vec<String> = sig.params.iter().map(param).collect();
    let mut out = format!("({})", params.join(", "));
    match sig.results.as_slice() {
        [] => {}
        [Param { name: None, ty }] if !matches!(ty, TypeExpr::Func(_)) => {
            let _ = write!(out, " {}", type_expr(ty));
        }
        rs => {
            let rs: Vec<String> = rs.iter().map(param).collect();
            let _ = write!(out, " ({})", rs.join(", "));
        }
    }
    out
}

pub fn type_expr(t: &TypeExpr) -> String {
    match t {
        TypeExpr::Name(n) => n.clone(),
        TypeExpr::Pointer(t) => format!("*{}", type_expr(t)),
        TypeExpr::Slice(t) => format!("[]{}", type_expr(t)),
        TypeExpr::Array(n, t) => format!("[{}]{}", expr_str(n, false), type_expr(t)),
        TypeExpr::Map(k, v) => format!("map[{}]{}", type_expr(k), type_expr(v)),
        TypeExpr::Chan(ChanDir::Both, t) => match &**t {
            // `chan <-chan T` would lex as `chan<- chan T`.
            TypeExpr::Chan(ChanDir::Recv, _) => format!("chan ({})", type_expr(t)),
            _ => format!("chan {}", type_expr(t)),
        },
        TypeExpr::Chan(ChanDir::Send, t) => format!("chan<- {}", type_expr(t)),
        TypeExpr::Chan(ChanDir::Recv, t) => format!("<-chan {}", type_expr(t)),
        TypeExpr::Func(sig) => format!("func{}", signature(sig)),
        TypeExpr::Struct(fields) if fields.is_empty() => "struct{}".to_string(),
        TypeExpr::Struct(fields) => {
            let fs: Vec<String> = fields
                .iter()
                .map(|f| {
                    if f.names.is_empty() {
                        type_expr(&f.ty)
                    } else {
                        format!("{} {}", f.names.join(", "), type_expr(&f.ty))
                    }
                })
                .collect();
            format!("struct {{ {} }}", fs.join("; "))
        }
        TypeExpr::Interface(ms) if ms.is_empty() => "interface{}".to_string(),
        TypeExpr::Interface(ms) => {
            let ms: Vec<String> = ms
                .iter()
                .map(|m| match m {
                    Method::Named(n, sig) => format!("{n}{}", signature(sig)),
                    Method::Embedded(t) => type_expr(t),
                })
                .collect();
            format!("interface {{ {} }}", ms.join("; "))
        }
        TypeExpr::Variadic(t) => format!("...{}", type_expr(t)),
    }
}

const UNARY_PREC: u8 = 6;

fn prec_of(e: &Expr) -> u8 {
    match e {
        Expr::Binary(_, op, _) => precedence(op),
        Expr::Unary(..) => UNARY_PREC,
        _ => 7,
    }
}

fn wrap(e: &Expr, header: bool, min: u8) -> String {
    let s = expr_str(e, header);
    if prec_of(e) < min {
        format!("({s})")
    } else {
        s
    }
}

pub fn expr_str(e: &Expr, header: bool) -> String {
    match e {
        Expr::Ident(n) => n.clone(),
        Expr::Int(n) if *n < 0 => format!("({n})"),
        Expr::Int(n) => n.to_string(),
        Expr::Lit(s) => s.clone(),
        Expr::Unary(op, inner) => match &**inner {
            Expr::Unary(..) => format!("{op}({})", expr_str(inner, header)),
            _ => format!("{op}{}", wrap(inner, header, UNARY_PREC)),
        },
        Expr::Binary(l, op, r) => {
            let p = precedence(op);
            format!("{} {op} {}", wrap(l, header, p), wrap(r, header, p + 1))
        }
        Expr::Call { func, args, spread } => {
            let f = callee(func, header);
            let mut a = list(args, false);
            if *spread {
                a.push_str("...");
            }
            format!("{f}({a})")
        }
        Expr::Selector(base, sel) => format!("{}.{sel}", callee(base, header)),
        Expr::Index(base, idx) => format!("{}[{}]", callee(base, header), expr_str(idx, false)),
        Expr::SliceExpr(base, lo, hi) => format!(
            "{}[{}:{}]",
            callee(base, header),
            lo.as_deref()
                .map(|e| expr_str(e, false))
                .unwrap_or_default(),
            hi.as_deref()
                .map(|e| expr_str(e, false))
                .unwrap_or_default()
        ),
        Expr::TypeAssert(base, t) => format!("{}.({})", callee(base, header), type_expr(t)),
        Expr::FuncLit { sig, body, .. } => {
            let mut p = Printer {
                out: String::new(),
                indent: 0,
            };
            p.block_body(body);
            format!("func{} {{\n{}}}", signature(sig), p.out)
        }
        Expr::Composite { ty, elems } => {
            let es: Vec<String> = elems
                .iter()
                .map(|el| match &el.key {
                    Some(k) => format!("{}: {}", expr_str(k, false), expr_str(&el.value, false)),
                    None => expr_str(&el.value, false),
                })
                .collect();
            let t = ty.as_ref().map(type_expr).unwrap_or_default();
            let s = format!("{t}{{{}}}", es.join(", "));
            if header && matches!(ty, Some(TypeExpr::Name(_))) {
                format!("({s})")
            } else {
                s
            }
        }
        Expr::Type(t) => match t {
            // A bare `func(...)` type followed by `{` would read as a literal;
            // pointer and receive-channel types need grouping in call position.
            TypeExpr::Pointer(_) | TypeExpr::Chan(ChanDir::Recv, _) => {
                format!("({})", type_expr(t))
            }
            _ => type_expr(t),
        },
    }
}

fn callee(e: &Expr, header: bool) -> String {
    match e {
        Expr::Binary(..) | Expr::Unary(..) | Expr::Int(_) => format!("({})", expr_str(e, header)),
        Expr::Type(TypeExpr::Func(_)) => format!("({})", expr_str(e, header)),
        _ => expr_str(e, header),
    }
}
