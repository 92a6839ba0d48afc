//! Translation of a parsed Go file into coroutine definitions.
//!
//! Functions that (transitively) touch channels are found by a fixed point
//! over the call graph; each of them becomes a `corDef`. Statements map to
//! flow items in evaluation order: sends yield the channel's element type,
//! receives expect it, `go` starts, calls and deferred calls inline. Branch
//! conditions are folded when constant, otherwise they become guards over
//! symbolic variables.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ast::*;
use super::printer::expr_str;
use super::FrontError;
use crate::calculus::{flatten_flow, App, Bindings, Branch, FlowItem, Type};
use crate::constraints::{collect_concrete, CmpOp, Interval, Predicate, Term, Universe};
use crate::engine::Definitions;

/// Name of the subtype relation available to receive constraints.
pub const INHERIT: &str = "inherit";

const UNROLL_LIMIT: usize = 64;

/// A translated program, ready for reduction from `Start(main)`.
#[derive(Clone, Debug)]
pub struct Program {
    pub definitions: Definitions,
    pub domains: BTreeMap<String, Interval>,
    pub universe: Universe,
    pub warnings: Vec<String>,
    /// Functions that use channels directly or through calls.
    pub coroutines: BTreeSet<String>,
    /// Rounds until the coroutine set stopped changing.
    pub iterations: usize,
}

impl Program {
    pub fn entry(&self) -> Type {
        Type::start(Type::var("main"))
    }
}

pub fn translate(file: &File) -> Result<Program, FrontError> {
    let mut info = Info::collect(file);
    if !info.funcs.contains_key("main") {
        return Err(FrontError::NoMain);
    }
    let (coroutines, iterations) = info.fixed_point();
    info.coroutines = coroutines.clone();

    let mut globals = FnCx::new(&info, vec![HashMap::new()]);
    for d in &file.decls {
        if let Decl::Var(specs) | Decl::Const(specs) = d {
            let mut sink = Vec::new();
            for s in specs {
                globals.var_spec(s, &mut sink)?;
            }
        }
    }
    let global_scope = globals.scopes;

    let mut names: Vec<&String> = info
        .funcs
        .iter()
        .filter(|(_, f)| !f.literal)
        .map(|(n, _)| n)
        .collect();
    names.retain(|n| coroutines.contains(*n) || *n == "main");
    for name in names {
        let f = &info.funcs[name];
        let mut cx = FnCx::new(&info, global_scope.clone());
        if let Some((recv, ty)) = &f.recv {
            cx.declare(
                recv,
                VarInfo {
                    ty: Some(ty.clone()),
                    val: Abs::Unknown,
                },
            );
        }
        let def = cx.function(f.sig, f.body)?;
        info.out.borrow_mut().defs.insert(name.clone(), def);
    }

    let out = info.out.into_inner();
    let mut universe = Universe::default();
    for def in out.defs.values() {
        universe.add_symbols(collect_concrete(def));
    }
    let pairs = closure(&info.subtypes);
    if !pairs.is_empty() {
        universe
            .register_relation(
                INHERIT,
                pairs.iter().map(|(a, b)| vec![a.clone(), b.clone()]),
            )
            .expect("fresh universe");
    }

    let mut warnings = out.warnings;
    let mut by_elem: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (label, elem) in &out.channels {
        let v = by_elem.entry(elem).or_default();
        if !v.contains(&label.as_str()) {
            v.push(label);
        }
    }
    for (elem, chans) in by_elem {
        if chans.len() > 1 {
            warnings.push(format!(
                "channels {} share element type {elem}; messages on them are not told apart",
                chans
                    .iter()
                    .map(|c| format!("`{c}`"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
    }

    Ok(Program {
        definitions: out.defs,
        domains: out.domains,
        universe,
        warnings,
        coroutines,
        iterations,
    })
}

/// Go type to the name used for message types.
pub fn type_name(t: &TypeExpr) -> String {
    match t {
        TypeExpr::Name(n) => {
            let base = n.rsplit('.').next().unwrap_or(n);
            match base {
                "int" | "int8" | "int16" | "int32" | "int64" | "uint" | "uint8" | "uint16"
                | "uint32" | "uint64" | "uintptr" | "byte" | "rune" => "Int".to_string(),
                "float32" | "float64" => "Float".to_string(),
                "any" => "Any".to_string(),
                other => capitalize(other),
            }
        }
        TypeExpr::Pointer(t) | TypeExpr::Variadic(t) => type_name(t),
        TypeExpr::Slice(t) | TypeExpr::Array(_, t) => format!("Slice{}", type_name(t)),
        TypeExpr::Map(..) => "Map".to_string(),
        TypeExpr::Chan(_, t) => format!("Chan{}", type_name(t)),
        TypeExpr::Func(_) => "Func".to_string(),
        TypeExpr::Struct(_) => "Struct".to_string(),
        TypeExpr::Interface(_) => "Any".to_string(),
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn closure(pairs: &BTreeSet<(String, String)>) -> BTreeSet<(String, String)> {
    let mut out = pairs.clone();
    loop {
        let mut added = Vec::new();
        for (a, b) in &out {
            for (c, d) in &out {
                if b == c && !out.contains(&(a.clone(), d.clone())) {
                    added.push((a.clone(), d.clone()));
                }
            }
        }
        if added.is_empty() {
            return out;
        }
        out.extend(added);
    }
}

// ---- program facts ----

struct FuncInfo<'a> {
    sig: &'a Signature,
    body: &'a Block,
    literal: bool,
    recv: Option<(String, TypeExpr)>,
    /// Method name for `recv.m()` lookups.
    method: Option<String>,
}

#[derive(Default)]
struct Out {
    defs: Definitions,
    domains: BTreeMap<String, Interval>,
    /// `(label, element type)` of every channel created with `make`.
    channels: Vec<(String, String)>,
    warnings: Vec<String>,
    /// Enclosing symbolic variables each literal refers to.
    captures: HashMap<String, Vec<String>>,
}

struct Info<'a> {
    funcs: BTreeMap<String, FuncInfo<'a>>,
    literals: HashMap<*const Expr, String>,
    types: HashMap<String, &'a TypeExpr>,
    subtypes: BTreeSet<(String, String)>,
    coroutines: BTreeSet<String>,
    out: RefCell<Out>,
}

impl<'a> Info<'a> {
    fn collect(file: &'a File) -> Self {
        let mut info = Info {
            funcs: BTreeMap::new(),
            literals: HashMap::new(),
            types: HashMap::new(),
            subtypes: BTreeSet::new(),
            coroutines: BTreeSet::new(),
            out: RefCell::new(Out::default()),
        };
        for d in &file.decls {
            match d {
                Decl::Type(specs) => {
                    for s in specs {
                        info.types.insert(s.name.clone(), &s.ty);
                    }
                }
                Decl::Func(fd) => {
                    let Some(body) = &fd.body else { continue };
                    let (name, recv, method) = match &fd.recv {
                        Some(p) => {
                            let tn = type_name(&p.ty);
                            let recv = p.name.clone().map(|n| (n, p.ty.clone()));
                            (format!("{tn}.{}", fd.name), recv, Some(fd.name.clone()))
                        }
                        None => (fd.name.clone(), None, None),
                    };
                    info.funcs.insert(
                        name,
                        FuncInfo {
                            sig: &fd.sig,
                            body,
                            literal: false,
                            recv,
                            method,
                        },
                    );
                }
                _ => {}
            }
        }
        // Struct embedding, and structs whose methods cover an interface.
        let mut methods: HashMap<String, BTreeSet<String>> = HashMap::new();
        for (name, f) in &info.funcs {
            if let (Some(m), Some(recv)) = (&f.method, name.split('.').next()) {
                methods
                    .entry(recv.to_string())
                    .or_default()
                    .insert(m.clone());
            }
        }
        for (name, ty) in &info.types {
            if let TypeExpr::Struct(fields) = ty {
                for f in fields.iter().filter(|f| f.names.is_empty()) {
                    info.subtypes.insert((capitalize(name), type_name(&f.ty)));
                }
            }
        }
        for (iname, ty) in &info.types {
            let TypeExpr::Interface(ms) = ty else {
                continue;
            };
            let wanted: BTreeSet<String> = ms
                .iter()
                .filter_map(|m| match m {
                    Method::Named(n, _) => Some(n.clone()),
                    Method::Embedded(_) => None,
                })
                .collect();
            if wanted.is_empty() {
                continue;
            }
            for (sname, have) in &methods {
                if wanted.is_subset(have) && info.types.contains_key(sname.as_str()) {
                    info.subtypes.insert((capitalize(sname), capitalize(iname)));
                }
            }
        }
        // Name every function literal after its line.
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut lits: Vec<(&'a Expr, &'a Signature, &'a Block, usize)> = Vec::new();
        for d in &file.decls {
            match d {
                Decl::Func(FuncDecl { body: Some(b), .. }) => {
                    walk_block(b, &mut |e| collect_lit(e, &mut lits))
                }
                Decl::Var(specs) => {
                    for s in specs {
                        for v in &s.values {
                            walk_expr(v, &mut |e| collect_lit(e, &mut lits));
                        }
                    }
                }
                _ => {}
            }
        }
        for (expr, sig, body, line) in lits {
            let k = seen.entry(line).or_insert(0);
            *k += 1;
            let name = if *k == 1 {
                format!("anon@{line}")
            } else {
                format!("anon@{line}#{k}")
            };
            info.literals.insert(expr as *const Expr, name.clone());
            info.funcs.insert(
                name,
                FuncInfo {
                    sig,
                    body,
                    literal: true,
                    recv: None,
                    method: None,
                },
            );
        }
        info
    }

    /// Iterate `M ↦ {f | f uses channels or calls into M}` from the empty
    /// set until it stabilizes.
    fn fixed_point(&self) -> (BTreeSet<String>, usize) {
        let facts: BTreeMap<&String, (bool, BTreeSet<String>)> = self
            .funcs
            .iter()
            .map(|(n, f)| (n, self.scan(f.body)))
            .collect();
        let mut m = BTreeSet::new();
        let mut rounds = 0;
        loop {
            rounds += 1;
            let next: BTreeSet<String> = facts
                .iter()
                .filter(|(_, (direct, callees))| *direct || callees.iter().any(|c| m.contains(c)))
                .map(|(n, _)| (*n).clone())
                .collect();
            if next == m {
                return (m, rounds);
            }
            m = next;
        }
    }

    /// Whether a body uses channels itself, and which functions it calls.
    fn scan(&self, body: &Block) -> (bool, BTreeSet<String>) {
        let mut direct = false;
        let mut callees = BTreeSet::new();
        let mut aliases: HashMap<String, String> = HashMap::new();
        scan_block(body, &mut |node| match node {
            Node::Stmt(Stmt::Send { .. }) => direct = true,
            Node::Stmt(Stmt::Assign { lhs, rhs, .. }) => {
                for (l, r) in lhs.iter().zip(rhs) {
                    if let (Some(l), Some(target)) =
                        (l.as_ident(), self.callee_syntactic(r, &aliases))
                    {
                        aliases.insert(l.to_string(), target);
                    }
                }
            }
            Node::Expr(e) => match e {
                Expr::Unary(op, _) if op == "<-" => direct = true,
                Expr::Call { func, args, .. } => {
                    let name = func.qualified_name();
                    if name.as_deref() == Some("time.After")
                        || (name.as_deref() == Some("make")
                            && matches!(args.first(), Some(Expr::Type(TypeExpr::Chan(..)))))
                    {
                        direct = true;
                    }
                    if let Some(c) = self.callee_syntactic(func, &aliases) {
                        callees.insert(c);
                    }
                }
                _ => {}
            },
            Node::Stmt(_) => {}
        });
        (direct, callees)
    }

    fn callee_syntactic(&self, func: &Expr, aliases: &HashMap<String, String>) -> Option<String> {
        match func {
            Expr::Ident(n) => aliases.get(n).cloned().or_else(|| self.top_level(n)),
            Expr::FuncLit { .. } => self.literals.get(&(func as *const Expr)).cloned(),
            Expr::Selector(_, m) => self.unique_method(m),
            _ => None,
        }
    }

    fn top_level(&self, name: &str) -> Option<String> {
        self.funcs
            .get(name)
            .filter(|f| !f.literal && f.method.is_none())
            .map(|_| name.to_string())
    }

    fn unique_method(&self, m: &str) -> Option<String> {
        let mut it = self
            .funcs
            .iter()
            .filter(|(_, f)| f.method.as_deref() == Some(m));
        match (it.next(), it.next()) {
            (Some((n, _)), None) => Some(n.clone()),
            _ => None,
        }
    }
}

fn collect_lit<'a>(e: &'a Expr, out: &mut Vec<(&'a Expr, &'a Signature, &'a Block, usize)>) {
    if let Expr::FuncLit { sig, body, line } = e {
        out.push((e, sig, body, line.0));
    }
}

// ---- syntax walkers ----

enum Node<'a> {
    Stmt(&'a Stmt),
    Expr(&'a Expr),
}

/// Visit statements and expressions of a body without entering function
/// literals.
fn scan_block<'a>(b: &'a Block, f: &mut impl FnMut(Node<'a>)) {
    for s in &b.0 {
        scan_stmt(s, f);
    }
}

fn scan_stmt<'a>(s: &'a Stmt, f: &mut impl FnMut(Node<'a>)) {
    f(Node::Stmt(s));
    let ex = |e: &'a Expr, f: &mut dyn FnMut(Node<'a>)| scan_expr(e, f);
    match s {
        Stmt::Expr(e, _) | Stmt::Go(e, _) | Stmt::Defer(e, _) => ex(e, f),
        Stmt::Send { chan, value, .. } => {
            ex(chan, f);
            ex(value, f);
        }
        Stmt::IncDec { target, .. } => ex(target, f),
        Stmt::Assign { lhs, rhs, .. } => lhs.iter().chain(rhs).for_each(|e| ex(e, f)),
        Stmt::Var(specs) | Stmt::Const(specs) => {
            specs.iter().flat_map(|s| &s.values).for_each(|e| ex(e, f))
        }
        Stmt::Return(es, _) => es.iter().for_each(|e| ex(e, f)),
        Stmt::Type(_) | Stmt::Break(_) | Stmt::Continue(_) => {}
        Stmt::Block(b) => scan_block(b, f),
        Stmt::If(i) => scan_if(i, f),
        Stmt::For(ForStmt::Loop {
            init,
            cond,
            post,
            body,
            ..
        }) => {
            init.iter().chain(post).for_each(|s| scan_stmt(s, f));
            cond.iter().for_each(|e| ex(e, f));
            scan_block(body, f);
        }
        Stmt::For(ForStmt::Range { over, body, .. }) => {
            ex(over, f);
            scan_block(body, f);
        }
    }
}

fn scan_if<'a>(i: &'a IfStmt, f: &mut impl FnMut(Node<'a>)) {
    if let Some(s) = &i.init {
        scan_stmt(s, f);
    }
    scan_expr(&i.cond, f);
    scan_block(&i.then, f);
    match i.els.as_deref() {
        Some(Else::If(inner)) => scan_if(inner, f),
        Some(Else::Block(b)) => scan_block(b, f),
        None => {}
    }
}

fn scan_expr<'a>(e: &'a Expr, f: &mut dyn FnMut(Node<'a>)) {
    f(Node::Expr(e));
    match e {
        Expr::Unary(_, x) | Expr::Selector(x, _) | Expr::TypeAssert(x, _) => scan_expr(x, f),
        Expr::Binary(l, _, r) | Expr::Index(l, r) => {
            scan_expr(l, f);
            scan_expr(r, f);
        }
        Expr::Call { func, args, .. } => {
            scan_expr(func, f);
            args.iter().for_each(|a| scan_expr(a, f));
        }
        Expr::SliceExpr(x, lo, hi) => {
            scan_expr(x, f);
            lo.iter().chain(hi).for_each(|a| scan_expr(a, f));
        }
        Expr::Composite { elems, .. } => {
            for el in elems {
                if let Some(k) = &el.key {
                    scan_expr(k, f);
                }
                scan_expr(&el.value, f);
            }
        }
        Expr::Ident(_) | Expr::Int(_) | Expr::Lit(_) | Expr::FuncLit { .. } | Expr::Type(_) => {}
    }
}

/// Visit every expression, including those inside function literals.
fn walk_block<'a>(b: &'a Block, f: &mut impl FnMut(&'a Expr)) {
    scan_block(b, &mut |n| {
        if let Node::Expr(e) = n {
            walk_expr(e, f);
        }
    });
}

fn walk_expr<'a>(e: &'a Expr, f: &mut impl FnMut(&'a Expr)) {
    // `scan_*` already reaches every non-literal sub-expression; here we only
    // need to report `e` and descend into literal bodies.
    f(e);
    if let Expr::FuncLit { body, .. } = e {
        walk_block(body, f);
    }
}

// ---- per-function translation ----

/// Abstract value of an expression.
#[derive(Clone, Debug, PartialEq)]
enum Abs {
    Int(i64),
    Bool(bool),
    /// An integer known only symbolically.
    Term(Term),
    /// A boolean known only symbolically.
    Pred(Predicate),
    Func(String),
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
struct VarInfo {
    ty: Option<TypeExpr>,
    val: Abs,
}

enum Cond {
    Const(bool),
    Guard(Predicate),
}

struct FnCx<'g, 'a> {
    g: &'g Info<'a>,
    scopes: Vec<HashMap<String, VarInfo>>,
    defers: Vec<(Predicate, FlowItem)>,
    path: Predicate,
}

type TResult<T> = Result<T, FrontError>;

fn is_int_type(t: &TypeExpr) -> bool {
    matches!(type_name(t).as_str(), "Int") && matches!(t, TypeExpr::Name(_))
}

fn is_bool_type(t: &TypeExpr) -> bool {
    matches!(t, TypeExpr::Name(n) if n == "bool")
}

fn send(payload: Type) -> FlowItem {
    FlowItem::Yield(payload)
}

impl<'g, 'a> FnCx<'g, 'a> {
    fn new(g: &'g Info<'a>, scopes: Vec<HashMap<String, VarInfo>>) -> Self {
        FnCx {
            g,
            scopes,
            defers: Vec::new(),
            path: Predicate::True,
        }
    }

    fn lookup(&self, name: &str) -> Option<&VarInfo> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }

    fn declare(&mut self, name: &str, info: VarInfo) {
        if name != "_" {
            self.scopes
                .last_mut()
                .expect("scope")
                .insert(name.to_string(), info);
        }
    }

    fn assign(&mut self, name: &str, info: VarInfo) {
        if let Some(scope) = self.scopes.iter_mut().rev().find(|s| s.contains_key(name)) {
            let slot = scope.get_mut(name).expect("present");
            let ty = info.ty.or_else(|| slot.ty.clone());
            *slot = VarInfo { ty, val: info.val };
        }
    }

    fn forget(&mut self, name: &str) {
        if let Some(v) = self.scopes.iter_mut().rev().find_map(|s| s.get_mut(name)) {
            v.val = Abs::Unknown;
        }
    }

    fn warn(&self, msg: String) {
        let mut out = self.g.out.borrow_mut();
        if !out.warnings.contains(&msg) {
            out.warnings.push(msg);
        }
    }

    fn function(&mut self, sig: &Signature, body: &Block) -> TResult<Type> {
        self.scopes.push(HashMap::new());
        for p in &sig.params {
            let Some(name) = &p.name else { continue };
            let val = if is_int_type(&p.ty) {
                Abs::Term(Term::var(name.clone()))
            } else if is_bool_type(&p.ty) {
                Abs::Pred(Predicate::cmp(
                    Term::var(name.clone()),
                    CmpOp::Eq,
                    Term::Int(1),
                ))
            } else {
                Abs::Unknown
            };
            self.declare(
                name,
                VarInfo {
                    ty: Some(p.ty.clone()),
                    val,
                },
            );
        }
        let mut flow = Vec::new();
        self.seq(&refs(&body.0), &mut flow)?;
        for (guard, item) in std::mem::take(&mut self.defers).into_iter().rev() {
            if guard.is_true() {
                flow.push(item);
            } else {
                flow.push(FlowItem::Choice(vec![
                    Branch {
                        flow: vec![item],
                        guard: guard.clone(),
                    },
                    Branch {
                        flow: Vec::new(),
                        guard: guard.not().simplify(),
                    },
                ]));
            }
        }
        self.scopes.pop();
        Ok(Type::definition(flatten_flow(&flow)))
    }

    /// Translate statements; returns whether control certainly left the
    /// function.
    fn seq(&mut self, stmts: &[&Stmt], out: &mut Vec<FlowItem>) -> TResult<bool> {
        for (i, &s) in stmts.iter().enumerate() {
            if let Stmt::If(ifs) = s {
                if if_returns(ifs) {
                    return self.if_stmt(ifs, &stmts[i + 1..], out);
                }
            }
            if let Stmt::Block(b) = s {
                if has_return(b) {
                    // Splice the block so that its early returns see what follows.
                    let joined: Vec<&Stmt> =
                        b.0.iter().chain(stmts[i + 1..].iter().copied()).collect();
                    self.scopes.push(HashMap::new());
                    self.seq(&joined, out)?;
                    self.scopes.pop();
                    return Ok(true);
                }
            }
            if self.stmt(s, out)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn stmt(&mut self, s: &Stmt, out: &mut Vec<FlowItem>) -> TResult<bool> {
        let line = s.line();
        match s {
            Stmt::Expr(e, _) => self.items(e, line, out)?,
            Stmt::Send { chan, value, .. } => {
                self.items(chan, line, out)?;
                self.items(value, line, out)?;
                let elem = self.chan_elem(chan, line)?;
                let payload = self.send_payload(value, &elem);
                out.push(send(Type::concrete(payload)));
            }
            Stmt::IncDec { target, inc, .. } => {
                if let Some(name) = target.as_ident() {
                    let val = match self.lookup(name).map(|v| v.val.clone()) {
                        Some(Abs::Int(n)) => Abs::Int(if *inc { n + 1 } else { n - 1 }),
                        _ => Abs::Unknown,
                    };
                    self.assign(name, VarInfo { ty: None, val });
                }
            }
            Stmt::Assign { lhs, op, rhs, .. } => {
                for e in lhs.iter().filter(|e| e.as_ident().is_none()) {
                    self.items(e, line, out)?;
                }
                for e in rhs {
                    self.items(e, line, out)?;
                }
                if lhs.len() == rhs.len() {
                    let infos: Vec<VarInfo> = lhs
                        .iter()
                        .zip(rhs)
                        .map(|(l, r)| self.value_info(l, op, r, line))
                        .collect::<TResult<_>>()?;
                    for (l, info) in lhs.iter().zip(infos) {
                        self.bind(l, op, info);
                    }
                } else {
                    let results = rhs
                        .first()
                        .and_then(|r| self.results_of(r))
                        .unwrap_or_default();
                    for (i, l) in lhs.iter().enumerate() {
                        let ty = results.get(i).cloned();
                        self.bind(
                            l,
                            op,
                            VarInfo {
                                ty,
                                val: Abs::Unknown,
                            },
                        );
                    }
                }
            }
            Stmt::Var(specs) | Stmt::Const(specs) => {
                for spec in specs {
                    self.var_spec(spec, out)?;
                }
            }
            Stmt::Type(_) | Stmt::Break(_) | Stmt::Continue(_) => {}
            Stmt::Go(e, _) => self.go_or_defer(e, line, true, out)?,
            Stmt::Defer(e, _) => self.go_or_defer(e, line, false, out)?,
            Stmt::Return(es, _) => {
                for e in es {
                    self.items(e, line, out)?;
                }
                return Ok(true);
            }
            Stmt::Block(b) => {
                self.scopes.push(HashMap::new());
                let t = self.seq(&refs(&b.0), out)?;
                self.scopes.pop();
                return Ok(t);
            }
            Stmt::If(i) => return self.if_stmt(i, &[], out),
            Stmt::For(f) => self.for_stmt(f, out)?,
        }
        Ok(false)
    }

    fn var_spec(&mut self, spec: &VarSpec, out: &mut Vec<FlowItem>) -> TResult<()> {
        let line = spec.line.0;
        for v in &spec.values {
            self.items(v, line, out)?;
        }
        for (i, name) in spec.names.iter().enumerate() {
            let info = match spec.values.get(i) {
                Some(v) => {
                    let mut info = self.value_info(&Expr::ident(name.clone()), ":=", v, line)?;
                    if spec.ty.is_some() {
                        info.ty = spec.ty.clone();
                    }
                    info
                }
                None => {
                    let val = match &spec.ty {
                        Some(t) if is_int_type(t) => Abs::Int(0),
                        Some(t) if is_bool_type(t) => Abs::Bool(false),
                        _ => Abs::Unknown,
                    };
                    VarInfo {
                        ty: spec.ty.clone(),
                        val,
                    }
                }
            };
            self.declare(name, info);
        }
        Ok(())
    }

    fn bind(&mut self, target: &Expr, op: &str, info: VarInfo) {
        let Some(name) = target.as_ident() else {
            return;
        };
        if op == ":=" && self.scopes.last().is_some_and(|s| !s.contains_key(name)) {
            self.declare(name, info);
        } else {
            self.assign(name, info);
        }
    }

    /// What `target op value` stores in `target`.
    fn value_info(
        &mut self,
        target: &Expr,
        op: &str,
        value: &Expr,
        line: usize,
    ) -> TResult<VarInfo> {
        if op != "=" && op != ":=" {
            let combined = Expr::Binary(
                Box::new(target.clone()),
                op.trim_end_matches('=').to_string(),
                Box::new(value.clone()),
            );
            let val = match self.eval(&combined) {
                v @ (Abs::Int(_) | Abs::Bool(_)) => v,
                _ => Abs::Unknown,
            };
            return Ok(VarInfo { ty: None, val });
        }
        let ty = self.expr_type(value);
        if let (Some(name), Some(iv)) = (target.as_ident(), random_range(value)) {
            let var = self.fresh_symbol(name, line, iv);
            return Ok(VarInfo {
                ty,
                val: Abs::Term(Term::var(var)),
            });
        }
        if let Expr::Call { func, args, .. } = value {
            if func.as_ident() == Some("make") {
                if let Some(Expr::Type(TypeExpr::Chan(_, elem))) = args.first() {
                    let label = target
                        .as_ident()
                        .map_or_else(|| format!("channel@{line}"), str::to_string);
                    self.g
                        .out
                        .borrow_mut()
                        .channels
                        .push((label, type_name(elem)));
                }
            }
        }
        let val = match value {
            Expr::FuncLit { .. } => Abs::Func(self.literal(value)?),
            _ => self.eval(value),
        };
        Ok(VarInfo { ty, val })
    }

    /// Register a symbolic variable with its domain, renaming on clashes.
    fn fresh_symbol(&self, name: &str, line: usize, iv: Interval) -> String {
        let mut out = self.g.out.borrow_mut();
        let var = if out.domains.get(name).is_some_and(|d| *d != iv) {
            format!("{name}@{line}")
        } else {
            name.to_string()
        };
        out.domains.insert(var.clone(), iv);
        var
    }

    // ---- expressions ----

    /// Flow items produced while evaluating `e`, in evaluation order.
    fn items(&mut self, e: &Expr, line: usize, out: &mut Vec<FlowItem>) -> TResult<()> {
        match e {
            Expr::Unary(op, x) if op == "<-" => {
                self.items(x, line, out)?;
                let elem = self.chan_elem(x, line)?;
                out.push(self.receive(&elem, line));
            }
            Expr::Unary(_, x) | Expr::Selector(x, _) | Expr::TypeAssert(x, _) => {
                self.items(x, line, out)?
            }
            Expr::Binary(l, _, r) | Expr::Index(l, r) => {
                self.items(l, line, out)?;
                self.items(r, line, out)?;
            }
            Expr::SliceExpr(x, lo, hi) => {
                self.items(x, line, out)?;
                for y in lo.iter().chain(hi) {
                    self.items(y, line, out)?;
                }
            }
            Expr::Composite { elems, .. } => {
                for el in elems {
                    if let Some(k) = &el.key {
                        self.items(k, line, out)?;
                    }
                    self.items(&el.value, line, out)?;
                }
            }
            Expr::Call { func, args, .. } => {
                self.items(func, line, out)?;
                for a in args {
                    self.items(a, line, out)?;
                }
                if func.qualified_name().as_deref() == Some("time.After") {
                    out.push(send(Type::start(Type::definition(vec![send(
                        Type::concrete("Time"),
                    )]))));
                    return Ok(());
                }
                if let Some(app) = self.application(func, args, line)? {
                    out.push(send(Type::Inline(app)));
                }
            }
            Expr::Ident(_) | Expr::Int(_) | Expr::Lit(_) | Expr::FuncLit { .. } | Expr::Type(_) => {
            }
        }
        Ok(())
    }

    fn go_or_defer(
        &mut self,
        e: &Expr,
        line: usize,
        is_go: bool,
        out: &mut Vec<FlowItem>,
    ) -> TResult<()> {
        let Expr::Call { func, args, .. } = e else {
            return Err(FrontError::Syntax {
                line,
                expected: "a function call".into(),
            });
        };
        // Arguments are evaluated at the statement, the call runs later.
        self.items(func, line, out)?;
        for a in args {
            self.items(a, line, out)?;
        }
        if func.qualified_name().as_deref() == Some("time.After") {
            return Ok(());
        }
        let Some(app) = self.application(func, args, line)? else {
            return Ok(());
        };
        if is_go {
            out.push(send(Type::Start(app)));
        } else {
            self.defers
                .push((self.path.clone(), send(Type::Inline(app))));
        }
        Ok(())
    }

    /// The definition a call refers to, with its symbolic arguments, when
    /// it is a coroutine.
    fn application(&mut self, func: &Expr, args: &[Expr], line: usize) -> TResult<Option<App>> {
        let name = match func {
            Expr::FuncLit { .. } => Some(self.literal(func)?),
            Expr::Ident(n) => match self.lookup(n) {
                Some(VarInfo {
                    val: Abs::Func(f), ..
                }) => Some(f.clone()),
                Some(_) => {
                    if self
                        .lookup(n)
                        .and_then(|v| v.ty.as_ref())
                        .is_some_and(|t| matches!(t, TypeExpr::Func(_)))
                    {
                        self.warn(format!("call through `{n}` at line {line} could not be resolved; assumed channel-free"));
                    }
                    None
                }
                None => self.g.top_level(n),
            },
            Expr::Selector(base, m) => {
                let typed = self
                    .expr_type(base)
                    .map(|t| format!("{}.{m}", type_name(&t)));
                typed.filter(|n| self.g.funcs.contains_key(n)).or_else(|| {
                    if base.as_ident().is_some_and(|b| self.lookup(b).is_none()) {
                        None // package-qualified call
                    } else {
                        self.g.unique_method(m)
                    }
                })
            }
            _ => None,
        };
        let Some(name) = name else { return Ok(None) };
        if !self.g.coroutines.contains(&name) {
            return Ok(None);
        }
        let g = self.g;
        let f = &g.funcs[&name];
        let mut bindings = Bindings::new();
        for (i, p) in f.sig.params.iter().enumerate() {
            let Some(pname) = &p.name else { continue };
            if !is_int_type(&p.ty) && !is_bool_type(&p.ty) {
                continue;
            }
            let term = match args.get(i).map(|a| self.eval(a)) {
                Some(Abs::Int(n)) => Term::Int(n),
                Some(Abs::Bool(b)) => Term::Int(b as i64),
                Some(Abs::Term(t)) => t,
                _ => {
                    let iv = if is_bool_type(&p.ty) {
                        Interval::new(0, 1)
                    } else {
                        Interval::unbounded()
                    };
                    Term::var(self.fresh_symbol(&format!("{pname}@{line}"), line, iv))
                }
            };
            bindings.insert(pname.clone(), term);
        }
        let captured = self
            .g
            .out
            .borrow()
            .captures
            .get(&name)
            .cloned()
            .unwrap_or_default();
        for v in captured {
            let term = match self.lookup(&v).map(|i| i.val.clone()) {
                Some(Abs::Int(n)) => Term::Int(n),
                Some(Abs::Term(t)) => t,
                _ => Term::var(v.clone()),
            };
            bindings.insert(v, term);
        }
        Ok(Some(App::with_args(Type::var(name), bindings)))
    }

    /// Translate a function literal in the current environment.
    fn literal(&mut self, e: &Expr) -> TResult<String> {
        let name = self.g.literals[&(e as *const Expr)].clone();
        let Expr::FuncLit { sig, body, .. } = e else {
            unreachable!("literal")
        };
        if !self.g.coroutines.contains(&name) || self.g.out.borrow().defs.contains_key(&name) {
            return Ok(name);
        }
        // Reserve the name so recursive references do not retranslate.
        self.g
            .out
            .borrow_mut()
            .defs
            .insert(name.clone(), Type::definition(Vec::new()));
        let mut inner = FnCx::new(self.g, self.scopes.clone());
        let def = inner.function(sig, body)?;
        let params: BTreeSet<&str> = sig
            .params
            .iter()
            .filter_map(|p| p.name.as_deref())
            .collect();
        let mut captured = Vec::new();
        def.visit(&mut |t| {
            if let Type::CorDef(flow) = t {
                for v in flow_vars(flow) {
                    let symbolic = self.scopes.iter().any(|s| {
                        s.values()
                            .any(|i| matches!(&i.val, Abs::Term(Term::Var(x)) if *x == v))
                            || s.values()
                                .any(|i| matches!(&i.val, Abs::Pred(p) if p.vars().contains(&v)))
                    });
                    if symbolic && !params.contains(v.as_str()) && !captured.contains(&v) {
                        captured.push(v);
                    }
                }
            }
        });
        let mut out = self.g.out.borrow_mut();
        out.captures.insert(name.clone(), captured);
        out.defs.insert(name.clone(), def);
        Ok(name)
    }

    fn receive(&self, elem: &str, line: usize) -> FlowItem {
        let has_subtypes = self.g.subtypes.iter().any(|(_, sup)| sup == elem);
        if !has_subtypes {
            return FlowItem::Receive(Type::concrete(elem));
        }
        let var = format!("recv@{line}");
        let guard = Predicate::cmp(Term::var(var.clone()), CmpOp::Eq, Term::sym(elem)).or(
            Predicate::rel(INHERIT, vec![Term::var(var.clone()), Term::sym(elem)]),
        );
        FlowItem::Receive(Type::constrained(Type::var(var), guard))
    }

    fn send_payload(&self, value: &Expr, elem: &str) -> String {
        if let Some(t) = self.expr_type(value) {
            let name = type_name(&t);
            if name != elem && closure(&self.g.subtypes).contains(&(name.clone(), elem.to_string()))
            {
                return name;
            }
        }
        elem.to_string()
    }

    fn chan_elem(&self, e: &Expr, line: usize) -> TResult<String> {
        match self.expr_type(e) {
            Some(TypeExpr::Chan(_, elem)) => Ok(type_name(&elem)),
            _ => Err(FrontError::UnknownChannel {
                expr: expr_str(e, false),
                line,
            }),
        }
    }

    fn results_of(&self, call: &Expr) -> Option<Vec<TypeExpr>> {
        let Expr::Call { func, .. } = call else {
            return None;
        };
        let sig = match self.expr_type(func)? {
            TypeExpr::Func(sig) => sig,
            _ => return None,
        };
        Some(sig.results.into_iter().map(|p| p.ty).collect())
    }

    /// Static type of an expression, as far as it can be told.
    fn expr_type(&self, e: &Expr) -> Option<TypeExpr> {
        match e {
            Expr::Ident(n) => match self.lookup(n) {
                Some(v) => v.ty.clone().or_else(|| match &v.val {
                    Abs::Func(f) => self.g.funcs.get(f).map(|f| TypeExpr::Func(f.sig.clone())),
                    _ => None,
                }),
                None => self.g.funcs.get(n).map(|f| TypeExpr::Func(f.sig.clone())),
            },
            Expr::Call { func, args, .. } => match func.qualified_name().as_deref() {
                Some("make") => match args.first() {
                    Some(Expr::Type(t)) => Some(t.clone()),
                    _ => None,
                },
                Some("new") => match args.first() {
                    Some(Expr::Type(t)) => Some(TypeExpr::Pointer(Box::new(t.clone()))),
                    Some(Expr::Ident(n)) => {
                        Some(TypeExpr::Pointer(Box::new(TypeExpr::Name(n.clone()))))
                    }
                    _ => None,
                },
                Some("time.After") => Some(TypeExpr::Chan(
                    ChanDir::Both,
                    Box::new(TypeExpr::Name("time.Time".into())),
                )),
                _ => match func.as_ref() {
                    Expr::Type(t) => Some(t.clone()),
                    Expr::Ident(n) if self.g.types.contains_key(n.as_str()) => {
                        Some(TypeExpr::Name(n.clone()))
                    }
                    Expr::Selector(base, m) => {
                        let recv = self
                            .expr_type(base)
                            .map(|t| format!("{}.{m}", type_name(&t)));
                        let f = recv.and_then(|r| self.g.funcs.get(&r));
                        f.and_then(|f| f.sig.results.first().map(|p| p.ty.clone()))
                    }
                    other => match self.expr_type(other)? {
                        TypeExpr::Func(sig) => sig.results.first().map(|p| p.ty.clone()),
                        _ => None,
                    },
                },
            },
            Expr::Selector(base, field) => self.field_type(&self.expr_type(base)?, field, 0),
            Expr::Index(base, _) => match self.underlying(self.expr_type(base)?)? {
                TypeExpr::Slice(t) | TypeExpr::Array(_, t) | TypeExpr::Map(_, t) => Some(*t),
                _ => None,
            },
            Expr::Unary(op, x) if op == "<-" => match self.expr_type(x)? {
                TypeExpr::Chan(_, t) => Some(*t),
                _ => None,
            },
            Expr::Unary(op, x) if op == "&" => {
                Some(TypeExpr::Pointer(Box::new(self.expr_type(x)?)))
            }
            Expr::Unary(op, x) if op == "*" => match self.expr_type(x)? {
                TypeExpr::Pointer(t) => Some(*t),
                _ => None,
            },
            Expr::Composite { ty, .. } => ty.clone(),
            Expr::FuncLit { sig, .. } => Some(TypeExpr::Func(sig.clone())),
            Expr::TypeAssert(_, t) => Some(t.clone()),
            Expr::Lit(s) if s.starts_with('"') || s.starts_with('`') => {
                Some(TypeExpr::Name("string".into()))
            }
            Expr::Int(_) => Some(TypeExpr::Name("int".into())),
            _ => None,
        }
    }

    /// Resolve named types to their definitions, through pointers.
    fn underlying(&self, t: TypeExpr) -> Option<TypeExpr> {
        let mut t = t;
        for _ in 0..8 {
            t = match t {
                TypeExpr::Pointer(inner) => *inner,
                TypeExpr::Name(ref n) => match self.g.types.get(n.as_str()) {
                    Some(def) => (*def).clone(),
                    None => return Some(t),
                },
                other => return Some(other),
            };
        }
        None
    }

    fn field_type(&self, t: &TypeExpr, field: &str, depth: usize) -> Option<TypeExpr> {
        if depth > 4 {
            return None;
        }
        let TypeExpr::Struct(fields) = self.underlying(t.clone())? else {
            return None;
        };
        if let Some(f) = fields.iter().find(|f| f.names.iter().any(|n| n == field)) {
            return Some(f.ty.clone());
        }
        fields
            .iter()
            .filter(|f| f.names.is_empty())
            .find_map(|f| self.field_type(&f.ty, field, depth + 1))
    }

    fn eval(&mut self, e: &Expr) -> Abs {
        match e {
            Expr::Int(n) => Abs::Int(*n),
            Expr::Ident(n) if n == "true" && self.lookup(n).is_none() => Abs::Bool(true),
            Expr::Ident(n) if n == "false" && self.lookup(n).is_none() => Abs::Bool(false),
            Expr::Ident(n) => match self.lookup(n) {
                Some(v) => v.val.clone(),
                None => self.g.top_level(n).map_or(Abs::Unknown, Abs::Func),
            },
            Expr::FuncLit { .. } => self.literal(e).map_or(Abs::Unknown, Abs::Func),
            Expr::Unary(op, x) => match (op.as_str(), self.eval(x)) {
                ("-", Abs::Int(n)) => Abs::Int(-n),
                ("+", v @ Abs::Int(_)) => v,
                ("!", Abs::Bool(b)) => Abs::Bool(!b),
                ("!", Abs::Pred(p)) => Abs::Pred(p.not()),
                _ => Abs::Unknown,
            },
            Expr::Binary(l, op, r) => {
                let (a, b) = (self.eval(l), self.eval(r));
                binary(&a, op, &b)
            }
            _ => Abs::Unknown,
        }
    }

    fn cond(&mut self, e: &Expr, line: usize) -> Cond {
        match self.eval(e) {
            Abs::Bool(b) => Cond::Const(b),
            Abs::Pred(p) => match p.simplify() {
                Predicate::True => Cond::Const(true),
                Predicate::False => Cond::Const(false),
                p => Cond::Guard(p),
            },
            Abs::Term(t) => Cond::Guard(Predicate::cmp(t, CmpOp::Ne, Term::Int(0))),
            _ => {
                let var = self.fresh_symbol(&format!("cond@{line}"), line, Interval::new(0, 1));
                Cond::Guard(Predicate::cmp(Term::var(var), CmpOp::Eq, Term::Int(1)))
            }
        }
    }

    // ---- control flow ----

    fn if_stmt(&mut self, ifs: &IfStmt, rest: &[&Stmt], out: &mut Vec<FlowItem>) -> TResult<bool> {
        let line = ifs.line.0;
        self.scopes.push(HashMap::new());
        if let Some(init) = &ifs.init {
            self.stmt(init, out)?;
        }
        self.items(&ifs.cond, line, out)?;
        let then_stmts: Vec<&Stmt> = ifs.then.0.iter().chain(rest.iter().copied()).collect();
        let else_stmts: Vec<&Stmt> = match ifs.els.as_deref() {
            Some(Else::Block(b)) => b.0.iter().chain(rest.iter().copied()).collect(),
            _ => rest.to_vec(),
        };
        let else_if = match ifs.els.as_deref() {
            Some(Else::If(inner)) => Some(inner),
            _ => None,
        };
        let run_else = |cx: &mut Self, flow: &mut Vec<FlowItem>| match else_if {
            Some(inner) => cx.if_stmt(inner, rest, flow),
            None => cx.seq(&else_stmts, flow),
        };
        let terminated = match self.cond(&ifs.cond, line) {
            Cond::Const(true) => self.seq(&then_stmts, out)?,
            Cond::Const(false) => run_else(self, out)?,
            Cond::Guard(p) => {
                let saved_scopes = self.scopes.clone();
                let saved_path = self.path.clone();
                let run = |cx: &mut Self, is_then: bool, guard: Predicate| -> TResult<_> {
                    cx.scopes = saved_scopes.clone();
                    cx.path = saved_path.clone().and(guard);
                    let mut flow = Vec::new();
                    let t = if is_then {
                        cx.seq(&then_stmts, &mut flow)?
                    } else {
                        run_else(cx, &mut flow)?
                    };
                    Ok((flow, t, std::mem::take(&mut cx.scopes)))
                };
                let not_p = p.clone().not().simplify();
                let (then_flow, then_term, then_scopes) = run(self, true, p.clone())?;
                let (else_flow, else_term, else_scopes) = run(self, false, not_p.clone())?;
                self.path = saved_path;
                self.scopes = merge_scopes(then_scopes, else_scopes);
                if !then_flow.is_empty() || !else_flow.is_empty() {
                    out.push(FlowItem::Choice(vec![
                        Branch {
                            flow: then_flow,
                            guard: p,
                        },
                        Branch {
                            flow: else_flow,
                            guard: not_p,
                        },
                    ]));
                }
                then_term && else_term
            }
        };
        self.scopes.pop();
        Ok(terminated || !rest.is_empty())
    }

    fn for_stmt(&mut self, f: &ForStmt, out: &mut Vec<FlowItem>) -> TResult<()> {
        let (body, line) = match f {
            ForStmt::Loop { body, line, .. } | ForStmt::Range { body, line, .. } => (body, line.0),
        };
        if let ForStmt::Range { over, .. } = f {
            if matches!(self.expr_type(over), Some(TypeExpr::Chan(..))) {
                return Err(FrontError::Unsupported {
                    feature: "range over channel".into(),
                    line,
                });
            }
        }
        // The header runs once per iteration too.
        let header = match f {
            ForStmt::Loop {
                init, cond, post, ..
            } => Block(
                init.iter()
                    .chain(post)
                    .map(|s| (**s).clone())
                    .chain(cond.iter().map(|c| Stmt::Expr(c.clone(), Line(line))))
                    .collect(),
            ),
            ForStmt::Range { over, .. } => Block(vec![Stmt::Expr(over.clone(), Line(line))]),
        };
        if !self.communicates(body) && !self.communicates(&header) {
            let mut assigned = Vec::new();
            scan_block(body, &mut |n| match n {
                Node::Stmt(Stmt::Assign { lhs, .. }) => {
                    assigned.extend(lhs.iter().filter_map(Expr::as_ident))
                }
                Node::Stmt(Stmt::IncDec { target, .. }) => assigned.extend(target.as_ident()),
                _ => {}
            });
            let assigned: Vec<String> = assigned.into_iter().map(str::to_string).collect();
            for name in assigned {
                self.forget(&name);
            }
            return Ok(());
        }
        if has_jump(body) {
            return Err(FrontError::Unsupported {
                feature: "loop control flow around channel operations".into(),
                line,
            });
        }
        self.scopes.push(HashMap::new());
        match f {
            ForStmt::Loop {
                init,
                cond,
                post,
                body,
                ..
            } => {
                if let Some(s) = init {
                    self.stmt(s, out)?;
                }
                let mut n = 0;
                loop {
                    let go_on = match cond {
                        None => Cond::Const(true),
                        Some(c) => match self.eval(c) {
                            Abs::Bool(b) => Cond::Const(b),
                            _ => Cond::Guard(Predicate::True),
                        },
                    };
                    match go_on {
                        Cond::Const(false) => break,
                        Cond::Const(true) => {}
                        Cond::Guard(_) => {
                            return Err(FrontError::Unsupported {
                                feature: "loop with channel operations and an unknown trip count"
                                    .into(),
                                line,
                            })
                        }
                    }
                    n += 1;
                    if n > UNROLL_LIMIT {
                        let feature = if cond.is_none() {
                            "unbounded loop with channel operations"
                        } else {
                            "loop with channel operations beyond the unrolling limit"
                        };
                        return Err(FrontError::Unsupported {
                            feature: feature.into(),
                            line,
                        });
                    }
                    self.scopes.push(HashMap::new());
                    self.seq(&refs(&body.0), out)?;
                    self.scopes.pop();
                    if let Some(s) = post {
                        self.stmt(s, out)?;
                    }
                }
            }
            ForStmt::Range {
                key,
                value,
                define,
                over,
                body,
                ..
            } => {
                let elems: Vec<Option<&Expr>> = match (self.expr_type(over), over) {
                    (Some(TypeExpr::Chan(..)), _) => {
                        return Err(FrontError::Unsupported {
                            feature: "range over channel".into(),
                            line,
                        })
                    }
                    (_, Expr::Composite { elems, .. }) => {
                        elems.iter().map(|e| Some(&e.value)).collect()
                    }
                    _ => match self.eval(over) {
                        Abs::Int(n) if (0..=UNROLL_LIMIT as i64).contains(&n) => {
                            vec![None; n as usize]
                        }
                        _ => {
                            return Err(FrontError::Unsupported {
                                feature: "loop with channel operations and an unknown trip count"
                                    .into(),
                                line,
                            })
                        }
                    },
                };
                let op = if *define { ":=" } else { "=" };
                for (i, elem) in elems.into_iter().enumerate() {
                    self.scopes.push(HashMap::new());
                    if let Some(k) = key {
                        self.bind(
                            k,
                            op,
                            VarInfo {
                                ty: Some(TypeExpr::Name("int".into())),
                                val: Abs::Int(i as i64),
                            },
                        );
                    }
                    if let (Some(v), Some(e)) = (value, elem) {
                        let info = VarInfo {
                            ty: self.expr_type(e),
                            val: self.eval(e),
                        };
                        self.bind(v, op, info);
                    }
                    self.seq(&refs(&body.0), out)?;
                    self.scopes.pop();
                }
            }
        }
        self.scopes.pop();
        Ok(())
    }

    /// Whether running `body` can produce flow items.
    fn communicates(&self, body: &Block) -> bool {
        let mut found = false;
        scan_block(body, &mut |n| match n {
            Node::Stmt(Stmt::Send { .. }) => found = true,
            Node::Expr(Expr::Unary(op, _)) if op == "<-" => found = true,
            Node::Expr(Expr::Call { func, .. }) => {
                if func.qualified_name().as_deref() == Some("time.After") {
                    found = true;
                }
                let target = match func.as_ref() {
                    Expr::Ident(n) => match self.lookup(n) {
                        Some(VarInfo {
                            val: Abs::Func(f), ..
                        }) => Some(f.clone()),
                        Some(_) => None,
                        None => self.g.top_level(n),
                    },
                    other => self.g.callee_syntactic(other, &HashMap::new()),
                };
                if target.is_some_and(|t| self.g.coroutines.contains(&t)) {
                    found = true;
                }
            }
            _ => {}
        });
        found
    }
}

fn binary(a: &Abs, op: &str, b: &Abs) -> Abs {
    let cmp = match op {
        "==" => Some(CmpOp::Eq),
        "!=" => Some(CmpOp::Ne),
        "<" => Some(CmpOp::Lt),
        "<=" => Some(CmpOp::Le),
        ">" => Some(CmpOp::Gt),
        ">=" => Some(CmpOp::Ge),
        _ => None,
    };
    match (a, b) {
        (Abs::Int(x), Abs::Int(y)) => {
            if let Some(c) = cmp {
                return Abs::Bool(c.eval(x, y));
            }
            let v = match op {
                "+" => x.checked_add(*y),
                "-" => x.checked_sub(*y),
                "*" => x.checked_mul(*y),
                "/" => x.checked_div(*y),
                "%" => x.checked_rem(*y),
                _ => None,
            };
            v.map_or(Abs::Unknown, Abs::Int)
        }
        (Abs::Int(_) | Abs::Term(_), Abs::Int(_) | Abs::Term(_)) => match cmp {
            Some(c) => Abs::Pred(Predicate::cmp(term_of(a), c, term_of(b))),
            None => Abs::Unknown,
        },
        _ => {
            let (pa, pb) = (pred_of(a), pred_of(b));
            let combined = match (op, pa, pb) {
                ("&&", Some(x), Some(y)) => x.and(y),
                ("||", Some(x), Some(y)) => x.or(y),
                ("&&", Some(Predicate::False), None) | ("&&", None, Some(Predicate::False)) => {
                    Predicate::False
                }
                ("||", Some(Predicate::True), None) | ("||", None, Some(Predicate::True)) => {
                    Predicate::True
                }
                ("==", Some(x), Some(y)) => x.clone().and(y.clone()).or(x.not().and(y.not())),
                ("!=", Some(x), Some(y)) => x.clone().and(y.clone().not()).or(x.not().and(y)),
                _ => return Abs::Unknown,
            };
            match combined.simplify() {
                Predicate::True => Abs::Bool(true),
                Predicate::False => Abs::Bool(false),
                p => Abs::Pred(p),
            }
        }
    }
}

fn term_of(a: &Abs) -> Term {
    match a {
        Abs::Int(n) => Term::Int(*n),
        Abs::Term(t) => t.clone(),
        _ => unreachable!("numeric value"),
    }
}

fn pred_of(a: &Abs) -> Option<Predicate> {
    match a {
        Abs::Bool(b) => Some(Predicate::from(*b)),
        Abs::Pred(p) => Some(p.clone()),
        _ => None,
    }
}

/// `rand.Intn(k)`, optionally plus a constant, gives a bounded range.
fn random_range(e: &Expr) -> Option<Interval> {
    fn intn(e: &Expr) -> Option<i64> {
        match e {
            Expr::Call { func, args, .. }
                if func.qualified_name().as_deref() == Some("rand.Intn") =>
            {
                match args.as_slice() {
                    [Expr::Int(k)] if *k > 0 => Some(*k),
                    _ => None,
                }
            }
            _ => None,
        }
    }
    if let Some(k) = intn(e) {
        return Some(Interval::new(0, k - 1));
    }
    match e {
        Expr::Binary(l, op, r) if op == "+" || op == "-" => {
            let (k, c) = match (intn(l), &**r, intn(r), &**l) {
                (Some(k), Expr::Int(c), _, _) => (k, *c),
                (_, _, Some(k), Expr::Int(c)) if op == "+" => (k, *c),
                _ => return None,
            };
            let c = if op == "-" { -c } else { c };
            Some(Interval::new(c, k - 1 + c))
        }
        _ => None,
    }
}

fn merge_scopes(
    a: Vec<HashMap<String, VarInfo>>,
    b: Vec<HashMap<String, VarInfo>>,
) -> Vec<HashMap<String, VarInfo>> {
    a.into_iter()
        .zip(b)
        .map(|(mut sa, sb)| {
            for (k, v) in sa.iter_mut() {
                if sb.get(k) != Some(v) {
                    v.val = Abs::Unknown;
                }
            }
            sa
        })
        .collect()
}

fn if_returns(i: &IfStmt) -> bool {
    let mut found = false;
    let mut check = |b: &Block| {
        scan_block(b, &mut |n| {
            if let Node::Stmt(Stmt::Return(..)) = n {
                found = true;
            }
        })
    };
    check(&i.then);
    match i.els.as_deref() {
        Some(Else::Block(b)) => check(b),
        Some(Else::If(inner)) if if_returns(inner) => return true,
        Some(Else::If(_)) | None => {}
    }
    found
}

fn refs(stmts: &[Stmt]) -> Vec<&Stmt> {
    stmts.iter().collect()
}

fn has_return(b: &Block) -> bool {
    let mut found = false;
    scan_block(b, &mut |n| {
        if let Node::Stmt(Stmt::Return(..)) = n {
            found = true;
        }
    });
    found
}

fn has_jump(b: &Block) -> bool {
    let mut found = false;
    scan_block(b, &mut |n| {
        if let Node::Stmt(Stmt::Break(_) | Stmt::Continue(_) | Stmt::Return(..)) = n {
            found = true;
        }
    });
    found
}

fn flow_vars(flow: &[FlowItem]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for item in flow {
        match item {
            FlowItem::Choice(branches) => {
                for b in branches {
                    out.extend(b.guard.vars());
                    out.extend(flow_vars(&b.flow));
                }
            }
            FlowItem::Yield(t) | FlowItem::Receive(t) => t.visit(&mut |x| match x {
                Type::Constrained(_, p) => out.extend(p.vars()),
                Type::Start(app) | Type::Inline(app) => {
                    for term in app.args.values() {
                        if let Some(v) = term.as_var() {
                            out.insert(v.to_string());
                        }
                    }
                }
                _ => {}
            }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_file;
    use super::*;
    use crate::calculus::parse_type;

    fn program(src: &str) -> Program {
        translate(&parse_file(src).unwrap()).unwrap()
    }

    fn def(p: &Program, name: &str) -> String {
        p.definitions[name].to_string()
    }

    #[test]
    fn out_of_order_definitions() {
        let p = program(
            "package main

func work(cInt chan int, cStr chan string) {
	<-cInt
	<-cStr
}

func main() {
	cInt := make(chan int)
	cStr := make(chan string)
	go work(cInt, cStr)
	cStr <- \"hello\"
	cInt <- 1
}
",
        );
        assert_eq!(
            p.definitions["work"],
            parse_type("corDef[?Int; ?String]").unwrap()
        );
        assert_eq!(
            p.definitions["main"],
            parse_type("corDef[Start(work); !String; !Int]").unwrap()
        );
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn fixed_point_reaches_callers() {
        let p = program(
            "package main

type Error interface{}

func run(f func() Error) chan Error {
	ch := make(chan Error)
	go func() {
		ch <- f()
	}()
	return ch
}

func main() {
	err := run(func() Error { return nil })
	<-err
}
",
        );
        assert_eq!(
            p.coroutines.iter().map(String::as_str).collect::<Vec<_>>(),
            ["anon@7", "main", "run"]
        );
        assert_eq!(p.iterations, 2);
        assert_eq!(def(&p, "run"), "corDef[Start(anon@7)]");
        assert_eq!(def(&p, "main"), "corDef[Inline(run); ?Error]");
        assert_eq!(def(&p, "anon@7"), "corDef[!Error]");
    }

    #[test]
    fn symbolic_parameter_and_defer() {
        let p = program(
            "package main

var ch1 chan int = make(chan int)
var ch2 chan bool = make(chan bool)

func s(v int) {
	defer func() { ch2 <- true }()
	if v < 10 {
		ch1 <- v
	} else {
		ch2 <- true
	}
}

func main() {
	go s(2)
	fmt.Println(<-ch1, <-ch2)
}
",
        );
        assert_eq!(
            def(&p, "s"),
            "corDef[(<!Int> / v < 10 | <!Bool> / v >= 10); Inline(anon@7)]"
        );
        assert_eq!(def(&p, "main"), "corDef[Start(s, v ↦ 2); ?Int; ?Bool]");
    }

    #[test]
    fn random_domains_and_constant_folding() {
        let p = program(
            "package main

func main() {
	ch := make(chan int)
	weekday := rand.Intn(7) + 1
	if 1 <= weekday && weekday <= 3 {
		go func() { ch <- 1 }()
	}
	if true {
		ch <- 2
	}
}
",
        );
        assert_eq!(p.domains["weekday"], Interval::new(1, 7));
        assert_eq!(
            def(&p, "main"),
            "corDef[(<Start(anon@7)> / weekday >= 1 && weekday <= 3 | <> / ~(weekday >= 1 && weekday <= 3)); !Int]"
        );
    }

    #[test]
    fn early_return_absorbs_the_rest() {
        let p = program(
            "package main

func f(ch chan int, x int) {
	if x > 0 {
		return
	}
	ch <- x
}

func main() {
	ch := make(chan int)
	go f(ch, 1)
	<-ch
}
",
        );
        assert_eq!(def(&p, "f"), "corDef[(<> / x > 0 | <!Int> / x <= 0)]");
    }

    #[test]
    fn loops_unroll_with_known_bounds() {
        let p = program(
            "package main

func main() {
	ch := make(chan int)
	go func() {
		for i := 0; i < 3; i++ {
			<-ch
		}
	}()
	for i := 0; i < 3; i++ {
		ch <- i
	}
}
",
        );
        assert_eq!(def(&p, "anon@5"), "corDef[?Int; ?Int; ?Int]");
        assert_eq!(def(&p, "main"), "corDef[Start(anon@5); !Int; !Int; !Int]");
    }

    #[test]
    fn unknown_loop_bound_is_unsupported() {
        let err = translate(
            &parse_file("package main\nfunc main() {\n\tch := make(chan int)\n\tfor n := f(); n > 0; n-- {\n\t\tch <- 1\n\t}\n}\n")
                .unwrap(),
        )
        .unwrap_err();
        assert!(
            matches!(err, FrontError::Unsupported { line: 4, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn channel_in_loop_header_counts() {
        let src = |body: &str| {
            format!("package main\nfunc main() {{\n\tch := make(chan int)\n{body}\n}}\n")
        };
        let err = translate(&parse_file(&src("\tfor v := range ch {\n\t\t_ = v\n\t}")).unwrap())
            .unwrap_err();
        assert_eq!(
            err,
            FrontError::Unsupported {
                feature: "range over channel".into(),
                line: 4
            }
        );
        let err = translate(&parse_file(&src("\tfor <-ch > 0 {\n\t}")).unwrap()).unwrap_err();
        assert!(
            matches!(err, FrontError::Unsupported { line: 4, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn shared_element_types_warn() {
        let p = program(
            "package main\nfunc main() {\n\ta := make(chan int)\n\tb := make(chan int)\n\tgo func() { a <- 1 }()\n\t<-b\n}\n",
        );
        assert_eq!(p.warnings.len(), 1);
        assert!(p.warnings[0].contains("`a`, `b`"));
    }

    #[test]
    fn embedded_structs_become_subtypes() {
        let p = program(
            "package main

type User struct{ name string }
type Faculty struct {
	User
}

func main() {
	ch := make(chan User)
	go func() { ch <- Faculty{} }()
	<-ch
}
",
        );
        assert_eq!(p.universe.holds(INHERIT, &["Faculty", "User"]), Some(true));
        assert_eq!(def(&p, "anon@10"), "corDef[!Faculty]");
        assert!(
            def(&p, "main").contains("?(recv@11 / "),
            "{}",
            def(&p, "main")
        );
    }

    #[test]
    fn unknown_channels_are_reported() {
        let err = translate(
            &parse_file("package main\nfunc main() {\n\tx := f()\n\tx <- 1\n}\n").unwrap(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            FrontError::UnknownChannel {
                expr: "x".into(),
                line: 4
            }
        );
    }

    #[test]
    fn type_names() {
        assert_eq!(type_name(&TypeExpr::Name("int64".into())), "Int");
        assert_eq!(type_name(&TypeExpr::Name("pkg.T".into())), "T");
        assert_eq!(type_name(&TypeExpr::Struct(vec![])), "Struct");
        assert_eq!(type_name(&TypeExpr::Name("string".into())), "String");
    }
}
