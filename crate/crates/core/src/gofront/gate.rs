//! Rejects constructs the translation cannot model faithfully: buffered
//! channels, `close`, directional channel types, the `sync` package and
//! goroutines spawned inside loops.

use super::ast::*;
use super::FrontError;

pub fn check(file: &File) -> Result<(), FrontError> {
    let mut g = Gate {
        line: 0,
        loop_depth: 0,
    };
    for d in &file.decls {
        g.decl(d)?;
    }
    Ok(())
}

struct Gate {
    line: usize,
    loop_depth: usize,
}

type GResult = Result<(), FrontError>;

impl Gate {
    fn fail(&self, feature: &str) -> GResult {
        Err(FrontError::Unsupported {
            feature: feature.to_string(),
            line: self.line,
        })
    }

    fn decl(&mut self, d: &Decl) -> GResult {
        match d {
            Decl::Func(fd) => {
                self.line = fd.line.0;
                if let Some(r) = &fd.recv {
                    self.ty(&r.ty)?;
                }
                self.sig(&fd.sig)?;
                if let Some(b) = &fd.body {
                    let saved = std::mem::replace(&mut self.loop_depth, 0);
                    self.block(b)?;
                    self.loop_depth = saved;
                }
                Ok(())
            }
            Decl::Var(specs) | Decl::Const(specs) => {
                specs.iter().try_for_each(|s| self.var_spec(s))
            }
            Decl::Type(specs) => specs.iter().try_for_each(|s| {
                self.line = s.line.0;
                self.ty(&s.ty)
            }),
        }
    }

    fn var_spec(&mut self, s: &VarSpec) -> GResult {
        self.line = s.line.0;
        if let Some(t) = &s.ty {
            self.ty(t)?;
        }
        s.values.iter().try_for_each(|e| self.expr(e))
    }

    fn sig(&mut self, sig: &Signature) -> GResult {
        sig.params
            .iter()
            .chain(&sig.results)
            .try_for_each(|p| self.ty(&p.ty))
    }

    fn ty(&mut self, t: &TypeExpr) -> GResult {
        match t {
            TypeExpr::Name(n) if n.starts_with("sync.") => self.fail("sync package"),
            TypeExpr::Name(_) => Ok(()),
            TypeExpr::Chan(ChanDir::Both, inner) => self.ty(inner),
            TypeExpr::Chan(..) => self.fail("directional channel type"),
            TypeExpr::Pointer(inner) | TypeExpr::Slice(inner) | TypeExpr::Variadic(inner) => {
                self.ty(inner)
            }
            TypeExpr::Array(len, inner) => {
                self.expr(len)?;
                self.ty(inner)
            }
            TypeExpr::Map(k, v) => {
                self.ty(k)?;
                self.ty(v)
            }
            TypeExpr::Func(sig) => self.sig(sig),
            TypeExpr::Struct(fields) => fields.iter().try_for_each(|f| self.ty(&f.ty)),
            TypeExpr::Interface(ms) => ms.iter().try_for_each(|m| match m {
                Method::Named(_, sig) => self.sig(sig),
                Method::Embedded(t) => self.ty(t),
            }),
        }
    }

    fn block(&mut self, b: &Block) -> GResult {
        b.0.iter().try_for_each(|s| self.stmt(s))
    }

    fn stmt(&mut self, s: &Stmt) -> GResult {
        self.line = s.line();
        match s {
            Stmt::Expr(e, _) => self.expr(e),
            Stmt::Send { chan, value, .. } => {
                self.expr(chan)?;
                self.expr(value)
            }
            Stmt::IncDec { target, .. } => self.expr(target),
            Stmt::Assign { lhs, rhs, .. } => lhs.iter().chain(rhs).try_for_each(|e| self.expr(e)),
            Stmt::Var(specs) | Stmt::Const(specs) => {
                specs.iter().try_for_each(|s| self.var_spec(s))
            }
            Stmt::Type(specs) => specs.iter().try_for_each(|s| self.ty(&s.ty)),
            Stmt::Go(e, _) => {
                if self.loop_depth > 0 {
                    return self.fail("go statement inside a loop");
                }
                self.expr(e)
            }
            Stmt::Defer(e, _) => self.expr(e),
            Stmt::Return(es, _) => es.iter().try_for_each(|e| self.expr(e)),
            Stmt::Break(_) | Stmt::Continue(_) => Ok(()),
            Stmt::Block(b) => self.block(b),
            Stmt::If(i) => self.if_stmt(i),
            Stmt::For(f) => {
                self.loop_depth += 1;
                let r = match f {
                    ForStmt::Loop {
                        init,
                        cond,
                        post,
                        body,
                        ..
                    } => {
                        if let Some(s) = init {
                            self.stmt(s)?;
                        }
                        if let Some(c) = cond {
                            self.expr(c)?;
                        }
                        if let Some(s) = post {
                            self.stmt(s)?;
                        }
                        self.block(body)
                    }
                    ForStmt::Range { over, body, .. } => {
                        self.expr(over)?;
                        self.block(body)
                    }
                };
                self.loop_depth -= 1;
                r
            }
        }
    }

    fn if_stmt(&mut self, i: &IfStmt) -> GResult {
        self.line = i.line.0;
        if let Some(s) = &i.init {
            self.stmt(s)?;
        }
        self.expr(&i.cond)?;
        self.block(&i.then)?;
        match i.els.as_deref() {
            Some(Else::If(inner)) => self.if_stmt(inner),
            Some(Else::Block(b)) => self.block(b),
            None => Ok(()),
        }
    }

    fn expr(&mut self, e: &Expr) -> GResult {
        match e {
            Expr::Ident(_) | Expr::Int(_) | Expr::Lit(_) => Ok(()),
            Expr::Unary(_, x) => self.expr(x),
            Expr::Binary(l, _, r) => {
                self.expr(l)?;
                self.expr(r)
            }
            Expr::Call { func, args, .. } => {
                match func.as_ident() {
                    Some("close") => return self.fail("close"),
                    Some("make")
                        if matches!(args.first(), Some(Expr::Type(TypeExpr::Chan(..))))
                            && args.len() > 1
                            && args[1] != Expr::Int(0) =>
                    {
                        return self.fail("buffered channel");
                    }
                    _ => {}
                }
                self.expr(func)?;
                args.iter().try_for_each(|a| self.expr(a))
            }
            Expr::Selector(base, _) => {
                if base.as_ident() == Some("sync") {
                    return self.fail("sync package");
                }
                self.expr(base)
            }
            Expr::Index(a, b) => {
                self.expr(a)?;
                self.expr(b)
            }
            Expr::SliceExpr(a, lo, hi) => {
                self.expr(a)?;
                lo.iter().chain(hi).try_for_each(|x| self.expr(x))
            }
            Expr::TypeAssert(x, t) => {
                self.expr(x)?;
                self.ty(t)
            }
            Expr::FuncLit { sig, body, line } => {
                self.sig(sig)?;
                let outer = self.line;
                self.line = line.0;
                // A literal's body runs wherever it is invoked; a `go` inside
                // it is only in a loop if the literal itself loops.
                let saved = std::mem::replace(&mut self.loop_depth, 0);
                self.block(body)?;
                self.loop_depth = saved;
                self.line = outer;
                Ok(())
            }
            Expr::Composite { ty, elems } => {
                if let Some(t) = ty {
                    self.ty(t)?;
                }
                elems.iter().try_for_each(|el| {
                    if let Some(k) = &el.key {
                        self.expr(k)?;
                    }
                    self.expr(&el.value)
                })
            }
            Expr::Type(t) => self.ty(t),
        }
    }
}
