//! Recursive-descent parser. Statements outside the supported subset
//! (`switch`, `select`, `goto`, labels) are rejected here with
//! [`FrontError::Unsupported`]; the remaining gaps are checked by the gate.

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::FrontError;

pub fn parse_file(src: &str) -> Result<File, FrontError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        no_lit: false,
    };
    p.file()
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Inside an `if`/`for` header, `T {` opens the block rather than a
    /// composite literal.
    no_lit: bool,
}

type PResult<T> = Result<T, FrontError>;

fn binary_prec(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 1,
        "&&" => 2,
        "==" | "!=" | "<" | "<=" | ">" | ">=" => 3,
        "+" | "-" | "|" | "^" => 4,
        "*" | "/" | "%" | "<<" | ">>" | "&" | "&^" => 5,
        _ => return None,
    })
}

pub(crate) fn precedence(op: &str) -> u8 {
    binary_prec(op).unwrap_or(0)
}

const ASSIGN_OPS: &[&str] = &[
    "=", ":=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", "&^=",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn line(&self) -> usize {
        self.toks[self.pos].line
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_op(&self, op: &str) -> bool {
        matches!(self.peek(), Tok::Op(o) if *o == op)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Keyword(k) if *k == kw)
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.is_op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_semi(&mut self) -> bool {
        if *self.peek() == Tok::Semi {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(FrontError::Syntax {
            line: self.line(),
            expected: format!("{expected}, found {}", self.peek().describe()),
        })
    }

    fn expect_op(&mut self, op: &str) -> PResult<()> {
        if self.eat_op(op) {
            Ok(())
        } else {
            self.error(&format!("`{op}`"))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("identifier"),
        }
    }

    /// End of a declaration or statement: `;`, or nothing before `)`/`}`.
    fn end_item(&mut self) -> PResult<()> {
        if self.eat_semi() || self.is_op(")") || self.is_op("}") || *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("`;` or newline")
        }
    }

    fn unsupported<T>(&self, feature: &str) -> PResult<T> {
        Err(FrontError::Unsupported {
            feature: feature.to_string(),
            line: self.line(),
        })
    }

    // ---- declarations ----

    fn file(&mut self) -> PResult<File> {
        while self.eat_semi() {}
        self.expect_kw("package")?;
        let package = self.ident()?;
        self.end_item()?;
        let mut imports = Vec::new();
        while self.is_kw("import") {
            self.bump();
            if self.eat_op("(") {
                while !self.eat_op(")") {
                    if self.eat_semi() {
                        continue;
                    }
                    imports.push(self.import_spec()?);
                    self.end_item()?;
                }
            } else {
                imports.push(self.import_spec()?);
            }
            self.end_item()?;
        }
        let mut decls = Vec::new();
        loop {
            while self.eat_semi() {}
            if *self.peek() == Tok::Eof {
                break;
            }
            decls.push(self.top_decl()?);
            self.end_item()?;
        }
        Ok(File {
            package,
            imports,
            decls,
        })
    }

    fn import_spec(&mut self) -> PResult<String> {
        if let Tok::Ident(_) | Tok::Op(".") = self.peek() {
            self.bump();
        }
        match self.bump() {
            Tok::Str(s) => Ok(s.trim_matches(|c| c == '"' || c == '`').to_string()),
            _ => {
                self.pos -= 1;
                self.error("import path")
            }
        }
    }

    fn top_decl(&mut self) -> PResult<Decl> {
        match self.peek() {
            Tok::Keyword("func") => self.func_decl().map(Decl::Func),
            Tok::Keyword("var") => {
                self.bump();
                self.grouped(Self::var_spec).map(Decl::Var)
            }
            Tok::Keyword("const") => {
                self.bump();
                self.grouped(Self::const_spec).map(Decl::Const)
            }
            Tok::Keyword("type") => {
                self.bump();
                self.grouped(Self::type_spec).map(Decl::Type)
            }
            _ => self.error("declaration"),
        }
    }

    fn grouped<T>(&mut self, mut spec: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        if self.eat_op("(") {
            let mut out = Vec::new();
            while !self.eat_op(")") {
                if self.eat_semi() {
                    continue;
                }
                out.push(spec(self)?);
                self.end_item()?;
            }
            Ok(out)
        } else {
            Ok(vec![spec(self)?])
        }
    }

    fn ident_list(&mut self) -> PResult<Vec<String>> {
        let mut names = vec![self.ident()?];
        while self.eat_op(",") {
            names.push(self.ident()?);
        }
        Ok(names)
    }

    fn var_spec(&mut self) -> PResult<VarSpec> {
        let line = Line(self.line());
        let names = self.ident_list()?;
        let ty = if self.is_op("=") {
            None
        } else {
            Some(self.type_expr()?)
        };
        let values = if self.eat_op("=") {
            self.expr_list()?
        } else {
            Vec::new()
        };
        Ok(VarSpec {
            names,
            ty,
            values,
            line,
        })
    }

    fn const_spec(&mut self) -> PResult<VarSpec> {
        let line = Line(self.line());
        let names = self.ident_list()?;
        let ty = if self.is_op("=") || *self.peek() == Tok::Semi || self.is_op(")") {
            None
        } else {
            Some(self.type_expr()?)
        };
        let values = if self.eat_op("=") {
            self.expr_list()?
        } else {
            Vec::new()
        };
        Ok(VarSpec {
            names,
            ty,
            values,
            line,
        })
    }

    fn type_spec(&mut self) -> PResult<TypeSpec> {
        let line = Line(self.line());
        let name = self.ident()?;
        self.eat_op("=");
        let ty = self.type_expr()?;
        Ok(TypeSpec { name, ty, line })
    }

    fn func_decl(&mut self) -> PResult<FuncDecl> {
        let line = Line(self.line());
        self.expect_kw("func")?;
        let recv = if self.is_op("(") {
            let mut ps = self.params()?;
            if ps.len() != 1 {
                return self.error("a single receiver");
            }
            Some(ps.remove(0))
        } else {
            None
        };
        let name = self.ident()?;
        let sig = self.signature()?;
        let body = if self.is_op("{") {
            Some(self.block()?)
        } else {
            None
        };
        Ok(FuncDecl {
            name,
            recv,
            sig,
            body,
            line,
        })
    }

    fn signature(&mut self) -> PResult<Signature> {
        let params = self.params()?;
        let results = if self.is_op("(") {
            self.params()?
        } else if self.starts_type() {
            vec![Param {
                name: None,
                ty: self.type_expr()?,
            }]
        } else {
            Vec::new()
        };
        Ok(Signature { params, results })
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect_op("(")?;
        let saved = std::mem::replace(&mut self.no_lit, false);
        let mut entries: Vec<(Option<String>, Option<TypeExpr>)> = Vec::new();
        while !self.is_op(")") {
            let named = matches!(self.peek(), Tok::Ident(_))
                && !matches!(self.peek_at(1), Tok::Op("," | ")" | "."));
            if named {
                let name = self.ident()?;
                entries.push((Some(name), Some(self.param_type()?)));
            } else {
                entries.push((None, Some(self.param_type()?)));
            }
            if !self.eat_op(",") {
                break;
            }
            while self.eat_semi() {}
        }
        self.expect_op(")")?;
        self.no_lit = saved;
        if entries.iter().any(|(n, _)| n.is_some()) {
            // `a, b int`: bare names take the type of the next named entry.
            let mut out = Vec::with_capacity(entries.len());
            let mut pending: Vec<String> = Vec::new();
            for (name, ty) in entries {
                match (name, ty) {
                    (None, Some(TypeExpr::Name(n))) => pending.push(n),
                    (Some(n), Some(ty)) => {
                        for p in pending.drain(..) {
                            out.push(Param {
                                name: Some(p),
                                ty: ty.clone(),
                            });
                        }
                        out.push(Param { name: Some(n), ty });
                    }
                    _ => return self.error("parameter name"),
                }
            }
            if !pending.is_empty() {
                return self.error("parameter type");
            }
            Ok(out)
        } else {
            Ok(entries
                .into_iter()
                .map(|(_, ty)| Param {
                    name: None,
                    ty: ty.expect("typed entry"),
                })
                .collect())
        }
    }

    fn param_type(&mut self) -> PResult<TypeExpr> {
        if self.eat_op("...") {
            Ok(TypeExpr::Variadic(Box::new(self.type_expr()?)))
        } else {
            self.type_expr()
        }
    }

    fn starts_type(&self) -> bool {
        match self.peek() {
            Tok::Ident(_) => true,
            Tok::Keyword(k) => matches!(*k, "chan" | "func" | "map" | "struct" | "interface"),
            Tok::Op(o) => matches!(*o, "*" | "[" | "<-"),
            _ => false,
        }
    }

    fn type_expr(&mut self) -> PResult<TypeExpr> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                if self.is_op(".") && matches!(self.peek_at(1), Tok::Ident(_)) {
                    self.bump();
                    let sel = self.ident()?;
                    Ok(TypeExpr::Name(format!("{name}.{sel}")))
                } else {
                    Ok(TypeExpr::Name(name))
                }
            }
            Tok::Op("*") => {
                self.bump();
                Ok(TypeExpr::Pointer(Box::new(self.type_expr()?)))
            }
            Tok::Op("(") => {
                self.bump();
                let t = self.type_expr()?;
                self.expect_op(")")?;
                Ok(t)
            }
            Tok::Op("[") => {
                self.bump();
                if self.eat_op("]") {
                    return Ok(TypeExpr::Slice(Box::new(self.type_expr()?)));
                }
                let saved = std::mem::replace(&mut self.no_lit, false);
                let len = self.expr()?;
                self.no_lit = saved;
                self.expect_op("]")?;
                Ok(TypeExpr::Array(Box::new(len), Box::new(self.type_expr()?)))
            }
            Tok::Op("<-") => {
                self.bump();
                self.expect_kw("chan")?;
                Ok(TypeExpr::Chan(ChanDir::Recv, Box::new(self.type_expr()?)))
            }
            Tok::Keyword("chan") => {
                self.bump();
                let dir = if self.eat_op("<-") {
                    ChanDir::Send
                } else {
                    ChanDir::Both
                };
                Ok(TypeExpr::Chan(dir, Box::new(self.type_expr()?)))
            }
            Tok::Keyword("map") => {
                self.bump();
                self.expect_op("[")?;
                let k = self.type_expr()?;
                self.expect_op("]")?;
                Ok(TypeExpr::Map(Box::new(k), Box::new(self.type_expr()?)))
            }
            Tok::Keyword("func") => {
                self.bump();
                Ok(TypeExpr::Func(self.signature()?))
            }
            Tok::Keyword("struct") => {
                self.bump();
                self.expect_op("{")?;
                let mut fields = Vec::new();
                while !self.eat_op("}") {
                    if self.eat_semi() {
                        continue;
                    }
                    let embedded = self.is_op("*")
                        || (matches!(self.peek(), Tok::Ident(_))
                            && matches!(
                                self.peek_at(1),
                                Tok::Semi | Tok::Op("}" | ".") | Tok::Str(_)
                            ));
                    let field = if embedded {
                        Field {
                            names: Vec::new(),
                            ty: self.type_expr()?,
                        }
                    } else {
                        let names = self.ident_list()?;
                        Field {
                            names,
                            ty: self.type_expr()?,
                        }
                    };
                    if let Tok::Str(_) = self.peek() {
                        self.bump();
                    }
                    fields.push(field);
                    self.end_item()?;
                }
                Ok(TypeExpr::Struct(fields))
            }
            Tok::Keyword("interface") => {
                self.bump();
                self.expect_op("{")?;
                let mut methods = Vec::new();
                while !self.eat_op("}") {
                    if self.eat_semi() {
                        continue;
                    }
                    if matches!(self.peek(), Tok::Ident(_))
                        && matches!(self.peek_at(1), Tok::Op("("))
                    {
                        let name = self.ident()?;
                        methods.push(Method::Named(name, self.signature()?));
                    } else {
                        methods.push(Method::Embedded(self.type_expr()?));
                    }
                    self.end_item()?;
                }
                Ok(TypeExpr::Interface(methods))
            }
            _ => self.error("type"),
        }
    }

    // ---- statements ----

    fn block(&mut self) -> PResult<Block> {
        self.expect_op("{")?;
        let saved = std::mem::replace(&mut self.no_lit, false);
        let mut stmts = Vec::new();
        while !self.eat_op("}") {
            if self.eat_semi() {
                continue;
            }
            if *self.peek() == Tok::Eof {
                return self.error("`}`");
            }
            stmts.push(self.stmt()?);
            self.end_item()?;
        }
        self.no_lit = saved;
        Ok(Block(stmts))
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let line = Line(self.line());
        match self.peek().clone() {
            Tok::Keyword("var") => {
                self.bump();
                self.grouped(Self::var_spec).map(Stmt::Var)
            }
            Tok::Keyword("const") => {
                self.bump();
                self.grouped(Self::const_spec).map(Stmt::Const)
            }
            Tok::Keyword("type") => {
                self.bump();
                self.grouped(Self::type_spec).map(Stmt::Type)
            }
            Tok::Keyword("go") => {
                self.bump();
                Ok(Stmt::Go(self.expr()?, line))
            }
            Tok::Keyword("defer") => {
                self.bump();
                Ok(Stmt::Defer(self.expr()?, line))
            }
            Tok::Keyword("return") => {
                self.bump();
                let values = if matches!(self.peek(), Tok::Semi | Tok::Op("}")) {
                    Vec::new()
                } else {
                    self.expr_list()?
                };
                Ok(Stmt::Return(values, line))
            }
            Tok::Keyword(k @ ("break" | "continue")) => {
                self.bump();
                if let Tok::Ident(_) = self.peek() {
                    return self.unsupported("labeled statement");
                }
                Ok(if k == "break" {
                    Stmt::Break(line)
                } else {
                    Stmt::Continue(line)
                })
            }
            Tok::Keyword("if") => self.if_stmt().map(Stmt::If),
            Tok::Keyword("for") => self.for_stmt().map(Stmt::For),
            Tok::Keyword(k @ ("switch" | "select" | "goto" | "fallthrough")) => self.unsupported(k),
            Tok::Op("{") => self.block().map(Stmt::Block),
            Tok::Ident(_) if matches!(self.peek_at(1), Tok::Op(":")) => {
                self.unsupported("labeled statement")
            }
            _ => self.simple_stmt(),
        }
    }

    fn simple_stmt(&mut self) -> PResult<Stmt> {
        let line = Line(self.line());
        let lhs = self.expr_list()?;
        if let Tok::Op(op) = self.peek().clone() {
            if ASSIGN_OPS.contains(&op) {
                self.bump();
                let rhs = self.expr_list()?;
                return Ok(Stmt::Assign {
                    lhs,
                    op: op.to_string(),
                    rhs,
                    line,
                });
            }
            if op == "<-" {
                self.bump();
                let value = self.expr()?;
                let chan = single(lhs, self)?;
                return Ok(Stmt::Send { chan, value, line });
            }
            if op == "++" || op == "--" {
                self.bump();
                let target = single(lhs, self)?;
                return Ok(Stmt::IncDec {
                    target,
                    inc: op == "++",
                    line,
                });
            }
        }
        Ok(Stmt::Expr(single(lhs, self)?, line))
    }

    fn if_stmt(&mut self) -> PResult<IfStmt> {
        let line = Line(self.line());
        self.expect_kw("if")?;
        let saved = std::mem::replace(&mut self.no_lit, true);
        let first = self.simple_stmt()?;
        let (init, cond) = if self.eat_semi() {
            (Some(Box::new(first)), self.expr()?)
        } else {
            match first {
                Stmt::Expr(e, _) => (None, e),
                _ => return self.error("condition"),
            }
        };
        self.no_lit = saved;
        let then = self.block()?;
        let els = if self.is_kw("else") {
            self.bump();
            Some(Box::new(if self.is_kw("if") {
                Else::If(self.if_stmt()?)
            } else {
                Else::Block(self.block()?)
            }))
        } else {
            None
        };
        Ok(IfStmt {
            init,
            cond,
            then,
            els,
            line,
        })
    }

    fn for_stmt(&mut self) -> PResult<ForStmt> {
        let line = Line(self.line());
        self.expect_kw("for")?;
        if self.is_op("{") {
            let body = self.block()?;
            return Ok(ForStmt::Loop {
                init: None,
                cond: None,
                post: None,
                body,
                line,
            });
        }
        let saved = std::mem::replace(&mut self.no_lit, true);
        if self.is_kw("range") {
            self.bump();
            let over = self.expr()?;
            self.no_lit = saved;
            let body = self.block()?;
            return Ok(ForStmt::Range {
                key: None,
                value: None,
                define: false,
                over,
                body,
                line,
            });
        }
        let init = if *self.peek() == Tok::Semi {
            None
        } else {
            let lhs_line = Line(self.line());
            let lhs = self.expr_list()?;
            if (self.is_op(":=") || self.is_op("="))
                && matches!(self.peek_at(1), Tok::Keyword("range"))
            {
                let define = self.is_op(":=");
                self.bump();
                self.bump();
                let over = self.expr()?;
                self.no_lit = saved;
                let body = self.block()?;
                let mut it = lhs.into_iter();
                let (key, value) = (it.next(), it.next());
                if it.next().is_some() {
                    return self.error("at most two range variables");
                }
                return Ok(ForStmt::Range {
                    key,
                    value,
                    define,
                    over,
                    body,
                    line,
                });
            }
            // Re-dispatch the already parsed list as a simple statement.
            Some(Box::new(self.finish_simple(lhs, lhs_line)?))
        };
        if self.is_op("{") {
            self.no_lit = saved;
            let cond = match init {
                Some(s) => match *s {
                    Stmt::Expr(e, _) => Some(e),
                    _ => return self.error("loop condition"),
                },
                None => None,
            };
            let body = self.block()?;
            return Ok(ForStmt::Loop {
                init: None,
                cond,
                post: None,
                body,
                line,
            });
        }
        if !self.eat_semi() {
            return self.error("`;`");
        }
        let cond = if *self.peek() == Tok::Semi {
            None
        } else {
            Some(self.expr()?)
        };
        if !self.eat_semi() {
            return self.error("`;`");
        }
        let post = if self.is_op("{") {
            None
        } else {
            Some(Box::new(self.simple_stmt()?))
        };
        self.no_lit = saved;
        let body = self.block()?;
        Ok(ForStmt::Loop {
            init,
            cond,
            post,
            body,
            line,
        })
    }

    fn finish_simple(&mut self, lhs: Vec<Expr>, line: Line) -> PResult<Stmt> {
        if let Tok::Op(op) = self.peek().clone() {
            if ASSIGN_OPS.contains(&op) {
                self.bump();
                let rhs = self.expr_list()?;
                return Ok(Stmt::Assign {
                    lhs,
                    op: op.to_string(),
                    rhs,
                    line,
                });
            }
            if op == "<-" {
                self.bump();
                let value = self.expr()?;
                return Ok(Stmt::Send {
                    chan: single(lhs, self)?,
                    value,
                    line,
                });
            }
            if op == "++" || op == "--" {
                self.bump();
                return Ok(Stmt::IncDec {
                    target: single(lhs, self)?,
                    inc: op == "++",
                    line,
                });
            }
        }
        Ok(Stmt::Expr(single(lhs, self)?, line))
    }

    // ---- expressions ----

    fn expr_list(&mut self) -> PResult<Vec<Expr>> {
        let mut out = vec![self.expr()?];
        while self.eat_op(",") {
            out.push(self.expr()?);
        }
        Ok(out)
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary(&mut self, min: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Tok::Op(op) = self.peek().clone() {
            let Some(prec) = binary_prec(op) else { break };
            if prec < min {
                break;
            }
            self.bump();
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::Binary(Box::new(lhs), op.to_string(), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if let Tok::Op(op @ ("+" | "-" | "!" | "^" | "*" | "&" | "<-")) = self.peek().clone() {
            if op == "<-" && matches!(self.peek_at(1), Tok::Keyword("chan")) {
                let t = self.type_expr()?;
                return self.primary_suffix(Expr::Type(t));
            }
            self.bump();
            let operand = self.unary()?;
            return Ok(Expr::Unary(op.to_string(), Box::new(operand)));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let line = self.line();
        let base = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Expr::Int(n)
            }
            Tok::Float(s) | Tok::Str(s) | Tok::Char(s) => {
                self.bump();
                Expr::Lit(s)
            }
            Tok::Ident(name) => {
                self.bump();
                Expr::Ident(name)
            }
            Tok::Op("(") => {
                self.bump();
                let saved = std::mem::replace(&mut self.no_lit, false);
                let e = self.expr()?;
                self.no_lit = saved;
                self.expect_op(")")?;
                e
            }
            Tok::Keyword("func") => {
                self.bump();
                let sig = self.signature()?;
                if self.is_op("{") {
                    let body = self.block()?;
                    Expr::FuncLit {
                        sig,
                        body,
                        line: Line(line),
                    }
                } else {
                    Expr::Type(TypeExpr::Func(sig))
                }
            }
            Tok::Op("[") | Tok::Keyword("map" | "chan" | "struct" | "interface") => {
                let t = self.type_expr()?;
                if self.is_op("{") && !matches!(t, TypeExpr::Chan(..) | TypeExpr::Interface(_)) {
                    self.composite(Some(t))?
                } else {
                    Expr::Type(t)
                }
            }
            _ => return self.error("expression"),
        };
        self.primary_suffix(base)
    }

    fn primary_suffix(&mut self, mut e: Expr) -> PResult<Expr> {
        loop {
            if self.eat_op(".") {
                if self.eat_op("(") {
                    let t = self.type_expr()?;
                    self.expect_op(")")?;
                    e = Expr::TypeAssert(Box::new(e), t);
                } else {
                    let sel = self.ident()?;
                    e = Expr::Selector(Box::new(e), sel);
                }
            } else if self.is_op("(") {
                self.bump();
                let saved = std::mem::replace(&mut self.no_lit, false);
                let mut args = Vec::new();
                let mut spread = false;
                while !self.is_op(")") {
                    args.push(self.expr()?);
                    if self.eat_op("...") {
                        spread = true;
                    }
                    if !self.eat_op(",") {
                        break;
                    }
                    while self.eat_semi() {}
                }
                self.expect_op(")")?;
                self.no_lit = saved;
                e = Expr::Call {
                    func: Box::new(e),
                    args,
                    spread,
                };
            } else if self.is_op("[") {
                self.bump();
                let saved = std::mem::replace(&mut self.no_lit, false);
                let lo = if self.is_op(":") {
                    None
                } else {
                    Some(Box::new(self.expr()?))
                };
                if self.eat_op(":") {
                    let hi = if self.is_op("]") {
                        None
                    } else {
                        Some(Box::new(self.expr()?))
                    };
                    e = Expr::SliceExpr(Box::new(e), lo, hi);
                } else {
                    e = Expr::Index(Box::new(e), lo.expect("index"));
                }
                self.no_lit = saved;
                self.expect_op("]")?;
            } else if self.is_op("{") && !self.no_lit && is_type_like(&e) {
                let ty = match e {
                    Expr::Ident(n) => TypeExpr::Name(n),
                    other => TypeExpr::Name(other.qualified_name().expect("type-like")),
                };
                e = self.composite(Some(ty))?;
            } else {
                return Ok(e);
            }
        }
    }

    fn composite(&mut self, ty: Option<TypeExpr>) -> PResult<Expr> {
        self.expect_op("{")?;
        let saved = std::mem::replace(&mut self.no_lit, false);
        let mut elems = Vec::new();
        while !self.is_op("}") {
            while self.eat_semi() {}
            if self.is_op("}") {
                break;
            }
            let first = self.element_value()?;
            let elem = if self.eat_op(":") {
                Element {
                    key: Some(first),
                    value: self.element_value()?,
                }
            } else {
                Element {
                    key: None,
                    value: first,
                }
            };
            elems.push(elem);
            while self.eat_semi() {}
            if !self.eat_op(",") {
                break;
            }
            while self.eat_semi() {}
        }
        while self.eat_semi() {}
        self.expect_op("}")?;
        self.no_lit = saved;
        Ok(Expr::Composite { ty, elems })
    }

    fn element_value(&mut self) -> PResult<Expr> {
        if self.is_op("{") {
            self.composite(None)
        } else {
            self.expr()
        }
    }
}

fn is_type_like(e: &Expr) -> bool {
    match e {
        Expr::Ident(_) => true,
        Expr::Selector(base, _) => matches!(**base, Expr::Ident(_)),
        _ => false,
    }
}

fn single(mut list: Vec<Expr>, p: &Parser) -> PResult<Expr> {
    if list.len() == 1 {
        Ok(list.remove(0))
    } else {
        p.error("a single expression")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(src: &str) -> Vec<Stmt> {
        let f = parse_file(&format!("package main\nfunc main() {{\n{src}\n}}\n")).unwrap();
        match &f.decls[0] {
            Decl::Func(FuncDecl {
                body: Some(Block(stmts)),
                ..
            }) => stmts.clone(),
            _ => panic!(),
        }
    }

    #[test]
    fn send_receive_and_go() {
        let s = body("ch := make(chan int)\ngo func() { ch <- 20 }()\nfmt.Print(<-ch)");
        assert_eq!(s.len(), 3);
        assert!(matches!(&s[0], Stmt::Assign { op, .. } if op == ":="));
        let Stmt::Go(Expr::Call { func, .. }, _) = &s[1] else {
            panic!()
        };
        let Expr::FuncLit { body, line, .. } = &**func else {
            panic!()
        };
        assert_eq!(line.0, 4);
        assert!(matches!(body.0[0], Stmt::Send { .. }));
        let Stmt::Expr(Expr::Call { args, .. }, _) = &s[2] else {
            panic!()
        };
        assert_eq!(
            args[0],
            Expr::Unary("<-".into(), Box::new(Expr::ident("ch")))
        );
    }

    #[test]
    fn make_takes_a_type() {
        let s = body("c := make(chan struct{})");
        let Stmt::Assign { rhs, .. } = &s[0] else {
            panic!()
        };
        let Expr::Call { args, .. } = &rhs[0] else {
            panic!()
        };
        assert_eq!(
            args[0],
            Expr::Type(TypeExpr::Chan(
                ChanDir::Both,
                Box::new(TypeExpr::Struct(vec![]))
            ))
        );
    }

    #[test]
    fn if_header_is_not_a_composite_literal() {
        let s = body("if x == y { f() } else if z { g() } else { h() }");
        let Stmt::If(i) = &s[0] else { panic!() };
        assert!(matches!(i.cond, Expr::Binary(..)));
        assert!(matches!(i.els.as_deref(), Some(Else::If(_))));
    }

    #[test]
    fn precedence() {
        let s = body("x := 1 <= a && a <= 3 || b");
        let Stmt::Assign { rhs, .. } = &s[0] else {
            panic!()
        };
        let Expr::Binary(l, op, _) = &rhs[0] else {
            panic!()
        };
        assert_eq!(op, "||");
        assert!(matches!(&**l, Expr::Binary(_, o, _) if o == "&&"));
    }

    #[test]
    fn loops() {
        let s = body(
            "for i := 0; i < 3; i++ { f() }\nfor { }\nfor _, v := range xs { g(v) }\nfor x < 3 { }",
        );
        assert!(matches!(
            &s[0],
            Stmt::For(ForStmt::Loop {
                init: Some(_),
                cond: Some(_),
                post: Some(_),
                ..
            })
        ));
        assert!(matches!(
            &s[1],
            Stmt::For(ForStmt::Loop {
                init: None,
                cond: None,
                ..
            })
        ));
        assert!(matches!(
            &s[2],
            Stmt::For(ForStmt::Range { define: true, .. })
        ));
        assert!(matches!(
            &s[3],
            Stmt::For(ForStmt::Loop {
                init: None,
                cond: Some(_),
                post: None,
                ..
            })
        ));
    }

    #[test]
    fn grouped_params() {
        let f = parse_file(
            "package p\nfunc work(a, b chan int, s string) (int, error) { return 0, nil }",
        )
        .unwrap();
        let Decl::Func(fd) = &f.decls[0] else {
            panic!()
        };
        assert_eq!(fd.sig.params.len(), 3);
        assert_eq!(fd.sig.params[1].name.as_deref(), Some("b"));
        assert_eq!(fd.sig.results.len(), 2);
    }

    #[test]
    fn structs_and_composites() {
        let f = parse_file(
            "package p\ntype Faculty struct {\n\tUser\n\tname string `json:\"n\"`\n}\nvar x = Faculty{name: \"a\"}\n",
        )
        .unwrap();
        let Decl::Type(ts) = &f.decls[0] else {
            panic!()
        };
        let TypeExpr::Struct(fields) = &ts[0].ty else {
            panic!()
        };
        assert!(fields[0].names.is_empty());
        assert_eq!(fields[1].names, vec!["name".to_string()]);
        assert!(
            matches!(&f.decls[1], Decl::Var(v) if matches!(v[0].values[0], Expr::Composite { .. }))
        );
    }

    #[test]
    fn select_is_rejected_with_its_line() {
        let err = parse_file("package main\nfunc main() {\n\tselect {}\n}").unwrap_err();
        assert_eq!(
            err,
            FrontError::Unsupported {
                feature: "select".into(),
                line: 3
            }
        );
    }

    #[test]
    fn syntax_errors_report_the_line() {
        let err = parse_file("package main\nfunc main() {\n\tx := \n}").unwrap_err();
        assert!(matches!(err, FrontError::Syntax { line: 4, .. }), "{err:?}");
    }
}
