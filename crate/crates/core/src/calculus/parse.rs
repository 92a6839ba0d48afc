//! Parser for the textual term syntax produced by the printer.

use thiserror::Error;

use super::{flatten, App, Bindings, Branch, FlowItem, Type};
use crate::constraints::{CmpOp, Predicate, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LBracket,
    RBracket,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Le,
    Ge,
    Eq,
    Ne,
    Bang,
    Question,
    Semi,
    Comma,
    Bar,
    OrOr,
    AndAnd,
    Tilde,
    Slash,
    Caret,
    MapsTo,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    let err = |offset: usize, message: String| ParseError { offset, message };
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let mut two = |tok: Tok| {
            out.push((pos, tok));
            i += 2;
        };
        match (c, next) {
            (c, _) if c.is_whitespace() => {
                i += 1;
                continue;
            }
            ('<', Some('=')) => two(Tok::Le),
            ('>', Some('=')) => two(Tok::Ge),
            ('!', Some('=')) => two(Tok::Ne),
            ('|', Some('|')) => two(Tok::OrOr),
            ('&', Some('&')) => two(Tok::AndAnd),
            ('|', Some('-')) if chars.get(i + 2).map(|&(_, c)| c) == Some('>') => {
                out.push((pos, Tok::MapsTo));
                i += 3;
            }
            _ => {
                let tok = match c {
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '<' | '⟨' => Tok::LAngle,
                    '>' | '⟩' => Tok::RAngle,
                    '≤' => Tok::Le,
                    '≥' => Tok::Ge,
                    '=' => Tok::Eq,
                    '≠' => Tok::Ne,
                    '!' => Tok::Bang,
                    '?' => Tok::Question,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '|' => Tok::Bar,
                    '∨' => Tok::OrOr,
                    '∧' => Tok::AndAnd,
                    '~' | '¬' => Tok::Tilde,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '↦' => Tok::MapsTo,
                    '-' | '0'..='9' => {
                        let start = i;
                        i += 1;
                        while i < chars.len() && chars[i].1.is_ascii_digit() {
                            i += 1;
                        }
                        let end = chars.get(i).map_or(src.len(), |&(p, _)| p);
                        let text = &src[pos..end];
                        let n = text
                            .parse()
                            .map_err(|_| err(chars[start].0, format!("bad integer `{text}`")))?;
                        out.push((pos, Tok::Int(n)));
                        continue;
                    }
                    c if is_ident_char(c) => {
                        while i < chars.len() && is_ident_char(chars[i].1) {
                            i += 1;
                        }
                        let end = chars.get(i).map_or(src.len(), |&(p, _)| p);
                        out.push((pos, Tok::Ident(src[pos..end].to_string())));
                        continue;
                    }
                    other => return Err(err(pos, format!("unexpected character `{other}`"))),
                };
                out.push((pos, tok));
                i += 1;
            }
        }
    }
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '@' | '#' | '.')
}

fn is_symbol(name: &str) -> bool {
    name.chars().next().is_some_and(char::is_uppercase)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.error(format!("unexpected trailing token {t:?}")),
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        let mut t = self.postfix()?;
        while self.eat(&Tok::Slash) {
            let p = self.predicate()?;
            t = Type::Constrained(Box::new(t), p);
        }
        Ok(t)
    }

    fn postfix(&mut self) -> Result<Type, ParseError> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        match self.peek().cloned() {
            Some(Tok::Int(n)) if n >= 0 => {
                self.pos += 1;
                Ok(Type::Seq(vec![base; n as usize]))
            }
            Some(Tok::Ident(n)) if !is_symbol(&n) => {
                self.pos += 1;
                Ok(Type::Power(Box::new(base), n))
            }
            _ => self.error("expected exponent"),
        }
    }

    fn atom(&mut self) -> Result<Type, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(0)) => {
                self.pos += 1;
                Ok(Type::Zero)
            }
            Some(Tok::LAngle) => {
                self.pos += 1;
                let items = self.list(Tok::RAngle, Self::ty)?;
                Ok(Type::Seq(items))
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                Ok(Type::CorIns(self.flow()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                self.paren_type()
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "corDef" => {
                        self.expect(Tok::LBracket, "`[` after corDef")?;
                        Ok(Type::CorDef(self.flow()?))
                    }
                    "Start" if self.peek() == Some(&Tok::LParen) => Ok(Type::Start(self.app()?)),
                    "Inline" if self.peek() == Some(&Tok::LParen) => Ok(Type::Inline(self.app()?)),
                    _ if is_symbol(&name) => Ok(Type::Concrete(name)),
                    _ => Ok(Type::Var(name)),
                }
            }
            _ => self.error("expected a type"),
        }
    }

    /// After `(`: empty tuple, tuple, union or a parenthesized type.
    fn paren_type(&mut self) -> Result<Type, ParseError> {
        if self.eat(&Tok::RParen) {
            return Ok(Type::Tuple(Vec::new()));
        }
        let first = self.ty()?;
        if self.eat(&Tok::RParen) {
            return Ok(first);
        }
        if self.eat(&Tok::Bar) {
            let mut alts = vec![first, self.ty()?];
            while self.eat(&Tok::Bar) {
                alts.push(self.ty()?);
            }
            self.expect(Tok::RParen, "`)` closing union")?;
            let mut t = alts.pop().unwrap();
            while let Some(l) = alts.pop() {
                t = Type::Union(Box::new(l), Box::new(t));
            }
            return Ok(t);
        }
        self.expect(Tok::Comma, "`,`, `|` or `)`")?;
        let mut items = vec![first];
        if !self.eat(&Tok::RParen) {
            items.extend(self.list(Tok::RParen, Self::ty)?);
        }
        Ok(Type::Tuple(items))
    }

    /// Comma-separated list up to (and consuming) `close`.
    fn list<T>(
        &mut self,
        close: Tok,
        mut each: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut items = Vec::new();
        if self.eat(&close) {
            return Ok(items);
        }
        loop {
            items.push(each(self)?);
            if self.eat(&close) {
                return Ok(items);
            }
            self.expect(Tok::Comma, "`,`")?;
        }
    }

    /// Flow items up to and including `]`.
    fn flow(&mut self) -> Result<Vec<FlowItem>, ParseError> {
        let mut items = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(items);
        }
        loop {
            items.push(self.item()?);
            if self.eat(&Tok::RBracket) {
                return Ok(items);
            }
            self.expect(Tok::Semi, "`;` or `]`")?;
        }
    }

    fn item(&mut self) -> Result<FlowItem, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(FlowItem::Yield(self.ty()?))
            }
            Some(Tok::Question) => {
                self.pos += 1;
                Ok(FlowItem::Receive(self.ty()?))
            }
            Some(Tok::Ident(name)) if (name == "Start" || name == "Inline") => {
                Ok(FlowItem::Yield(self.ty()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let mut branches = vec![self.branch()?];
                while self.eat(&Tok::Bar) {
                    branches.push(self.branch()?);
                }
                self.expect(Tok::RParen, "`)` closing choice")?;
                Ok(FlowItem::Choice(branches))
            }
            _ => self.error("expected a flow item"),
        }
    }

    fn branch(&mut self) -> Result<Branch, ParseError> {
        self.expect(Tok::LAngle, "`<` opening a branch")?;
        let flow = self.list(Tok::RAngle, Self::item)?;
        let guard = if self.eat(&Tok::Slash) {
            self.predicate()?
        } else {
            Predicate::True
        };
        Ok(Branch { flow, guard })
    }

    fn app(&mut self) -> Result<App, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let target = self.ty()?;
        let mut args = Bindings::new();
        while self.eat(&Tok::Comma) {
            let name = self.ident()?;
            self.expect(Tok::MapsTo, "`↦`")?;
            args.insert(name, self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(App {
            target: Box::new(target),
            args,
        })
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.error("expected an identifier"),
        }
    }

    fn predicate(&mut self) -> Result<Predicate, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(&Tok::OrOr) {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Predicate::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Predicate, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::AndAnd) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Predicate::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Predicate, ParseError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Predicate::Not(Box::new(self.unary()?)));
        }
        if self.eat(&Tok::LParen) {
            let p = self.predicate()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(p);
        }
        match (self.peek().cloned(), self.peek_at(1)) {
            (Some(Tok::Ident(n)), _) if n == "true" => {
                self.pos += 1;
                Ok(Predicate::True)
            }
            (Some(Tok::Ident(n)), _) if n == "false" => {
                self.pos += 1;
                Ok(Predicate::False)
            }
            (Some(Tok::Ident(name)), Some(Tok::LParen)) => {
                self.pos += 2;
                let args = self.list(Tok::RParen, Self::term)?;
                Ok(Predicate::Rel(name, args))
            }
            (Some(Tok::Ident(name)), Some(Tok::MapsTo)) if !is_symbol(&name) => {
                self.pos += 2;
                Ok(Predicate::Bind(name, self.term()?))
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> Result<Predicate, ParseError> {
        let mut lhs = self.term()?;
        let mut parts = Vec::new();
        while let Some(op) = self.cmp_op() {
            let rhs = self.term()?;
            parts.push(Predicate::Cmp(lhs, op, rhs.clone()));
            lhs = rhs;
        }
        match parts.len() {
            0 => self.error("expected a comparison operator"),
            1 => Ok(parts.pop().unwrap()),
            _ => Ok(Predicate::And(parts)),
        }
    }

    fn cmp_op(&mut self) -> Option<CmpOp> {
        let op = match self.peek()? {
            Tok::LAngle => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Ge => CmpOp::Ge,
            Tok::RAngle => CmpOp::Gt,
            _ => return None,
        };
        self.pos += 1;
        Some(op)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Term::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(if is_symbol(&name) {
                    Term::Sym(name)
                } else {
                    Term::Var(name)
                })
            }
            _ => self.error("expected a term"),
        }
    }
}

/// Parse a type term; the result is flattened.
pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(flatten(&t))
}

pub fn parse_predicate(src: &str) -> Result<Predicate, ParseError> {
    let mut p = Parser::new(src)?;
    let pred = p.predicate()?;
    p.finish()?;
    Ok(pred)
}
