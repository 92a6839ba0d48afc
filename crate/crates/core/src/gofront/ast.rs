//! Syntax tree for the Go subset.

/// Source line of a node. Two positions always compare equal so that trees
/// can be compared structurally after printing and reparsing.
#[derive(Clone, Copy, Debug, Default)]
pub struct Line(pub usize);

impl PartialEq for Line {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Line {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct File {
    pub package: String,
    pub imports: Vec<String>,
    pub decls: Vec<Decl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Func(FuncDecl),
    Var(Vec<VarSpec>),
    Const(Vec<VarSpec>),
    Type(Vec<TypeSpec>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncDecl {
    pub name: String,
    pub recv: Option<Param>,
    pub sig: Signature,
    pub body: Option<Block>,
    pub line: Line,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Signature {
    pub params: Vec<Param>,
    pub results: Vec<Param>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: Option<String>,
    pub ty: TypeExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpec {
    pub names: Vec<String>,
    pub ty: Option<TypeExpr>,
    pub values: Vec<Expr>,
    pub line: Line,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeSpec {
    pub name: String,
    pub ty: TypeExpr,
    pub line: Line,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChanDir {
    Both,
    Send,
    Recv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeExpr {
    /// A possibly qualified name such as `int` or `pkg.T`.
    Name(String),
    Pointer(Box<TypeExpr>),
    Slice(Box<TypeExpr>),
    Array(Box<Expr>, Box<TypeExpr>),
    Map(Box<TypeExpr>, Box<TypeExpr>),
    Chan(ChanDir, Box<TypeExpr>),
    Func(Signature),
    Struct(Vec<Field>),
    Interface(Vec<Method>),
    /// `...T` in a final parameter.
    Variadic(Box<TypeExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    /// Empty for an embedded field.
    pub names: Vec<String>,
    pub ty: TypeExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Method {
    Named(String, Signature),
    Embedded(TypeExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block(pub Vec<Stmt>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Expr(Expr, Line),
    Send {
        chan: Expr,
        value: Expr,
        line: Line,
    },
    IncDec {
        target: Expr,
        inc: bool,
        line: Line,
    },
    /// `op` is `=`, `:=` or a compound operator such as `+=`.
    Assign {
        lhs: Vec<Expr>,
        op: String,
        rhs: Vec<Expr>,
        line: Line,
    },
    Var(Vec<VarSpec>),
    Const(Vec<VarSpec>),
    Type(Vec<TypeSpec>),
    Go(Expr, Line),
    Defer(Expr, Line),
    Return(Vec<Expr>, Line),
    Break(Line),
    Continue(Line),
    Block(Block),
    If(IfStmt),
    For(ForStmt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IfStmt {
    pub init: Option<Box<Stmt>>,
    pub cond: Expr,
    pub then: Block,
    pub els: Option<Box<Else>>,
    pub line: Line,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Else {
    If(IfStmt),
    Block(Block),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForStmt {
    Loop {
        init: Option<Box<Stmt>>,
        cond: Option<Expr>,
        post: Option<Box<Stmt>>,
        body: Block,
        line: Line,
    },
    Range {
        key: Option<Expr>,
        value: Option<Expr>,
        define: bool,
        over: Expr,
        body: Block,
        line: Line,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Ident(String),
    Int(i64),
    /// Float, string and rune literals, kept as source text.
    Lit(String),
    Unary(String, Box<Expr>),
    Binary(Box<Expr>, String, Box<Expr>),
    Call {
        func: Box<Expr>,
        args: Vec<Expr>,
        spread: bool,
    },
    Selector(Box<Expr>, String),
    Index(Box<Expr>, Box<Expr>),
    SliceExpr(Box<Expr>, Option<Box<Expr>>, Option<Box<Expr>>),
    TypeAssert(Box<Expr>, TypeExpr),
    FuncLit {
        sig: Signature,
        body: Block,
        line: Line,
    },
    Composite {
        ty: Option<TypeExpr>,
        elems: Vec<Element>,
    },
    /// A type in expression position, e.g. the first argument of `make`.
    Type(TypeExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub key: Option<Expr>,
    pub value: Expr,
}

impl Expr {
    pub fn ident(name: impl Into<String>) -> Self {
        Expr::Ident(name.into())
    }

    pub fn as_ident(&self) -> Option<&str> {
        match self {
            Expr::Ident(s) => Some(s),
            _ => None,
        }
    }

    /// `pkg.Name` as a dotted string when both sides are identifiers.
    pub fn qualified_name(&self) -> Option<String> {
        match self {
            Expr::Ident(s) => Some(s.clone()),
            Expr::Selector(base, sel) => Some(format!("{}.{sel}", base.as_ident()?)),
            _ => None,
        }
    }
}

impl Stmt {
    pub fn line(&self) -> usize {
        match self {
            Stmt::Expr(_, l)
            | Stmt::Send { line: l, .. }
            | Stmt::IncDec { line: l, .. }
            | Stmt::Assign { line: l, .. }
            | Stmt::Go(_, l)
            | Stmt::Defer(_, l)
            | Stmt::Return(_, l)
            | Stmt::Break(l)
            | Stmt::Continue(l) => l.0,
            Stmt::Var(specs) | Stmt::Const(specs) => specs.first().map_or(0, |s| s.line.0),
            Stmt::Type(specs) => specs.first().map_or(0, |s| s.line.0),
            Stmt::Block(b) => b.0.first().map_or(0, Stmt::line),
            Stmt::If(i) => i.line.0,
            Stmt::For(ForStmt::Loop { line, .. } | ForStmt::Range { line, .. }) => line.0,
        }
    }
}
