//! Syntax tree for MiniOO programs.
//!
//! Every node carries a [`Meta`] (node id plus source span). Metadata never
//! takes part in equality, so two trees compare equal iff they have the same
//! structure, which is what the printer round-trip relies on.

use std::fmt;

#[derive(Debug, Clone, Copy, Default, PartialOrd, Ord)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Identifies an expression or statement within one parsed [`Program`].
pub type NodeId = u32;

/// Id used for nodes synthesized after parsing (e.g. by a mutation).
pub const SYNTHETIC_NODE: NodeId = u32::MAX;

#[derive(Debug, Clone, Copy, Default)]
pub struct Meta {
    pub id: NodeId,
    pub span: Span,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Span {}

impl PartialEq for Meta {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Meta {}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Int,
    Bool,
    Void,
    Class(String),
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Int => f.write_str("int"),
            Type::Bool => f.write_str("bool"),
            Type::Void => f.write_str("void"),
            Type::Class(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub classes: Vec<ClassDecl>,
}

impl Program {
    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// Superclass chain starting at `name` itself.
    pub fn ancestry<'a>(&'a self, name: &str) -> Vec<&'a ClassDecl> {
        let mut chain = Vec::new();
        let mut cursor = self.class(name);
        while let Some(class) = cursor {
            if chain.iter().any(|c: &&ClassDecl| c.name == class.name) {
                break;
            }
            chain.push(class);
            cursor = class.superclass.as_deref().and_then(|s| self.class(s));
        }
        chain
    }

    pub fn is_subclass_of(&self, class: &str, ancestor: &str) -> bool {
        self.ancestry(class).iter().any(|c| c.name == ancestor)
    }

    /// All fields visible in `class`, inherited ones first.
    pub fn all_fields(&self, class: &str) -> Vec<&FieldDecl> {
        let mut chain = self.ancestry(class);
        chain.reverse();
        chain.into_iter().flat_map(|c| c.fields.iter()).collect()
    }

    /// Nearest declaration (abstract or not) of `name/arity` at or above `class`.
    pub fn lookup_method<'a>(
        &'a self,
        class: &str,
        name: &str,
        arity: usize,
    ) -> Option<(&'a ClassDecl, &'a MethodDecl)> {
        self.ancestry(class)
            .into_iter()
            .find_map(|c| c.method(name, arity).map(|m| (c, m)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub superclass: Option<String>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    pub file: String,
    pub span: Span,
}

impl ClassDecl {
    pub fn method(&self, name: &str, arity: usize) -> Option<&MethodDecl> {
        self.methods
            .iter()
            .find(|m| !m.is_constructor && m.name == name && m.params.len() == arity)
    }

    pub fn constructor(&self, arity: usize) -> Option<&MethodDecl> {
        self.methods
            .iter()
            .find(|m| m.is_constructor && m.params.len() == arity)
    }

    pub fn has_constructors(&self) -> bool {
        self.methods.iter().any(|m| m.is_constructor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    pub ty: Type,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: Type,
}

/// Identifier under which constructors are recorded.
pub const CONSTRUCTOR_NAME: &str = "new";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDecl {
    /// `new` for constructors.
    pub name: String,
    pub params: Vec<Param>,
    pub ret: Type,
    /// `None` for abstract methods.
    pub body: Option<Block>,
    pub is_constructor: bool,
    pub span: Span,
}

impl MethodDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn is_abstract(&self) -> bool {
        self.body.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Block {
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub meta: Meta,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Local {
        ty: Type,
        name: String,
        init: Option<Expr>,
    },
    Assign {
        target: Target,
        value: Expr,
    },
    If {
        cond: Expr,
        then_block: Block,
        else_block: Option<Block>,
    },
    While {
        cond: Expr,
        body: Block,
    },
    Return(Option<Expr>),
    Assert(Expr),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// A local, a parameter, or (if neither) a field of `this`.
    Var(String),
    /// Explicit `this.name`.
    Field(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength used by both the parser and the printer.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div => 6,
        }
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div)
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub meta: Meta,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Null,
    This,
    Var(String),
    /// `this.name`
    Field(String),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Unary(UnOp, Box<Expr>),
    New {
        class: String,
        args: Vec<Expr>,
    },
    Call(Call),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Call {
    pub receiver: Receiver,
    pub method: String,
    pub args: Vec<Expr>,
    /// Declared class of the receiver expression, filled in by semantic
    /// analysis. `None` when the receiver type cannot be determined.
    pub static_class: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Receiver {
    /// `m(args)`, dispatched on `this`.
    Implicit,
    /// `super.m(args)`, bound to the nearest superclass implementation.
    Super,
    Expr(Box<Expr>),
}

impl Expr {
    pub fn new(meta: Meta, kind: ExprKind) -> Self {
        Expr { meta, kind }
    }

    pub fn synthetic(span: Span, kind: ExprKind) -> Self {
        Expr {
            meta: Meta {
                id: SYNTHETIC_NODE,
                span,
            },
            kind,
        }
    }
}
