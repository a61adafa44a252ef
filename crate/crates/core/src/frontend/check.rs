//! Name resolution and type checking. Fills in the static receiver class of
//! every call so later stages never need to re-derive declared types.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ast::*;
use super::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ty {
    Int,
    Bool,
    Void,
    Null,
    Class(String),
    /// Result of an unresolved call; compatible with everything.
    Unknown,
}

impl Ty {
    fn from_decl(ty: &Type) -> Ty {
        match ty {
            Type::Int => Ty::Int,
            Type::Bool => Ty::Bool,
            Type::Void => Ty::Void,
            Type::Class(c) => Ty::Class(c.clone()),
        }
    }

    fn describe(&self) -> String {
        match self {
            Ty::Int => "int".into(),
            Ty::Bool => "bool".into(),
            Ty::Void => "void".into(),
            Ty::Null => "null".into(),
            Ty::Class(c) => c.clone(),
            Ty::Unknown => "<unknown>".into(),
        }
    }
}

pub struct CheckOutput {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

/// Validates the class table and all method bodies, annotating calls in place.
pub fn check_program(program: &mut Program) -> CheckOutput {
    let mut out = CheckOutput {
        errors: Vec::new(),
        warnings: Vec::new(),
    };
    if !check_class_table(program, &mut out.errors) {
        return out;
    }
    // Bodies are checked against an immutable snapshot of the declarations.
    let decls = program.clone();
    for class in &mut program.classes {
        let file = class.file.clone();
        let class_name = class.name.clone();
        for method in &mut class.methods {
            let mut cx = BodyChecker {
                program: &decls,
                file: &file,
                class: &class_name,
                ret: Ty::from_decl(&method.ret),
                scopes: vec![HashMap::new()],
                out: &mut out,
            };
            for p in &method.params {
                cx.check_type_exists(&p.ty, method.span);
                cx.scopes[0].insert(p.name.clone(), Ty::from_decl(&p.ty));
            }
            if !method.is_constructor {
                cx.check_type_exists(&method.ret, method.span);
            }
            if let Some(body) = &mut method.body {
                cx.block(body);
            }
        }
    }
    out
}

fn check_class_table(program: &Program, errors: &mut Vec<Diagnostic>) -> bool {
    let before = errors.len();
    let mut seen: BTreeMap<&str, &ClassDecl> = BTreeMap::new();
    for class in &program.classes {
        if let Some(prev) = seen.insert(&class.name, class) {
            errors.push(Diagnostic::new(
                &class.file,
                class.span,
                format!(
                    "duplicate class `{}` (first declared in {} at {})",
                    class.name, prev.file, prev.span
                ),
            ));
        }
    }
    for class in &program.classes {
        if let Some(sup) = &class.superclass {
            if !seen.contains_key(sup.as_str()) {
                errors.push(Diagnostic::new(
                    &class.file,
                    class.span,
                    format!("unknown superclass `{sup}` of `{}`", class.name),
                ));
            }
        }
    }
    for class in &program.classes {
        let mut visited = BTreeSet::new();
        let mut cursor = Some(class.name.as_str());
        while let Some(name) = cursor {
            if !visited.insert(name) {
                errors.push(Diagnostic::new(
                    &class.file,
                    class.span,
                    format!("inheritance cycle through `{}`", class.name),
                ));
                break;
            }
            cursor = seen.get(name).and_then(|c| c.superclass.as_deref());
        }
    }
    for class in &program.classes {
        let mut fields = BTreeSet::new();
        for f in &class.fields {
            if !fields.insert(&f.name) {
                errors.push(Diagnostic::new(
                    &class.file,
                    f.span,
                    format!("duplicate field `{}` in `{}`", f.name, class.name),
                ));
            }
            if let Type::Class(c) = &f.ty {
                if !seen.contains_key(c.as_str()) {
                    errors.push(Diagnostic::new(&class.file, f.span, format!("unknown type `{c}`")));
                }
            }
            if f.ty == Type::Void {
                errors.push(Diagnostic::new(&class.file, f.span, "field cannot be void"));
            }
        }
        let mut sigs = BTreeSet::new();
        for m in &class.methods {
            if !sigs.insert((m.is_constructor, &m.name, m.arity())) {
                let what = if m.is_constructor {
                    format!("constructor of `{}` with {} parameter(s)", class.name, m.arity())
                } else {
                    format!("method `{}/{}` in `{}`", m.name, m.arity(), class.name)
                };
                errors.push(Diagnostic::new(&class.file, m.span, format!("duplicate {what}")));
            }
        }
    }
    errors.len() == before
}

struct BodyChecker<'a> {
    program: &'a Program,
    file: &'a str,
    class: &'a str,
    ret: Ty,
    scopes: Vec<HashMap<String, Ty>>,
    out: &'a mut CheckOutput,
}

impl BodyChecker<'_> {
    fn error(&mut self, span: Span, msg: impl Into<String>) {
        self.out.errors.push(Diagnostic::new(self.file, span, msg));
    }

    fn warn(&mut self, span: Span, msg: impl Into<String>) {
        self.out.warnings.push(Diagnostic::new(self.file, span, msg));
    }

    fn check_type_exists(&mut self, ty: &Type, span: Span) {
        if let Type::Class(c) = ty {
            if self.program.class(c).is_none() {
                self.error(span, format!("unknown type `{c}`"));
            }
        }
    }

    fn assignable(&self, from: &Ty, to: &Ty) -> bool {
        match (from, to) {
            (Ty::Unknown, _) | (_, Ty::Unknown) => true,
            (Ty::Null, Ty::Class(_)) => true,
            (Ty::Class(a), Ty::Class(b)) => self.program.is_subclass_of(a, b),
            (a, b) => a == b,
        }
    }

    fn expect_assignable(&mut self, from: &Ty, to: &Ty, span: Span, what: &str) {
        if !self.assignable(from, to) {
            self.error(
                span,
                format!(
                    "{what}: expected `{}`, found `{}`",
                    to.describe(),
                    from.describe()
                ),
            );
        }
    }

    fn lookup_var(&self, name: &str) -> Option<Ty> {
        for scope in self.scopes.iter().rev() {
            if let Some(t) = scope.get(name) {
                return Some(t.clone());
            }
        }
        self.lookup_field(name)
    }

    fn lookup_field(&self, name: &str) -> Option<Ty> {
        self.program
            .all_fields(self.class)
            .into_iter()
            .find(|f| f.name == name)
            .map(|f| Ty::from_decl(&f.ty))
    }

    fn block(&mut self, block: &mut Block) {
        self.scopes.push(HashMap::new());
        for stmt in &mut block.stmts {
            self.stmt(stmt);
        }
        self.scopes.pop();
    }

    fn cond(&mut self, e: &mut Expr, what: &str) {
        let t = self.expr(e);
        self.expect_assignable(&t, &Ty::Bool, e.meta.span, what);
    }

    fn stmt(&mut self, stmt: &mut Stmt) {
        let span = stmt.meta.span;
        match &mut stmt.kind {
            StmtKind::Local { ty, name, init } => {
                self.check_type_exists(ty, span);
                let declared = Ty::from_decl(ty);
                if declared == Ty::Void {
                    self.error(span, "local cannot be void");
                }
                if let Some(init) = init {
                    let t = self.expr(init);
                    self.expect_assignable(&t, &declared, span, "initializer");
                }
                self.scopes
                    .last_mut()
                    .expect("scope")
                    .insert(name.clone(), declared);
            }
            StmtKind::Assign { target, value } => {
                let target_ty = match target {
                    Target::Var(name) => self.lookup_var(name),
                    Target::Field(name) => self.lookup_field(name),
                };
                let t = self.expr(value);
                match target_ty {
                    Some(tt) => self.expect_assignable(&t, &tt, span, "assignment"),
                    None => {
                        let name = match target {
                            Target::Var(n) | Target::Field(n) => n.clone(),
                        };
                        self.error(span, format!("unknown variable `{name}`"));
                    }
                }
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                self.cond(cond, "if condition");
                self.block(then_block);
                if let Some(b) = else_block {
                    self.block(b);
                }
            }
            StmtKind::While { cond, body } => {
                self.cond(cond, "while condition");
                self.block(body);
            }
            StmtKind::Return(value) => match (value, self.ret.clone()) {
                (None, Ty::Void) => {}
                (None, _) => self.error(span, "missing return value"),
                (Some(v), Ty::Void) => {
                    self.expr(v);
                    self.error(span, "void method cannot return a value");
                }
                (Some(v), ret) => {
                    let t = self.expr(v);
                    self.expect_assignable(&t, &ret, span, "return value");
                }
            },
            StmtKind::Assert(cond) => self.cond(cond, "assertion"),
            StmtKind::Expr(e) => {
                self.expr(e);
            }
        }
    }

    fn expr(&mut self, e: &mut Expr) -> Ty {
        let span = e.meta.span;
        match &mut e.kind {
            ExprKind::Int(_) => Ty::Int,
            ExprKind::Bool(_) => Ty::Bool,
            ExprKind::Null => Ty::Null,
            ExprKind::This => Ty::Class(self.class.to_string()),
            ExprKind::Var(name) => match self.lookup_var(name) {
                Some(t) => t,
                None => {
                    let msg = format!("unknown variable `{name}`");
                    self.error(span, msg);
                    Ty::Unknown
                }
            },
            ExprKind::Field(name) => match self.lookup_field(name) {
                Some(t) => t,
                None => {
                    let msg = format!("unknown field `{name}` in `{}`", self.class);
                    self.error(span, msg);
                    Ty::Unknown
                }
            },
            ExprKind::Binary(op, lhs, rhs) => {
                let op = *op;
                let lt = self.expr(lhs);
                let rt = self.expr(rhs);
                let (operand, result) = match op {
                    BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div => (Some(Ty::Int), Ty::Int),
                    BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => (Some(Ty::Int), Ty::Bool),
                    BinOp::And | BinOp::Or => (Some(Ty::Bool), Ty::Bool),
                    BinOp::Eq | BinOp::Ne => (None, Ty::Bool),
                };
                match operand {
                    Some(want) => {
                        let what = format!("operand of `{}`", op.symbol());
                        self.expect_assignable(&lt, &want, span, &what);
                        self.expect_assignable(&rt, &want, span, &what);
                    }
                    None => {
                        if !self.assignable(&lt, &rt) && !self.assignable(&rt, &lt) {
                            self.error(
                                span,
                                format!(
                                    "cannot compare `{}` with `{}`",
                                    lt.describe(),
                                    rt.describe()
                                ),
                            );
                        }
                    }
                }
                result
            }
            ExprKind::Unary(op, inner) => {
                let t = self.expr(inner);
                let want = match op {
                    UnOp::Not => Ty::Bool,
                    UnOp::Neg => Ty::Int,
                };
                self.expect_assignable(&t, &want, span, "unary operand");
                want
            }
            ExprKind::New { class, args } => {
                let class = class.clone();
                let arg_tys: Vec<Ty> = args.iter_mut().map(|a| self.expr(a)).collect();
                let Some(decl) = self.program.class(&class) else {
                    self.error(span, format!("unknown class `{class}`"));
                    return Ty::Unknown;
                };
                match decl.constructor(arg_tys.len()) {
                    Some(ctor) => {
                        let params: Vec<Ty> = ctor.params.iter().map(|p| Ty::from_decl(&p.ty)).collect();
                        for (a, p) in arg_tys.iter().zip(&params) {
                            self.expect_assignable(a, p, span, "constructor argument");
                        }
                    }
                    None if !decl.has_constructors() && arg_tys.is_empty() => {}
                    None => self.error(
                        span,
                        format!(
                            "`{class}` has no constructor taking {} argument(s)",
                            arg_tys.len()
                        ),
                    ),
                }
                Ty::Class(class)
            }
            ExprKind::Call(call) => self.call(call, span),
        }
    }

    fn call(&mut self, call: &mut Call, span: Span) -> Ty {
        let receiver_class = match &mut call.receiver {
            Receiver::Implicit => Some(self.class.to_string()),
            Receiver::Super => {
                let sup = self
                    .program
                    .class(self.class)
                    .and_then(|c| c.superclass.clone());
                if sup.is_none() {
                    self.error(span, format!("`{}` has no superclass", self.class));
                }
                sup
            }
            Receiver::Expr(recv) => match self.expr(recv) {
                Ty::Class(c) => Some(c),
                Ty::Unknown => None,
                other => {
                    self.error(
                        span,
                        format!("cannot call `{}` on `{}`", call.method, other.describe()),
                    );
                    None
                }
            },
        };
        let arg_tys: Vec<Ty> = call.args.iter_mut().map(|a| self.expr(a)).collect();
        call.static_class = receiver_class.clone();
        let Some(recv) = receiver_class else {
            return Ty::Unknown;
        };
        match self.program.lookup_method(&recv, &call.method, arg_tys.len()) {
            Some((_, decl)) => {
                let params: Vec<Ty> = decl.params.iter().map(|p| Ty::from_decl(&p.ty)).collect();
                for (a, p) in arg_tys.iter().zip(&params) {
                    self.expect_assignable(a, p, span, "argument");
                }
                Ty::from_decl(&decl.ret)
            }
            None => {
                self.warn(
                    span,
                    format!(
                        "no method `{}/{}` visible in `{recv}`; call left unresolved",
                        call.method,
                        arg_tys.len()
                    ),
                );
                Ty::Unknown
            }
        }
    }
}
