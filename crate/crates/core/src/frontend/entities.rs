//! Entity extraction: classes, methods and call sites as model subjects.

use std::collections::HashMap;

use super::ast::*;
use crate::model::{CallShape, Resolution, Subject};
use crate::selector::TestConfig;

pub enum CallSite<'a> {
    Call(&'a Call),
    New { class: &'a str, arity: usize },
}

/// Calls every `f` for each call site in `method`, in evaluation order.
pub fn visit_calls<'a>(method: &'a MethodDecl, f: &mut dyn FnMut(CallSite<'a>)) {
    if let Some(body) = &method.body {
        block(body, f);
    }
}

fn block<'a>(b: &'a Block, f: &mut dyn FnMut(CallSite<'a>)) {
    for s in &b.stmts {
        stmt(s, f);
    }
}

fn stmt<'a>(s: &'a Stmt, f: &mut dyn FnMut(CallSite<'a>)) {
    match &s.kind {
        StmtKind::Local { init, .. } => {
            if let Some(e) = init {
                expr(e, f);
            }
        }
        StmtKind::Assign { value, .. } => expr(value, f),
        StmtKind::If {
            cond,
            then_block,
            else_block,
        } => {
            expr(cond, f);
            block(then_block, f);
            if let Some(b) = else_block {
                block(b, f);
            }
        }
        StmtKind::While { cond, body } => {
            expr(cond, f);
            block(body, f);
        }
        StmtKind::Return(e) => {
            if let Some(e) = e {
                expr(e, f);
            }
        }
        StmtKind::Assert(e) | StmtKind::Expr(e) => expr(e, f),
    }
}

fn expr<'a>(e: &'a Expr, f: &mut dyn FnMut(CallSite<'a>)) {
    match &e.kind {
        ExprKind::Binary(_, l, r) => {
            expr(l, f);
            expr(r, f);
        }
        ExprKind::Unary(_, inner) => expr(inner, f),
        ExprKind::New { class, args } => {
            for a in args {
                expr(a, f);
            }
            f(CallSite::New {
                class,
                arity: args.len(),
            });
        }
        ExprKind::Call(call) => {
            if let Receiver::Expr(recv) = &call.receiver {
                expr(recv, f);
            }
            for a in &call.args {
                expr(a, f);
            }
            f(CallSite::Call(call));
        }
        _ => {}
    }
}

/// Subjects for every class, method and invocation in `program`: all classes
/// first, then all methods, then all invocations, each group in source order.
/// `new` expressions become invocations only with `include_constructors`.
pub fn extract_entities(program: &Program, resolution: Resolution) -> Vec<Subject> {
    let tests = TestConfig::default();
    let mut classes = Vec::new();
    let mut methods = Vec::new();
    let mut invocations = Vec::new();
    for class in &program.classes {
        classes.push(Subject::class(&class.name, class.superclass.as_deref()));
        for m in &class.methods {
            let mut s = Subject::method(&class.name, &m.name, m.arity());
            s.is_abstract = m.is_abstract();
            s.is_constructor = m.is_constructor;
            s.is_test = !m.is_constructor && !m.is_abstract() && tests.is_test_method(&class.name, &m.name, m.arity());
            let owner = s.id.clone();
            methods.push(s);
            let mut ordinals: HashMap<(Option<String>, String, usize, bool, bool), usize> = HashMap::new();
            let mut push = |receiver: Option<&str>, callee: &str, arity: usize, shape: CallShape| {
                let key = (
                    receiver.map(str::to_string),
                    callee.to_string(),
                    arity,
                    shape == CallShape::Super,
                    shape == CallShape::Constructor,
                );
                let ordinal = ordinals.entry(key).or_insert(0);
                invocations.push(Subject::call_site(&owner, receiver, callee, arity, *ordinal, shape));
                *ordinal += 1;
            };
            visit_calls(m, &mut |site| match site {
                CallSite::Call(call) => {
                    let shape = if call.receiver == Receiver::Super {
                        CallShape::Super
                    } else {
                        CallShape::Virtual
                    };
                    push(call.static_class.as_deref(), &call.method, call.args.len(), shape);
                }
                CallSite::New { class, arity } if resolution.include_constructors => {
                    push(Some(class), CONSTRUCTOR_NAME, arity, CallShape::Constructor);
                }
                CallSite::New { .. } => {}
            });
        }
    }
    classes.extend(methods);
    classes.extend(invocations);
    classes
}

