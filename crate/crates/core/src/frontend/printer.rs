//! Canonical pretty-printer. `parse(print(p))` is structurally equal to `p`.

use std::fmt::Write;

use super::ast::*;

pub fn print_program(program: &Program) -> String {
    let mut out = String::new();
    for (i, class) in program.classes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_class(&mut out, class);
    }
    out
}

pub fn print_class(out: &mut String, class: &ClassDecl) {
    write!(out, "class {}", class.name).unwrap();
    if let Some(sup) = &class.superclass {
        write!(out, " extends {sup}").unwrap();
    }
    out.push_str(" {\n");
    for f in &class.fields {
        writeln!(out, "    {} {};", f.ty, f.name).unwrap();
    }
    for m in &class.methods {
        print_method(out, &class.name, m);
    }
    out.push_str("}\n");
}

fn print_method(out: &mut String, class: &str, m: &MethodDecl) {
    let params = m
        .params
        .iter()
        .map(|p| format!("{} {}", p.ty, p.name))
        .collect::<Vec<_>>()
        .join(", ");
    if m.is_constructor {
        write!(out, "    {class}({params})").unwrap();
    } else {
        write!(out, "    {} {}({params})", m.ret, m.name).unwrap();
    }
    match &m.body {
        None => out.push_str(";\n"),
        Some(body) => {
            out.push(' ');
            print_block(out, body, 1);
            out.push('\n');
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("    ");
    }
}

pub fn print_block(out: &mut String, block: &Block, depth: usize) {
    out.push_str("{\n");
    for stmt in &block.stmts {
        indent(out, depth + 1);
        print_stmt(out, stmt, depth + 1);
        out.push('\n');
    }
    indent(out, depth);
    out.push('}');
}

fn print_stmt(out: &mut String, stmt: &Stmt, depth: usize) {
    match &stmt.kind {
        StmtKind::Local { ty, name, init } => {
            write!(out, "{ty} {name}").unwrap();
            if let Some(e) = init {
                write!(out, " = {}", print_expr(e)).unwrap();
            }
            out.push(';');
        }
        StmtKind::Assign { target, value } => {
            match target {
                Target::Var(n) => out.push_str(n),
                Target::Field(n) => write!(out, "this.{n}").unwrap(),
            }
            write!(out, " = {};", print_expr(value)).unwrap();
        }
        StmtKind::If {
            cond,
            then_block,
            else_block,
        } => {
            write!(out, "if ({}) ", print_expr(cond)).unwrap();
            print_block(out, then_block, depth);
            if let Some(b) = else_block {
                out.push_str(" else ");
                match b.stmts.as_slice() {
                    [only @ Stmt { kind: StmtKind::If { .. }, .. }] => print_stmt(out, only, depth),
                    _ => print_block(out, b, depth),
                }
            }
        }
        StmtKind::While { cond, body } => {
            write!(out, "while ({}) ", print_expr(cond)).unwrap();
            print_block(out, body, depth);
        }
        StmtKind::Return(None) => out.push_str("return;"),
        StmtKind::Return(Some(e)) => write!(out, "return {};", print_expr(e)).unwrap(),
        StmtKind::Assert(e) => write!(out, "assert {};", print_expr(e)).unwrap(),
        StmtKind::Expr(e) => write!(out, "{};", print_expr(e)).unwrap(),
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr_into(&mut out, e, 0);
    out
}

/// Writes `e`, parenthesizing when its precedence is below `min_prec`.
fn expr_into(out: &mut String, e: &Expr, min_prec: u8) {
    match &e.kind {
        ExprKind::Int(v) if *v < 0 => write!(out, "(0 - {})", v.unsigned_abs()).unwrap(),
        ExprKind::Int(v) => write!(out, "{v}").unwrap(),
        ExprKind::Bool(b) => write!(out, "{b}").unwrap(),
        ExprKind::Null => out.push_str("null"),
        ExprKind::This => out.push_str("this"),
        ExprKind::Var(n) => out.push_str(n),
        ExprKind::Field(n) => write!(out, "this.{n}").unwrap(),
        ExprKind::Binary(op, lhs, rhs) => {
            let prec = op.precedence();
            let paren = prec < min_prec;
            if paren {
                out.push('(');
            }
            expr_into(out, lhs, prec);
            write!(out, " {} ", op.symbol()).unwrap();
            expr_into(out, rhs, prec + 1);
            if paren {
                out.push(')');
            }
        }
        ExprKind::Unary(op, inner) => {
            out.push(match op {
                UnOp::Not => '!',
                UnOp::Neg => '-',
            });
            expr_into(out, inner, u8::MAX);
        }
        ExprKind::New { class, args } => {
            write!(out, "new {class}(").unwrap();
            args_into(out, args);
            out.push(')');
        }
        ExprKind::Call(call) => {
            match &call.receiver {
                Receiver::Implicit => {}
                Receiver::Super => out.push_str("super."),
                Receiver::Expr(recv) => {
                    expr_into(out, recv, u8::MAX);
                    out.push('.');
                }
            }
            write!(out, "{}(", call.method).unwrap();
            args_into(out, &call.args);
            out.push(')');
        }
    }
}

fn args_into(out: &mut String, args: &[Expr]) {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        expr_into(out, a, 0);
    }
}
