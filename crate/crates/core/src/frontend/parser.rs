//! Recursive-descent parser for MiniOO. One token of lookahead suffices except
//! for local declarations, which need two (`Foo f` vs `f.x()`).

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::Diagnostic;

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    file: &'a str,
    next_id: &'a mut NodeId,
    /// Class currently being parsed; constructors are spelled with its name.
    current_class: String,
}

type PResult<T> = Result<T, Diagnostic>;

/// Parses one source file. `next_id` is shared across the files of a snapshot
/// so node ids are unique program-wide.
pub fn parse_file(
    file: &str,
    src: &str,
    next_id: &mut NodeId,
) -> (Vec<ClassDecl>, Vec<Diagnostic>) {
    let (tokens, mut errors) = tokenize(file, src);
    let mut parser = Parser {
        tokens,
        pos: 0,
        file,
        next_id,
        current_class: String::new(),
    };
    let mut classes = Vec::new();
    while parser.peek() != &Tok::Eof {
        match parser.class_decl() {
            Ok(class) => classes.push(class),
            Err(err) => {
                errors.push(err);
                parser.recover_to_class();
            }
        }
    }
    (classes, errors)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(Diagnostic::new(self.file, self.span(), msg))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if self.peek() == &tok {
            Ok(self.advance())
        } else {
            self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            ))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(name)
            }
            other => self.error(format!("expected identifier, found {}", other.describe())),
        }
    }

    fn meta(&mut self, span: Span) -> Meta {
        let id = *self.next_id;
        *self.next_id += 1;
        Meta { id, span }
    }

    fn recover_to_class(&mut self) {
        self.advance();
        while !matches!(self.peek(), Tok::Class | Tok::Eof) {
            self.advance();
        }
    }

    fn class_decl(&mut self) -> PResult<ClassDecl> {
        let span = self.span();
        self.expect(Tok::Class)?;
        let name = self.ident()?;
        let superclass = if self.eat(&Tok::Extends) {
            Some(self.ident()?)
        } else {
            None
        };
        self.current_class = name.clone();
        self.expect(Tok::LBrace)?;
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        while !self.eat(&Tok::RBrace) {
            if self.peek() == &Tok::Eof {
                return self.error(format!("unterminated class `{name}`"));
            }
            self.member(&mut fields, &mut methods)?;
        }
        Ok(ClassDecl {
            name,
            superclass,
            fields,
            methods,
            file: self.file.to_string(),
            span,
        })
    }

    fn member(&mut self, fields: &mut Vec<FieldDecl>, methods: &mut Vec<MethodDecl>) -> PResult<()> {
        let span = self.span();
        let is_ctor = matches!(self.peek(), Tok::Ident(n) if *n == self.current_class)
            && self.peek_at(1) == &Tok::LParen;
        if is_ctor {
            self.advance();
            let params = self.params()?;
            let body = self.block()?;
            methods.push(MethodDecl {
                name: CONSTRUCTOR_NAME.to_string(),
                params,
                ret: Type::Void,
                body: Some(body),
                is_constructor: true,
                span,
            });
            return Ok(());
        }
        let ty = self.ty()?;
        let name = self.ident()?;
        if self.eat(&Tok::Semi) {
            fields.push(FieldDecl { name, ty, span });
            return Ok(());
        }
        let params = self.params()?;
        let body = if self.eat(&Tok::Semi) {
            None
        } else {
            Some(self.block()?)
        };
        methods.push(MethodDecl {
            name,
            params,
            ret: ty,
            body,
            is_constructor: false,
            span,
        });
        Ok(())
    }

    fn ty(&mut self) -> PResult<Type> {
        let ty = match self.peek().clone() {
            Tok::IntTy => Type::Int,
            Tok::BoolTy => Type::Bool,
            Tok::Void => Type::Void,
            Tok::Ident(name) => Type::Class(name),
            other => return self.error(format!("expected type, found {}", other.describe())),
        };
        self.advance();
        Ok(ty)
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                let ty = self.ty()?;
                let name = self.ident()?;
                params.push(Param { name, ty });
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(params)
    }

    fn block(&mut self) -> PResult<Block> {
        self.expect(Tok::LBrace)?;
        let mut stmts = Vec::new();
        while !self.eat(&Tok::RBrace) {
            if self.peek() == &Tok::Eof {
                return self.error("unterminated block");
            }
            stmts.push(self.stmt()?);
        }
        Ok(Block { stmts })
    }

    fn starts_local(&self) -> bool {
        match self.peek() {
            Tok::IntTy | Tok::BoolTy => true,
            Tok::Ident(_) => matches!(self.peek_at(1), Tok::Ident(_)),
            _ => false,
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let span = self.span();
        let kind = if self.starts_local() {
            let ty = self.ty()?;
            let name = self.ident()?;
            let init = if self.eat(&Tok::Assign) {
                Some(self.expr()?)
            } else {
                None
            };
            self.expect(Tok::Semi)?;
            StmtKind::Local { ty, name, init }
        } else {
            match self.peek() {
                Tok::If => return self.if_stmt(),
                Tok::While => {
                    self.advance();
                    self.expect(Tok::LParen)?;
                    let cond = self.expr()?;
                    self.expect(Tok::RParen)?;
                    let body = self.block()?;
                    StmtKind::While { cond, body }
                }
                Tok::Return => {
                    self.advance();
                    let value = if self.peek() == &Tok::Semi {
                        None
                    } else {
                        Some(self.expr()?)
                    };
                    self.expect(Tok::Semi)?;
                    StmtKind::Return(value)
                }
                Tok::Assert => {
                    self.advance();
                    let cond = self.expr()?;
                    self.expect(Tok::Semi)?;
                    StmtKind::Assert(cond)
                }
                _ => {
                    let lhs = self.expr()?;
                    if self.eat(&Tok::Assign) {
                        let target = match lhs.kind {
                            ExprKind::Var(name) => Target::Var(name),
                            ExprKind::Field(name) => Target::Field(name),
                            _ => {
                                return Err(Diagnostic::new(
                                    self.file,
                                    lhs.meta.span,
                                    "invalid assignment target",
                                ))
                            }
                        };
                        let value = self.expr()?;
                        self.expect(Tok::Semi)?;
                        StmtKind::Assign { target, value }
                    } else {
                        self.expect(Tok::Semi)?;
                        StmtKind::Expr(lhs)
                    }
                }
            }
        };
        let meta = self.meta(span);
        Ok(Stmt { meta, kind })
    }

    fn if_stmt(&mut self) -> PResult<Stmt> {
        let span = self.span();
        self.expect(Tok::If)?;
        self.expect(Tok::LParen)?;
        let cond = self.expr()?;
        self.expect(Tok::RParen)?;
        let then_block = self.block()?;
        let else_block = if self.eat(&Tok::Else) {
            if self.peek() == &Tok::If {
                Some(Block {
                    stmts: vec![self.if_stmt()?],
                })
            } else {
                Some(self.block()?)
            }
        } else {
            None
        };
        let meta = self.meta(span);
        Ok(Stmt {
            meta,
            kind: StmtKind::If {
                cond,
                then_block,
                else_block,
            },
        })
    }

    fn binop(tok: &Tok) -> Option<BinOp> {
        Some(match tok {
            Tok::OrOr => BinOp::Or,
            Tok::AndAnd => BinOp::And,
            Tok::EqEq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            Tok::Plus => BinOp::Add,
            Tok::Minus => BinOp::Sub,
            Tok::Star => BinOp::Mul,
            Tok::Slash => BinOp::Div,
            _ => return None,
        })
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    /// Precedence climbing; all binary operators are left-associative.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = Self::binop(self.peek()) {
            if op.precedence() < min_prec {
                break;
            }
            let span = self.span();
            self.advance();
            let rhs = self.binary(op.precedence() + 1)?;
            let meta = self.meta(span);
            lhs = Expr::new(meta, ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let span = self.span();
        let op = match self.peek() {
            Tok::Bang => UnOp::Not,
            Tok::Minus => UnOp::Neg,
            _ => return self.postfix(),
        };
        self.advance();
        let operand = self.unary()?;
        let meta = self.meta(span);
        Ok(Expr::new(meta, ExprKind::Unary(op, Box::new(operand))))
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                args.push(self.expr()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(args)
    }

    fn call(&mut self, span: Span, receiver: Receiver, method: String) -> PResult<Expr> {
        let args = self.args()?;
        let meta = self.meta(span);
        Ok(Expr::new(
            meta,
            ExprKind::Call(Call {
                receiver,
                method,
                args,
                static_class: None,
            }),
        ))
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut expr = self.primary()?;
        while self.peek() == &Tok::Dot {
            let span = self.span();
            self.advance();
            let name = self.ident()?;
            if self.peek() == &Tok::LParen {
                expr = self.call(span, Receiver::Expr(Box::new(expr)), name)?;
            } else if matches!(expr.kind, ExprKind::This) {
                let meta = self.meta(span);
                expr = Expr::new(meta, ExprKind::Field(name));
            } else {
                return Err(Diagnostic::new(
                    self.file,
                    span,
                    "field access is only supported on `this`",
                ));
            }
        }
        Ok(expr)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Int(v) => {
                self.advance();
                ExprKind::Int(v)
            }
            Tok::True => {
                self.advance();
                ExprKind::Bool(true)
            }
            Tok::False => {
                self.advance();
                ExprKind::Bool(false)
            }
            Tok::Null => {
                self.advance();
                ExprKind::Null
            }
            Tok::This => {
                self.advance();
                ExprKind::This
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(inner);
            }
            Tok::New => {
                self.advance();
                let class = self.ident()?;
                let args = self.args()?;
                ExprKind::New { class, args }
            }
            Tok::Super => {
                self.advance();
                self.expect(Tok::Dot)?;
                let name = self.ident()?;
                return self.call(span, Receiver::Super, name);
            }
            Tok::Ident(name) => {
                self.advance();
                if self.peek() == &Tok::LParen {
                    return self.call(span, Receiver::Implicit, name);
                }
                ExprKind::Var(name)
            }
            other => {
                return self.error(format!("expected expression, found {}", other.describe()))
            }
        };
        let meta = self.meta(span);
        Ok(Expr::new(meta, kind))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> (Vec<ClassDecl>, Vec<Diagnostic>) {
        let mut id = 0;
        parse_file("t.moo", src, &mut id)
    }

    #[test]
    fn precedence_is_respected() {
        let (classes, errs) = parse("class A { int f() { return 1 + 2 * 3 < 7 && true; } }");
        assert!(errs.is_empty(), "{errs:?}");
        let body = classes[0].methods[0].body.as_ref().unwrap();
        let StmtKind::Return(Some(e)) = &body.stmts[0].kind else { panic!() };
        let ExprKind::Binary(BinOp::And, lhs, _) = &e.kind else { panic!("{e:?}") };
        let ExprKind::Binary(BinOp::Lt, sum, _) = &lhs.kind else { panic!() };
        let ExprKind::Binary(BinOp::Add, _, prod) = &sum.kind else { panic!() };
        assert!(matches!(prod.kind, ExprKind::Binary(BinOp::Mul, _, _)));
    }

    #[test]
    fn constructor_and_abstract_method() {
        let (classes, errs) = parse("class A { int x; A(int v) { x = v; } int get(); }");
        assert!(errs.is_empty(), "{errs:?}");
        let a = &classes[0];
        assert_eq!(a.fields.len(), 1);
        assert!(a.constructor(1).is_some());
        assert!(a.method("get", 0).unwrap().is_abstract());
    }

    #[test]
    fn local_declaration_with_class_type() {
        let (classes, errs) = parse("class A { void t() { Foo f = new Foo(); f.go(1, 2); super.t(); } }");
        assert!(errs.is_empty(), "{errs:?}");
        let stmts = &classes[0].methods[0].body.as_ref().unwrap().stmts;
        assert!(matches!(stmts[0].kind, StmtKind::Local { .. }));
        assert!(matches!(stmts[2].kind, StmtKind::Expr(Expr { kind: ExprKind::Call(Call { receiver: Receiver::Super, .. }), .. })));
    }

    #[test]
    fn errors_carry_position_and_parsing_resumes() {
        let (classes, errs) = parse("class A { int f( }\nclass B { }");
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].span.line, 1);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].name, "B");
    }

    #[test]
    fn field_access_requires_this() {
        let (_, errs) = parse("class A { int f() { return a.b; } }");
        assert_eq!(errs.len(), 1);
    }
}
