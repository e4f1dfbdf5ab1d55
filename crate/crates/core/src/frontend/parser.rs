//! Recursive-descent parser.
//!
//! The grammar is LL(2): a statement starting with `Ident Ident` is a local
//! declaration, and `Ident . this` starts a group escape call. On a syntax
//! error the parser reports the failing token and resumes at the next `class`
//! keyword, so one run can report errors in several classes.

use super::ast::*;
use super::lexer::{Keyword, Punct, Token, TokenKind};
use crate::source::{Code, Diagnostic, Span};

/// Parses a single file into a fresh program.
pub fn parse(tokens: &[Token]) -> Result<Program, Vec<Diagnostic>> {
    let mut program = Program::default();
    parse_into(&mut program, tokens)?;
    Ok(program)
}

/// Parses one file and appends it to `program` as a new compilation unit.
/// Node ids continue from `program.next_id`.
pub fn parse_into(program: &mut Program, tokens: &[Token]) -> Result<(), Vec<Diagnostic>> {
    assert!(
        matches!(tokens.last().map(|t| &t.kind), Some(TokenKind::Eof)),
        "token list must end with the end-of-input sentinel"
    );
    let file = tokens.last().unwrap().span.file;
    let mut parser = Parser {
        tokens,
        pos: 0,
        next_id: program.next_id,
        diags: Vec::new(),
    };
    let classes = parser.program();
    if parser.diags.is_empty() {
        program.next_id = parser.next_id;
        program.units.push(CompilationUnit { file, classes });
        Ok(())
    } else {
        Err(parser.diags)
    }
}

type PResult<T> = Result<T, ()>;

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    next_id: u32,
    diags: Vec<Diagnostic>,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> &'t Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, n: usize) -> &'t Token {
        &self.tokens[(self.pos + n).min(self.tokens.len() - 1)]
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> &'t Token {
        let tok = &self.tokens[self.pos];
        if !matches!(tok.kind, TokenKind::Eof) {
            self.pos += 1;
        }
        tok
    }

    fn at_punct(&self, p: Punct) -> bool {
        self.peek().kind == TokenKind::Punct(p)
    }

    fn at_kw(&self, k: Keyword) -> bool {
        self.peek().kind == TokenKind::Keyword(k)
    }

    fn eat_punct(&mut self, p: Punct) -> bool {
        if self.at_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, k: Keyword) -> bool {
        if self.at_kw(k) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn fresh_id(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    fn error_expected(&mut self, expected: &[&str]) -> PResult<()> {
        let tok = self.peek();
        let what = match expected {
            [one] => one.to_string(),
            many => format!("one of {}", many.join(", ")),
        };
        self.diags.push(Diagnostic::error(
            Code::E002,
            tok.span,
            format!("expected {what}, found {}", tok.kind),
        ));
        Err(())
    }

    fn error_at(&mut self, code: Code, span: Span, msg: impl Into<String>) -> PResult<()> {
        self.diags.push(Diagnostic::error(code, span, msg));
        Err(())
    }

    fn expect_punct(&mut self, p: Punct) -> PResult<Span> {
        if self.at_punct(p) {
            Ok(self.bump().span)
        } else {
            let quoted = format!("`{}`", p.as_str());
            self.error_expected(&[&quoted])?;
            unreachable!()
        }
    }

    fn expect_ident(&mut self) -> PResult<Ident> {
        match &self.peek().kind {
            TokenKind::Ident(name) => {
                let name = name.clone();
                let span = self.bump().span;
                Ok(Ident::new(name, span))
            }
            _ => {
                self.error_expected(&["identifier"])?;
                unreachable!()
            }
        }
    }

    /// Skips to the next `class` keyword (or end of input).
    fn synchronize(&mut self) {
        while !matches!(
            self.peek().kind,
            TokenKind::Eof | TokenKind::Keyword(Keyword::Class)
        ) {
            self.bump();
        }
    }

    fn program(&mut self) -> Vec<ClassDecl> {
        let mut classes = Vec::new();
        loop {
            match &self.peek().kind {
                TokenKind::Eof => break,
                TokenKind::Keyword(Keyword::Class) => match self.class_decl() {
                    Ok(c) => classes.push(c),
                    Err(()) => {
                        // Make progress past the `class` that started the broken decl.
                        if self.at_kw(Keyword::Class) {
                            self.bump();
                        }
                        self.synchronize();
                    }
                },
                TokenKind::GroupMarker => {
                    let span = self.peek().span;
                    let _ = self.error_at(
                        Code::E002,
                        span,
                        "`@group` method declared outside a class body",
                    );
                    self.bump();
                    self.synchronize();
                }
                _ => {
                    let _ = self.error_expected(&["`class`"]);
                    self.bump();
                    self.synchronize();
                }
            }
        }
        classes
    }

    fn class_decl(&mut self) -> PResult<ClassDecl> {
        let start = self.bump().span;
        let name = self.expect_ident()?;
        let superclass = if self.eat_kw(Keyword::Extends) {
            Some(self.expect_ident()?)
        } else {
            None
        };
        self.expect_punct(Punct::LBrace)?;
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        while !self.at_punct(Punct::RBrace) {
            if matches!(self.peek().kind, TokenKind::Eof | TokenKind::Keyword(Keyword::Class)) {
                self.error_expected(&["`}`"])?;
            }
            match self.member(&name.name)? {
                Member::Field(f) => fields.push(f),
                Member::Method(m) => methods.push(m),
            }
        }
        let end = self.bump().span;
        Ok(ClassDecl {
            name,
            superclass,
            fields,
            methods,
            span: start.to(end),
        })
    }

    fn member(&mut self, class_name: &str) -> PResult<Member> {
        let start = self.peek().span;
        let group = if matches!(self.peek().kind, TokenKind::GroupMarker) {
            Some(self.bump().span)
        } else {
            None
        };
        let is_static = self.eat_kw(Keyword::Static);

        // Constructor: `Name(`
        if let TokenKind::Ident(n) = &self.peek().kind {
            if self.peek_at(1).kind == TokenKind::Punct(Punct::LParen) {
                let name = self.expect_ident()?;
                if n != class_name {
                    self.error_at(
                        Code::E002,
                        name.span,
                        format!(
                            "method `{}` is missing a return type (constructors must be named `{class_name}`)",
                            name.name
                        ),
                    )?;
                }
                if let Some(g) = group {
                    self.error_at(Code::E003, g, "`@group` cannot be applied to a constructor")?;
                }
                if is_static {
                    self.error_at(Code::E002, start, "constructors cannot be `static`")?;
                }
                let params = self.params()?;
                let body = self.block()?;
                let ret = TypeExpr {
                    kind: TypeExprKind::Void,
                    span: name.span,
                };
                let span = start.to(body.span);
                return Ok(Member::Method(MethodDecl {
                    name,
                    kind: MethodKind::Constructor,
                    params,
                    ret,
                    body,
                    span,
                }));
            }
        }

        let ty = self.type_expr(true)?;
        let name = self.expect_ident()?;
        if self.at_punct(Punct::LParen) {
            let kind = match (group, is_static) {
                (Some(g), true) => {
                    self.error_at(Code::E003, g, "`@group` cannot be applied to a static method")?;
                    unreachable!()
                }
                (Some(_), false) => MethodKind::Group,
                (None, true) => MethodKind::Static,
                (None, false) => MethodKind::Instance,
            };
            let params = self.params()?;
            let body = self.block()?;
            let span = start.to(body.span);
            Ok(Member::Method(MethodDecl {
                name,
                kind,
                params,
                ret: ty,
                body,
                span,
            }))
        } else {
            if let Some(g) = group {
                self.error_at(Code::E002, g, "`@group` applies only to methods")?;
            }
            if is_static {
                self.error_at(Code::E002, start, "static fields are not supported")?;
            }
            if matches!(ty.kind, TypeExprKind::Void) {
                self.error_at(Code::E002, ty.span, "fields cannot have type `void`")?;
            }
            let end = self.expect_punct(Punct::Semi)?;
            Ok(Member::Field(FieldDecl {
                name,
                ty,
                span: start.to(end),
            }))
        }
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect_punct(Punct::LParen)?;
        let mut params = Vec::new();
        if !self.at_punct(Punct::RParen) {
            loop {
                let ty = self.type_expr(false)?;
                let name = self.expect_ident()?;
                let span = ty.span.to(name.span);
                params.push(Param { name, ty, span });
                if !self.eat_punct(Punct::Comma) {
                    break;
                }
            }
        }
        self.expect_punct(Punct::RParen)?;
        Ok(params)
    }

    fn at_type_start(&self) -> bool {
        matches!(
            self.peek().kind,
            TokenKind::Keyword(
                Keyword::Int | Keyword::Boolean | Keyword::String | Keyword::Collection
            )
        ) || (matches!(self.peek().kind, TokenKind::Ident(_))
            && matches!(self.peek_at(1).kind, TokenKind::Ident(_)))
    }

    fn type_expr(&mut self, allow_void: bool) -> PResult<TypeExpr> {
        let tok = self.peek();
        let kind = match &tok.kind {
            TokenKind::Keyword(Keyword::Int) => TypeExprKind::Int,
            TokenKind::Keyword(Keyword::Boolean) => TypeExprKind::Boolean,
            TokenKind::Keyword(Keyword::String) => TypeExprKind::String,
            TokenKind::Keyword(Keyword::Void) if allow_void => TypeExprKind::Void,
            TokenKind::Ident(name) => TypeExprKind::Named(name.clone()),
            TokenKind::Keyword(Keyword::Collection) => {
                let start = self.bump().span;
                self.expect_punct(Punct::Lt)?;
                let bounded = if self.eat_punct(Punct::Question) {
                    if !self.eat_kw(Keyword::Extends) {
                        self.error_expected(&["`extends`"])?;
                    }
                    true
                } else {
                    false
                };
                let element = self.type_expr(false)?;
                let end = self.expect_punct(Punct::Gt)?;
                return Ok(TypeExpr {
                    kind: TypeExprKind::Collection {
                        element: Box::new(element),
                        bounded,
                    },
                    span: start.to(end),
                });
            }
            _ => {
                self.error_expected(&["type"])?;
                unreachable!()
            }
        };
        let span = self.bump().span;
        Ok(TypeExpr { kind, span })
    }

    fn block(&mut self) -> PResult<Block> {
        let start = self.expect_punct(Punct::LBrace)?;
        let mut stmts = Vec::new();
        while !self.at_punct(Punct::RBrace) {
            if matches!(self.peek().kind, TokenKind::Eof) {
                self.error_expected(&["`}`"])?;
            }
            stmts.push(self.stmt()?);
        }
        let end = self.bump().span;
        Ok(Block {
            stmts,
            span: start.to(end),
        })
    }

    /// Loop and branch bodies are always blocks; a single statement is
    /// wrapped into one.
    fn body(&mut self) -> PResult<Block> {
        if self.at_punct(Punct::LBrace) {
            self.block()
        } else {
            let stmt = self.stmt()?;
            let span = stmt.span;
            Ok(Block {
                stmts: vec![stmt],
                span,
            })
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let start = self.peek().span;
        match &self.peek().kind {
            TokenKind::Punct(Punct::LBrace) => {
                let b = self.block()?;
                let span = b.span;
                Ok(Stmt {
                    kind: StmtKind::Block(b),
                    span,
                })
            }
            TokenKind::Keyword(Keyword::If) => self.if_stmt(),
            TokenKind::Keyword(Keyword::While) => {
                self.bump();
                self.expect_punct(Punct::LParen)?;
                let cond = self.expr()?;
                self.expect_punct(Punct::RParen)?;
                let body = self.body()?;
                let span = start.to(body.span);
                Ok(Stmt {
                    kind: StmtKind::While { cond, body },
                    span,
                })
            }
            TokenKind::Keyword(Keyword::For) => self.for_stmt(),
            TokenKind::Keyword(Keyword::Return) => {
                self.bump();
                let value = if self.at_punct(Punct::Semi) {
                    None
                } else {
                    Some(self.expr()?)
                };
                let end = self.expect_punct(Punct::Semi)?;
                Ok(Stmt {
                    kind: StmtKind::Return(value),
                    span: start.to(end),
                })
            }
            TokenKind::Keyword(Keyword::Print) => {
                self.bump();
                self.expect_punct(Punct::LParen)?;
                let value = self.expr()?;
                self.expect_punct(Punct::RParen)?;
                let end = self.expect_punct(Punct::Semi)?;
                Ok(Stmt {
                    kind: StmtKind::Print(value),
                    span: start.to(end),
                })
            }
            TokenKind::Keyword(Keyword::Super)
                if self.peek_at(1).kind == TokenKind::Punct(Punct::LParen) =>
            {
                self.bump();
                let args = self.args()?;
                let end = self.expect_punct(Punct::Semi)?;
                Ok(Stmt {
                    kind: StmtKind::SuperCtor(args),
                    span: start.to(end),
                })
            }
            _ => {
                let mut stmt = self.simple_stmt()?;
                let end = self.expect_punct(Punct::Semi)?;
                stmt.span = stmt.span.to(end);
                Ok(stmt)
            }
        }
    }

    /// Local declaration, assignment or expression statement, without the
    /// trailing semicolon.
    fn simple_stmt(&mut self) -> PResult<Stmt> {
        if self.at_type_start() {
            let ty = self.type_expr(false)?;
            let name = self.expect_ident()?;
            let init = if self.eat_punct(Punct::Assign) {
                Some(self.expr()?)
            } else {
                None
            };
            let end = init.as_ref().map_or(name.span, |e| e.span);
            let span = ty.span.to(end);
            return Ok(Stmt {
                kind: StmtKind::Local { ty, name, init },
                span,
            });
        }
        let expr = self.expr()?;
        if self.eat_punct(Punct::Assign) {
            if !matches!(expr.kind, ExprKind::Ident(_) | ExprKind::Field { .. }) {
                self.error_at(
                    Code::E002,
                    expr.span,
                    "invalid assignment target; expected a variable or field",
                )?;
            }
            let value = self.expr()?;
            let span = expr.span.to(value.span);
            return Ok(Stmt {
                kind: StmtKind::Assign {
                    target: expr,
                    value,
                },
                span,
            });
        }
        let span = expr.span;
        Ok(Stmt {
            kind: StmtKind::Expr(expr),
            span,
        })
    }

    fn if_stmt(&mut self) -> PResult<Stmt> {
        let start = self.bump().span;
        self.expect_punct(Punct::LParen)?;
        let cond = self.expr()?;
        self.expect_punct(Punct::RParen)?;
        let then_block = self.body()?;
        let mut end = then_block.span;
        let else_branch = if self.eat_kw(Keyword::Else) {
            if self.at_kw(Keyword::If) {
                let nested = self.if_stmt()?;
                end = nested.span;
                Some(Box::new(ElseBranch::If(nested)))
            } else {
                let b = self.body()?;
                end = b.span;
                Some(Box::new(ElseBranch::Block(b)))
            }
        } else {
            None
        };
        Ok(Stmt {
            kind: StmtKind::If {
                cond,
                then_block,
                else_branch,
            },
            span: start.to(end),
        })
    }

    fn for_stmt(&mut self) -> PResult<Stmt> {
        let start = self.bump().span;
        self.expect_punct(Punct::LParen)?;

        let mut init = None;
        if self.at_type_start() {
            let ty = self.type_expr(false)?;
            let name = self.expect_ident()?;
            if self.eat_punct(Punct::Colon) {
                let iterable = self.expr()?;
                self.expect_punct(Punct::RParen)?;
                let body = self.body()?;
                let span = start.to(body.span);
                return Ok(Stmt {
                    kind: StmtKind::ForEach {
                        ty,
                        name,
                        iterable,
                        body,
                    },
                    span,
                });
            }
            let init_expr = if self.eat_punct(Punct::Assign) {
                Some(self.expr()?)
            } else {
                None
            };
            let end = init_expr.as_ref().map_or(name.span, |e| e.span);
            let span = ty.span.to(end);
            init = Some(Box::new(Stmt {
                kind: StmtKind::Local {
                    ty,
                    name,
                    init: init_expr,
                },
                span,
            }));
        } else if !self.at_punct(Punct::Semi) {
            init = Some(Box::new(self.simple_stmt()?));
        }
        self.expect_punct(Punct::Semi)?;

        let cond = if self.at_punct(Punct::Semi) {
            None
        } else {
            Some(self.expr()?)
        };
        self.expect_punct(Punct::Semi)?;

        let update = if self.at_punct(Punct::RParen) {
            None
        } else {
            let s = self.simple_stmt()?;
            if matches!(s.kind, StmtKind::Local { .. }) {
                self.error_at(Code::E002, s.span, "declarations are not allowed in a for-loop update")?;
            }
            Some(Box::new(s))
        };
        self.expect_punct(Punct::RParen)?;
        let body = self.body()?;
        let span = start.to(body.span);
        Ok(Stmt {
            kind: StmtKind::For {
                init,
                cond,
                update,
                body,
            },
            span,
        })
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        self.expect_punct(Punct::LParen)?;
        let mut args = Vec::new();
        if !self.at_punct(Punct::RParen) {
            loop {
                args.push(self.expr()?);
                if !self.eat_punct(Punct::Comma) {
                    break;
                }
            }
        }
        self.expect_punct(Punct::RParen)?;
        Ok(args)
    }

    fn mk(&mut self, kind: ExprKind, span: Span) -> Expr {
        Expr {
            id: self.fresh_id(),
            kind,
            span,
        }
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinaryOp> {
        let TokenKind::Punct(p) = self.peek().kind else {
            return None;
        };
        Some(match p {
            Punct::OrOr => BinaryOp::Or,
            Punct::AndAnd => BinaryOp::And,
            Punct::EqEq => BinaryOp::Eq,
            Punct::Ne => BinaryOp::Ne,
            Punct::Lt => BinaryOp::Lt,
            Punct::Le => BinaryOp::Le,
            Punct::Gt => BinaryOp::Gt,
            Punct::Ge => BinaryOp::Ge,
            Punct::Plus => BinaryOp::Add,
            Punct::Minus => BinaryOp::Sub,
            Punct::Star => BinaryOp::Mul,
            Punct::Slash => BinaryOp::Div,
            _ => return None,
        })
    }

    /// Precedence climbing over left-associative binary operators.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(prec + 1)?;
            let span = lhs.span.to(rhs.span);
            lhs = self.mk(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let op = match self.peek().kind {
            TokenKind::Punct(Punct::Minus) => Some(UnaryOp::Neg),
            TokenKind::Punct(Punct::Bang) => Some(UnaryOp::Not),
            _ => None,
        };
        if let Some(op) = op {
            let start = self.bump().span;
            let operand = self.unary()?;
            let span = start.to(operand.span);
            return Ok(self.mk(
                ExprKind::Unary {
                    op,
                    operand: Box::new(operand),
                },
                span,
            ));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut expr = self.primary()?;
        while self.eat_punct(Punct::Dot) {
            let name = self.expect_ident()?;
            if self.at_punct(Punct::LParen) {
                let args = self.args()?;
                let span = expr.span.to(self.prev_span());
                expr = self.mk(
                    ExprKind::Call {
                        receiver: Box::new(expr),
                        method: name,
                        args,
                    },
                    span,
                );
            } else {
                let span = expr.span.to(name.span);
                expr = self.mk(
                    ExprKind::Field {
                        target: Box::new(expr),
                        name,
                    },
                    span,
                );
            }
        }
        Ok(expr)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let tok = self.peek();
        let span = tok.span;
        match &tok.kind {
            TokenKind::IntLit(v) => {
                let v = *v;
                self.bump();
                Ok(self.mk(ExprKind::IntLit(v), span))
            }
            TokenKind::StrLit(s) => {
                let s = s.clone();
                self.bump();
                Ok(self.mk(ExprKind::StrLit(s), span))
            }
            TokenKind::Keyword(Keyword::True) => {
                self.bump();
                Ok(self.mk(ExprKind::BoolLit(true), span))
            }
            TokenKind::Keyword(Keyword::False) => {
                self.bump();
                Ok(self.mk(ExprKind::BoolLit(false), span))
            }
            TokenKind::Keyword(Keyword::Null) => {
                self.bump();
                Ok(self.mk(ExprKind::Null, span))
            }
            TokenKind::Keyword(Keyword::This) => {
                self.bump();
                Ok(self.mk(ExprKind::This, span))
            }
            TokenKind::Punct(Punct::LParen) => {
                self.bump();
                let inner = self.expr()?;
                self.expect_punct(Punct::RParen)?;
                Ok(inner)
            }
            TokenKind::Keyword(Keyword::Super) => {
                self.bump();
                self.expect_punct(Punct::Dot)?;
                let method = self.expect_ident()?;
                let args = self.args()?;
                let span = span.to(self.prev_span());
                Ok(self.mk(ExprKind::SuperCall { method, args }, span))
            }
            TokenKind::Keyword(Keyword::New) => {
                self.bump();
                if self.at_kw(Keyword::Collection) {
                    let element = self.type_expr(false)?;
                    self.expect_punct(Punct::LParen)?;
                    let end = self.expect_punct(Punct::RParen)?;
                    return Ok(self.mk(ExprKind::NewCollection { ty: element }, span.to(end)));
                }
                let class = self.expect_ident()?;
                let args = self.args()?;
                let span = span.to(self.prev_span());
                Ok(self.mk(ExprKind::New { class, args }, span))
            }
            TokenKind::Ident(name) => {
                let name = name.clone();
                self.bump();
                if self.at_punct(Punct::Dot)
                    && self.peek_at(1).kind == TokenKind::Keyword(Keyword::This)
                {
                    self.bump();
                    self.bump();
                    let qualifier = Ident::new(name, span);
                    if !self.eat_punct(Punct::Dot) {
                        self.error_expected(&["`.` (a qualified `this` must be the receiver of a call)"])?;
                    }
                    let method = self.expect_ident()?;
                    if !self.at_punct(Punct::LParen) {
                        self.error_expected(&["`(`"])?;
                    }
                    let args = self.args()?;
                    let span = span.to(self.prev_span());
                    return Ok(self.mk(
                        ExprKind::EscapeCall {
                            qualifier,
                            method,
                            args,
                        },
                        span,
                    ));
                }
                Ok(self.mk(ExprKind::Ident(name), span))
            }
            _ => {
                self.error_expected(&["expression"])?;
                unreachable!()
            }
        }
    }
}

enum Member {
    Field(FieldDecl),
    Method(MethodDecl),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::lexer::tokenize;
    use crate::source::{FileId, SourceUnit};

    fn parse_src(src: &str) -> Result<Program, Vec<Diagnostic>> {
        let toks = tokenize(FileId(0), &SourceUnit::new("t.swarm", src)).unwrap();
        parse(&toks)
    }

    const FISH: &str = r#"
class Fish extends Creature {
    void attack(Creature creature) {
        creature.damage(0);
    }
    @group
    void swarmAttack(Creature creature) {
        int swarmSize = this.size();
        creature.damage(swarmSize * swarmSize);
    }
}
"#;

    #[test]
    fn fish_listing_has_one_instance_and_one_group_method() {
        let p = parse_src(FISH).unwrap();
        let fish = &p.units[0].classes[0];
        assert_eq!(fish.name.name, "Fish");
        assert_eq!(fish.superclass.as_ref().unwrap().name, "Creature");
        let kinds: Vec<_> = fish.methods.iter().map(|m| m.kind).collect();
        assert_eq!(kinds, vec![MethodKind::Instance, MethodKind::Group]);
    }

    #[test]
    fn empty_input_has_no_classes() {
        let p = parse_src("").unwrap();
        assert_eq!(p.classes().count(), 0);
    }

    #[test]
    fn escape_call_records_qualifier() {
        let p = parse_src("class Fish { @group int n() { return Fish.this.size(); } }").unwrap();
        let body = &p.units[0].classes[0].methods[0].body;
        let StmtKind::Return(Some(e)) = &body.stmts[0].kind else {
            panic!("expected return");
        };
        match &e.kind {
            ExprKind::EscapeCall {
                qualifier, method, ..
            } => {
                assert_eq!(qualifier.name, "Fish");
                assert_eq!(method.name, "size");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let p = parse_src("class A { static int f() { return 1 - 2 - 3 * 4; } }").unwrap();
        let StmtKind::Return(Some(e)) = &p.units[0].classes[0].methods[0].body.stmts[0].kind else {
            panic!()
        };
        // (1 - 2) - (3 * 4)
        let ExprKind::Binary { op, lhs, rhs } = &e.kind else { panic!() };
        assert_eq!(*op, BinaryOp::Sub);
        assert!(matches!(lhs.kind, ExprKind::Binary { op: BinaryOp::Sub, .. }));
        assert!(matches!(rhs.kind, ExprKind::Binary { op: BinaryOp::Mul, .. }));
    }

    #[test]
    fn group_outside_class_is_rejected() {
        let err = parse_src("@group void f() {}").unwrap_err();
        assert_eq!(err[0].code, Code::E002);
        assert!(err[0].message.contains("outside a class"));
    }

    #[test]
    fn group_on_static_or_constructor() {
        let err = parse_src("class A { @group static void f() {} }").unwrap_err();
        assert_eq!(err[0].code, Code::E003);
        let err = parse_src("class A { @group A() {} }").unwrap_err();
        assert_eq!(err[0].code, Code::E003);
    }

    #[test]
    fn recovers_at_next_class() {
        let err = parse_src("class A { int x = ; } class B { void f() { 1 + ; } } class C {}")
            .unwrap_err();
        assert_eq!(err.len(), 2);
        assert!(err[0].message.contains("expected"));
        assert!(err[0].message.contains("found `=`"));
    }

    #[test]
    fn for_and_foreach() {
        let src = r#"class M { static void main() {
            Collection<Fish> s = new Collection<Fish>();
            for (int n = 0; n < 10; n = n + 1) s.add(new Fish());
            for (Fish f : s) { f.attack(null); }
        } }"#;
        let p = parse_src(src).unwrap();
        let stmts = &p.units[0].classes[0].methods[0].body.stmts;
        assert!(matches!(stmts[1].kind, StmtKind::For { .. }));
        assert!(matches!(stmts[2].kind, StmtKind::ForEach { .. }));
    }

    #[test]
    fn bounded_collection_type() {
        let p = parse_src("class W { Collection<? extends Fish> delegate; }").unwrap();
        let f = &p.units[0].classes[0].fields[0];
        assert!(matches!(
            f.ty.kind,
            TypeExprKind::Collection { bounded: true, .. }
        ));
    }

    #[test]
    fn constructor_with_super_call() {
        let p = parse_src("class B extends A { B(int x) { super(x); } }").unwrap();
        let m = &p.units[0].classes[0].methods[0];
        assert_eq!(m.kind, MethodKind::Constructor);
        assert!(matches!(m.body.stmts[0].kind, StmtKind::SuperCtor(_)));
    }

    #[test]
    fn parse_is_deterministic() {
        assert_eq!(parse_src(FISH).unwrap(), parse_src(FISH).unwrap());
    }
}
