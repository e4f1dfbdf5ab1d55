//! Lexing, parsing and dialect checks.

pub mod ast;
pub mod lexer;
pub mod parser;

use crate::source::{Code, Diagnostic, SourceMap, Span};
use ast::*;

pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse, parse_into};

/// Which language variant a program is checked against.
///
/// `Swarm` is the surface language: group methods and `T.this` escapes are
/// available, `$` is reserved for generated names, and bounded collection
/// types cannot be written. `Core` is the lowering target produced by the
/// desugarer: no group features, but `$` names and `Collection<? extends T>`
/// are allowed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Dialect {
    #[default]
    Swarm,
    Core,
}

/// Tokenizes and parses every file of `sources` into one program, in file
/// order. All lexical and syntax diagnostics are collected.
pub fn parse_sources(sources: &SourceMap) -> Result<Program, Vec<Diagnostic>> {
    let mut program = Program::default();
    let mut diags = Vec::new();
    for (id, unit) in sources.iter() {
        match tokenize(id, unit) {
            Ok(tokens) => {
                if let Err(mut d) = parse_into(&mut program, &tokens) {
                    diags.append(&mut d);
                }
            }
            Err(mut d) => diags.append(&mut d),
        }
    }
    if diags.is_empty() {
        Ok(program)
    } else {
        Err(diags)
    }
}

/// Reports constructs that the given dialect does not allow.
pub fn check_dialect(program: &Program, dialect: Dialect) -> Vec<Diagnostic> {
    let mut checker = DialectChecker {
        dialect,
        diags: Vec::new(),
    };
    for class in program.classes() {
        checker.name(&class.name);
        for field in &class.fields {
            checker.name(&field.name);
            checker.ty(&field.ty);
        }
        for method in &class.methods {
            checker.name(&method.name);
            if method.kind == MethodKind::Group && dialect == Dialect::Core {
                checker.push(
                    Code::E005,
                    method.span,
                    format!("group method `{}` is not allowed in core code", method.name.name),
                );
            }
            checker.ty(&method.ret);
            for p in &method.params {
                checker.name(&p.name);
                checker.ty(&p.ty);
            }
            checker.block(&method.body);
        }
    }
    checker.diags
}

struct DialectChecker {
    dialect: Dialect,
    diags: Vec<Diagnostic>,
}

impl DialectChecker {
    fn push(&mut self, code: Code, span: Span, msg: String) {
        self.diags.push(Diagnostic::error(code, span, msg));
    }

    fn name(&mut self, ident: &Ident) {
        if self.dialect == Dialect::Swarm && ident.name.contains('$') {
            self.push(
                Code::E007,
                ident.span,
                format!(
                    "`{}`: names containing `$` are reserved for generated code",
                    ident.name
                ),
            );
        }
    }

    fn ty(&mut self, ty: &TypeExpr) {
        match &ty.kind {
            TypeExprKind::Collection { element, bounded } => {
                if *bounded && self.dialect == Dialect::Swarm {
                    self.push(
                        Code::E006,
                        ty.span,
                        "bounded collection types are only available in core code".into(),
                    );
                }
                self.ty(element);
            }
            TypeExprKind::Named(n) if self.dialect == Dialect::Swarm && n.contains('$') => {
                self.push(
                    Code::E007,
                    ty.span,
                    format!("`{n}`: names containing `$` are reserved for generated code"),
                );
            }
            _ => {}
        }
    }

    fn block(&mut self, block: &Block) {
        for s in &block.stmts {
            self.stmt(s);
        }
    }

    fn stmt(&mut self, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::Local { ty, name, init } => {
                self.ty(ty);
                self.name(name);
                if let Some(e) = init {
                    self.expr(e);
                }
            }
            StmtKind::Assign { target, value } => {
                self.expr(target);
                self.expr(value);
            }
            StmtKind::Expr(e) | StmtKind::Print(e) => self.expr(e),
            StmtKind::Return(e) => {
                if let Some(e) = e {
                    self.expr(e);
                }
            }
            StmtKind::If {
                cond,
                then_block,
                else_branch,
            } => {
                self.expr(cond);
                self.block(then_block);
                match else_branch.as_deref() {
                    Some(ElseBranch::If(s)) => self.stmt(s),
                    Some(ElseBranch::Block(b)) => self.block(b),
                    None => {}
                }
            }
            StmtKind::While { cond, body } => {
                self.expr(cond);
                self.block(body);
            }
            StmtKind::For {
                init,
                cond,
                update,
                body,
            } => {
                if let Some(s) = init {
                    self.stmt(s);
                }
                if let Some(e) = cond {
                    self.expr(e);
                }
                if let Some(s) = update {
                    self.stmt(s);
                }
                self.block(body);
            }
            StmtKind::ForEach {
                ty,
                name,
                iterable,
                body,
            } => {
                self.ty(ty);
                self.name(name);
                self.expr(iterable);
                self.block(body);
            }
            StmtKind::Block(b) => self.block(b),
            StmtKind::SuperCtor(args) => args.iter().for_each(|a| self.expr(a)),
        }
    }

    fn expr(&mut self, expr: &Expr) {
        match &expr.kind {
            ExprKind::This
            | ExprKind::IntLit(_)
            | ExprKind::BoolLit(_)
            | ExprKind::StrLit(_)
            | ExprKind::Null => {}
            ExprKind::Ident(n) => {
                if self.dialect == Dialect::Swarm && n.contains('$') {
                    self.push(
                        Code::E007,
                        expr.span,
                        format!("`{n}`: names containing `$` are reserved for generated code"),
                    );
                }
            }
            ExprKind::Field { target, name } => {
                self.expr(target);
                self.name(name);
            }
            ExprKind::Call {
                receiver,
                method,
                args,
            } => {
                self.expr(receiver);
                self.name(method);
                args.iter().for_each(|a| self.expr(a));
            }
            ExprKind::SuperCall { method, args } => {
                self.name(method);
                args.iter().for_each(|a| self.expr(a));
            }
            ExprKind::EscapeCall { args, .. } => {
                if self.dialect == Dialect::Core {
                    self.push(
                        Code::E005,
                        expr.span,
                        "qualified `this` is not allowed in core code".into(),
                    );
                }
                args.iter().for_each(|a| self.expr(a));
            }
            ExprKind::New { class, args } => {
                self.name(class);
                args.iter().for_each(|a| self.expr(a));
            }
            ExprKind::NewCollection { ty } => self.ty(ty),
            ExprKind::Binary { lhs, rhs, .. } => {
                self.expr(lhs);
                self.expr(rhs);
            }
            ExprKind::Unary { operand, .. } => self.expr(operand),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::SourceUnit;

    fn program(src: &str) -> Program {
        let mut map = SourceMap::new();
        map.add(SourceUnit::new("t.swarm", src));
        parse_sources(&map).unwrap()
    }

    #[test]
    fn swarm_dialect_rejects_generated_syntax() {
        let p = program("class A$B { Collection<? extends A$B> d; }");
        let codes: Vec<_> = check_dialect(&p, Dialect::Swarm)
            .into_iter()
            .map(|d| d.code)
            .collect();
        assert!(codes.contains(&Code::E006));
        assert!(codes.contains(&Code::E007));
        assert!(check_dialect(&p, Dialect::Core).is_empty());
    }

    #[test]
    fn core_dialect_rejects_group_features() {
        let p = program("class F { @group int n() { return F.this.size(); } }");
        let diags = check_dialect(&p, Dialect::Core);
        assert_eq!(diags.len(), 2);
        assert!(diags.iter().all(|d| d.code == Code::E005));
        assert!(check_dialect(&p, Dialect::Swarm).is_empty());
    }
}
