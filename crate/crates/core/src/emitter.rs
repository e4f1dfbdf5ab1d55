//! Pretty-printer producing canonical SwarmLang source.

use std::fmt::Write;

use crate::frontend::ast::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmitConfig {
    pub indent_width: usize,
    /// Print `@group` on group methods. Desugared programs have none, so
    /// this only matters when printing surface programs.
    pub include_group_annotations: bool,
}

impl Default for EmitConfig {
    fn default() -> Self {
        EmitConfig {
            indent_width: 4,
            include_group_annotations: true,
        }
    }
}

/// Prints every unit of `program`, classes separated by blank lines.
pub fn emit(program: &Program, cfg: &EmitConfig) -> String {
    let classes: Vec<&ClassDecl> = program.classes().collect();
    emit_classes(&classes, cfg)
}

/// Prints one compilation unit.
pub fn emit_unit(unit: &CompilationUnit, cfg: &EmitConfig) -> String {
    let classes: Vec<&ClassDecl> = unit.classes.iter().collect();
    emit_classes(&classes, cfg)
}

fn emit_classes(classes: &[&ClassDecl], cfg: &EmitConfig) -> String {
    assert!(cfg.indent_width >= 1, "indent width must be positive");
    let mut p = Printer {
        out: String::new(),
        depth: 0,
        cfg,
    };
    for (i, class) in classes.iter().enumerate() {
        if i > 0 {
            p.out.push('\n');
        }
        p.class(class);
    }
    if p.out.is_empty() {
        p.out.push('\n');
    }
    p.out
}

pub fn type_expr(ty: &TypeExpr) -> String {
    match &ty.kind {
        TypeExprKind::Int => "int".into(),
        TypeExprKind::Boolean => "boolean".into(),
        TypeExprKind::String => "string".into(),
        TypeExprKind::Void => "void".into(),
        TypeExprKind::Named(n) => n.clone(),
        TypeExprKind::Collection { element, bounded } => format!(
            "Collection<{}{}>",
            if *bounded { "? extends " } else { "" },
            type_expr(element)
        ),
    }
}

fn string_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Prints an expression with the fewest parentheses that re-parse to the
/// same tree.
pub fn expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

fn write_args(out: &mut String, args: &[Expr]) {
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, a);
    }
    out.push(')');
}

fn write_operand(out: &mut String, e: &Expr, parens: bool) {
    if parens {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn is_operator(e: &Expr) -> bool {
    matches!(e.kind, ExprKind::Binary { .. } | ExprKind::Unary { .. })
}

fn write_expr(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::This => out.push_str("this"),
        ExprKind::Ident(n) => out.push_str(n),
        ExprKind::IntLit(v) => write!(out, "{v}").unwrap(),
        ExprKind::BoolLit(b) => write!(out, "{b}").unwrap(),
        ExprKind::StrLit(s) => out.push_str(&string_literal(s)),
        ExprKind::Null => out.push_str("null"),
        ExprKind::Field { target, name } => {
            write_operand(out, target, is_operator(target));
            out.push('.');
            out.push_str(&name.name);
        }
        ExprKind::Call {
            receiver,
            method,
            args,
        } => {
            write_operand(out, receiver, is_operator(receiver));
            out.push('.');
            out.push_str(&method.name);
            write_args(out, args);
        }
        ExprKind::SuperCall { method, args } => {
            out.push_str("super.");
            out.push_str(&method.name);
            write_args(out, args);
        }
        ExprKind::EscapeCall {
            qualifier,
            method,
            args,
        } => {
            write!(out, "{}.this.{}", qualifier.name, method.name).unwrap();
            write_args(out, args);
        }
        ExprKind::New { class, args } => {
            out.push_str("new ");
            out.push_str(&class.name);
            write_args(out, args);
        }
        ExprKind::NewCollection { ty } => {
            write!(out, "new {}()", type_expr(ty)).unwrap();
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let prec = op.precedence();
            let binds_looser = |e: &Expr, strict: bool| match &e.kind {
                ExprKind::Binary { op: inner, .. } => {
                    if strict {
                        inner.precedence() <= prec
                    } else {
                        inner.precedence() < prec
                    }
                }
                _ => false,
            };
            write_operand(out, lhs, binds_looser(lhs, false));
            write!(out, " {} ", op.symbol()).unwrap();
            write_operand(out, rhs, binds_looser(rhs, true));
        }
        ExprKind::Unary { op, operand } => {
            out.push(match op {
                UnaryOp::Neg => '-',
                UnaryOp::Not => '!',
            });
            let parens = matches!(operand.kind, ExprKind::Binary { .. });
            write_operand(out, operand, parens);
        }
    }
}

struct Printer<'a> {
    out: String,
    depth: usize,
    cfg: &'a EmitConfig,
}

impl Printer<'_> {
    fn line(&mut self, text: &str) {
        for _ in 0..self.depth * self.cfg.indent_width {
            self.out.push(' ');
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn class(&mut self, class: &ClassDecl) {
        let mut head = format!("class {}", class.name.name);
        if let Some(s) = &class.superclass {
            write!(head, " extends {}", s.name).unwrap();
        }
        head.push_str(" {");
        self.line(&head);
        self.depth += 1;
        for field in &class.fields {
            self.line(&format!("{} {};", type_expr(&field.ty), field.name.name));
        }
        for (i, method) in class.methods.iter().enumerate() {
            if i > 0 || !class.fields.is_empty() {
                self.out.push('\n');
            }
            self.method(method);
        }
        self.depth -= 1;
        self.line("}");
    }

    fn method(&mut self, m: &MethodDecl) {
        let params: Vec<String> = m
            .params
            .iter()
            .map(|p| format!("{} {}", type_expr(&p.ty), p.name.name))
            .collect();
        let sig = format!("{}({})", m.name.name, params.join(", "));
        let head = match m.kind {
            MethodKind::Constructor => sig,
            MethodKind::Static => format!("static {} {sig}", type_expr(&m.ret)),
            MethodKind::Group if self.cfg.include_group_annotations => {
                format!("@group {} {sig}", type_expr(&m.ret))
            }
            MethodKind::Instance | MethodKind::Group => format!("{} {sig}", type_expr(&m.ret)),
        };
        self.open(&head);
        self.stmts(&m.body);
        self.close("}");
    }

    fn open(&mut self, head: &str) {
        self.line(&format!("{head} {{"));
        self.depth += 1;
    }

    fn close(&mut self, tail: &str) {
        self.depth -= 1;
        self.line(tail);
    }

    fn stmts(&mut self, block: &Block) {
        for s in &block.stmts {
            self.stmt(s);
        }
    }

    /// A statement without its trailing `;`, for `for` headers.
    fn simple(&self, s: &Stmt) -> String {
        match &s.kind {
            StmtKind::Local { ty, name, init } => match init {
                Some(e) => format!("{} {} = {}", type_expr(ty), name.name, expr(e)),
                None => format!("{} {}", type_expr(ty), name.name),
            },
            StmtKind::Assign { target, value } => format!("{} = {}", expr(target), expr(value)),
            StmtKind::Expr(e) => expr(e),
            _ => unreachable!("only simple statements appear in a for header"),
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::Local { .. } | StmtKind::Assign { .. } | StmtKind::Expr(_) => {
                let text = format!("{};", self.simple(s));
                self.line(&text);
            }
            StmtKind::If {
                cond,
                then_block,
                else_branch,
            } => {
                self.open(&format!("if ({})", expr(cond)));
                self.stmts(then_block);
                self.else_chain(else_branch.as_deref());
            }
            StmtKind::While { cond, body } => {
                self.open(&format!("while ({})", expr(cond)));
                self.stmts(body);
                self.close("}");
            }
            StmtKind::For {
                init,
                cond,
                update,
                body,
            } => {
                let mut head = String::from("for (");
                if let Some(i) = init {
                    head.push_str(&self.simple(i));
                }
                head.push(';');
                if let Some(c) = cond {
                    write!(head, " {}", expr(c)).unwrap();
                }
                head.push(';');
                if let Some(u) = update {
                    write!(head, " {}", self.simple(u)).unwrap();
                }
                head.push(')');
                self.open(&head);
                self.stmts(body);
                self.close("}");
            }
            StmtKind::ForEach {
                ty,
                name,
                iterable,
                body,
            } => {
                self.open(&format!(
                    "for ({} {} : {})",
                    type_expr(ty),
                    name.name,
                    expr(iterable)
                ));
                self.stmts(body);
                self.close("}");
            }
            StmtKind::Return(None) => self.line("return;"),
            StmtKind::Return(Some(e)) => self.line(&format!("return {};", expr(e))),
            StmtKind::Print(e) => self.line(&format!("print({});", expr(e))),
            StmtKind::Block(b) => {
                self.line("{");
                self.depth += 1;
                self.stmts(b);
                self.close("}");
            }
            StmtKind::SuperCtor(args) => {
                let mut text = String::from("super");
                write_args(&mut text, args);
                text.push(';');
                self.line(&text);
            }
        }
    }

    fn else_chain(&mut self, branch: Option<&ElseBranch>) {
        match branch {
            None => self.close("}"),
            Some(ElseBranch::Block(b)) => {
                self.depth -= 1;
                self.open("} else");
                self.stmts(b);
                self.close("}");
            }
            Some(ElseBranch::If(s)) => {
                let StmtKind::If {
                    cond,
                    then_block,
                    else_branch,
                } = &s.kind
                else {
                    unreachable!("else-if branch holds an if statement")
                };
                self.depth -= 1;
                self.open(&format!("}} else if ({})", expr(cond)));
                self.stmts(then_block);
                self.else_chain(else_branch.as_deref());
            }
        }
    }
}
