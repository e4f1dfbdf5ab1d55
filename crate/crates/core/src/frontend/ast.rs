//! Syntax tree for SwarmLang programs.
//!
//! Every expression carries a [`NodeId`] that later phases use as a key for
//! their side tables (types, call resolutions). Structural comparison ignores
//! ids and spans; see [`Program::normalized`].

use crate::source::{FileId, Span};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

/// A whole program: one compilation unit per input file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub units: Vec<CompilationUnit>,
    /// Next unused node id. Transformations allocate fresh ids from here.
    pub next_id: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompilationUnit {
    pub file: FileId,
    pub classes: Vec<ClassDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>, span: Span) -> Self {
        Ident {
            name: name.into(),
            span,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: Ident,
    pub superclass: Option<Ident>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: Ident,
    pub ty: TypeExpr,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Instance,
    Group,
    Static,
    Constructor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: Ident,
    pub kind: MethodKind,
    pub params: Vec<Param>,
    /// `void` for constructors.
    pub ret: TypeExpr,
    pub body: Block,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: Ident,
    pub ty: TypeExpr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeExpr {
    pub kind: TypeExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeExprKind {
    Int,
    Boolean,
    String,
    Void,
    Named(String),
    /// `Collection<T>`, or `Collection<? extends T>` when `bounded`.
    Collection {
        element: Box<TypeExpr>,
        bounded: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Local {
        ty: TypeExpr,
        name: Ident,
        init: Option<Expr>,
    },
    /// `target = value;` where target is an identifier or a field access.
    Assign { target: Expr, value: Expr },
    Expr(Expr),
    If {
        cond: Expr,
        then_block: Block,
        else_branch: Option<Box<ElseBranch>>,
    },
    While { cond: Expr, body: Block },
    For {
        init: Option<Box<Stmt>>,
        cond: Option<Expr>,
        update: Option<Box<Stmt>>,
        body: Block,
    },
    ForEach {
        ty: TypeExpr,
        name: Ident,
        iterable: Expr,
        body: Block,
    },
    Return(Option<Expr>),
    Print(Expr),
    Block(Block),
    /// `super(args);` as the first statement of a constructor.
    SuperCtor(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)] // always behind a Box
pub enum ElseBranch {
    If(Stmt),
    Block(Block),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub id: NodeId,
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }

    /// Binding strength; higher binds tighter. All binary operators are
    /// left-associative.
    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Eq | BinaryOp::Ne => 3,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => 4,
            BinaryOp::Add | BinaryOp::Sub => 5,
            BinaryOp::Mul | BinaryOp::Div => 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Not,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    This,
    Ident(String),
    IntLit(i64),
    BoolLit(bool),
    StrLit(String),
    Null,
    Field {
        target: Box<Expr>,
        name: Ident,
    },
    Call {
        receiver: Box<Expr>,
        method: Ident,
        args: Vec<Expr>,
    },
    SuperCall {
        method: Ident,
        args: Vec<Expr>,
    },
    /// `T.this.m(args)`: group lookup starting at `T`, skipping the
    /// collection's own methods.
    EscapeCall {
        qualifier: Ident,
        method: Ident,
        args: Vec<Expr>,
    },
    New {
        class: Ident,
        args: Vec<Expr>,
    },
    /// `new Collection<T>()`; `ty` is the whole collection type.
    NewCollection {
        ty: TypeExpr,
    },
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
}

impl Program {
    pub fn classes(&self) -> impl Iterator<Item = &ClassDecl> {
        self.units.iter().flat_map(|u| u.classes.iter())
    }

    pub fn fresh_id(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    /// Copy with every span reset and every node id zeroed, for structural
    /// comparison of trees that came from different parses.
    pub fn normalized(&self) -> Program {
        let mut p = self.clone();
        p.next_id = 0;
        for unit in &mut p.units {
            unit.file = FileId::default();
            for class in &mut unit.classes {
                class.span = Span::default();
                class.name.span = Span::default();
                if let Some(s) = &mut class.superclass {
                    s.span = Span::default();
                }
                for field in &mut class.fields {
                    field.span = Span::default();
                    field.name.span = Span::default();
                    normalize_type(&mut field.ty);
                }
                for method in &mut class.methods {
                    method.span = Span::default();
                    method.name.span = Span::default();
                    normalize_type(&mut method.ret);
                    for param in &mut method.params {
                        param.span = Span::default();
                        param.name.span = Span::default();
                        normalize_type(&mut param.ty);
                    }
                    normalize_block(&mut method.body);
                }
            }
        }
        p
    }
}

fn normalize_type(ty: &mut TypeExpr) {
    ty.span = Span::default();
    if let TypeExprKind::Collection { element, .. } = &mut ty.kind {
        normalize_type(element);
    }
}

fn normalize_block(block: &mut Block) {
    block.span = Span::default();
    for stmt in &mut block.stmts {
        normalize_stmt(stmt);
    }
}

fn normalize_stmt(stmt: &mut Stmt) {
    stmt.span = Span::default();
    match &mut stmt.kind {
        StmtKind::Local { ty, name, init } => {
            normalize_type(ty);
            name.span = Span::default();
            if let Some(e) = init {
                normalize_expr(e);
            }
        }
        StmtKind::Assign { target, value } => {
            normalize_expr(target);
            normalize_expr(value);
        }
        StmtKind::Expr(e) | StmtKind::Print(e) => normalize_expr(e),
        StmtKind::Return(e) => {
            if let Some(e) = e {
                normalize_expr(e);
            }
        }
        StmtKind::If {
            cond,
            then_block,
            else_branch,
        } => {
            normalize_expr(cond);
            normalize_block(then_block);
            if let Some(branch) = else_branch {
                match branch.as_mut() {
                    ElseBranch::If(s) => normalize_stmt(s),
                    ElseBranch::Block(b) => normalize_block(b),
                }
            }
        }
        StmtKind::While { cond, body } => {
            normalize_expr(cond);
            normalize_block(body);
        }
        StmtKind::For {
            init,
            cond,
            update,
            body,
        } => {
            if let Some(s) = init {
                normalize_stmt(s);
            }
            if let Some(e) = cond {
                normalize_expr(e);
            }
            if let Some(s) = update {
                normalize_stmt(s);
            }
            normalize_block(body);
        }
        StmtKind::ForEach {
            ty,
            name,
            iterable,
            body,
        } => {
            normalize_type(ty);
            name.span = Span::default();
            normalize_expr(iterable);
            normalize_block(body);
        }
        StmtKind::Block(b) => normalize_block(b),
        StmtKind::SuperCtor(args) => args.iter_mut().for_each(normalize_expr),
    }
}

fn normalize_expr(expr: &mut Expr) {
    expr.span = Span::default();
    expr.id = NodeId::default();
    match &mut expr.kind {
        ExprKind::This
        | ExprKind::Ident(_)
        | ExprKind::IntLit(_)
        | ExprKind::BoolLit(_)
        | ExprKind::StrLit(_)
        | ExprKind::Null => {}
        ExprKind::Field { target, name } => {
            normalize_expr(target);
            name.span = Span::default();
        }
        ExprKind::Call {
            receiver,
            method,
            args,
        } => {
            normalize_expr(receiver);
            method.span = Span::default();
            args.iter_mut().for_each(normalize_expr);
        }
        ExprKind::SuperCall { method, args } => {
            method.span = Span::default();
            args.iter_mut().for_each(normalize_expr);
        }
        ExprKind::EscapeCall {
            qualifier,
            method,
            args,
        } => {
            qualifier.span = Span::default();
            method.span = Span::default();
            args.iter_mut().for_each(normalize_expr);
        }
        ExprKind::New { class, args } => {
            class.span = Span::default();
            args.iter_mut().for_each(normalize_expr);
        }
        ExprKind::NewCollection { ty } => normalize_type(ty),
        ExprKind::Binary { lhs, rhs, .. } => {
            normalize_expr(lhs);
            normalize_expr(rhs);
        }
        ExprKind::Unary { operand, .. } => normalize_expr(operand),
    }
}

/// Calls `f` on every span in the program, in tree order.
pub fn visit_spans(program: &Program, f: &mut dyn FnMut(Span)) {
    walk_program(
        program,
        &mut Walker {
            span: f,
            expr: &mut |_| {},
        },
    );
}

/// Calls `f` on every expression in the program, parents before children.
pub fn visit_exprs(program: &Program, f: &mut dyn FnMut(&Expr)) {
    walk_program(
        program,
        &mut Walker {
            span: &mut |_| {},
            expr: f,
        },
    );
}

struct Walker<'a> {
    span: &'a mut dyn FnMut(Span),
    expr: &'a mut dyn FnMut(&Expr),
}

impl Walker<'_> {
    fn span(&mut self, s: Span) {
        (self.span)(s)
    }
}

fn walk_program(program: &Program, f: &mut Walker<'_>) {
    for class in program.classes() {
        f.span(class.span);
        f.span(class.name.span);
        if let Some(s) = &class.superclass {
            f.span(s.span);
        }
        for field in &class.fields {
            f.span(field.span);
            f.span(field.name.span);
            visit_type_spans(&field.ty, f);
        }
        for method in &class.methods {
            f.span(method.span);
            f.span(method.name.span);
            visit_type_spans(&method.ret, f);
            for p in &method.params {
                f.span(p.span);
                f.span(p.name.span);
                visit_type_spans(&p.ty, f);
            }
            visit_block_spans(&method.body, f);
        }
    }
}

fn visit_type_spans(ty: &TypeExpr, f: &mut Walker<'_>) {
    f.span(ty.span);
    if let TypeExprKind::Collection { element, .. } = &ty.kind {
        visit_type_spans(element, f);
    }
}

fn visit_block_spans(block: &Block, f: &mut Walker<'_>) {
    f.span(block.span);
    for s in &block.stmts {
        visit_stmt_spans(s, f);
    }
}

fn visit_stmt_spans(stmt: &Stmt, f: &mut Walker<'_>) {
    f.span(stmt.span);
    match &stmt.kind {
        StmtKind::Local { ty, name, init } => {
            visit_type_spans(ty, f);
            f.span(name.span);
            if let Some(e) = init {
                visit_expr_spans(e, f);
            }
        }
        StmtKind::Assign { target, value } => {
            visit_expr_spans(target, f);
            visit_expr_spans(value, f);
        }
        StmtKind::Expr(e) | StmtKind::Print(e) => visit_expr_spans(e, f),
        StmtKind::Return(e) => {
            if let Some(e) = e {
                visit_expr_spans(e, f);
            }
        }
        StmtKind::If {
            cond,
            then_block,
            else_branch,
        } => {
            visit_expr_spans(cond, f);
            visit_block_spans(then_block, f);
            match else_branch.as_deref() {
                Some(ElseBranch::If(s)) => visit_stmt_spans(s, f),
                Some(ElseBranch::Block(b)) => visit_block_spans(b, f),
                None => {}
            }
        }
        StmtKind::While { cond, body } => {
            visit_expr_spans(cond, f);
            visit_block_spans(body, f);
        }
        StmtKind::For {
            init,
            cond,
            update,
            body,
        } => {
            if let Some(s) = init {
                visit_stmt_spans(s, f);
            }
            if let Some(e) = cond {
                visit_expr_spans(e, f);
            }
            if let Some(s) = update {
                visit_stmt_spans(s, f);
            }
            visit_block_spans(body, f);
        }
        StmtKind::ForEach {
            ty,
            name,
            iterable,
            body,
        } => {
            visit_type_spans(ty, f);
            f.span(name.span);
            visit_expr_spans(iterable, f);
            visit_block_spans(body, f);
        }
        StmtKind::Block(b) => visit_block_spans(b, f),
        StmtKind::SuperCtor(args) => args.iter().for_each(|a| visit_expr_spans(a, f)),
    }
}

fn visit_expr_spans(expr: &Expr, f: &mut Walker<'_>) {
    (f.expr)(expr);
    f.span(expr.span);
    match &expr.kind {
        ExprKind::This
        | ExprKind::Ident(_)
        | ExprKind::IntLit(_)
        | ExprKind::BoolLit(_)
        | ExprKind::StrLit(_)
        | ExprKind::Null => {}
        ExprKind::Field { target, name } => {
            visit_expr_spans(target, f);
            f.span(name.span);
        }
        ExprKind::Call {
            receiver,
            method,
            args,
        } => {
            visit_expr_spans(receiver, f);
            f.span(method.span);
            args.iter().for_each(|a| visit_expr_spans(a, f));
        }
        ExprKind::SuperCall { method, args } => {
            f.span(method.span);
            args.iter().for_each(|a| visit_expr_spans(a, f));
        }
        ExprKind::EscapeCall {
            qualifier,
            method,
            args,
        } => {
            f.span(qualifier.span);
            f.span(method.span);
            args.iter().for_each(|a| visit_expr_spans(a, f));
        }
        ExprKind::New { class, args } => {
            f.span(class.span);
            args.iter().for_each(|a| visit_expr_spans(a, f));
        }
        ExprKind::NewCollection { ty } => visit_type_spans(ty, f),
        ExprKind::Binary { lhs, rhs, .. } => {
            visit_expr_spans(lhs, f);
            visit_expr_spans(rhs, f);
        }
        ExprKind::Unary { operand, .. } => visit_expr_spans(operand, f),
    }
}
