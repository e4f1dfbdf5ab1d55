//! Lowering of group methods to ordinary classes.
//!
//! Each class `C` with group methods gets a top-level wrapper class `C$Group`
//! placed right after it. The wrapper holds the receiving collection in a
//! field, carries the moved group methods as instance methods, and (for the
//! root of each wrapper chain) forwards the builtin collection operations to
//! the wrapped collection. Group call sites `recv.m(args)` become
//! `new W(recv).m(args)`.
//!
//! Inside moved bodies `this` denotes the wrapper, so value uses of `this`
//! are redirected to the wrapped collection, and `T.this.m(args)` escapes
//! become non-virtual calls to a pinned copy `m$D` of the group method found
//! from `T`.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::frontend::ast::*;
use crate::frontend::{check_dialect, Dialect};
use crate::source::{Code, Diagnostic, Span};
use crate::symbols::{self, ClassId, MethodId, SymbolTable, TypeRef};
use crate::typing::{self, Builtin, Resolution, TypedProgram};

/// What to generate for one class with group methods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrapperPlan {
    pub element: ClassId,
    pub wrapper_name: String,
    /// Element class of the nearest ancestor that also has a plan.
    pub super_wrapper: Option<ClassId>,
    /// The class's group methods in declaration order.
    pub moved: Vec<MethodId>,
    /// Builtin selectors not taken by a moved method. Only the root wrapper
    /// of a chain actually generates them; subclasses inherit.
    pub delegation: Vec<Builtin>,
    /// `Collection<? extends element>`.
    pub ctor_param: TypeRef,
}

impl WrapperPlan {
    pub fn is_root(&self) -> bool {
        self.super_wrapper.is_none()
    }

    /// Field through which moved bodies reach the wrapped collection. Non-root
    /// wrappers keep their own copy typed with their element class.
    pub fn delegate_field(&self, table: &SymbolTable) -> String {
        if self.is_root() {
            "delegate".into()
        } else {
            format!("delegate${}", table.name(self.element))
        }
    }
}

/// Name of the non-virtual copy of group method `selector` defined in `owner`.
pub fn pinned_name(table: &SymbolTable, owner: ClassId, selector: &str) -> String {
    format!("{selector}${}", table.name(owner))
}

/// One plan per user class with group methods, in declaration order.
pub fn plan_wrappers(table: &SymbolTable) -> Vec<WrapperPlan> {
    let has_groups = |c: ClassId| !table.class(c).group_methods.is_empty();
    table
        .user_classes()
        .filter(|&c| has_groups(c))
        .map(|c| {
            let super_wrapper = table
                .superclass_chain(c)
                .into_iter()
                .skip(1)
                .find(|&a| has_groups(a));
            let moved: Vec<MethodId> = table.class(c).group_methods.values().copied().collect();
            let taken: HashSet<&str> = table.class(c).group_methods.keys().map(String::as_str).collect();
            WrapperPlan {
                element: c,
                wrapper_name: symbols::wrapper_name(table.name(c)),
                super_wrapper,
                moved,
                delegation: Builtin::ALL
                    .into_iter()
                    .filter(|b| !taken.contains(b.selector()))
                    .collect(),
                ctor_param: TypeRef::Collection {
                    element: c,
                    bounded: true,
                },
            }
        })
        .collect()
}

/// Removes the group methods of planned classes from `table`; afterwards
/// they exist only on the wrappers.
pub fn strip_group_methods(table: &mut SymbolTable, plans: &[WrapperPlan]) {
    for plan in plans {
        table.class_mut(plan.element).group_methods.clear();
    }
}

/// Result of lowering a swarm program.
#[derive(Clone, Debug)]
pub struct Desugared {
    pub plans: Vec<WrapperPlan>,
    /// The lowered program, attributed in the core dialect.
    pub core: TypedProgram,
}

/// Enters and attributes `program` as core code.
pub fn reattribute(program: Program) -> Result<TypedProgram, Vec<Diagnostic>> {
    let diags = check_dialect(&program, Dialect::Core);
    if !diags.is_empty() {
        return Err(diags);
    }
    let table = symbols::enter(&program, Dialect::Core)?;
    typing::attribute(program, table, Dialect::Core)
}

fn internal(diags: Vec<Diagnostic>) -> Vec<Diagnostic> {
    diags
        .into_iter()
        .map(|d| {
            Diagnostic::error(
                Code::E099,
                d.span,
                format!("internal desugaring error: {} ({})", d.message, d.code),
            )
        })
        .collect()
}

/// Lowers `typed` to core code. Core input is returned unchanged.
pub fn desugar(typed: &TypedProgram) -> Result<Desugared, Vec<Diagnostic>> {
    if typed.dialect == Dialect::Core {
        let core = reattribute(typed.program.clone()).map_err(internal)?;
        return Ok(Desugared {
            plans: Vec::new(),
            core,
        });
    }
    let plans = plan_wrappers(&typed.table);
    let program = rewrite_call_sites(typed, &plans);
    let core = reattribute(program).map_err(internal)?;
    verify_distribution(typed, &plans, &core)?;
    Ok(Desugared { plans, core })
}

/// Checks the lowered class graph against the plans: planned classes lost
/// exactly their group methods, and wrappers mirror element inheritance.
fn verify_distribution(
    typed: &TypedProgram,
    plans: &[WrapperPlan],
    core: &TypedProgram,
) -> Result<(), Vec<Diagnostic>> {
    let mut expected = typed.table.clone();
    strip_group_methods(&mut expected, plans);
    let mut diags = Vec::new();
    let mut fail = |span: Span, msg: String| {
        diags.push(Diagnostic::error(
            Code::E099,
            span,
            format!("internal desugaring error: {msg}"),
        ))
    };
    for c in expected.user_classes() {
        let name = expected.name(c);
        let Some(cc) = core.table.lookup_class(name) else {
            fail(expected.class(c).span, format!("class `{name}` disappeared"));
            continue;
        };
        let want: Vec<&String> = expected.class(c).instance_methods.keys().collect();
        let got: Vec<&String> = core.table.class(cc).instance_methods.keys().collect();
        if want != got || !core.table.class(cc).group_methods.is_empty() {
            fail(expected.class(c).span, format!("methods of `{name}` were not distributed"));
        }
    }
    for plan in plans {
        let Some(w) = core.table.lookup_class(&plan.wrapper_name) else {
            fail(typed.table.class(plan.element).span, format!("missing `{}`", plan.wrapper_name));
            continue;
        };
        let want_super = plan
            .super_wrapper
            .map(|s| symbols::wrapper_name(typed.table.name(s)))
            .unwrap_or_else(|| "Object".into());
        let got_super = core.table.superclass(w).map(|s| core.table.name(s).to_string());
        if got_super.as_deref() != Some(want_super.as_str()) {
            fail(
                typed.table.class(plan.element).span,
                format!("`{}` does not extend `{want_super}`", plan.wrapper_name),
            );
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

/// Produces the lowered AST: planned classes lose their group methods, each
/// gains a wrapper sibling, and every group construct is rewritten.
pub fn rewrite_call_sites(typed: &TypedProgram, plans: &[WrapperPlan]) -> Program {
    let table = &typed.table;
    let plan_of: HashMap<ClassId, usize> =
        plans.iter().enumerate().map(|(i, p)| (p.element, i)).collect();
    let colliding: HashSet<&'static str> = Builtin::ALL
        .into_iter()
        .map(Builtin::selector)
        .filter(|s| plans.iter().any(|p| table.class(p.element).group_methods.contains_key(*s)))
        .collect();
    let mut rw = Rewriter {
        typed,
        plans,
        plan_of,
        colliding,
        pins: BTreeSet::new(),
        next_id: typed.program.next_id,
    };

    // Rewrite every body first; escapes decide which methods get pinned.
    let mut units = Vec::new();
    let mut moved: HashMap<ClassId, Vec<MethodDecl>> = HashMap::new();
    for unit in &typed.program.units {
        let mut classes = Vec::new();
        for class in &unit.classes {
            let cid = table.lookup_class(&class.name.name).expect("entered class");
            let group_cx = rw.plan_of.get(&cid).map(|&i| GroupCx {
                field: plans[i].delegate_field(table),
                root: plans[i].is_root(),
            });
            let mut out = class.clone();
            out.methods.clear();
            for m in &class.methods {
                let cx = if m.kind == MethodKind::Group {
                    group_cx.as_ref()
                } else {
                    None
                };
                let mut m2 = m.clone();
                m2.body = rw.block(&m.body, cx);
                if m.kind == MethodKind::Group {
                    m2.kind = MethodKind::Instance;
                    moved.entry(cid).or_default().push(m2);
                } else {
                    out.methods.push(m2);
                }
            }
            classes.push((cid, out));
        }
        units.push((unit.file, classes));
    }

    let mut program = Program {
        units: Vec::new(),
        next_id: 0,
    };
    for (file, classes) in units {
        let mut out = Vec::new();
        for (cid, class) in classes {
            out.push(class);
            if let Some(&i) = rw.plan_of.get(&cid) {
                let methods = moved.remove(&cid).unwrap_or_default();
                out.push(rw.synthesize_wrapper(&plans[i], methods));
            }
        }
        program.units.push(CompilationUnit { file, classes: out });
    }
    program.next_id = rw.next_id;
    program
}

struct GroupCx {
    field: String,
    root: bool,
}

struct Rewriter<'a> {
    typed: &'a TypedProgram,
    plans: &'a [WrapperPlan],
    plan_of: HashMap<ClassId, usize>,
    /// Builtin selectors that some class also declares as a group method.
    colliding: HashSet<&'static str>,
    /// `(defining class, selector)` reached through an escape.
    pins: BTreeSet<(ClassId, String)>,
    next_id: u32,
}

fn ident(name: impl Into<String>, span: Span) -> Ident {
    Ident::new(name, span)
}

fn type_expr(table: &SymbolTable, t: TypeRef, span: Span) -> TypeExpr {
    let kind = match t {
        TypeRef::Int => TypeExprKind::Int,
        TypeRef::Bool => TypeExprKind::Boolean,
        TypeRef::Str => TypeExprKind::String,
        TypeRef::Void | TypeRef::Null => TypeExprKind::Void,
        TypeRef::Class(c) => TypeExprKind::Named(table.name(c).to_string()),
        TypeRef::Collection { element, bounded } => TypeExprKind::Collection {
            element: Box::new(type_expr(table, TypeRef::Class(element), span)),
            bounded,
        },
    };
    TypeExpr { kind, span }
}

fn stmt(kind: StmtKind, span: Span) -> Stmt {
    Stmt { kind, span }
}

impl Rewriter<'_> {
    fn mk(&mut self, kind: ExprKind, span: Span) -> Expr {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        Expr { id, kind, span }
    }

    /// `this.<field>`.
    fn this_field(&mut self, field: &str, span: Span) -> Expr {
        let this = self.mk(ExprKind::This, span);
        self.mk(
            ExprKind::Field {
                target: Box::new(this),
                name: ident(field, span),
            },
            span,
        )
    }

    fn call(&mut self, receiver: Expr, method: &str, args: Vec<Expr>, span: Span) -> Expr {
        self.mk(
            ExprKind::Call {
                receiver: Box::new(receiver),
                method: ident(method, span),
                args,
            },
            span,
        )
    }

    fn block(&mut self, b: &Block, cx: Option<&GroupCx>) -> Block {
        Block {
            stmts: b.stmts.iter().map(|s| self.stmt(s, cx)).collect(),
            span: b.span,
        }
    }

    fn stmt(&mut self, s: &Stmt, cx: Option<&GroupCx>) -> Stmt {
        let kind = match &s.kind {
            StmtKind::Local { ty, name, init } => StmtKind::Local {
                ty: ty.clone(),
                name: name.clone(),
                init: init.as_ref().map(|e| self.expr(e, cx)),
            },
            StmtKind::Assign { target, value } => StmtKind::Assign {
                target: self.expr(target, cx),
                value: self.expr(value, cx),
            },
            StmtKind::Expr(e) => StmtKind::Expr(self.expr(e, cx)),
            StmtKind::If {
                cond,
                then_block,
                else_branch,
            } => StmtKind::If {
                cond: self.expr(cond, cx),
                then_block: self.block(then_block, cx),
                else_branch: else_branch.as_deref().map(|b| {
                    Box::new(match b {
                        ElseBranch::If(s) => ElseBranch::If(self.stmt(s, cx)),
                        ElseBranch::Block(b) => ElseBranch::Block(self.block(b, cx)),
                    })
                }),
            },
            StmtKind::While { cond, body } => StmtKind::While {
                cond: self.expr(cond, cx),
                body: self.block(body, cx),
            },
            StmtKind::For {
                init,
                cond,
                update,
                body,
            } => StmtKind::For {
                init: init.as_deref().map(|s| Box::new(self.stmt(s, cx))),
                cond: cond.as_ref().map(|e| self.expr(e, cx)),
                update: update.as_deref().map(|s| Box::new(self.stmt(s, cx))),
                body: self.block(body, cx),
            },
            StmtKind::ForEach {
                ty,
                name,
                iterable,
                body,
            } => StmtKind::ForEach {
                ty: ty.clone(),
                name: name.clone(),
                iterable: self.expr(iterable, cx),
                body: self.block(body, cx),
            },
            StmtKind::Return(e) => StmtKind::Return(e.as_ref().map(|e| self.expr(e, cx))),
            StmtKind::Print(e) => StmtKind::Print(self.expr(e, cx)),
            StmtKind::Block(b) => StmtKind::Block(self.block(b, cx)),
            StmtKind::SuperCtor(args) => StmtKind::SuperCtor(self.exprs(args, cx)),
        };
        stmt(kind, s.span)
    }

    fn exprs(&mut self, es: &[Expr], cx: Option<&GroupCx>) -> Vec<Expr> {
        es.iter().map(|e| self.expr(e, cx)).collect()
    }

    fn expr(&mut self, e: &Expr, cx: Option<&GroupCx>) -> Expr {
        let span = e.span;
        let kind = match &e.kind {
            ExprKind::This => match cx {
                Some(g) => return self.this_field(&g.field, span),
                None => ExprKind::This,
            },
            ExprKind::Call {
                receiver,
                method,
                args,
            } => {
                let args = self.exprs(args, cx);
                let on_this = matches!(receiver.kind, ExprKind::This) && cx.is_some();
                match self.typed.resolutions.get(&e.id) {
                    Some(Resolution::Group { element, .. }) if !on_this => {
                        let recv = self.expr(receiver, cx);
                        let w = self.wrapper_for(*element);
                        let wrapped = self.mk(
                            ExprKind::New {
                                class: ident(w, receiver.span),
                                args: vec![recv],
                            },
                            receiver.span,
                        );
                        ExprKind::Call {
                            receiver: Box::new(wrapped),
                            method: method.clone(),
                            args,
                        }
                    }
                    Some(Resolution::Builtin { selector, .. }) if on_this => {
                        let g = cx.expect("group context");
                        let recv = if !g.root || self.colliding.contains(selector.selector()) {
                            self.this_field(&g.field, receiver.span)
                        } else {
                            receiver.as_ref().clone()
                        };
                        ExprKind::Call {
                            receiver: Box::new(recv),
                            method: method.clone(),
                            args,
                        }
                    }
                    _ if on_this => ExprKind::Call {
                        receiver: receiver.clone(),
                        method: method.clone(),
                        args,
                    },
                    _ => ExprKind::Call {
                        receiver: Box::new(self.expr(receiver, cx)),
                        method: method.clone(),
                        args,
                    },
                }
            }
            ExprKind::EscapeCall {
                qualifier: _,
                method,
                args,
            } => {
                let args = self.exprs(args, cx);
                let g = cx.expect("escapes only occur in group methods");
                match self.typed.resolutions.get(&e.id) {
                    Some(Resolution::GroupEscape { defining, .. }) => {
                        self.pins.insert((*defining, method.name.clone()));
                        let name = pinned_name(&self.typed.table, *defining, &method.name);
                        let this = self.mk(ExprKind::This, span);
                        return self.call(this, &name, args, span);
                    }
                    _ => {
                        let recv = self.this_field(&g.field, span);
                        return self.call(recv, &method.name, args, span);
                    }
                }
            }
            ExprKind::Field { target, name } => ExprKind::Field {
                target: Box::new(self.expr(target, cx)),
                name: name.clone(),
            },
            ExprKind::SuperCall { method, args } => ExprKind::SuperCall {
                method: method.clone(),
                args: self.exprs(args, cx),
            },
            ExprKind::New { class, args } => ExprKind::New {
                class: class.clone(),
                args: self.exprs(args, cx),
            },
            ExprKind::Binary { op, lhs, rhs } => ExprKind::Binary {
                op: *op,
                lhs: Box::new(self.expr(lhs, cx)),
                rhs: Box::new(self.expr(rhs, cx)),
            },
            ExprKind::Unary { op, operand } => ExprKind::Unary {
                op: *op,
                operand: Box::new(self.expr(operand, cx)),
            },
            ExprKind::Ident(_)
            | ExprKind::IntLit(_)
            | ExprKind::BoolLit(_)
            | ExprKind::StrLit(_)
            | ExprKind::Null
            | ExprKind::NewCollection { .. } => e.kind.clone(),
        };
        Expr {
            id: e.id,
            kind,
            span,
        }
    }

    /// Wrapper of the nearest self-or-ancestor of `element` with a plan.
    fn wrapper_for(&self, element: ClassId) -> String {
        let table = &self.typed.table;
        table
            .superclass_chain(element)
            .into_iter()
            .find_map(|c| self.plan_of.get(&c))
            .map(|&i| self.plans[i].wrapper_name.clone())
            .expect("attribution found a group method, so some ancestor has a plan")
    }

    /// Builds the wrapper class for `plan` around its already rewritten
    /// group methods.
    fn synthesize_wrapper(&mut self, plan: &WrapperPlan, moved: Vec<MethodDecl>) -> ClassDecl {
        let table = &self.typed.table;
        let span = table.class(plan.element).span;
        let field = plan.delegate_field(table);
        let param_ty = type_expr(table, plan.ctor_param, span);

        // Constructor.
        let mut body = Vec::new();
        if !plan.is_root() {
            let arg = self.mk(ExprKind::Ident("delegate".into()), span);
            body.push(stmt(StmtKind::SuperCtor(vec![arg]), span));
        }
        let target = self.this_field(&field, span);
        let value = self.mk(ExprKind::Ident("delegate".into()), span);
        body.push(stmt(StmtKind::Assign { target, value }, span));
        if plan.is_root() {
            // Fail at wrapping time on a null receiver, as direct dispatch does.
            let d = self.mk(ExprKind::Ident("delegate".into()), span);
            let probe = self.call(d, "size", Vec::new(), span);
            body.push(stmt(StmtKind::Expr(probe), span));
        }
        let mut methods = vec![MethodDecl {
            name: ident(&plan.wrapper_name, span),
            kind: MethodKind::Constructor,
            params: vec![Param {
                name: ident("delegate", span),
                ty: param_ty.clone(),
                span,
            }],
            ret: TypeExpr {
                kind: TypeExprKind::Void,
                span,
            },
            body: Block { stmts: body, span },
            span,
        }];

        // Moved group methods, split when an escape needs a non-virtual entry.
        for m in moved {
            if !self.pins.contains(&(plan.element, m.name.name.clone())) {
                methods.push(m);
                continue;
            }
            let pinned = pinned_name(table, plan.element, &m.name.name);
            let args: Vec<Expr> = m
                .params
                .iter()
                .map(|p| self.mk(ExprKind::Ident(p.name.name.clone()), m.span))
                .collect();
            let this = self.mk(ExprKind::This, m.span);
            let fwd = self.call(this, &pinned, args, m.span);
            let is_void = m.ret.kind == TypeExprKind::Void;
            let fwd_stmt = if is_void {
                stmt(StmtKind::Expr(fwd), m.span)
            } else {
                stmt(StmtKind::Return(Some(fwd)), m.span)
            };
            let forwarder = MethodDecl {
                body: Block {
                    stmts: vec![fwd_stmt],
                    span: m.span,
                },
                ..m.clone()
            };
            let mut body = m;
            body.name = ident(pinned, body.name.span);
            methods.push(forwarder);
            methods.push(body);
        }

        // Delegation, root wrappers only.
        if plan.is_root() {
            for b in &plan.delegation {
                let (params, ret) = b.signature(plan.element);
                let params: Vec<Param> = params
                    .into_iter()
                    .enumerate()
                    .map(|(i, t)| Param {
                        name: ident(format!("param{i}"), span),
                        ty: type_expr(table, t, span),
                        span,
                    })
                    .collect();
                let args: Vec<Expr> = params
                    .iter()
                    .map(|p| self.mk(ExprKind::Ident(p.name.name.clone()), span))
                    .collect();
                let recv = self.this_field(&field, span);
                let call = self.call(recv, b.selector(), args, span);
                methods.push(MethodDecl {
                    name: ident(b.selector(), span),
                    kind: MethodKind::Instance,
                    params,
                    ret: type_expr(table, ret, span),
                    body: Block {
                        stmts: vec![stmt(StmtKind::Return(Some(call)), span)],
                        span,
                    },
                    span,
                });
            }
        }

        ClassDecl {
            name: ident(&plan.wrapper_name, span),
            superclass: plan
                .super_wrapper
                .map(|s| ident(symbols::wrapper_name(table.name(s)), span)),
            fields: vec![FieldDecl {
                name: ident(field, span),
                ty: param_ty,
                span,
            }],
            methods,
            span,
        }
    }
}
