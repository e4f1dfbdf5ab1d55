//! Attribution: name resolution, expression types and call classification.

pub mod lookup;

use std::collections::HashMap;

use crate::frontend::ast::*;
use crate::frontend::Dialect;
use crate::source::{Code, Diagnostic, Span};
use crate::symbols::{
    ClassId, ClassRef, MethodId, MethodRef, MethodSymbolKind, SymbolTable, TypeRef,
};

pub use lookup::{
    check_args, least_upper_bound, lookup_group, lookup_instance, resolve_call,
    resolve_group_escape, Builtin, Resolution,
};

/// What a bare identifier refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NameRef {
    Local,
    /// Field of the current `this` object.
    Field,
    /// Class name used as the receiver of a static call.
    Class(ClassId),
}

/// An attributed program. Side tables are keyed by expression [`NodeId`].
#[derive(Clone, Debug)]
pub struct TypedProgram {
    pub program: Program,
    pub table: SymbolTable,
    pub dialect: Dialect,
    pub types: HashMap<NodeId, TypeRef>,
    pub resolutions: HashMap<NodeId, Resolution>,
    pub names: HashMap<NodeId, NameRef>,
    /// For each group method, the class whose collection `this` denotes.
    pub group_contexts: HashMap<MethodId, ClassId>,
    method_refs: HashMap<MethodRef, MethodId>,
}

impl TypedProgram {
    pub fn method_decl(&self, m: MethodId) -> Option<&MethodDecl> {
        let r = self.table.method(m).decl?;
        Some(&self.program.units[r.unit].classes[r.class].methods[r.method])
    }

    pub fn class_decl(&self, c: ClassId) -> Option<&ClassDecl> {
        let ClassRef { unit, class } = self.table.class(c).decl?;
        Some(&self.program.units[unit].classes[class])
    }

    /// Symbol for the method declared at `r`.
    pub fn method_at(&self, r: MethodRef) -> Option<MethodId> {
        self.method_refs.get(&r).copied()
    }

    pub fn type_of(&self, e: &Expr) -> Option<TypeRef> {
        self.types.get(&e.id).copied()
    }
}

/// Attributes every method body of `program`. All diagnostics are reported.
pub fn attribute(
    program: Program,
    table: SymbolTable,
    dialect: Dialect,
) -> Result<TypedProgram, Vec<Diagnostic>> {
    let method_refs: HashMap<MethodRef, MethodId> = table
        .method_ids()
        .filter_map(|m| table.method(m).decl.map(|r| (r, m)))
        .collect();
    let mut a = Attributor {
        table: &table,
        types: HashMap::new(),
        resolutions: HashMap::new(),
        names: HashMap::new(),
        diags: Vec::new(),
    };
    let mut group_contexts = HashMap::new();

    for (ui, unit) in program.units.iter().enumerate() {
        for (ci, class) in unit.classes.iter().enumerate() {
            let Some(cid) = table.lookup_class(&class.name.name) else {
                continue;
            };
            a.check_implicit_super(cid, class);
            for (mi, method) in class.methods.iter().enumerate() {
                let r = MethodRef {
                    unit: ui,
                    class: ci,
                    method: mi,
                };
                let Some(&mid) = method_refs.get(&r) else {
                    continue;
                };
                let sym = table.method(mid);
                if sym.kind == MethodSymbolKind::Group {
                    group_contexts.insert(mid, cid);
                }
                let mut cx = MethodCx {
                    class: cid,
                    kind: sym.kind,
                    ret: sym.return_type,
                    scopes: vec![sym.params.iter().cloned().collect()],
                };
                for (i, stmt) in method.body.stmts.iter().enumerate() {
                    let ctor_head = i == 0 && sym.kind == MethodSymbolKind::Constructor;
                    a.stmt(&mut cx, stmt, ctor_head);
                }
            }
        }
    }

    let Attributor {
        types,
        resolutions,
        names,
        diags,
        ..
    } = a;
    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(TypedProgram {
        program,
        table,
        dialect,
        types,
        resolutions,
        names,
        group_contexts,
        method_refs,
    })
}

struct MethodCx {
    class: ClassId,
    kind: MethodSymbolKind,
    ret: TypeRef,
    scopes: Vec<HashMap<String, TypeRef>>,
}

impl MethodCx {
    fn local(&self, name: &str) -> Option<TypeRef> {
        self.scopes.iter().rev().find_map(|s| s.get(name).copied())
    }

    fn has_this(&self) -> bool {
        self.kind != MethodSymbolKind::Static
    }

    fn this_type(&self) -> TypeRef {
        if self.kind == MethodSymbolKind::Group {
            TypeRef::Collection {
                element: self.class,
                bounded: true,
            }
        } else {
            TypeRef::Class(self.class)
        }
    }

    /// Fields are visible as bare names only where `this` is an object.
    fn field(&self, table: &SymbolTable, name: &str) -> Option<TypeRef> {
        match self.kind {
            MethodSymbolKind::Instance | MethodSymbolKind::Constructor => {
                table.lookup_field(self.class, name)
            }
            _ => None,
        }
    }
}

struct Attributor<'a> {
    table: &'a SymbolTable,
    types: HashMap<NodeId, TypeRef>,
    resolutions: HashMap<NodeId, Resolution>,
    names: HashMap<NodeId, NameRef>,
    diags: Vec<Diagnostic>,
}

type Ty = Option<TypeRef>;

impl Attributor<'_> {
    fn err(&mut self, code: Code, span: Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(code, span, msg));
    }

    fn tn(&self, t: TypeRef) -> String {
        self.table.type_name(t)
    }

    fn resolve_type(&mut self, ty: &TypeExpr) -> Ty {
        match self.table.resolve_type(ty) {
            Ok(t) => Some(t),
            Err(d) => {
                self.diags.push(d);
                None
            }
        }
    }

    fn expect(&mut self, actual: TypeRef, expected: TypeRef, span: Span, what: &str) {
        if !self.table.is_subtype(actual, expected) {
            let msg = format!(
                "{what}: expected `{}`, found `{}`",
                self.tn(expected),
                self.tn(actual)
            );
            self.err(Code::E030, span, msg);
        }
    }

    /// A subclass whose superclass constructor takes arguments must call
    /// `super(...)` explicitly.
    fn check_implicit_super(&mut self, cid: ClassId, class: &ClassDecl) {
        let Some(sup) = self.table.superclass(cid) else {
            return;
        };
        let Some(sctor) = self.table.class(sup).constructor else {
            return;
        };
        if self.table.method(sctor).params.is_empty() {
            return;
        }
        let ctor = class
            .methods
            .iter()
            .find(|m| m.kind == MethodKind::Constructor);
        let explicit = ctor.is_some_and(|m| {
            matches!(
                m.body.stmts.first().map(|s| &s.kind),
                Some(StmtKind::SuperCtor(_))
            )
        });
        if !explicit {
            let span = ctor.map_or(class.name.span, |m| m.name.span);
            let msg = format!(
                "constructor of `{}` takes arguments; call `super(...)` first",
                self.table.name(sup)
            );
            self.err(Code::E027, span, msg);
        }
    }

    fn declare(&mut self, cx: &mut MethodCx, name: &Ident, ty: TypeRef) {
        if cx.local(&name.name).is_some() {
            self.err(
                Code::E034,
                name.span,
                format!("`{}` is already declared in this method", name.name),
            );
        }
        cx.scopes
            .last_mut()
            .expect("method scope")
            .insert(name.name.clone(), ty);
    }

    fn block(&mut self, cx: &mut MethodCx, block: &Block) {
        cx.scopes.push(HashMap::new());
        for s in &block.stmts {
            self.stmt(cx, s, false);
        }
        cx.scopes.pop();
    }

    fn condition(&mut self, cx: &mut MethodCx, e: &Expr) {
        if let Some(t) = self.expr(cx, e) {
            self.expect(t, TypeRef::Bool, e.span, "condition");
        }
    }

    fn stmt(&mut self, cx: &mut MethodCx, stmt: &Stmt, ctor_head: bool) {
        match &stmt.kind {
            StmtKind::Local { ty, name, init } => {
                let declared = self.resolve_type(ty);
                if let Some(e) = init {
                    if let (Some(t), Some(d)) = (self.expr(cx, e), declared) {
                        self.expect(t, d, e.span, "initializer");
                    }
                }
                // Keep going with a placeholder so later uses do not cascade.
                self.declare(cx, name, declared.unwrap_or(TypeRef::Null));
            }
            StmtKind::Assign { target, value } => {
                let tt = self.assign_target(cx, target);
                let vt = self.expr(cx, value);
                if let (Some(t), Some(v)) = (tt, vt) {
                    self.expect(v, t, value.span, "assignment");
                }
            }
            StmtKind::Expr(e) => {
                self.expr(cx, e);
            }
            StmtKind::If {
                cond,
                then_block,
                else_branch,
            } => {
                self.condition(cx, cond);
                self.block(cx, then_block);
                match else_branch.as_deref() {
                    Some(ElseBranch::If(s)) => self.stmt(cx, s, false),
                    Some(ElseBranch::Block(b)) => self.block(cx, b),
                    None => {}
                }
            }
            StmtKind::While { cond, body } => {
                self.condition(cx, cond);
                self.block(cx, body);
            }
            StmtKind::For {
                init,
                cond,
                update,
                body,
            } => {
                cx.scopes.push(HashMap::new());
                if let Some(s) = init {
                    self.stmt(cx, s, false);
                }
                if let Some(c) = cond {
                    self.condition(cx, c);
                }
                if let Some(s) = update {
                    self.stmt(cx, s, false);
                }
                self.block(cx, body);
                cx.scopes.pop();
            }
            StmtKind::ForEach {
                ty,
                name,
                iterable,
                body,
            } => {
                let var = self.resolve_type(ty);
                let it = self.expr(cx, iterable);
                if let (Some(v), Some(it)) = (var, it) {
                    match it {
                        TypeRef::Collection { element, .. } => {
                            self.expect(TypeRef::Class(element), v, ty.span, "loop variable")
                        }
                        other => {
                            let msg = format!("cannot iterate over `{}`", self.tn(other));
                            self.err(Code::E030, iterable.span, msg);
                        }
                    }
                }
                cx.scopes.push(HashMap::new());
                self.declare(cx, name, var.unwrap_or(TypeRef::Null));
                self.block(cx, body);
                cx.scopes.pop();
            }
            StmtKind::Return(value) => match (value, cx.ret) {
                (None, TypeRef::Void) => {}
                (None, r) => {
                    let msg = format!("missing return value of type `{}`", self.tn(r));
                    self.err(Code::E030, stmt.span, msg);
                }
                (Some(e), TypeRef::Void) => {
                    self.expr(cx, e);
                    self.err(Code::E030, e.span, "cannot return a value from a void method");
                }
                (Some(e), r) => {
                    if let Some(t) = self.expr(cx, e) {
                        self.expect(t, r, e.span, "return value");
                    }
                }
            },
            StmtKind::Print(e) => {
                if let Some(t) = self.expr(cx, e) {
                    if !matches!(t, TypeRef::Int | TypeRef::Str | TypeRef::Bool) {
                        let msg = format!("cannot print a value of type `{}`", self.tn(t));
                        self.err(Code::E030, e.span, msg);
                    }
                }
            }
            StmtKind::Block(b) => self.block(cx, b),
            StmtKind::SuperCtor(args) => {
                let arg_types = self.args(cx, args);
                if !ctor_head {
                    self.err(
                        Code::E026,
                        stmt.span,
                        "`super(...)` must be the first statement of a constructor",
                    );
                    return;
                }
                let sup = self.table.superclass(cx.class).unwrap_or(ClassId::OBJECT);
                let params: Vec<TypeRef> = match self.table.class(sup).constructor {
                    Some(c) => self.table.method(c).params.iter().map(|p| p.1).collect(),
                    None => Vec::new(),
                };
                if let Some(arg_types) = arg_types {
                    let what = format!("constructor of `{}`", self.table.name(sup));
                    if let Err(d) = check_args(self.table, &what, &params, &arg_types, stmt.span) {
                        self.diags.push(d);
                    }
                }
            }
        }
    }

    fn assign_target(&mut self, cx: &mut MethodCx, target: &Expr) -> Ty {
        match &target.kind {
            ExprKind::Ident(_) | ExprKind::Field { .. } => self.expr(cx, target),
            _ => {
                self.err(Code::E030, target.span, "invalid assignment target");
                None
            }
        }
    }

    /// Types every argument; `None` if any of them failed.
    fn args(&mut self, cx: &mut MethodCx, args: &[Expr]) -> Option<Vec<TypeRef>> {
        let types: Vec<Ty> = args.iter().map(|a| self.expr(cx, a)).collect();
        types.into_iter().collect()
    }

    fn expr(&mut self, cx: &mut MethodCx, e: &Expr) -> Ty {
        let t = self.expr_inner(cx, e)?;
        self.types.insert(e.id, t);
        Some(t)
    }

    fn expr_inner(&mut self, cx: &mut MethodCx, e: &Expr) -> Ty {
        match &e.kind {
            ExprKind::IntLit(_) => Some(TypeRef::Int),
            ExprKind::BoolLit(_) => Some(TypeRef::Bool),
            ExprKind::StrLit(_) => Some(TypeRef::Str),
            ExprKind::Null => Some(TypeRef::Null),
            ExprKind::This => {
                if cx.has_this() {
                    Some(cx.this_type())
                } else {
                    self.err(Code::E033, e.span, "`this` is not available in a static method");
                    None
                }
            }
            ExprKind::Ident(n) => {
                if let Some(t) = cx.local(n) {
                    self.names.insert(e.id, NameRef::Local);
                    // Placeholder for a local whose declared type was invalid.
                    return (t != TypeRef::Null).then_some(t);
                }
                if let Some(t) = cx.field(self.table, n) {
                    self.names.insert(e.id, NameRef::Field);
                    return Some(t);
                }
                self.err(Code::E031, e.span, format!("unknown identifier `{n}`"));
                None
            }
            ExprKind::Field { target, name } => {
                let tt = self.expr(cx, target)?;
                let found = match tt {
                    TypeRef::Class(c) => self.table.lookup_field(c, &name.name),
                    _ => None,
                };
                if found.is_none() {
                    let msg = format!("no field `{}` on `{}`", name.name, self.tn(tt));
                    self.err(Code::E032, name.span, msg);
                }
                found
            }
            ExprKind::Call {
                receiver,
                method,
                args,
            } => self.call(cx, e, receiver, method, args),
            ExprKind::SuperCall { method, args } => {
                let arg_types = self.args(cx, args);
                let sel = method.name.as_str();
                let sup = self.table.superclass(cx.class).unwrap_or(ClassId::OBJECT);
                let (res, m) = match cx.kind {
                    MethodSymbolKind::Static => {
                        self.err(Code::E033, e.span, "`super` is not available in a static method");
                        return None;
                    }
                    MethodSymbolKind::Group => match self.table.lookup_group(sup, sel) {
                        Some((m, defining)) => (Resolution::GroupSuper { method: m, defining }, m),
                        None => {
                            let msg = format!(
                                "no group method `{sel}` above `{}`",
                                self.table.name(cx.class)
                            );
                            self.err(Code::E021, method.span, msg);
                            return None;
                        }
                    },
                    _ => match self.table.lookup_instance(sup, sel) {
                        Some(m) if self.table.method(m).kind == MethodSymbolKind::Static => {
                            let msg = format!("static method `{sel}` cannot be called via `super`");
                            self.err(Code::E028, method.span, msg);
                            return None;
                        }
                        Some(m) => (Resolution::Super { method: m }, m),
                        None => {
                            let msg = format!("no method `{sel}` on `{}`", self.table.name(sup));
                            self.err(Code::E020, method.span, msg);
                            return None;
                        }
                    },
                };
                let arg_types = arg_types?;
                let params: Vec<TypeRef> =
                    self.table.method(m).params.iter().map(|p| p.1).collect();
                if let Err(d) = check_args(self.table, &format!("`{sel}`"), &params, &arg_types, e.span)
                {
                    self.diags.push(d);
                    return None;
                }
                self.resolutions.insert(e.id, res);
                Some(self.table.method(m).return_type)
            }
            ExprKind::EscapeCall {
                qualifier,
                method,
                args,
            } => {
                let arg_types = self.args(cx, args);
                let context = (cx.kind == MethodSymbolKind::Group).then_some(cx.class);
                // Context and qualifier errors do not depend on the arguments.
                let probe = arg_types.clone().unwrap_or_default();
                match resolve_group_escape(
                    self.table,
                    context,
                    &qualifier.name,
                    &method.name,
                    &probe,
                    e.span,
                ) {
                    Ok((res, t)) if arg_types.is_some() => {
                        self.resolutions.insert(e.id, res);
                        Some(t)
                    }
                    Err(d) if arg_types.is_some() || !matches!(d.code, Code::E022 | Code::E023) => {
                        self.diags.push(d);
                        None
                    }
                    _ => None,
                }
            }
            ExprKind::New { class, args } => {
                let arg_types = self.args(cx, args);
                let Some(c) = self.table.lookup_class(&class.name) else {
                    self.err(Code::E015, class.span, format!("unknown type `{}`", class.name));
                    return None;
                };
                let params: Vec<TypeRef> = match self.table.class(c).constructor {
                    Some(m) => self.table.method(m).params.iter().map(|p| p.1).collect(),
                    None => Vec::new(),
                };
                let what = format!("constructor of `{}`", class.name);
                if let Err(d) = check_args(self.table, &what, &params, &arg_types?, e.span) {
                    self.diags.push(d);
                }
                Some(TypeRef::Class(c))
            }
            ExprKind::NewCollection { ty } => match self.resolve_type(ty)? {
                TypeRef::Collection {
                    bounded: true,
                    element,
                } => {
                    let msg = format!(
                        "cannot instantiate `Collection<? extends {}>`",
                        self.table.name(element)
                    );
                    self.err(Code::E029, ty.span, msg);
                    None
                }
                t => Some(t),
            },
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.expr(cx, lhs);
                let r = self.expr(cx, rhs);
                let (l, r) = (l?, r?);
                self.binary(*op, l, r, e.span)
            }
            ExprKind::Unary { op, operand } => {
                let t = self.expr(cx, operand)?;
                let want = match op {
                    UnaryOp::Neg => TypeRef::Int,
                    UnaryOp::Not => TypeRef::Bool,
                };
                if t != want {
                    let msg = format!(
                        "operand of unary operator has type `{}`, expected `{}`",
                        self.tn(t),
                        self.tn(want)
                    );
                    self.err(Code::E030, operand.span, msg);
                    return None;
                }
                Some(want)
            }
        }
    }

    fn binary(&mut self, op: BinaryOp, l: TypeRef, r: TypeRef, span: Span) -> Ty {
        use TypeRef::*;
        let printable = |t: TypeRef| matches!(t, Int | Str | Bool);
        let result = match op {
            BinaryOp::Add => match (l, r) {
                (Int, Int) => Some(Int),
                (Str, o) | (o, Str) if printable(o) => Some(Str),
                _ => None,
            },
            BinaryOp::Sub | BinaryOp::Mul | BinaryOp::Div => (l == Int && r == Int).then_some(Int),
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => {
                (l == Int && r == Int).then_some(Bool)
            }
            BinaryOp::And | BinaryOp::Or => (l == Bool && r == Bool).then_some(Bool),
            BinaryOp::Eq | BinaryOp::Ne => {
                ((l == r && printable(l)) || (l.is_reference() && r.is_reference())).then_some(Bool)
            }
        };
        if result.is_none() {
            let msg = format!(
                "operator `{}` cannot be applied to `{}` and `{}`",
                op.symbol(),
                self.tn(l),
                self.tn(r)
            );
            self.err(Code::E030, span, msg);
        }
        result
    }

    fn call(
        &mut self,
        cx: &mut MethodCx,
        e: &Expr,
        receiver: &Expr,
        method: &Ident,
        args: &[Expr],
    ) -> Ty {
        let sel = method.name.as_str();
        // `C.m(args)` when `C` is not a variable in scope.
        if let ExprKind::Ident(n) = &receiver.kind {
            if cx.local(n).is_none() && cx.field(self.table, n).is_none() {
                if let Some(c) = self.table.lookup_class(n) {
                    self.names.insert(receiver.id, NameRef::Class(c));
                    let arg_types = self.args(cx, args);
                    let Some(m) = self.table.lookup_instance(c, sel) else {
                        self.err(Code::E020, method.span, format!("no static method `{sel}` on `{n}`"));
                        return None;
                    };
                    if self.table.method(m).kind != MethodSymbolKind::Static {
                        let msg = format!("`{sel}` is an instance method and needs an object receiver");
                        self.err(Code::E028, method.span, msg);
                        return None;
                    }
                    let params: Vec<TypeRef> =
                        self.table.method(m).params.iter().map(|p| p.1).collect();
                    if let Err(d) =
                        check_args(self.table, &format!("`{sel}`"), &params, &arg_types?, e.span)
                    {
                        self.diags.push(d);
                        return None;
                    }
                    self.resolutions.insert(e.id, Resolution::Static { method: m });
                    return Some(self.table.method(m).return_type);
                }
            }
        }
        let rt = self.expr(cx, receiver);
        let arg_types = self.args(cx, args);
        let (rt, arg_types) = (rt?, arg_types?);
        match resolve_call(self.table, rt, sel, &arg_types, e.span) {
            Ok((res, t)) => {
                self.resolutions.insert(e.id, res);
                Some(t)
            }
            Err(d) => {
                self.diags.push(d);
                None
            }
        }
    }
}
