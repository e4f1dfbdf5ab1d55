//! Tree-walking interpreter with the swarm lookup procedure.
//!
//! Calls on objects walk instance methods from the object's class. Calls on
//! collections try the builtin operations first, then determine an element
//! class and walk group methods from there. Under [`Policy::Static`] the
//! element class is the one the collection was created with; under
//! [`Policy::Dynamic`] it is the least upper bound of the classes of the
//! elements currently in the collection.

mod value;

use std::collections::HashMap;
use std::rc::Rc;

use crate::frontend::ast::*;
use crate::source::{Code, Diagnostic, Span};
use crate::symbols::{ClassId, MethodId, MethodSymbolKind, SymbolTable, TypeRef};
use crate::typing::{least_upper_bound, Builtin, NameRef, Resolution, TypedProgram};

pub use value::{CollectionValue, Object, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Element class = the collection's declared element type.
    #[default]
    Static,
    /// Element class = least upper bound of the actual elements' classes.
    Dynamic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub policy: Policy,
    /// `None` picks `Main`, or the only class with a static `main`.
    pub entry_class: Option<String>,
    pub entry_method: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            policy: Policy::Static,
            entry_class: None,
            entry_method: "main".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuntimeError {
    pub message: String,
    pub span: Span,
}

impl RuntimeError {
    fn new(span: Span, message: impl Into<String>) -> Self {
        RuntimeError {
            message: message.into(),
            span,
        }
    }
}

/// One lookup performed on a collection receiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DispatchEvent {
    pub selector: String,
    /// Class where the group walk started; `None` when a builtin answered.
    pub element: Option<ClassId>,
    pub target: DispatchTarget,
    /// For group targets: the receiver was non-empty and every element's
    /// class was exactly the declared element class.
    pub homogeneous: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DispatchTarget {
    Method { method: MethodId, defining: ClassId },
    Builtin(Builtin),
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub stdout: String,
    pub trace: Vec<DispatchEvent>,
    pub result: Result<(), RuntimeError>,
}

const STACK_BYTES: usize = 512 << 20;
const MAX_DEPTH: usize = 20_000;

/// Finds the entry method for `cfg`. Entry problems are diagnostics rather
/// than runtime errors.
pub fn find_entry(tp: &TypedProgram, cfg: &RunConfig) -> Result<MethodId, Diagnostic> {
    let table = &tp.table;
    let sel = cfg.entry_method.as_str();
    let has_static = |c: ClassId| {
        table
            .class(c)
            .instance_methods
            .get(sel)
            .is_some_and(|&m| table.method(m).kind == MethodSymbolKind::Static)
    };
    let no_entry = |msg: String| Diagnostic::error(Code::E040, Span::default(), msg);
    let class = match &cfg.entry_class {
        Some(name) => table
            .lookup_class(name)
            .ok_or_else(|| no_entry(format!("entry class `{name}` not found")))?,
        None => match table.lookup_class("Main") {
            Some(c) if table.class(c).instance_methods.contains_key(sel) => c,
            _ => {
                let candidates: Vec<ClassId> =
                    table.user_classes().filter(|&c| has_static(c)).collect();
                match candidates.as_slice() {
                    [c] => *c,
                    [] => return Err(no_entry(format!("no class declares `static void {sel}()`"))),
                    _ => {
                        return Err(no_entry(format!(
                            "several classes declare a static `{sel}`; choose one with --entry"
                        )))
                    }
                }
            }
        },
    };
    let Some(&m) = table.class(class).instance_methods.get(sel) else {
        return Err(no_entry(format!(
            "class `{}` has no method `{sel}`",
            table.name(class)
        )));
    };
    let sym = table.method(m);
    if sym.kind != MethodSymbolKind::Static || !sym.params.is_empty() || sym.return_type != TypeRef::Void
    {
        return Err(Diagnostic::error(
            Code::E041,
            sym.span,
            format!(
                "entry method `{}.{sel}` must be declared `static void {sel}()`",
                table.name(class)
            ),
        ));
    }
    Ok(m)
}

/// Runs `tp` from its entry method on a thread with a large stack.
pub fn run(tp: &TypedProgram, cfg: &RunConfig) -> Result<RunOutcome, Diagnostic> {
    let entry = find_entry(tp, cfg)?;
    let policy = cfg.policy;
    let outcome = std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK_BYTES)
            .spawn_scoped(s, move || {
                let mut interp = Interpreter::new(tp, policy);
                let result = interp.invoke(entry, None, None, Vec::new(), Span::default());
                RunOutcome {
                    stdout: interp.out,
                    trace: interp.trace,
                    result: result.map(|_| ()),
                }
            })
            .expect("spawn interpreter thread")
            .join()
            .expect("interpreter thread panicked")
    });
    Ok(outcome)
}

/// Swarm lookup of `selector` on a non-null receiver.
pub fn swarm_lookup(
    table: &SymbolTable,
    receiver: &Value,
    selector: &str,
    policy: Policy,
) -> Result<(DispatchTarget, Option<ClassId>), String> {
    let not_understood = || format!("message not understood: {selector}");
    match receiver {
        Value::Object(o) => table
            .lookup_instance(o.class, selector)
            .map(|m| {
                (
                    DispatchTarget::Method {
                        method: m,
                        defining: table.method(m).owner,
                    },
                    None,
                )
            })
            .ok_or_else(not_understood),
        Value::Collection(c) => {
            if let Some(b) = Builtin::from_selector(selector) {
                return Ok((DispatchTarget::Builtin(b), None));
            }
            let element = match policy {
                Policy::Static => c.declared_element,
                Policy::Dynamic => element_lub(table, c)?,
            };
            table
                .lookup_group(element, selector)
                .map(|(method, defining)| (DispatchTarget::Method { method, defining }, Some(element)))
                .ok_or_else(not_understood)
        }
        _ => Err(not_understood()),
    }
}

/// Least upper bound of the classes of a collection's elements.
pub fn element_lub(table: &SymbolTable, c: &CollectionValue) -> Result<ClassId, String> {
    let elements = c.elements.borrow();
    if elements.is_empty() {
        return Err("group lookup on empty collection".into());
    }
    let mut classes = Vec::with_capacity(elements.len());
    for e in elements.iter() {
        match e {
            Value::Object(o) => classes.push(o.class),
            _ => return Err("null element in group receiver".into()),
        }
    }
    Ok(least_upper_bound(table, &classes).expect("non-empty"))
}

/// Executes a builtin collection operation.
pub fn builtin_collection(
    table: &SymbolTable,
    c: &CollectionValue,
    op: Builtin,
    args: &[Value],
) -> Result<Value, String> {
    match op {
        Builtin::Add => {
            let v = args[0].clone();
            if let Value::Object(o) = &v {
                if !table.is_subclass(o.class, c.declared_element) {
                    return Err(format!(
                        "element type mismatch: cannot add `{}` to a collection of `{}`",
                        table.name(o.class),
                        table.name(c.declared_element)
                    ));
                }
            }
            c.elements.borrow_mut().push(v);
            Ok(Value::Bool(true))
        }
        Builtin::Size => Ok(Value::Int(c.elements.borrow().len() as i64)),
        Builtin::IsEmpty => Ok(Value::Bool(c.elements.borrow().is_empty())),
        Builtin::Get => {
            let Value::Int(i) = args[0] else {
                unreachable!("attribution types the index as int")
            };
            let elements = c.elements.borrow();
            usize::try_from(i)
                .ok()
                .and_then(|i| elements.get(i).cloned())
                .ok_or_else(|| format!("index out of bounds: {i} of {}", elements.len()))
        }
    }
}

enum Flow {
    Normal,
    Return(Value),
}

struct Frame<'a> {
    this: Option<Value>,
    /// Locals of all open scopes, innermost last.
    locals: Vec<(&'a str, Value)>,
    /// Length of `locals` when each open block scope began.
    marks: Vec<usize>,
    /// Class whose group method is executing.
    group_context: Option<ClassId>,
    /// Class whose constructor is executing.
    constructing: Option<ClassId>,
}

impl<'a> Frame<'a> {
    fn new(
        this: Option<Value>,
        params: &'a [(String, TypeRef)],
        args: Vec<Value>,
        group_context: Option<ClassId>,
        constructing: Option<ClassId>,
    ) -> Self {
        Frame {
            this,
            locals: params.iter().map(|(n, _)| n.as_str()).zip(args).collect(),
            marks: Vec::new(),
            group_context,
            constructing,
        }
    }

    fn lookup(&mut self, name: &str) -> Option<&mut Value> {
        self.locals
            .iter_mut()
            .rev()
            .find_map(|(n, v)| (*n == name).then_some(v))
    }

    fn declare(&mut self, name: &'a str, v: Value) {
        self.locals.push((name, v));
    }

    fn open(&mut self) {
        self.marks.push(self.locals.len());
    }

    fn close(&mut self) {
        let mark = self.marks.pop().expect("open scope");
        self.locals.truncate(mark);
    }
}

type R<T> = Result<T, RuntimeError>;

struct Interpreter<'a> {
    tp: &'a TypedProgram,
    table: &'a SymbolTable,
    policy: Policy,
    out: String,
    trace: Vec<DispatchEvent>,
    depth: usize,
}

impl<'a> Interpreter<'a> {
    fn new(tp: &'a TypedProgram, policy: Policy) -> Self {
        Interpreter {
            tp,
            table: &tp.table,
            policy,
            out: String::new(),
            trace: Vec::new(),
            depth: 0,
        }
    }

    fn body(&self, m: MethodId) -> &'a MethodDecl {
        self.tp
            .method_decl(m)
            .expect("every executed method has a declaration")
    }

    /// Runs method `m` with the given receiver binding.
    fn invoke(
        &mut self,
        m: MethodId,
        this: Option<Value>,
        group_context: Option<ClassId>,
        args: Vec<Value>,
        span: Span,
    ) -> R<Value> {
        if self.depth >= MAX_DEPTH {
            return Err(RuntimeError::new(span, "stack overflow"));
        }
        let sym = self.table.method(m);
        let mut frame = Frame::new(this, &sym.params, args, group_context, None);
        let decl = self.body(m);
        self.depth += 1;
        let flow = self.exec_block_in(&mut frame, &decl.body);
        self.depth -= 1;
        Ok(match flow? {
            Flow::Return(v) => v,
            Flow::Normal => Value::default_for(sym.return_type),
        })
    }

    /// Runs the constructor chain of `class` on a freshly allocated object.
    fn construct(&mut self, class: ClassId, obj: &Value, args: Vec<Value>, span: Span) -> R<()> {
        match self.table.class(class).constructor {
            Some(ctor) => {
                if self.depth >= MAX_DEPTH {
                    return Err(RuntimeError::new(span, "stack overflow"));
                }
                let sym = self.table.method(ctor);
                let decl = self.body(ctor);
                let mut frame = Frame::new(Some(obj.clone()), &sym.params, args, None, Some(class));
                let explicit = matches!(
                    decl.body.stmts.first().map(|s| &s.kind),
                    Some(StmtKind::SuperCtor(_))
                );
                self.depth += 1;
                let result = (|| {
                    if !explicit {
                        if let Some(sup) = self.table.superclass(class) {
                            self.construct(sup, obj, Vec::new(), span)?;
                        }
                    }
                    self.exec_block_in(&mut frame, &decl.body).map(|_| ())
                })();
                self.depth -= 1;
                result
            }
            None => match self.table.superclass(class) {
                Some(sup) => self.construct(sup, obj, Vec::new(), span),
                None => Ok(()),
            },
        }
    }

    fn exec_block_in(&mut self, f: &mut Frame<'a>, b: &'a Block) -> R<Flow> {
        for s in &b.stmts {
            if let Flow::Return(v) = self.exec(f, s)? {
                return Ok(Flow::Return(v));
            }
        }
        Ok(Flow::Normal)
    }

    fn exec_block(&mut self, f: &mut Frame<'a>, b: &'a Block) -> R<Flow> {
        f.open();
        let r = self.exec_block_in(f, b);
        f.close();
        r
    }

    fn truthy(&mut self, f: &mut Frame<'a>, e: &'a Expr) -> R<bool> {
        match self.eval(f, e)? {
            Value::Bool(b) => Ok(b),
            _ => unreachable!("attribution types conditions as boolean"),
        }
    }

    fn exec(&mut self, f: &mut Frame<'a>, s: &'a Stmt) -> R<Flow> {
        match &s.kind {
            StmtKind::Local { ty, name, init } => {
                let v = match init {
                    Some(e) => self.eval(f, e)?,
                    None => Value::default_for(self.table.resolve_type(ty).unwrap_or(TypeRef::Null)),
                };
                f.declare(&name.name, v);
            }
            StmtKind::Assign { target, value } => match &target.kind {
                ExprKind::Ident(n) => {
                    let v = self.eval(f, value)?;
                    self.store_name(f, target, n, v);
                }
                ExprKind::Field { target: obj, name } => {
                    let o = self.eval(f, obj)?;
                    let v = self.eval(f, value)?;
                    match o {
                        Value::Object(o) => {
                            let mut fields = o.fields.borrow_mut();
                            match fields.get_mut(&name.name) {
                                Some(slot) => *slot = v,
                                None => {
                                    fields.insert(name.name.clone(), v);
                                }
                            }
                        }
                        _ => {
                            return Err(RuntimeError::new(
                                target.span,
                                format!("null receiver for field `{}`", name.name),
                            ))
                        }
                    }
                }
                _ => unreachable!("attribution rejects other assignment targets"),
            },
            StmtKind::Expr(e) => {
                self.eval(f, e)?;
            }
            StmtKind::If {
                cond,
                then_block,
                else_branch,
            } => {
                if self.truthy(f, cond)? {
                    return self.exec_block(f, then_block);
                }
                match else_branch.as_deref() {
                    Some(ElseBranch::If(s)) => return self.exec(f, s),
                    Some(ElseBranch::Block(b)) => return self.exec_block(f, b),
                    None => {}
                }
            }
            StmtKind::While { cond, body } => {
                while self.truthy(f, cond)? {
                    if let Flow::Return(v) = self.exec_block(f, body)? {
                        return Ok(Flow::Return(v));
                    }
                }
            }
            StmtKind::For {
                init,
                cond,
                update,
                body,
            } => {
                f.open();
                let r = (|| {
                    if let Some(s) = init {
                        self.exec(f, s)?;
                    }
                    loop {
                        if let Some(c) = cond {
                            if !self.truthy(f, c)? {
                                break;
                            }
                        }
                        if let Flow::Return(v) = self.exec_block(f, body)? {
                            return Ok(Flow::Return(v));
                        }
                        if let Some(s) = update {
                            self.exec(f, s)?;
                        }
                    }
                    Ok(Flow::Normal)
                })();
                f.close();
                return r;
            }
            StmtKind::ForEach {
                name,
                iterable,
                body,
                ..
            } => {
                let snapshot = match self.eval(f, iterable)? {
                    Value::Collection(c) => c.elements.borrow().clone(),
                    _ => {
                        return Err(RuntimeError::new(
                            iterable.span,
                            "null collection in for-each loop",
                        ))
                    }
                };
                for v in snapshot {
                    f.open();
                    f.declare(&name.name, v);
                    let r = self.exec_block(f, body);
                    f.close();
                    if let Flow::Return(v) = r? {
                        return Ok(Flow::Return(v));
                    }
                }
            }
            StmtKind::Return(e) => {
                let v = match e {
                    Some(e) => self.eval(f, e)?,
                    None => Value::Null,
                };
                return Ok(Flow::Return(v));
            }
            StmtKind::Print(e) => {
                let v = self.eval(f, e)?;
                self.out.push_str(&v.to_string());
                self.out.push('\n');
            }
            StmtKind::Block(b) => return self.exec_block(f, b),
            StmtKind::SuperCtor(args) => {
                let args = self.eval_all(f, args)?;
                let Some(Value::Object(o)) = &f.this else {
                    unreachable!("super(...) runs inside a constructor")
                };
                let this = Value::Object(o.clone());
                let class = f.constructing.expect("super(...) runs inside a constructor");
                if let Some(sup) = self.table.superclass(class) {
                    self.construct(sup, &this, args, s.span)?;
                }
            }
        }
        Ok(Flow::Normal)
    }

    fn store_name(&mut self, f: &mut Frame<'a>, e: &'a Expr, name: &str, v: Value) {
        match self.tp.names.get(&e.id) {
            Some(NameRef::Field) => {
                let Some(Value::Object(o)) = &f.this else {
                    unreachable!("fields are only named where `this` is an object")
                };
                o.fields.borrow_mut().insert(name.to_string(), v);
            }
            _ => {
                *f.lookup(name).expect("attributed local") = v;
            }
        }
    }

    fn eval_all(&mut self, f: &mut Frame<'a>, es: &'a [Expr]) -> R<Vec<Value>> {
        es.iter().map(|e| self.eval(f, e)).collect()
    }

    fn this(&self, f: &Frame) -> Value {
        f.this.clone().expect("attribution rejects `this` in static methods")
    }

    fn eval(&mut self, f: &mut Frame<'a>, e: &'a Expr) -> R<Value> {
        match &e.kind {
            ExprKind::IntLit(v) => Ok(Value::Int(*v)),
            ExprKind::BoolLit(b) => Ok(Value::Bool(*b)),
            ExprKind::StrLit(s) => Ok(Value::Str(s.as_str().into())),
            ExprKind::Null => Ok(Value::Null),
            ExprKind::This => Ok(self.this(f)),
            ExprKind::Ident(n) => match self.tp.names.get(&e.id) {
                Some(NameRef::Field) => {
                    let Some(Value::Object(o)) = &f.this else {
                        unreachable!("fields are only named where `this` is an object")
                    };
                    Ok(o.fields.borrow()[n].clone())
                }
                _ => Ok(f.lookup(n).expect("attributed local").clone()),
            },
            ExprKind::Field { target, name } => match self.eval(f, target)? {
                Value::Object(o) => Ok(o.fields.borrow()[&name.name].clone()),
                _ => Err(RuntimeError::new(
                    e.span,
                    format!("null receiver for field `{}`", name.name),
                )),
            },
            ExprKind::New { class, args } => {
                let args = self.eval_all(f, args)?;
                let c = self.table.lookup_class(&class.name).expect("attributed class");
                let fields: HashMap<String, Value> = self
                    .table
                    .all_fields(c)
                    .into_iter()
                    .map(|(n, t)| (n, Value::default_for(t)))
                    .collect();
                let obj = Value::Object(Rc::new(Object {
                    class: c,
                    fields: fields.into(),
                }));
                self.construct(c, &obj, args, e.span)?;
                Ok(obj)
            }
            ExprKind::NewCollection { ty } => {
                let Ok(TypeRef::Collection { element, .. }) = self.table.resolve_type(ty) else {
                    unreachable!("attributed collection type")
                };
                Ok(Value::Collection(Rc::new(CollectionValue {
                    declared_element: element,
                    elements: Vec::new().into(),
                })))
            }
            ExprKind::Binary { op, lhs, rhs } => self.binary(f, *op, lhs, rhs, e.span),
            ExprKind::Unary { op, operand } => match (op, self.eval(f, operand)?) {
                (UnaryOp::Neg, Value::Int(v)) => Ok(Value::Int(v.wrapping_neg())),
                (UnaryOp::Not, Value::Bool(b)) => Ok(Value::Bool(!b)),
                _ => unreachable!("attributed unary operand"),
            },
            ExprKind::Call {
                receiver,
                method,
                args,
            } => self.call(f, e, receiver, &method.name, args),
            ExprKind::SuperCall { method, args } => {
                let args = self.eval_all(f, args)?;
                let this = self.this(f);
                if let Some(context) = f.group_context {
                    // Group super walks group methods above the defining class.
                    let start = self.table.superclass(context).unwrap_or(ClassId::OBJECT);
                    let Some((m, defining)) = self.table.lookup_group(start, &method.name) else {
                        return Err(RuntimeError::new(
                            e.span,
                            format!("message not understood: {}", method.name),
                        ));
                    };
                    return self.invoke(m, Some(this), Some(defining), args, e.span);
                }
                match self.tp.resolutions[&e.id] {
                    Resolution::Super { method } => self.invoke(method, Some(this), None, args, e.span),
                    r => unreachable!("super call resolved as {r:?}"),
                }
            }
            ExprKind::EscapeCall { args, .. } => {
                let args = self.eval_all(f, args)?;
                let this = self.this(f);
                match self.tp.resolutions[&e.id] {
                    Resolution::GroupEscape { method, defining, .. } => {
                        self.invoke(method, Some(this), Some(defining), args, e.span)
                    }
                    Resolution::Builtin { selector, .. } => {
                        let Value::Collection(c) = &this else {
                            unreachable!("group methods run on collections")
                        };
                        builtin_collection(self.table, c, selector, &args)
                            .map_err(|m| RuntimeError::new(e.span, m))
                    }
                    r => unreachable!("escape resolved as {r:?}"),
                }
            }
        }
    }

    fn call(
        &mut self,
        f: &mut Frame<'a>,
        e: &'a Expr,
        receiver: &'a Expr,
        selector: &str,
        args: &'a [Expr],
    ) -> R<Value> {
        if let Some(Resolution::Static { method }) = self.tp.resolutions.get(&e.id) {
            let args = self.eval_all(f, args)?;
            return self.invoke(*method, None, None, args, e.span);
        }
        let recv = self.eval(f, receiver)?;
        if matches!(recv, Value::Null) {
            return Err(RuntimeError::new(
                e.span,
                format!("null receiver for call to `{selector}`"),
            ));
        }
        let args = self.eval_all(f, args)?;
        let (target, element) = swarm_lookup(self.table, &recv, selector, self.policy)
            .map_err(|m| RuntimeError::new(e.span, m))?;
        if let Value::Collection(c) = &recv {
            let homogeneous = matches!(target, DispatchTarget::Method { .. }) && {
                let elements = c.elements.borrow();
                !elements.is_empty()
                    && elements
                        .iter()
                        .all(|e| matches!(e, Value::Object(o) if o.class == c.declared_element))
            };
            self.trace.push(DispatchEvent {
                selector: selector.to_string(),
                element,
                target,
                homogeneous,
            });
        }
        match (target, &recv) {
            (DispatchTarget::Builtin(b), Value::Collection(c)) => {
                builtin_collection(self.table, c, b, &args).map_err(|m| RuntimeError::new(e.span, m))
            }
            (DispatchTarget::Method { method, defining }, Value::Collection(_)) => {
                self.invoke(method, Some(recv), Some(defining), args, e.span)
            }
            (DispatchTarget::Method { method, .. }, _) => {
                self.invoke(method, Some(recv), None, args, e.span)
            }
            (DispatchTarget::Builtin(_), _) => unreachable!("builtins only answer collections"),
        }
    }

    fn binary(&mut self, f: &mut Frame<'a>, op: BinaryOp, lhs: &'a Expr, rhs: &'a Expr, span: Span) -> R<Value> {
        match op {
            BinaryOp::And => {
                return Ok(Value::Bool(self.truthy(f, lhs)? && self.truthy(f, rhs)?));
            }
            BinaryOp::Or => {
                return Ok(Value::Bool(self.truthy(f, lhs)? || self.truthy(f, rhs)?));
            }
            _ => {}
        }
        let l = self.eval(f, lhs)?;
        let r = self.eval(f, rhs)?;
        use Value::*;
        Ok(match (op, &l, &r) {
            (BinaryOp::Eq, _, _) => Bool(l.same(&r)),
            (BinaryOp::Ne, _, _) => Bool(!l.same(&r)),
            (BinaryOp::Add, Int(a), Int(b)) => Int(a.wrapping_add(*b)),
            (BinaryOp::Add, _, _) => Str(format!("{l}{r}").into()),
            (BinaryOp::Sub, Int(a), Int(b)) => Int(a.wrapping_sub(*b)),
            (BinaryOp::Mul, Int(a), Int(b)) => Int(a.wrapping_mul(*b)),
            (BinaryOp::Div, Int(_), Int(0)) => {
                return Err(RuntimeError::new(span, "division by zero"));
            }
            (BinaryOp::Div, Int(a), Int(b)) => Int(a.wrapping_div(*b)),
            (BinaryOp::Lt, Int(a), Int(b)) => Bool(a < b),
            (BinaryOp::Le, Int(a), Int(b)) => Bool(a <= b),
            (BinaryOp::Gt, Int(a), Int(b)) => Bool(a > b),
            (BinaryOp::Ge, Int(a), Int(b)) => Bool(a >= b),
            _ => unreachable!("attributed binary operands"),
        })
    }
}
