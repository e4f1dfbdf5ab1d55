//! Static method lookup: least upper bounds, instance and group walks, and
//! call classification.

use crate::source::{Code, Diagnostic, Span};
use crate::symbols::{ClassId, MethodId, MethodSymbolKind, SymbolTable, TypeRef};

/// The collection operations every collection understands. They take
/// precedence over group methods of the same name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Add,
    Size,
    IsEmpty,
    Get,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::Add, Builtin::Size, Builtin::IsEmpty, Builtin::Get];

    pub fn from_selector(s: &str) -> Option<Builtin> {
        Some(match s {
            "add" => Builtin::Add,
            "size" => Builtin::Size,
            "isEmpty" => Builtin::IsEmpty,
            "get" => Builtin::Get,
            _ => return None,
        })
    }

    pub fn selector(self) -> &'static str {
        match self {
            Builtin::Add => "add",
            Builtin::Size => "size",
            Builtin::IsEmpty => "isEmpty",
            Builtin::Get => "get",
        }
    }

    /// Parameter and return types on a collection of `element`.
    pub fn signature(self, element: ClassId) -> (Vec<TypeRef>, TypeRef) {
        match self {
            Builtin::Add => (vec![TypeRef::Class(element)], TypeRef::Bool),
            Builtin::Size => (vec![], TypeRef::Int),
            Builtin::IsEmpty => (vec![], TypeRef::Bool),
            Builtin::Get => (vec![TypeRef::Int], TypeRef::Class(element)),
        }
    }
}

/// How a call site was resolved during attribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Resolution {
    /// Virtual call of an instance method on an object.
    Instance { method: MethodId },
    /// `C.m(args)`.
    Static { method: MethodId },
    /// Group method invoked on a collection whose static element class is
    /// `element`; `defining` is where the group walk found it.
    Group {
        element: ClassId,
        method: MethodId,
        defining: ClassId,
    },
    /// `T.this.m(args)` resolved to a group method, walk started at `qualifier`.
    GroupEscape {
        qualifier: ClassId,
        method: MethodId,
        defining: ClassId,
    },
    /// `super.m(args)` inside a group method.
    GroupSuper { method: MethodId, defining: ClassId },
    /// `super.m(args)` inside an instance method or constructor.
    Super { method: MethodId },
    /// One of the collection's own operations, on a receiver or via an escape.
    Builtin { selector: Builtin, element: ClassId },
}

/// Most specific common superclass of `classes`; `None` for an empty input.
///
/// Starts from the first class and climbs its chain until it is an
/// ancestor of every input.
pub fn least_upper_bound(table: &SymbolTable, classes: &[ClassId]) -> Option<ClassId> {
    let (&first, rest) = classes.split_first()?;
    let mut bound = first;
    for &c in rest {
        while !table.is_subclass(c, bound) {
            bound = table
                .superclass(bound)
                .expect("every class chain ends at Object");
        }
    }
    Some(bound)
}

pub fn lookup_instance(table: &SymbolTable, class: ClassId, selector: &str) -> Option<MethodId> {
    table.lookup_instance(class, selector)
}

pub fn lookup_group(
    table: &SymbolTable,
    start: ClassId,
    selector: &str,
) -> Option<(MethodId, ClassId)> {
    table.lookup_group(start, selector)
}

/// Checks argument count and types against a parameter list.
pub fn check_args(
    table: &SymbolTable,
    what: &str,
    params: &[TypeRef],
    args: &[TypeRef],
    span: Span,
) -> Result<(), Diagnostic> {
    if params.len() != args.len() {
        return Err(Diagnostic::error(
            Code::E023,
            span,
            format!(
                "{what} expects {} argument{}, found {}",
                params.len(),
                if params.len() == 1 { "" } else { "s" },
                args.len()
            ),
        ));
    }
    for (i, (&p, &a)) in params.iter().zip(args).enumerate() {
        if !table.is_subtype(a, p) {
            return Err(Diagnostic::error(
                Code::E022,
                span,
                format!(
                    "argument {} of {what} has type `{}`, expected `{}`",
                    i + 1,
                    table.type_name(a),
                    table.type_name(p)
                ),
            ));
        }
    }
    Ok(())
}

fn method_params(table: &SymbolTable, m: MethodId) -> Vec<TypeRef> {
    table.method(m).params.iter().map(|(_, t)| *t).collect()
}

/// Classifies `receiver.selector(args)` and returns the call's result type.
///
/// Object receivers use instance lookup. Collection receivers try the
/// builtin operations first and then walk group methods from the declared
/// element class.
pub fn resolve_call(
    table: &SymbolTable,
    receiver: TypeRef,
    selector: &str,
    args: &[TypeRef],
    span: Span,
) -> Result<(Resolution, TypeRef), Diagnostic> {
    match receiver {
        TypeRef::Class(c) => {
            let Some(m) = table.lookup_instance(c, selector) else {
                return Err(Diagnostic::error(
                    Code::E020,
                    span,
                    format!("no method `{selector}` on `{}`", table.name(c)),
                ));
            };
            let sym = table.method(m);
            if sym.kind == MethodSymbolKind::Static {
                return Err(Diagnostic::error(
                    Code::E028,
                    span,
                    format!(
                        "static method `{selector}` must be called as `{}.{selector}(...)`",
                        table.name(sym.owner)
                    ),
                ));
            }
            check_args(table, &format!("`{selector}`"), &method_params(table, m), args, span)?;
            Ok((Resolution::Instance { method: m }, sym.return_type))
        }
        TypeRef::Collection { element, .. } => {
            if let Some(b) = Builtin::from_selector(selector) {
                let (params, ret) = b.signature(element);
                check_args(table, &format!("`{selector}`"), &params, args, span)?;
                return Ok((
                    Resolution::Builtin {
                        selector: b,
                        element,
                    },
                    ret,
                ));
            }
            let Some((m, defining)) = table.lookup_group(element, selector) else {
                return Err(Diagnostic::error(
                    Code::E021,
                    span,
                    format!(
                        "no group method `{selector}` for element type `{}`",
                        table.name(element)
                    ),
                ));
            };
            check_args(table, &format!("`{selector}`"), &method_params(table, m), args, span)?;
            Ok((
                Resolution::Group {
                    element,
                    method: m,
                    defining,
                },
                table.method(m).return_type,
            ))
        }
        other => Err(Diagnostic::error(
            Code::E020,
            span,
            format!(
                "cannot call `{selector}` on a value of type `{}`",
                table.type_name(other)
            ),
        )),
    }
}

/// Resolves `qualifier.this.selector(args)` inside a group method of
/// `context`. `context` is `None` outside group methods.
///
/// The walk starts at the qualifier and skips the collection's own
/// operations; when no group method matches, the builtin operation of the
/// same name is used.
pub fn resolve_group_escape(
    table: &SymbolTable,
    context: Option<ClassId>,
    qualifier: &str,
    selector: &str,
    args: &[TypeRef],
    span: Span,
) -> Result<(Resolution, TypeRef), Diagnostic> {
    let Some(context) = context else {
        return Err(Diagnostic::error(
            Code::E024,
            span,
            format!("`{qualifier}.this` can only be used inside a group method"),
        ));
    };
    let q = match table.lookup_class(qualifier) {
        Some(q) if table.is_subclass(context, q) => q,
        _ => {
            return Err(Diagnostic::error(
                Code::E025,
                span,
                format!(
                    "`{qualifier}` is not `{}` or one of its superclasses",
                    table.name(context)
                ),
            ))
        }
    };
    if let Some((m, defining)) = table.lookup_group(q, selector) {
        check_args(table, &format!("`{selector}`"), &method_params(table, m), args, span)?;
        return Ok((
            Resolution::GroupEscape {
                qualifier: q,
                method: m,
                defining,
            },
            table.method(m).return_type,
        ));
    }
    if let Some(b) = Builtin::from_selector(selector) {
        let (params, ret) = b.signature(context);
        check_args(table, &format!("`{selector}`"), &params, args, span)?;
        return Ok((
            Resolution::Builtin {
                selector: b,
                element: context,
            },
            ret,
        ));
    }
    Err(Diagnostic::error(
        Code::E021,
        span,
        format!("no group method `{selector}` for element type `{qualifier}`"),
    ))
}
