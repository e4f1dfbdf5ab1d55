//! Enter pass: class, field and method symbols plus the inheritance graph.
//!
//! Classes live in a flat arena indexed by [`ClassId`]; `ClassId::OBJECT` is
//! the implicit root. In the swarm dialect, entering also reserves a
//! synthetic wrapper class `C$Group` for every class `C` that declares group
//! methods, and links each wrapper to the wrapper of the nearest ancestor
//! that has one.

use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;

use crate::frontend::ast::{self, MethodKind, Program, TypeExpr, TypeExprKind};
use crate::frontend::Dialect;
use crate::source::{Code, Diagnostic, Span};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId(pub u32);

impl ClassId {
    pub const OBJECT: ClassId = ClassId(0);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MethodId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeRef {
    Int,
    Bool,
    Str,
    Void,
    /// Type of the `null` literal.
    Null,
    Class(ClassId),
    /// `Collection<element>`; `bounded` means `Collection<? extends element>`.
    Collection { element: ClassId, bounded: bool },
}

impl TypeRef {
    pub fn is_reference(self) -> bool {
        matches!(
            self,
            TypeRef::Null | TypeRef::Class(_) | TypeRef::Collection { .. }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MethodSymbolKind {
    Instance,
    Group,
    Static,
    Constructor,
    SyntheticDelegation,
}

/// Position of a method declaration inside the program's units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MethodRef {
    pub unit: usize,
    pub class: usize,
    pub method: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassRef {
    pub unit: usize,
    pub class: usize,
}

#[derive(Clone, Debug)]
pub struct MethodSymbol {
    pub selector: String,
    pub kind: MethodSymbolKind,
    pub params: Vec<(String, TypeRef)>,
    pub return_type: TypeRef,
    pub owner: ClassId,
    /// Absent for methods synthesized by a transformation.
    pub decl: Option<MethodRef>,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct ClassSymbol {
    pub name: String,
    /// `None` only for `Object`.
    pub superclass: Option<ClassId>,
    pub fields: IndexMap<String, TypeRef>,
    /// Instance and static methods, keyed by selector.
    pub instance_methods: IndexMap<String, MethodId>,
    pub group_methods: IndexMap<String, MethodId>,
    pub constructor: Option<MethodId>,
    pub wrapper: Option<ClassId>,
    pub is_synthetic: bool,
    pub decl: Option<ClassRef>,
    pub span: Span,
}

impl ClassSymbol {
    fn new(name: impl Into<String>, decl: Option<ClassRef>, span: Span) -> Self {
        ClassSymbol {
            name: name.into(),
            superclass: None,
            fields: IndexMap::new(),
            instance_methods: IndexMap::new(),
            group_methods: IndexMap::new(),
            constructor: None,
            wrapper: None,
            is_synthetic: false,
            decl,
            span,
        }
    }

    /// Every declared selector: instance, static and group methods.
    pub fn selectors(&self) -> impl Iterator<Item = &str> {
        self.instance_methods
            .keys()
            .chain(self.group_methods.keys())
            .map(String::as_str)
    }
}

#[derive(Clone, Debug)]
pub struct SymbolTable {
    classes: Vec<ClassSymbol>,
    methods: Vec<MethodSymbol>,
    by_name: HashMap<String, ClassId>,
}

pub const WRAPPER_SUFFIX: &str = "$Group";

pub fn wrapper_name(element: &str) -> String {
    format!("{element}{WRAPPER_SUFFIX}")
}

impl SymbolTable {
    fn with_object() -> Self {
        let mut t = SymbolTable {
            classes: Vec::new(),
            methods: Vec::new(),
            by_name: HashMap::new(),
        };
        t.add_class(ClassSymbol::new("Object", None, Span::default()));
        t
    }

    pub fn add_class(&mut self, class: ClassSymbol) -> ClassId {
        let id = ClassId(self.classes.len() as u32);
        self.by_name.insert(class.name.clone(), id);
        self.classes.push(class);
        id
    }

    pub fn add_method(&mut self, method: MethodSymbol) -> MethodId {
        self.methods.push(method);
        MethodId(self.methods.len() as u32 - 1)
    }

    pub fn class(&self, id: ClassId) -> &ClassSymbol {
        &self.classes[id.0 as usize]
    }

    pub fn class_mut(&mut self, id: ClassId) -> &mut ClassSymbol {
        &mut self.classes[id.0 as usize]
    }

    pub fn method(&self, id: MethodId) -> &MethodSymbol {
        &self.methods[id.0 as usize]
    }

    pub fn method_ids(&self) -> impl Iterator<Item = MethodId> {
        (0..self.methods.len() as u32).map(MethodId)
    }

    pub fn lookup_class(&self, name: &str) -> Option<ClassId> {
        self.by_name.get(name).copied()
    }

    pub fn class_ids(&self) -> impl Iterator<Item = ClassId> {
        (0..self.classes.len() as u32).map(ClassId)
    }

    /// Declared (non-synthetic, non-root) classes in declaration order.
    pub fn user_classes(&self) -> impl Iterator<Item = ClassId> + '_ {
        self.class_ids()
            .filter(move |&c| c != ClassId::OBJECT && !self.class(c).is_synthetic)
    }

    pub fn name(&self, id: ClassId) -> &str {
        &self.class(id).name
    }

    pub fn superclass(&self, id: ClassId) -> Option<ClassId> {
        self.class(id).superclass
    }

    /// `[c, super(c), ..., Object]`.
    pub fn superclass_chain(&self, c: ClassId) -> Vec<ClassId> {
        let mut chain = vec![c];
        let mut cur = c;
        while let Some(s) = self.superclass(cur) {
            chain.push(s);
            cur = s;
        }
        chain
    }

    /// Reflexive-transitive subclass relation.
    pub fn is_subclass(&self, sub: ClassId, sup: ClassId) -> bool {
        let mut cur = Some(sub);
        while let Some(c) = cur {
            if c == sup {
                return true;
            }
            cur = self.superclass(c);
        }
        false
    }

    /// Subtyping over [`TypeRef`]. Exact collection types are invariant in
    /// their element; `Collection<? extends T>` accepts any collection whose
    /// element is a subclass of `T`. `null` is a subtype of every reference
    /// type.
    pub fn is_subtype(&self, a: TypeRef, b: TypeRef) -> bool {
        use TypeRef::*;
        match (a, b) {
            _ if a == b => true,
            (Class(x), Class(y)) => self.is_subclass(x, y),
            (Collection { element: x, .. }, Collection { element: y, bounded: true }) => {
                self.is_subclass(x, y)
            }
            (Null, Class(_) | Collection { .. }) => true,
            _ => false,
        }
    }

    /// Walks `[c..Object]` over a method map selected by `pick`.
    fn walk(
        &self,
        start: ClassId,
        selector: &str,
        pick: impl Fn(&ClassSymbol) -> &IndexMap<String, MethodId>,
    ) -> Option<(MethodId, ClassId)> {
        let mut cur = Some(start);
        while let Some(c) = cur {
            if let Some(&m) = pick(self.class(c)).get(selector) {
                return Some((m, c));
            }
            cur = self.superclass(c);
        }
        None
    }

    /// Instance-method lookup: first match on the superclass chain.
    pub fn lookup_instance(&self, c: ClassId, selector: &str) -> Option<MethodId> {
        self.walk(c, selector, |k| &k.instance_methods).map(|(m, _)| m)
    }

    /// Group-method lookup starting at `start`; returns the method and the
    /// class where it was found.
    pub fn lookup_group(&self, start: ClassId, selector: &str) -> Option<(MethodId, ClassId)> {
        self.walk(start, selector, |k| &k.group_methods)
    }

    /// Field lookup over the superclass chain.
    pub fn lookup_field(&self, c: ClassId, name: &str) -> Option<TypeRef> {
        self.superclass_chain(c)
            .into_iter()
            .find_map(|k| self.class(k).fields.get(name).copied())
    }

    /// All fields of `c` including inherited ones, root-most first.
    pub fn all_fields(&self, c: ClassId) -> Vec<(String, TypeRef)> {
        let mut chain = self.superclass_chain(c);
        chain.reverse();
        chain
            .into_iter()
            .flat_map(|k| {
                self.class(k)
                    .fields
                    .iter()
                    .map(|(n, t)| (n.clone(), *t))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    pub fn type_name(&self, t: TypeRef) -> String {
        match t {
            TypeRef::Int => "int".into(),
            TypeRef::Bool => "boolean".into(),
            TypeRef::Str => "string".into(),
            TypeRef::Void => "void".into(),
            TypeRef::Null => "null".into(),
            TypeRef::Class(c) => self.name(c).to_string(),
            TypeRef::Collection {
                element,
                bounded: false,
            } => format!("Collection<{}>", self.name(element)),
            TypeRef::Collection {
                element,
                bounded: true,
            } => format!("Collection<? extends {}>", self.name(element)),
        }
    }

    /// Resolves a syntactic type against the declared classes.
    pub fn resolve_type(&self, ty: &TypeExpr) -> Result<TypeRef, Diagnostic> {
        Ok(match &ty.kind {
            TypeExprKind::Int => TypeRef::Int,
            TypeExprKind::Boolean => TypeRef::Bool,
            TypeExprKind::String => TypeRef::Str,
            TypeExprKind::Void => TypeRef::Void,
            TypeExprKind::Named(n) => TypeRef::Class(self.lookup_class(n).ok_or_else(|| {
                Diagnostic::error(Code::E015, ty.span, format!("unknown type `{n}`"))
            })?),
            TypeExprKind::Collection { element, bounded } => match &element.kind {
                TypeExprKind::Named(_) => {
                    let TypeRef::Class(c) = self.resolve_type(element)? else {
                        unreachable!()
                    };
                    TypeRef::Collection {
                        element: c,
                        bounded: *bounded,
                    }
                }
                TypeExprKind::Collection { .. } => {
                    return Err(Diagnostic::error(
                        Code::E014,
                        ty.span,
                        "nested collection types are not supported",
                    ))
                }
                _ => {
                    return Err(Diagnostic::error(
                        Code::E014,
                        ty.span,
                        "collection elements must be class types",
                    ))
                }
            },
        })
    }
}

/// Builds the symbol table for `program`.
pub fn enter(program: &Program, dialect: Dialect) -> Result<SymbolTable, Vec<Diagnostic>> {
    let mut table = SymbolTable::with_object();
    let mut diags = Vec::new();

    // Declare classes.
    let mut decls: Vec<(ClassId, &ast::ClassDecl)> = Vec::new();
    for (ui, unit) in program.units.iter().enumerate() {
        for (ci, class) in unit.classes.iter().enumerate() {
            if table.lookup_class(&class.name.name).is_some() {
                diags.push(Diagnostic::error(
                    Code::E010,
                    class.name.span,
                    format!("duplicate class `{}`", class.name.name),
                ));
                continue;
            }
            let id = table.add_class(ClassSymbol::new(
                class.name.name.clone(),
                Some(ClassRef {
                    unit: ui,
                    class: ci,
                }),
                class.span,
            ));
            decls.push((id, class));
        }
    }

    // Resolve superclasses.
    for &(id, class) in &decls {
        let sup = match &class.superclass {
            None => ClassId::OBJECT,
            Some(s) => match table.lookup_class(&s.name) {
                Some(sid) => sid,
                None => {
                    diags.push(Diagnostic::error(
                        Code::E011,
                        s.span,
                        format!("unknown superclass `{}`", s.name),
                    ));
                    ClassId::OBJECT
                }
            },
        };
        table.class_mut(id).superclass = Some(sup);
    }

    // Reject inheritance cycles.
    let mut in_cycle = HashSet::new();
    for &(id, class) in &decls {
        let mut seen = HashSet::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            if !seen.insert(c) {
                if c == id {
                    in_cycle.insert(id);
                    diags.push(Diagnostic::error(
                        Code::E012,
                        class.name.span,
                        format!("inheritance cycle involving `{}`", class.name.name),
                    ));
                }
                break;
            }
            cur = table.superclass(c);
        }
    }
    if !in_cycle.is_empty() {
        // Later steps walk superclass chains and would not terminate.
        return Err(diags);
    }

    // Fields.
    for &(id, class) in &decls {
        for field in &class.fields {
            let ty = match table.resolve_type(&field.ty) {
                Ok(t) => t,
                Err(d) => {
                    diags.push(d);
                    continue;
                }
            };
            let sym = table.class_mut(id);
            if sym.fields.contains_key(&field.name.name) {
                diags.push(Diagnostic::error(
                    Code::E016,
                    field.name.span,
                    format!("duplicate field `{}`", field.name.name),
                ));
                continue;
            }
            sym.fields.insert(field.name.name.clone(), ty);
        }
    }
    for &(id, class) in &decls {
        let sup = table.superclass(id).unwrap();
        for field in &class.fields {
            if table.lookup_field(sup, &field.name.name).is_some() {
                diags.push(Diagnostic::error(
                    Code::E016,
                    field.name.span,
                    format!(
                        "field `{}` hides an inherited field of the same name",
                        field.name.name
                    ),
                ));
            }
        }
    }

    // Methods.
    for &(id, class) in &decls {
        let cref = table.class(id).decl.unwrap();
        for (mi, method) in class.methods.iter().enumerate() {
            let mut ok = true;
            let mut params = Vec::new();
            let mut seen = HashSet::new();
            for p in &method.params {
                if !seen.insert(p.name.name.as_str()) {
                    diags.push(Diagnostic::error(
                        Code::E017,
                        p.name.span,
                        format!("duplicate parameter `{}`", p.name.name),
                    ));
                    ok = false;
                }
                match table.resolve_type(&p.ty) {
                    Ok(t) => params.push((p.name.name.clone(), t)),
                    Err(d) => {
                        diags.push(d);
                        ok = false;
                    }
                }
            }
            let return_type = match table.resolve_type(&method.ret) {
                Ok(t) => t,
                Err(d) => {
                    diags.push(d);
                    ok = false;
                    TypeRef::Void
                }
            };
            if !ok {
                continue;
            }
            let kind = match method.kind {
                MethodKind::Instance => MethodSymbolKind::Instance,
                MethodKind::Group => MethodSymbolKind::Group,
                MethodKind::Static => MethodSymbolKind::Static,
                MethodKind::Constructor => MethodSymbolKind::Constructor,
            };
            let mid = table.add_method(MethodSymbol {
                selector: method.name.name.clone(),
                kind,
                params,
                return_type,
                owner: id,
                decl: Some(MethodRef {
                    unit: cref.unit,
                    class: cref.class,
                    method: mi,
                }),
                span: method.span,
            });
            let sym = table.class_mut(id);
            if kind == MethodSymbolKind::Constructor {
                if sym.constructor.is_some() {
                    diags.push(Diagnostic::error(
                        Code::E019,
                        method.name.span,
                        format!("class `{}` declares more than one constructor", sym.name),
                    ));
                } else {
                    sym.constructor = Some(mid);
                }
                continue;
            }
            let sel = &method.name.name;
            if sym.instance_methods.contains_key(sel) || sym.group_methods.contains_key(sel) {
                diags.push(Diagnostic::error(
                    Code::E013,
                    method.name.span,
                    format!("duplicate method `{sel}` in class `{}`", sym.name),
                ));
                continue;
            }
            if kind == MethodSymbolKind::Group {
                sym.group_methods.insert(sel.clone(), mid);
            } else {
                sym.instance_methods.insert(sel.clone(), mid);
            }
        }
    }

    match dialect {
        Dialect::Swarm => reserve_wrappers(&mut table, &mut diags),
        Dialect::Core => link_core_wrappers(&mut table),
    }

    if diags.is_empty() {
        Ok(table)
    } else {
        Err(diags)
    }
}

/// Creates a synthetic `C$Group` symbol for each class with group methods and
/// runs the inheritance scan: a wrapper extends the wrapper of the nearest
/// strict ancestor that also has one, or `Object`.
fn reserve_wrappers(table: &mut SymbolTable, diags: &mut Vec<Diagnostic>) {
    let planned: Vec<ClassId> = table
        .user_classes()
        .filter(|&c| !table.class(c).group_methods.is_empty())
        .collect();
    for &c in &planned {
        let name = wrapper_name(table.name(c));
        if table.lookup_class(&name).is_some() {
            diags.push(Diagnostic::error(
                Code::E010,
                table.class(c).span,
                format!("generated wrapper class `{name}` clashes with an existing class"),
            ));
            continue;
        }
        let mut w = ClassSymbol::new(name, None, table.class(c).span);
        w.is_synthetic = true;
        w.superclass = Some(ClassId::OBJECT);
        let wid = table.add_class(w);
        table.class_mut(c).wrapper = Some(wid);
    }
    for &c in &planned {
        let Some(wid) = table.class(c).wrapper else { continue };
        let mut cur = table.superclass(c);
        while let Some(s) = cur {
            if let Some(sw) = table.class(s).wrapper {
                table.class_mut(wid).superclass = Some(sw);
                break;
            }
            cur = table.superclass(s);
        }
    }
}

/// In core code a class named `X$Group` next to a class `X` is the wrapper
/// produced for `X`.
fn link_core_wrappers(table: &mut SymbolTable) {
    let ids: Vec<ClassId> = table.user_classes().collect();
    for id in ids {
        let name = table.name(id).to_string();
        if let Some(elem) = name.strip_suffix(WRAPPER_SUFFIX) {
            if let Some(eid) = table.lookup_class(elem) {
                table.class_mut(id).is_synthetic = true;
                table.class_mut(eid).wrapper = Some(id);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_sources;
    use crate::source::{SourceMap, SourceUnit};

    fn table(src: &str) -> Result<SymbolTable, Vec<Diagnostic>> {
        let mut map = SourceMap::new();
        map.add(SourceUnit::new("t.swarm", src));
        enter(&parse_sources(&map).unwrap(), Dialect::Swarm)
    }

    fn codes(r: Result<SymbolTable, Vec<Diagnostic>>) -> Vec<Code> {
        r.unwrap_err().into_iter().map(|d| d.code).collect()
    }

    #[test]
    fn two_cycle_is_rejected() {
        assert!(codes(table("class A extends B {} class B extends A {}")).contains(&Code::E012));
    }

    #[test]
    fn self_cycle_is_rejected() {
        assert_eq!(codes(table("class A extends A {}")), vec![Code::E012]);
    }

    #[test]
    fn duplicate_and_unknown_classes() {
        assert_eq!(codes(table("class A {} class A {}")), vec![Code::E010]);
        assert_eq!(codes(table("class Object {}")), vec![Code::E010]);
        assert_eq!(codes(table("class A extends Nope {}")), vec![Code::E011]);
    }

    #[test]
    fn duplicate_selectors_across_kinds() {
        let c = codes(table(
            "class A { void f() {} @group void f() {} A() {} A(int x) {} }",
        ));
        assert_eq!(c, vec![Code::E013, Code::E019]);
    }

    #[test]
    fn nested_and_primitive_collections() {
        assert_eq!(
            codes(table("class A { Collection<Collection<A>> x; }")),
            vec![Code::E014]
        );
        assert_eq!(codes(table("class A { Collection<int> x; }")), vec![Code::E014]);
    }

    #[test]
    fn field_hiding_is_rejected() {
        assert_eq!(
            codes(table("class A { int x; } class B extends A { int x; }")),
            vec![Code::E016]
        );
    }

    #[test]
    fn implicit_object_superclass() {
        let t = table("class A {}").unwrap();
        let a = t.lookup_class("A").unwrap();
        assert_eq!(t.superclass_chain(a), vec![a, ClassId::OBJECT]);
        assert_eq!(t.superclass_chain(ClassId::OBJECT), vec![ClassId::OBJECT]);
    }

    #[test]
    fn wrappers_follow_nearest_planned_ancestor() {
        let t = table(
            "class C { @group void a() {} } class F extends C {} \
             class H extends F { @group void b() {} } class P {}",
        )
        .unwrap();
        let id = |n| t.lookup_class(n).unwrap();
        let cw = t.class(id("C")).wrapper.unwrap();
        let hw = t.class(id("H")).wrapper.unwrap();
        assert_eq!(t.name(cw), "C$Group");
        assert_eq!(t.superclass(hw), Some(cw));
        assert_eq!(t.superclass(cw), Some(ClassId::OBJECT));
        assert!(t.class(id("F")).wrapper.is_none());
        assert!(t.class(id("P")).wrapper.is_none());
        assert!(t.class(cw).is_synthetic);
        assert_eq!(t.user_classes().count(), 4);
    }
}
