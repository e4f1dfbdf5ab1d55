use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::symbols::{ClassId, TypeRef};

#[derive(Clone, Debug)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(Rc<str>),
    Null,
    Object(Rc<Object>),
    Collection(Rc<CollectionValue>),
}

#[derive(Debug)]
pub struct Object {
    pub class: ClassId,
    pub fields: RefCell<HashMap<String, Value>>,
}

#[derive(Debug)]
pub struct CollectionValue {
    pub declared_element: ClassId,
    pub elements: RefCell<Vec<Value>>,
}

impl Value {
    /// Zero value of a declared type.
    pub fn default_for(t: TypeRef) -> Value {
        match t {
            TypeRef::Int => Value::Int(0),
            TypeRef::Bool => Value::Bool(false),
            TypeRef::Str => Value::Str("".into()),
            _ => Value::Null,
        }
    }

    /// `==` semantics: primitives by value, references by identity.
    pub fn same(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::Null, Value::Null) => true,
            (Value::Object(a), Value::Object(b)) => Rc::ptr_eq(a, b),
            (Value::Collection(a), Value::Collection(b)) => Rc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// Text form used by `print` and string concatenation.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => f.write_str(s),
            Value::Null => f.write_str("null"),
            Value::Object(_) => f.write_str("<object>"),
            Value::Collection(_) => f.write_str("<collection>"),
        }
    }
}
