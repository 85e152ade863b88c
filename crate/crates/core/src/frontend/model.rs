use std::fmt;
use std::str::FromStr;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

/// A method named by its declaring class, e.g. `A.main`.
///
/// Ordering is lexicographic on `(class_name, method_name)`; every
/// ordered collection of targets in this crate relies on it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MethodId {
    pub class_name: String,
    pub method_name: String,
}

impl MethodId {
    pub fn new(class_name: impl Into<String>, method_name: impl Into<String>) -> Self {
        Self {
            class_name: class_name.into(),
            method_name: method_name.into(),
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.class_name, self.method_name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("expected `Class.method`, got `{0}`")]
pub struct MethodIdParseError(pub String);

impl FromStr for MethodId {
    type Err = MethodIdParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let valid = |part: &str| {
            let mut chars = part.chars();
            matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        match s.trim().split_once('.') {
            Some((class, method)) if valid(class) && valid(method) => {
                Ok(MethodId::new(class, method))
            }
            _ => Err(MethodIdParseError(s.to_string())),
        }
    }
}

/// Who receives a call: the enclosing object (`m();`) or a typed local (`x.m();`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Receiver {
    This,
    Local(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CallSite {
    /// 0-based position among the method's call sites.
    pub index: usize,
    pub receiver: Receiver,
    pub target_name: String,
}

/// One statement of a method body, in source order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Var { name: String, ty: String },
    New(String),
    Call { receiver: Receiver, target: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodDecl {
    pub owner: String,
    pub name: String,
    /// Local variable to its static class type.
    pub locals: IndexMap<String, String>,
    /// Classes instantiated by `new C;` statements.
    pub instantiations: IndexSet<String>,
    pub call_sites: Vec<CallSite>,
}

impl MethodDecl {
    pub fn id(&self) -> MethodId {
        MethodId::new(&self.owner, &self.name)
    }

    /// The body as a statement list: locals, then instantiations, then calls.
    pub fn body(&self) -> Vec<Stmt> {
        let locals = self.locals.iter().map(|(name, ty)| Stmt::Var {
            name: name.clone(),
            ty: ty.clone(),
        });
        let news = self.instantiations.iter().cloned().map(Stmt::New);
        let calls = self.call_sites.iter().map(|site| Stmt::Call {
            receiver: site.receiver.clone(),
            target: site.target_name.clone(),
        });
        locals.chain(news).chain(calls).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub superclass: Option<String>,
    pub methods: IndexMap<String, MethodDecl>,
}

/// A parsed and validated MiniJ source unit. Classes and methods iterate in
/// declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgramModel {
    pub classes: IndexMap<String, ClassDecl>,
}

impl ProgramModel {
    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.get(name)
    }

    pub fn method(&self, id: &MethodId) -> Option<&MethodDecl> {
        self.classes
            .get(&id.class_name)?
            .methods
            .get(&id.method_name)
    }

    pub fn methods(&self) -> impl Iterator<Item = &MethodDecl> {
        self.classes.values().flat_map(|c| c.methods.values())
    }

    pub fn method_count(&self) -> usize {
        self.classes.values().map(|c| c.methods.len()).sum()
    }

    pub fn call_site_count(&self) -> usize {
        self.methods().map(|m| m.call_sites.len()).sum()
    }
}

/// A replacement body for one method: the unit of incremental analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    pub method: MethodId,
    pub new_body: Vec<Stmt>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_id_roundtrips_through_display() {
        let id: MethodId = "Shape.area".parse().unwrap();
        assert_eq!(id, MethodId::new("Shape", "area"));
        assert_eq!(id.to_string(), "Shape.area");
    }

    #[test]
    fn method_id_rejects_malformed_text() {
        for bad in ["main", "A.", ".m", "A.b.c", "1A.m", ""] {
            assert!(bad.parse::<MethodId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn method_ids_order_by_class_then_method() {
        let mut ids = [
            MethodId::new("B", "a"),
            MethodId::new("A", "z"),
            MethodId::new("A", "b"),
        ];
        ids.sort();
        let shown: Vec<_> = ids.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["A.b", "A.z", "B.a"]);
    }
}
