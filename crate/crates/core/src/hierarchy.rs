//! Class hierarchy and call-site resolution.
//!
//! Dispatch follows Class Hierarchy Analysis: a call through a local of
//! static type `T` may land in any class of `T`'s subtype cone, and each
//! class answers with the nearest definition found walking up its
//! superclass chain. An optional [`LiveTypeSet`] narrows the cone to classes
//! that are actually instantiated (RTA-style refinement).

use std::collections::{BTreeMap, BTreeSet};

use crate::callgraph::{reachable_from_entries, CallGraph};
use crate::frontend::{CallSite, MethodId, ProgramModel, Receiver};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unresolved call `{target}` at site {site} of `{caller}`")]
    Unresolved {
        caller: MethodId,
        site: usize,
        target: String,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassHierarchy {
    parent: BTreeMap<String, Option<String>>,
    children: BTreeMap<String, BTreeSet<String>>,
}

impl ClassHierarchy {
    pub fn parent(&self, class: &str) -> Option<&str> {
        self.parent.get(class)?.as_deref()
    }

    pub fn children(&self, class: &str) -> Option<&BTreeSet<String>> {
        self.children.get(class)
    }

    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.parent.keys().map(String::as_str)
    }

    pub fn contains(&self, class: &str) -> bool {
        self.parent.contains_key(class)
    }

    /// `class` together with all of its transitive subclasses.
    pub fn cone(&self, class: &str) -> Result<BTreeSet<String>, HierarchyError> {
        if !self.contains(class) {
            return Err(HierarchyError::UnknownClass(class.to_string()));
        }
        let mut cone = BTreeSet::new();
        let mut stack = vec![class];
        while let Some(c) = stack.pop() {
            if cone.insert(c.to_string()) {
                stack.extend(self.children[c].iter().map(String::as_str));
            }
        }
        Ok(cone)
    }

    /// True iff walking parent links from `sub` reaches `sup`.
    pub fn is_subclass_of(&self, sub: &str, sup: &str) -> bool {
        let mut cur = Some(sub);
        while let Some(c) = cur {
            if c == sup {
                return true;
            }
            cur = self.parent(c);
        }
        false
    }
}

pub fn build_hierarchy(model: &ProgramModel) -> ClassHierarchy {
    let mut h = ClassHierarchy::default();
    for class in model.classes.values() {
        h.parent
            .insert(class.name.clone(), class.superclass.clone());
        h.children.entry(class.name.clone()).or_default();
        if let Some(sup) = &class.superclass {
            h.children
                .entry(sup.clone())
                .or_default()
                .insert(class.name.clone());
        }
    }
    h
}

/// Classes known to be instantiated somewhere live.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LiveTypeSet {
    pub classes: BTreeSet<String>,
}

impl LiveTypeSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn all(model: &ProgramModel) -> Self {
        Self {
            classes: model.classes.keys().cloned().collect(),
        }
    }

    pub fn contains(&self, class: &str) -> bool {
        self.classes.contains(class)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for LiveTypeSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self {
            classes: iter.into_iter().map(Into::into).collect(),
        }
    }
}

/// Nearest definition of `method` seen from `class`, walking up the chain.
pub fn lookup_method(model: &ProgramModel, class: &str, method: &str) -> Option<MethodId> {
    let mut cur = model.class(class);
    while let Some(decl) = cur {
        if decl.methods.contains_key(method) {
            return Some(MethodId::new(&decl.name, method));
        }
        cur = decl.superclass.as_deref().and_then(|s| model.class(s));
    }
    None
}

/// Target methods of one call site, ordered by `(class, method)`.
///
/// Implicit-receiver calls are statically bound and never filtered by
/// `live`. With `live` given, a local-receiver call keeps only the targets
/// looked up from live classes of the cone, so the result is always a subset
/// of the unrefined one.
pub fn resolve_targets(
    model: &ProgramModel,
    h: &ClassHierarchy,
    caller: &MethodId,
    site: &CallSite,
    live: Option<&LiveTypeSet>,
) -> Result<BTreeSet<MethodId>, HierarchyError> {
    let unresolved = || HierarchyError::Unresolved {
        caller: caller.clone(),
        site: site.index,
        target: site.target_name.clone(),
    };
    match &site.receiver {
        Receiver::This => {
            let target = lookup_method(model, &caller.class_name, &site.target_name)
                .ok_or_else(unresolved)?;
            Ok(BTreeSet::from([target]))
        }
        Receiver::Local(var) => {
            let static_ty = model
                .method(caller)
                .and_then(|m| m.locals.get(var))
                .ok_or_else(unresolved)?;
            lookup_method(model, static_ty, &site.target_name).ok_or_else(unresolved)?;
            let mut targets = BTreeSet::new();
            for class in h.cone(static_ty)? {
                if live.is_some_and(|l| !l.contains(&class)) {
                    continue;
                }
                let target =
                    lookup_method(model, &class, &site.target_name).ok_or_else(unresolved)?;
                targets.insert(target);
            }
            Ok(targets)
        }
    }
}

/// Classes instantiated by any method reachable from the graph's entries.
pub fn propagate_live_types(model: &ProgramModel, graph: &CallGraph) -> LiveTypeSet {
    let mut live = LiveTypeSet::empty();
    for m in reachable_from_entries(graph) {
        if let Some(decl) = model.method(&m) {
            live.classes.extend(decl.instantiations.iter().cloned());
        }
    }
    live
}
