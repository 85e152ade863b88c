//! The call graph shared by both builders.
//!
//! Nodes are methods. Call edges form a multigraph: two call sites in the
//! same caller that reach the same callee give two edges, told apart by the
//! site index. A method calling itself is recorded once as a self-loop
//! marker rather than as plain edges. Predecessor edges (child to parent)
//! are the return links laid down by the stack traversal; they form a forest
//! and take no part in semantic equality.

mod analysis;
mod export;

use std::collections::{BTreeMap, BTreeSet};

use crate::frontend::MethodId;

pub use analysis::{connected_components, reachable_from_entries, unreachable_methods};
pub use export::{export_dot, export_json, JsonGraph};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CallEdge {
    pub caller: MethodId,
    pub callee: MethodId,
    pub site: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CallGraph {
    nodes: BTreeSet<MethodId>,
    call_edges: BTreeSet<CallEdge>,
    self_loops: BTreeSet<MethodId>,
    /// child -> parent
    predecessors: BTreeMap<MethodId, MethodId>,
    entries: BTreeSet<MethodId>,
}

impl CallGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> &BTreeSet<MethodId> {
        &self.nodes
    }

    pub fn call_edges(&self) -> &BTreeSet<CallEdge> {
        &self.call_edges
    }

    pub fn self_loops(&self) -> &BTreeSet<MethodId> {
        &self.self_loops
    }

    pub fn predecessors(&self) -> &BTreeMap<MethodId, MethodId> {
        &self.predecessors
    }

    pub fn entries(&self) -> &BTreeSet<MethodId> {
        &self.entries
    }

    pub fn contains(&self, method: &MethodId) -> bool {
        self.nodes.contains(method)
    }

    pub fn add_node(&mut self, method: MethodId) {
        self.nodes.insert(method);
    }

    pub fn add_entry(&mut self, method: MethodId) {
        self.nodes.insert(method.clone());
        self.entries.insert(method);
    }

    /// Records that `caller` calls `callee` from call site `site`.
    ///
    /// Self-calls set the self-loop marker; it is set at most once no matter
    /// how many self-call sites exist.
    pub fn add_link(&mut self, caller: &MethodId, callee: &MethodId, site: usize) {
        self.nodes.insert(caller.clone());
        if caller == callee {
            self.self_loops.insert(caller.clone());
            return;
        }
        self.nodes.insert(callee.clone());
        self.call_edges.insert(CallEdge {
            caller: caller.clone(),
            callee: callee.clone(),
            site,
        });
    }

    /// Records a return link from `child` to `parent`.
    ///
    /// Returns `false` and leaves the graph unchanged if `child` already has
    /// a parent, is an entry, or if the link would close a cycle.
    pub fn add_predecessor(&mut self, child: &MethodId, parent: &MethodId) -> bool {
        if child == parent || self.entries.contains(child) || self.predecessors.contains_key(child)
        {
            return false;
        }
        let mut cur = parent;
        while let Some(up) = self.predecessors.get(cur) {
            if up == child {
                return false;
            }
            cur = up;
        }
        self.nodes.insert(child.clone());
        self.nodes.insert(parent.clone());
        self.predecessors.insert(child.clone(), parent.clone());
        true
    }

    /// Outgoing call edges of `method`, in site order.
    pub fn callees_of<'a>(
        &'a self,
        method: &'a MethodId,
    ) -> impl Iterator<Item = &'a CallEdge> + 'a {
        let lo = CallEdge {
            caller: method.clone(),
            callee: MethodId::new("", ""),
            site: 0,
        };
        self.call_edges
            .range(lo..)
            .take_while(move |e| &e.caller == method)
    }

    /// Drops every call edge leaving `method` together with its self-loop.
    pub fn remove_outgoing(&mut self, method: &MethodId) {
        self.call_edges.retain(|e| &e.caller != method);
        self.self_loops.remove(method);
    }

    /// Keeps only the nodes accepted by `keep`, discarding everything that
    /// touches a removed node.
    pub fn retain_nodes(&mut self, mut keep: impl FnMut(&MethodId) -> bool) {
        self.nodes.retain(|n| keep(n));
        let nodes = &self.nodes;
        self.call_edges
            .retain(|e| nodes.contains(&e.caller) && nodes.contains(&e.callee));
        self.self_loops.retain(|n| nodes.contains(n));
        self.entries.retain(|n| nodes.contains(n));
        self.predecessors
            .retain(|c, p| nodes.contains(c) && nodes.contains(p));
    }

    /// Follows predecessor links up from `method`; `None` if it is not a node.
    pub fn root_of<'a>(&'a self, method: &'a MethodId) -> Option<&'a MethodId> {
        if !self.nodes.contains(method) {
            return None;
        }
        let mut cur = method;
        while let Some(up) = self.predecessors.get(cur) {
            cur = up;
        }
        Some(cur)
    }

    /// Drops predecessor links whose parent no longer calls the child, then
    /// re-attaches orphaned non-entry nodes under one of their callers.
    pub fn repair_predecessors(&mut self) {
        let calls: BTreeSet<(MethodId, MethodId)> = self
            .call_edges
            .iter()
            .map(|e| (e.caller.clone(), e.callee.clone()))
            .collect();
        self.predecessors
            .retain(|c, p| calls.contains(&(p.clone(), c.clone())));
        // Whole subtrees may have come loose; their members start over.
        let floating: Vec<MethodId> = self
            .predecessors
            .keys()
            .filter(|c| self.root_of(c).is_some_and(|r| !self.entries.contains(r)))
            .cloned()
            .collect();
        for c in floating {
            self.predecessors.remove(&c);
        }
        // An orphan attaches once one of its callers hangs off an entry, so
        // repeat until nothing changes.
        loop {
            let mut changed = false;
            for (caller, callee) in &calls {
                if !self.predecessors.contains_key(callee)
                    && self
                        .root_of(caller)
                        .is_some_and(|r| self.entries.contains(r))
                    && self.add_predecessor(callee, caller)
                {
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Merges `other` into `self`. Predecessor links from `other` are kept
    /// only where they do not break the forest shape.
    pub fn union_with(&mut self, other: &CallGraph) {
        self.nodes.extend(other.nodes.iter().cloned());
        self.call_edges.extend(other.call_edges.iter().cloned());
        self.self_loops.extend(other.self_loops.iter().cloned());
        self.entries.extend(other.entries.iter().cloned());
        // An entry never has a parent.
        let entries = &self.entries;
        self.predecessors.retain(|c, _| !entries.contains(c));
        for (child, parent) in &other.predecessors {
            self.add_predecessor(child, parent);
        }
    }

    /// Call edges as a multiset of (caller, callee) pairs, site indices dropped.
    pub fn edge_multiset(&self) -> BTreeMap<(&MethodId, &MethodId), usize> {
        let mut counts = BTreeMap::new();
        for e in &self.call_edges {
            *counts.entry((&e.caller, &e.callee)).or_insert(0) += 1;
        }
        counts
    }
}

/// Semantic equality of two call graphs: nodes, call-edge multisets (site
/// indices ignored), self-loops and entries. Predecessor edges are ignored.
pub fn graphs_equal(a: &CallGraph, b: &CallGraph) -> bool {
    a.nodes == b.nodes
        && a.self_loops == b.self_loops
        && a.entries == b.entries
        && a.edge_multiset() == b.edge_multiset()
}
