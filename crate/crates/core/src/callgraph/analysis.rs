use std::collections::{BTreeMap, BTreeSet};

use super::CallGraph;
use crate::frontend::{MethodId, ProgramModel};

/// Methods reachable from the graph's entries along directed call edges.
pub fn reachable_from_entries(g: &CallGraph) -> BTreeSet<MethodId> {
    let mut seen: BTreeSet<MethodId> = BTreeSet::new();
    let mut stack: Vec<&MethodId> = g.entries().iter().collect();
    while let Some(m) = stack.pop() {
        if !seen.insert(m.clone()) {
            continue;
        }
        for e in g.callees_of(m) {
            if !seen.contains(&e.callee) {
                stack.push(&e.callee);
            }
        }
    }
    seen
}

/// Declared methods that no entry can reach.
pub fn unreachable_methods(model: &ProgramModel, g: &CallGraph) -> BTreeSet<MethodId> {
    let live = reachable_from_entries(g);
    model
        .methods()
        .map(|m| m.id())
        .filter(|id| !live.contains(id))
        .collect()
}

/// Weakly connected components over call edges, each sorted, ordered by
/// smallest member.
pub fn connected_components(g: &CallGraph) -> Vec<BTreeSet<MethodId>> {
    let mut adjacent: BTreeMap<&MethodId, Vec<&MethodId>> =
        g.nodes().iter().map(|n| (n, Vec::new())).collect();
    for e in g.call_edges() {
        adjacent.entry(&e.caller).or_default().push(&e.callee);
        adjacent.entry(&e.callee).or_default().push(&e.caller);
    }

    let mut assigned: BTreeSet<&MethodId> = BTreeSet::new();
    let mut components = Vec::new();
    // BTreeMap iteration visits the smallest unassigned node first, so the
    // components come out already ordered.
    for start in adjacent.keys() {
        if assigned.contains(start) {
            continue;
        }
        let mut component = BTreeSet::new();
        let mut stack = vec![*start];
        assigned.insert(start);
        while let Some(n) = stack.pop() {
            component.insert(n.clone());
            for next in &adjacent[n] {
                if assigned.insert(next) {
                    stack.push(next);
                }
            }
        }
        components.push(component);
    }
    components
}
