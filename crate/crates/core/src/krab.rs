//! Stack-based call-graph construction (KRAB).
//!
//! The traversal keeps an explicit stack of frames, one per method whose
//! body is being scanned. Starting from the root, each call site of the
//! top frame is resolved and every target is handled in one of four ways:
//!
//! * the target is the current method: mark a self-loop (once) and move on;
//! * the target is elsewhere on the stack (mutual recursion): add the call
//!   edge, do not push;
//! * the target was already fully explored: add the call edge, do not push;
//! * otherwise: add the call edge and push a frame for the target.
//!
//! When a frame runs out of call sites it is popped and a predecessor edge
//! is laid from the popped method to the new top of stack. A run that
//! finishes with frames still on the stack has skipped a return; see
//! [`validate_traversal`].

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::callgraph::{reachable_from_entries, CallGraph};
use crate::classic::find_entry_points;
use crate::frontend::{MethodId, ProgramModel};
use crate::hierarchy::{resolve_targets, ClassHierarchy, HierarchyError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub method: MethodId,
    /// Next call site to scan.
    pub cursor: usize,
    /// Targets of the site at `cursor` still to be handled, last first.
    pending: Option<Vec<MethodId>>,
    /// Set when the frame's pop was suppressed by fault injection.
    skipped: bool,
}

impl Frame {
    fn new(method: MethodId) -> Self {
        Self {
            method,
            cursor: 0,
            pending: None,
            skipped: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TraversalState {
    pub stack: Vec<Frame>,
    /// Methods whose bodies have been fully scanned.
    pub visited: HashSet<MethodId>,
    /// Call targets handled, one per (site, target) pair.
    pub steps: u64,
    /// Sum over pushes of the stack depth just before the push.
    pub weighted_steps: u64,
    pub pushes: u64,
    pub pops: u64,
    on_stack: HashSet<MethodId>,
}

impl TraversalState {
    fn active_top(&self) -> Option<usize> {
        self.stack.iter().rposition(|f| !f.skipped)
    }
}

/// The stack was not empty after the last pop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkipFault {
    pub residual: Vec<MethodId>,
}

impl fmt::Display for SkipFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.residual.iter().map(ToString::to_string).collect();
        write!(
            f,
            "stack not empty after traversal: {} residual frame(s): {}",
            self.residual.len(),
            names.join(", ")
        )
    }
}

impl std::error::Error for SkipFault {}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum KrabError {
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error("entry method `{0}` is not declared")]
    MissingEntry(MethodId),
    #[error("edited method `{0}` is not declared")]
    UnknownMethod(MethodId),
    #[error("no entry point: no method named `main`")]
    NoEntryPoint,
    #[error(transparent)]
    Skip(#[from] SkipFault),
}

struct Traversal<'a> {
    model: &'a ProgramModel,
    hierarchy: &'a ClassHierarchy,
    graph: CallGraph,
    state: TraversalState,
    suppress_pops: usize,
}

impl Traversal<'_> {
    fn push(&mut self, method: MethodId) {
        debug_assert!(
            !self.state.on_stack.contains(&method),
            "frames on the stack must be distinct"
        );
        self.state.weighted_steps += self.state.on_stack.len() as u64;
        self.state.pushes += 1;
        self.state.on_stack.insert(method.clone());
        self.state.stack.push(Frame::new(method));
    }

    fn pop(&mut self, at: usize) {
        let method = self.state.stack[at].method.clone();
        self.state.on_stack.remove(&method);
        self.state.visited.insert(method.clone());
        if self.suppress_pops > 0 {
            self.suppress_pops -= 1;
            self.state.stack[at].skipped = true;
            return;
        }
        self.state.stack.remove(at);
        self.state.pops += 1;
        if let Some(parent) = self.state.active_top() {
            let parent = self.state.stack[parent].method.clone();
            self.graph.add_predecessor(&method, &parent);
        }
    }

    fn handle(&mut self, caller: &MethodId, site: usize, target: MethodId) {
        self.state.steps += 1;
        self.graph.add_link(caller, &target, site);
        if &target == caller
            || self.state.on_stack.contains(&target)
            || self.state.visited.contains(&target)
        {
            return;
        }
        self.push(target);
    }

    fn run(&mut self, root: MethodId) -> Result<(), HierarchyError> {
        self.push(root);
        while let Some(top) = self.state.active_top() {
            debug_assert!(
                self.state.stack.iter().any(|f| f.skipped) || top + 1 == self.state.stack.len(),
                "without faults the active frame is the physical top"
            );
            let frame = &mut self.state.stack[top];
            let caller = frame.method.clone();
            if frame.pending.is_none() {
                let decl = self
                    .model
                    .method(&caller)
                    .expect("frames hold declared methods");
                let Some(site) = decl.call_sites.get(frame.cursor) else {
                    self.pop(top);
                    continue;
                };
                let targets = resolve_targets(self.model, self.hierarchy, &caller, site, None)?;
                frame.pending = Some(targets.into_iter().rev().collect());
            }
            let site = frame.cursor;
            match frame.pending.as_mut().and_then(Vec::pop) {
                Some(target) => self.handle(&caller, site, target),
                None => {
                    frame.pending = None;
                    frame.cursor += 1;
                }
            }
        }
        Ok(())
    }
}

fn traverse(
    model: &ProgramModel,
    h: &ClassHierarchy,
    graph: CallGraph,
    visited: HashSet<MethodId>,
    root: MethodId,
    suppress_pops: usize,
) -> Result<(CallGraph, TraversalState), KrabError> {
    let mut t = Traversal {
        model,
        hierarchy: h,
        graph,
        state: TraversalState {
            visited,
            ..TraversalState::default()
        },
        suppress_pops,
    };
    t.run(root)?;
    Ok((t.graph, t.state))
}

/// Builds the call graph reachable from `entry` with the stack traversal.
///
/// The returned state is not checked; pass it to [`validate_traversal`].
pub fn krab_build(
    model: &ProgramModel,
    h: &ClassHierarchy,
    entry: &MethodId,
) -> Result<(CallGraph, TraversalState), KrabError> {
    build_with_faults(model, h, entry, 0)
}

fn build_with_faults(
    model: &ProgramModel,
    h: &ClassHierarchy,
    entry: &MethodId,
    suppress_pops: usize,
) -> Result<(CallGraph, TraversalState), KrabError> {
    if model.method(entry).is_none() {
        return Err(KrabError::MissingEntry(entry.clone()));
    }
    let mut graph = CallGraph::new();
    graph.add_entry(entry.clone());
    traverse(
        model,
        h,
        graph,
        HashSet::new(),
        entry.clone(),
        suppress_pops,
    )
}

/// Ok iff the stack emptied; otherwise the residual frames, bottom first.
pub fn validate_traversal(state: &TraversalState) -> Result<(), SkipFault> {
    if state.stack.is_empty() {
        Ok(())
    } else {
        Err(SkipFault {
            residual: state.stack.iter().map(|f| f.method.clone()).collect(),
        })
    }
}

/// Updates `prior` after the body of `edited` changed.
///
/// The edited method's outgoing edges are dropped and its body is traversed
/// again with every other known method treated as already explored, so only
/// methods new to the graph are descended into. Nodes no longer reachable
/// from the graph's entries are dropped afterwards.
pub fn krab_incremental(
    model: &ProgramModel,
    h: &ClassHierarchy,
    prior: &CallGraph,
    edited: &MethodId,
    entry: &MethodId,
) -> Result<(CallGraph, TraversalState), KrabError> {
    if model.method(entry).is_none() {
        return Err(KrabError::MissingEntry(entry.clone()));
    }
    if model.method(edited).is_none() {
        return Err(KrabError::UnknownMethod(edited.clone()));
    }
    let mut graph = prior.clone();
    if !graph.contains(edited) {
        return Ok((graph, TraversalState::default()));
    }
    graph.remove_outgoing(edited);
    let visited = graph
        .nodes()
        .iter()
        .filter(|n| *n != edited)
        .cloned()
        .collect();
    let (mut graph, state) = traverse(model, h, graph, visited, edited.clone(), 0)?;
    let reachable = reachable_from_entries(&graph);
    graph.retain_nodes(|n| reachable.contains(n));
    graph.repair_predecessors();
    Ok((graph, state))
}

/// Runs [`krab_build`] from every `main` in declaration order and merges the
/// graphs. Each run must validate.
pub fn krab_multi_entry(
    model: &ProgramModel,
    h: &ClassHierarchy,
) -> Result<(CallGraph, Vec<TraversalState>), KrabError> {
    let entries = find_entry_points(model);
    if entries.is_empty() {
        return Err(KrabError::NoEntryPoint);
    }
    let mut merged = CallGraph::new();
    let mut states = Vec::with_capacity(entries.len());
    for entry in &entries {
        let (graph, state) = krab_build(model, h, entry)?;
        validate_traversal(&state)?;
        merged.union_with(&graph);
        states.push(state);
    }
    Ok((merged, states))
}

/// Methods left on the stack, for diagnostics.
pub fn residual_methods(state: &TraversalState) -> BTreeSet<MethodId> {
    state.stack.iter().map(|f| f.method.clone()).collect()
}

/// Fault injection for exercising skip detection. Not used by the builders.
#[doc(hidden)]
pub mod fault {
    use super::*;

    /// Like [`krab_build`], but the first `k` pops leave their frame behind.
    pub fn krab_build_suppressing_pops(
        model: &ProgramModel,
        h: &ClassHierarchy,
        entry: &MethodId,
        k: usize,
    ) -> Result<(CallGraph, TraversalState), KrabError> {
        build_with_faults(model, h, entry, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::callgraph::{graphs_equal, unreachable_methods};
    use crate::frontend::{apply_edit, parse_patch, parse_program};
    use crate::hierarchy::build_hierarchy;

    fn id(s: &str) -> MethodId {
        s.parse().unwrap()
    }

    fn build(src: &str) -> (ProgramModel, ClassHierarchy, CallGraph, TraversalState) {
        let model = parse_program(src).unwrap();
        let h = build_hierarchy(&model);
        let (g, s) = krab_build(&model, &h, &id("A.main")).unwrap();
        (model, h, g, s)
    }

    fn edges(g: &CallGraph) -> Vec<String> {
        g.call_edges()
            .iter()
            .map(|e| format!("{}->{}", e.caller, e.callee))
            .collect()
    }

    fn preds(g: &CallGraph) -> Vec<String> {
        g.predecessors()
            .iter()
            .map(|(c, p)| format!("{c}->{p}"))
            .collect()
    }

    #[test]
    fn lone_main() {
        let (_, _, g, s) = build("class A { def main(){} }");
        assert_eq!(g.nodes().len(), 1);
        assert!(g.call_edges().is_empty());
        assert_eq!(s.steps, 0);
        assert!(s.stack.is_empty());
        assert_eq!(validate_traversal(&s), Ok(()));
    }

    #[test]
    fn p1_trace() {
        let (_, _, g, s) = build("class A { def main() { f(); g(); } def f() {} def g() {} }");
        assert_eq!(edges(&g), ["A.main->A.f", "A.main->A.g"]);
        assert_eq!(preds(&g), ["A.f->A.main", "A.g->A.main"]);
        assert_eq!(s.steps, 2);
        assert_eq!(s.weighted_steps, 2);
        assert_eq!(s.pushes, 3);
        assert_eq!(s.pops, 3);
    }

    #[test]
    fn direct_recursion_loops_once() {
        let (_, _, g, s) = build("class A { def main(){ r(); } def r(){ r(); } }");
        assert_eq!(edges(&g), ["A.main->A.r"]);
        assert_eq!(g.self_loops().iter().collect::<Vec<_>>(), [&id("A.r")]);
        assert_eq!(preds(&g), ["A.r->A.main"]);
        assert_eq!(s.steps, 2);
        assert!(validate_traversal(&s).is_ok());
    }

    #[test]
    fn mutual_recursion_terminates_with_back_edge() {
        let (_, _, g, s) = build("class A { def main(){ a(); } def a(){ b(); } def b(){ a(); } }");
        assert_eq!(edges(&g), ["A.a->A.b", "A.b->A.a", "A.main->A.a"]);
        assert!(g.self_loops().is_empty());
        assert_eq!(preds(&g), ["A.a->A.main", "A.b->A.a"]);
        assert_eq!(s.pushes, s.pops);
    }

    #[test]
    fn explored_callees_are_not_rescanned() {
        let (_, _, g, s) =
            build("class A { def main(){ f(); g(); } def f(){ h(); } def g(){ h(); } def h(){} }");
        assert_eq!(
            edges(&g),
            ["A.f->A.h", "A.g->A.h", "A.main->A.f", "A.main->A.g"]
        );
        assert_eq!(s.pushes, 4);
        assert_eq!(g.predecessors()[&id("A.h")], id("A.f"));
    }

    #[test]
    fn polymorphic_site_visits_targets_in_order() {
        let src = "
            class A { def main() { var x: B; x.m(); } }
            class B { def m() { leaf(); } def leaf() {} }
            class C extends B { def m() {} }
        ";
        let (_, _, g, s) = build(src);
        assert_eq!(edges(&g), ["A.main->B.m", "A.main->C.m", "B.m->B.leaf"]);
        assert_eq!(s.steps, 3);
        assert_eq!(preds(&g), ["B.leaf->B.m", "B.m->A.main", "C.m->A.main"]);
    }

    #[test]
    fn chain_weights_are_triangular() {
        for n in 1..=12u64 {
            let mut src = String::from("class A { def main() { f1(); }");
            for i in 1..=n {
                if i < n {
                    src.push_str(&format!(" def f{i}() {{ f{}(); }}", i + 1));
                } else {
                    src.push_str(&format!(" def f{i}() {{ }}"));
                }
            }
            src.push_str(" }");
            let (_, _, _, s) = build(&src);
            assert_eq!(s.steps, n);
            assert_eq!(s.weighted_steps, n * (n + 1) / 2);
        }
    }

    #[test]
    fn missing_entry() {
        let model = parse_program("class A { def f() {} }").unwrap();
        let h = build_hierarchy(&model);
        assert_eq!(
            krab_build(&model, &h, &id("A.main")).unwrap_err(),
            KrabError::MissingEntry(id("A.main"))
        );
        assert_eq!(
            krab_multi_entry(&model, &h).unwrap_err(),
            KrabError::NoEntryPoint
        );
    }

    #[test]
    fn suppressed_pops_leave_residual_frames() {
        let model = parse_program(
            "class A { def main(){ a(); } def a(){ b(); } def b(){ c(); } def c(){} }",
        )
        .unwrap();
        let h = build_hierarchy(&model);
        for k in 1..=4 {
            let (_, s) = fault::krab_build_suppressing_pops(&model, &h, &id("A.main"), k).unwrap();
            let fault = validate_traversal(&s).unwrap_err();
            assert_eq!(fault.residual.len(), k);
            assert_eq!(s.pops as usize, 4 - k);
        }
        let (g, s) = fault::krab_build_suppressing_pops(&model, &h, &id("A.main"), 1).unwrap();
        // the skipped frame never returned, so it has no predecessor edge
        assert_eq!(
            validate_traversal(&s).unwrap_err().residual,
            vec![id("A.c")]
        );
        assert!(!g.predecessors().contains_key(&id("A.c")));
        assert_eq!(g.call_edges().len(), 3);
    }

    #[test]
    fn skipped_frame_does_not_hide_siblings() {
        let model = parse_program("class A { def main(){ a(); b(); } def a(){ } def b(){ a(); } }")
            .unwrap();
        let h = build_hierarchy(&model);
        let (g, s) = fault::krab_build_suppressing_pops(&model, &h, &id("A.main"), 1).unwrap();
        assert_eq!(
            validate_traversal(&s).unwrap_err().residual,
            vec![id("A.a")]
        );
        assert_eq!(g.call_edges().len(), 3);
        assert_eq!(g.predecessors()[&id("A.b")], id("A.main"));
    }

    fn incremental(src: &str, patch: &str) -> (ProgramModel, CallGraph, CallGraph, TraversalState) {
        let (model, h, prior, _) = build(src);
        let delta = parse_patch(patch).unwrap();
        let edited = apply_edit(&model, &delta).unwrap();
        let (g, s) = krab_incremental(&edited, &h, &prior, &delta.method, &id("A.main")).unwrap();
        let (full, _) = krab_build(&edited, &h, &id("A.main")).unwrap();
        assert!(graphs_equal(&g, &full));
        (edited, prior, g, s)
    }

    #[test]
    fn no_op_edit() {
        let (_, prior, g, _) = incremental(
            "class A { def main(){ f(); } def f(){} }",
            "@@ A.main\ndef main() { f(); }",
        );
        assert!(graphs_equal(&g, &prior));
    }

    #[test]
    fn new_self_call_on_leaf() {
        let (_, prior, g, s) = incremental(
            "class A { def main(){ f(); g(); } def f(){} def g(){} }",
            "@@ A.f\ndef f() { f(); }",
        );
        assert!(g.self_loops().contains(&id("A.f")));
        assert_eq!(g.call_edges(), prior.call_edges());
        assert_eq!(s.pushes, 1);
    }

    #[test]
    fn removed_call_drops_subtree() {
        let (edited, _, g, _) = incremental(
            "class A { def main(){ f(); } def f(){ g(); } def g(){} }",
            "@@ A.main\ndef main() { }",
        );
        assert_eq!(g.nodes().len(), 1);
        assert_eq!(unreachable_methods(&edited, &g).len(), 2);
    }

    #[test]
    fn new_callees_are_explored() {
        let (_, _, g, s) = incremental(
            "class A { def main(){ f(); } def f(){} def n1(){ n2(); } def n2(){ f(); } }",
            "@@ A.f\ndef f() { n1(); }",
        );
        assert_eq!(s.pushes, 3);
        assert_eq!(g.predecessors()[&id("A.n2")], id("A.n1"));
    }

    #[test]
    fn rerouted_callee_gets_a_live_predecessor() {
        let (_, prior, g, _) = incremental(
            "class A { def main(){ f(); } def f(){ g(); } def g(){} def h(){ g(); } }",
            "@@ A.f\ndef f() { h(); }",
        );
        assert_eq!(prior.predecessors()[&id("A.g")], id("A.f"));
        assert_eq!(g.predecessors()[&id("A.g")], id("A.h"));
        assert_eq!(g.predecessors()[&id("A.h")], id("A.f"));
    }

    #[test]
    fn multi_entry_union() {
        let model = parse_program(
            "class A { def main(){ f(); } def f(){} } class B { def main(){ g(); } def g(){} }",
        )
        .unwrap();
        let h = build_hierarchy(&model);
        let (g, states) = krab_multi_entry(&model, &h).unwrap();
        assert_eq!(states.len(), 2);
        assert_eq!(g.entries().len(), 2);
        assert_eq!(crate::callgraph::connected_components(&g).len(), 2);
    }

    #[test]
    fn multi_entry_keeps_entries_parentless() {
        // A.main reaches B.main through a typed local; B.main is still a root.
        let model = parse_program(
            "class A { def main(){ var b: B; b.main(); } } class B { def main(){ var a: A; a.main(); } }",
        )
        .unwrap();
        let h = build_hierarchy(&model);
        let (g, _) = krab_multi_entry(&model, &h).unwrap();
        assert!(g.predecessors().is_empty());
        assert_eq!(g.call_edges().len(), 2);
    }
}
