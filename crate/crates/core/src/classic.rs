//! Worklist call-graph construction over Class Hierarchy Analysis.
//!
//! The build runs the classic loop: build the hierarchy, seed the worklist
//! with every `main`, then repeatedly pull a method, resolve each of its
//! call sites and link the targets, enqueueing targets seen for the first
//! time. With live types enabled, each drained batch is followed by a
//! live-type propagation; methods whose resolved targets change under the
//! new live set go back on the worklist until nothing changes.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::callgraph::{reachable_from_entries, CallGraph};
use crate::frontend::{MethodId, ProgramModel};
use crate::hierarchy::{
    build_hierarchy, propagate_live_types, resolve_targets, ClassHierarchy, HierarchyError,
    LiveTypeSet,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClassicError {
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error("edited method `{0}` is not declared")]
    UnknownMethod(MethodId),
}

/// FIFO queue of methods with a membership guard: a method is never queued
/// twice at once.
#[derive(Clone, Debug, Default)]
pub struct Worklist {
    queue: VecDeque<MethodId>,
    enqueued: HashSet<MethodId>,
}

impl Worklist {
    /// Returns `false` if the method was already waiting.
    pub fn push(&mut self, method: MethodId) -> bool {
        if self.enqueued.insert(method.clone()) {
            self.queue.push_back(method);
            true
        } else {
            false
        }
    }

    pub fn pull(&mut self) -> Option<MethodId> {
        let method = self.queue.pop_front()?;
        self.enqueued.remove(&method);
        Some(method)
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Worklist pulls.
    pub methods_processed: usize,
    /// Call-site resolutions, including the checks that decide reprocessing.
    pub resolutions: usize,
    /// Methods put back on the worklist after a live-type change.
    pub reenqueues: usize,
}

/// A CHA target that live-type refinement removed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrunedTarget {
    pub caller: MethodId,
    pub site: usize,
    pub target: MethodId,
}

#[derive(Clone, Debug)]
pub struct ClassicOutcome {
    pub graph: CallGraph,
    pub counters: Counters,
    /// Final live-type set, when refinement was on.
    pub live: Option<LiveTypeSet>,
    /// Targets plain CHA would add but refinement dropped.
    pub pruned: Vec<PrunedTarget>,
}

/// Every method named `main`, in declaration order.
pub fn find_entry_points(model: &ProgramModel) -> Vec<MethodId> {
    model
        .methods()
        .filter(|m| m.name == "main")
        .map(|m| m.id())
        .collect()
}

struct Builder<'a> {
    model: &'a ProgramModel,
    hierarchy: ClassHierarchy,
    graph: CallGraph,
    worklist: Worklist,
    counters: Counters,
    /// Target sets per call site of every processed method.
    resolved: BTreeMap<MethodId, Vec<BTreeSet<MethodId>>>,
}

impl<'a> Builder<'a> {
    fn new(model: &'a ProgramModel, graph: CallGraph) -> Self {
        Self {
            model,
            hierarchy: build_hierarchy(model),
            graph,
            worklist: Worklist::default(),
            counters: Counters::default(),
            resolved: BTreeMap::new(),
        }
    }

    fn drain(&mut self, live: Option<&LiveTypeSet>) -> Result<(), HierarchyError> {
        while let Some(method) = self.worklist.pull() {
            self.counters.methods_processed += 1;
            let decl = self
                .model
                .method(&method)
                .expect("worklist only holds declared methods");
            let mut per_site = Vec::with_capacity(decl.call_sites.len());
            for site in &decl.call_sites {
                let targets = resolve_targets(self.model, &self.hierarchy, &method, site, live)?;
                self.counters.resolutions += 1;
                for target in &targets {
                    let discovered = !self.graph.contains(target);
                    self.graph.add_link(&method, target, site.index);
                    if discovered {
                        self.worklist.push(target.clone());
                    }
                }
                per_site.push(targets);
            }
            self.resolved.insert(method, per_site);
        }
        Ok(())
    }

    /// Queues every processed method with a call site whose targets differ
    /// under `live`.
    fn requeue_changed(&mut self, live: &LiveTypeSet) -> Result<(), HierarchyError> {
        for (method, old_sites) in &self.resolved {
            let decl = self.model.method(method).expect("declared");
            for (site, old) in decl.call_sites.iter().zip(old_sites) {
                let now = resolve_targets(self.model, &self.hierarchy, method, site, Some(live))?;
                self.counters.resolutions += 1;
                if &now != old {
                    if self.worklist.push(method.clone()) {
                        self.counters.reenqueues += 1;
                    }
                    break;
                }
            }
        }
        Ok(())
    }

    fn pruned(&self) -> Result<Vec<PrunedTarget>, HierarchyError> {
        let mut pruned = Vec::new();
        for (method, refined) in &self.resolved {
            let decl = self.model.method(method).expect("declared");
            for (site, kept) in decl.call_sites.iter().zip(refined) {
                let full = resolve_targets(self.model, &self.hierarchy, method, site, None)?;
                pruned.extend(full.difference(kept).map(|t| PrunedTarget {
                    caller: method.clone(),
                    site: site.index,
                    target: t.clone(),
                }));
            }
        }
        Ok(pruned)
    }
}

/// Builds the call graph of `model` from all of its `main` methods.
pub fn classic_build(
    model: &ProgramModel,
    use_live_types: bool,
) -> Result<ClassicOutcome, ClassicError> {
    let mut b = Builder::new(model, CallGraph::new());
    for entry in find_entry_points(model) {
        b.graph.add_entry(entry.clone());
        b.worklist.push(entry);
    }

    if !use_live_types {
        b.drain(None)?;
        return Ok(ClassicOutcome {
            graph: b.graph,
            counters: b.counters,
            live: None,
            pruned: Vec::new(),
        });
    }

    let mut live = LiveTypeSet::empty();
    loop {
        b.drain(Some(&live))?;
        let next = propagate_live_types(model, &b.graph);
        if next == live {
            break;
        }
        b.requeue_changed(&next)?;
        live = next;
    }
    let pruned = b.pruned()?;
    Ok(ClassicOutcome {
        graph: b.graph,
        counters: b.counters,
        live: Some(live),
        pruned,
    })
}

/// Updates `prior` after the body of `edited` changed.
///
/// Only the edited method and methods that become reachable for the first
/// time are processed; methods no longer reachable from an entry are
/// dropped. Live-type refinement is not applied.
pub fn classic_incremental(
    model: &ProgramModel,
    prior: &CallGraph,
    edited: &MethodId,
) -> Result<ClassicOutcome, ClassicError> {
    if model.method(edited).is_none() {
        return Err(ClassicError::UnknownMethod(edited.clone()));
    }
    let mut b = Builder::new(model, prior.clone());
    // An unreachable method's body cannot influence the graph.
    if b.graph.contains(edited) {
        b.graph.remove_outgoing(edited);
        b.worklist.push(edited.clone());
        b.drain(None)?;
        let reachable = reachable_from_entries(&b.graph);
        b.graph.retain_nodes(|n| reachable.contains(n));
    }
    Ok(ClassicOutcome {
        graph: b.graph,
        counters: b.counters,
        live: None,
        pruned: Vec::new(),
    })
}
