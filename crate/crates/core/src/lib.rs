//! Static call-graph construction for MiniJ, a small class-based language.
//!
//! Two builders produce the same graph for every valid program:
//!
//! * [`classic`]: a FIFO worklist over Class Hierarchy Analysis, with
//!   optional live-type refinement and an incremental update path;
//! * [`krab`]: a depth-first traversal on an explicit stack that records
//!   recursion as self-loops, lays predecessor (return) edges on every pop
//!   and reports skipped returns when the stack is not empty at the end.
//!
//! [`costmodel`] holds the closed-form iteration counts of both builders and
//! [`bench`] generates programs that exercise their best, average and worst
//! cases. Every capability has a runnable program under `examples/`:
//!
//! ```bash
//! cargo run --example krab_traversal
//! ```
//!
//! A small end-to-end use:
//!
//! ```
//! use krab_callgraph::prelude::*;
//!
//! let model = parse_program("class A { def main() { f(); } def f() { f(); } }").unwrap();
//! let h = build_hierarchy(&model);
//! let (graph, state) = krab_build(&model, &h, &"A.main".parse().unwrap()).unwrap();
//! assert!(validate_traversal(&state).is_ok());
//! assert_eq!(graph.self_loops().len(), 1);
//!
//! let classic = classic_build(&model, false).unwrap();
//! assert!(graphs_equal(&graph, &classic.graph));
//! ```

pub mod bench;
pub mod callgraph;
pub mod classic;
pub mod cli;
pub mod costmodel;
pub mod frontend;
pub mod hierarchy;
pub mod krab;

pub mod prelude {
    pub use crate::bench::{generate_program, run_bench, BenchReport, Shape};
    pub use crate::callgraph::{
        connected_components, export_dot, export_json, graphs_equal, unreachable_methods, CallGraph,
    };
    pub use crate::classic::{classic_build, classic_incremental, find_entry_points, Counters};
    pub use crate::costmodel::{classical_cost, krab_cost, table1, CostRow, KrabCase};
    pub use crate::frontend::{
        apply_edit, parse_patch, parse_program, print_program, Delta, MethodId, ProgramModel,
    };
    pub use crate::hierarchy::{
        build_hierarchy, propagate_live_types, resolve_targets, ClassHierarchy, LiveTypeSet,
    };
    pub use crate::krab::{
        krab_build, krab_incremental, krab_multi_entry, validate_traversal, SkipFault,
        TraversalState,
    };
}
