//! Applies a patch to one method and updates the graph instead of rebuilding.

use krab_callgraph::callgraph::{export_dot, graphs_equal};
use krab_callgraph::classic::{classic_build, classic_incremental};
use krab_callgraph::frontend::{apply_edit, parse_patch, parse_program, MethodId};
use krab_callgraph::hierarchy::build_hierarchy;
use krab_callgraph::krab::{krab_build, krab_incremental};

fn main() {
    let model = parse_program(
        "class A {
             def main() { f(); }
             def f() { g(); }
             def g() { }
             def h() { g(); }
         }",
    )
    .unwrap();
    let delta = parse_patch("@@ A.f\ndef f() { h(); }\n").unwrap();
    let edited = apply_edit(&model, &delta).unwrap();

    let prior = classic_build(&model, false).unwrap();
    let updated = classic_incremental(&edited, &prior.graph, &delta.method).unwrap();
    let rebuilt = classic_build(&edited, false).unwrap();
    println!(
        "classic: {} methods reprocessed, rebuild processes {}",
        updated.counters.methods_processed, rebuilt.counters.methods_processed
    );
    assert!(graphs_equal(&updated.graph, &rebuilt.graph));

    let h = build_hierarchy(&model);
    let entry = MethodId::new("A", "main");
    let (prior, _) = krab_build(&model, &h, &entry).unwrap();
    let (updated, state) = krab_incremental(&edited, &h, &prior, &delta.method, &entry).unwrap();
    println!("krab: {} pushes for the update", state.pushes);
    print!("{}", export_dot(&updated));
}
