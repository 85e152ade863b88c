//! The worklist builder with and without live-type refinement.

use krab_callgraph::callgraph::export_dot;
use krab_callgraph::classic::classic_build;
use krab_callgraph::frontend::parse_program;

fn main() {
    let model = parse_program(
        "class App { def main() { var s: Store; s.save(); boot(); } def boot() { new Disk; } }
         class Store { def save() { } }
         class Disk extends Store { def save() { flush(); } def flush() { } }
         class Cloud extends Store { def save() { } }",
    )
    .unwrap();

    for use_live_types in [false, true] {
        let outcome = classic_build(&model, use_live_types).unwrap();
        println!("use_live_types = {use_live_types}: {:?}", outcome.counters);
        for p in &outcome.pruned {
            println!("  pruned {} at site {} of {}", p.target, p.site, p.caller);
        }
        println!("{}", export_dot(&outcome.graph));
    }
}
