//! Dead-method report and connected components of the call graph.

use krab_callgraph::callgraph::{connected_components, unreachable_methods};
use krab_callgraph::frontend::parse_program;
use krab_callgraph::hierarchy::build_hierarchy;
use krab_callgraph::krab::krab_multi_entry;

fn main() {
    let model = parse_program(
        "class Cli { def main() { parse(); } def parse() { } def legacy() { oldParse(); } def oldParse() { } }
         class Daemon { def main() { serve(); } def serve() { } }",
    )
    .unwrap();
    let h = build_hierarchy(&model);
    let (graph, _) = krab_multi_entry(&model, &h).unwrap();

    println!("unreachable:");
    for m in unreachable_methods(&model, &graph) {
        println!("  {m}");
    }
    for (i, component) in connected_components(&graph).iter().enumerate() {
        let names: Vec<String> = component.iter().map(ToString::to_string).collect();
        println!("component {i}: {}", names.join(" "));
    }
}
