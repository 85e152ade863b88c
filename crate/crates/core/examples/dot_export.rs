//! Writes the call graph of a source file as DOT (default) or JSON.
//!
//! cargo run --example dot_export -- fixtures/dead.mj json

use krab_callgraph::callgraph::{export_dot, export_json};
use krab_callgraph::frontend::parse_program;
use krab_callgraph::hierarchy::build_hierarchy;
use krab_callgraph::krab::krab_multi_entry;

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/p_mutual.mj").into());
    let source = std::fs::read_to_string(&path).expect("readable source file");
    let model = parse_program(&source).unwrap_or_else(|e| panic!("{path}: {e}"));
    let h = build_hierarchy(&model);
    let (graph, _) = krab_multi_entry(&model, &h).expect("program with a main method");
    match args.next().as_deref() {
        Some("json") => println!("{}", export_json(&graph)),
        _ => print!("{}", export_dot(&graph)),
    }
}
