//! The stack traversal on a program with direct and mutual recursion, with
//! its counters.

use krab_callgraph::callgraph::export_dot;
use krab_callgraph::frontend::{parse_program, MethodId};
use krab_callgraph::hierarchy::build_hierarchy;
use krab_callgraph::krab::{krab_build, validate_traversal};

fn main() {
    let model = parse_program(
        "class A {
             def main() { even(); walk(); }
             def even() { odd(); }
             def odd() { even(); }
             def walk() { walk(); walk(); leaf(); }
             def leaf() { }
         }",
    )
    .unwrap();
    let h = build_hierarchy(&model);
    let (graph, state) = krab_build(&model, &h, &MethodId::new("A", "main")).unwrap();
    validate_traversal(&state).expect("stack empties");

    print!("{}", export_dot(&graph));
    println!(
        "steps={} weighted_steps={} pushes={} pops={}",
        state.steps, state.weighted_steps, state.pushes, state.pops
    );
}
