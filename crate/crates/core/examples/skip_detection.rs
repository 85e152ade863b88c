//! A traversal that loses pops leaves frames behind; validation reports them.

use krab_callgraph::frontend::{parse_program, MethodId};
use krab_callgraph::hierarchy::build_hierarchy;
use krab_callgraph::krab::{fault, krab_build, validate_traversal};

fn main() {
    let model = parse_program(
        "class A { def main() { f1(); } def f1() { f2(); } def f2() { f3(); } def f3() { } }",
    )
    .unwrap();
    let h = build_hierarchy(&model);
    let entry = MethodId::new("A", "main");

    let (_, clean) = krab_build(&model, &h, &entry).unwrap();
    println!("clean run: {:?}", validate_traversal(&clean));

    for k in [1, 2, 4] {
        let (_, state) = fault::krab_build_suppressing_pops(&model, &h, &entry, k).unwrap();
        match validate_traversal(&state) {
            Ok(()) => println!("k={k}: no fault?"),
            Err(fault) => println!("k={k}: {fault}"),
        }
    }
}
