//! Subtype cones and virtual call resolution, with and without a live-type
//! filter.

use krab_callgraph::frontend::{parse_program, MethodId};
use krab_callgraph::hierarchy::{build_hierarchy, resolve_targets, LiveTypeSet};

fn main() {
    let model = parse_program(
        "class Shape { def area() { } def main() { var s: Shape; new Square; s.area(); } }
         class Square extends Shape { def area() { } }
         class Circle extends Shape { def area() { } }
         class Ring extends Circle { }",
    )
    .unwrap();
    let h = build_hierarchy(&model);

    for class in h.classes() {
        let cone: Vec<_> = h.cone(class).unwrap().into_iter().collect();
        println!("cone({class}) = {{{}}}", cone.join(", "));
    }

    let main = MethodId::new("Shape", "main");
    let site = &model.method(&main).unwrap().call_sites[0];
    let show = |label: &str, live: Option<&LiveTypeSet>| {
        let targets = resolve_targets(&model, &h, &main, site, live).unwrap();
        let names: Vec<String> = targets.iter().map(ToString::to_string).collect();
        println!("{label:>12}: {}", names.join(", "));
    };
    println!("\ns.area() resolves to");
    show("CHA", None);
    let live: LiveTypeSet = ["Square".to_string()].into_iter().collect();
    show("live=Square", Some(&live));
}
