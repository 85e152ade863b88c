//! Parses a small program, prints it back in canonical form and shows how
//! errors are reported.

use krab_callgraph::frontend::{parse_program, print_program};

const SOURCE: &str = "
// two classes, one override
class Animal { def speak() { } def main() { var a: Animal; new Dog; a.speak(); } }
class Dog extends Animal { def speak() { bark(); } def bark() { } }
";

fn main() {
    let model = parse_program(SOURCE).expect("valid program");
    println!(
        "{} classes, {} methods, {} call sites\n",
        model.classes.len(),
        model.method_count(),
        model.call_site_count()
    );
    print!("{}", print_program(&model));

    for broken in ["class A { def f() { g() } }", "class B extends Missing { }"] {
        println!("\n{broken}\n  -> {}", parse_program(broken).unwrap_err());
    }
}
