use std::fmt::Write;

use super::model::{MethodDecl, ProgramModel, Receiver, Stmt};

/// Renders a model back to MiniJ source.
///
/// Bodies are printed as locals, then instantiations, then calls; reparsing
/// the output yields a model equal to the input.
pub fn print_program(model: &ProgramModel) -> String {
    let mut out = String::new();
    for (i, class) in model.classes.values().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match &class.superclass {
            Some(sup) => writeln!(out, "class {} extends {} {{", class.name, sup),
            None => writeln!(out, "class {} {{", class.name),
        }
        .unwrap();
        for method in class.methods.values() {
            print_method(&mut out, method, "    ");
        }
        out.push_str("}\n");
    }
    out
}

/// Renders a single method declaration at top level, as used in patch files.
pub fn print_method_decl(method: &MethodDecl) -> String {
    let mut out = String::new();
    print_method(&mut out, method, "");
    out
}

fn print_method(out: &mut String, method: &MethodDecl, indent: &str) {
    let body = method.body();
    if body.is_empty() {
        writeln!(out, "{indent}def {}() {{ }}", method.name).unwrap();
        return;
    }
    writeln!(out, "{indent}def {}() {{", method.name).unwrap();
    for stmt in body {
        out.push_str(indent);
        out.push_str("    ");
        match stmt {
            Stmt::Var { name, ty } => writeln!(out, "var {name}: {ty};"),
            Stmt::New(class) => writeln!(out, "new {class};"),
            Stmt::Call {
                receiver: Receiver::This,
                target,
            } => writeln!(out, "{target}();"),
            Stmt::Call {
                receiver: Receiver::Local(var),
                target,
            } => writeln!(out, "{var}.{target}();"),
        }
        .unwrap();
    }
    writeln!(out, "{indent}}}").unwrap();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_program;

    #[test]
    fn prints_a_readable_layout() {
        let model = parse_program(
            "class A { def main() { x.f(); var x: B; new B; } } class B extends A { def f() {} }",
        )
        .unwrap();
        let expected = "\
class A {
    def main() {
        var x: B;
        new B;
        x.f();
    }
}

class B extends A {
    def f() { }
}
";
        assert_eq!(print_program(&model), expected);
        assert_eq!(parse_program(expected).unwrap(), model);
    }

    #[test]
    fn empty_model_prints_nothing() {
        assert_eq!(print_program(&ProgramModel::default()), "");
    }
}
