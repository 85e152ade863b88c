use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::CallGraph;

/// Graphviz rendering. Entries carry `entry=true`, predecessor edges are
/// dashed with `role=pred`. Output is a pure function of the graph.
pub fn export_dot(g: &CallGraph) -> String {
    let mut out = String::from("digraph callgraph {\n");
    for n in g.nodes() {
        if g.entries().contains(n) {
            writeln!(out, "  \"{n}\" [entry=true];").unwrap();
        } else {
            writeln!(out, "  \"{n}\";").unwrap();
        }
    }
    for e in g.call_edges() {
        writeln!(out, "  \"{}\" -> \"{}\";", e.caller, e.callee).unwrap();
    }
    for n in g.self_loops() {
        writeln!(out, "  \"{n}\" -> \"{n}\";").unwrap();
    }
    for (child, parent) in g.predecessors() {
        writeln!(
            out,
            "  \"{child}\" -> \"{parent}\" [style=dashed, role=pred];"
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonEdge {
    pub caller: String,
    pub callee: String,
    pub site: usize,
}

/// Machine-diffable dump; every array is lexicographically sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<JsonEdge>,
    pub self_loops: Vec<String>,
    pub entries: Vec<String>,
}

impl From<&CallGraph> for JsonGraph {
    fn from(g: &CallGraph) -> Self {
        let names = |set: &std::collections::BTreeSet<_>| -> Vec<String> {
            set.iter()
                .map(|m: &crate::frontend::MethodId| m.to_string())
                .collect()
        };
        JsonGraph {
            nodes: names(g.nodes()),
            edges: g
                .call_edges()
                .iter()
                .map(|e| JsonEdge {
                    caller: e.caller.to_string(),
                    callee: e.callee.to_string(),
                    site: e.site,
                })
                .collect(),
            self_loops: names(g.self_loops()),
            entries: names(g.entries()),
        }
    }
}

pub fn export_json(g: &CallGraph) -> String {
    serde_json::to_string_pretty(&JsonGraph::from(g)).expect("plain data serializes")
}
