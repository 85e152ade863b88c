//! Shared test support: a seeded generator of random MiniJ programs and
//! edits, plus a brute-force call-graph oracle.
//!
//! The oracle reads only the parsed model. Subtype cones, method lookup and
//! reachability are recomputed here by plain scanning and recursion, without
//! touching the crate's hierarchy, graph or builder code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use krab_callgraph::callgraph::CallGraph;
use krab_callgraph::frontend::{Delta, MethodId, ProgramModel, Receiver, Stmt};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 6] = ["m0", "m1", "m2", "m3", "m4", "m5"];

struct ClassSketch {
    name: String,
    parent: Option<usize>,
    methods: Vec<String>,
}

fn visible(classes: &[ClassSketch], mut at: usize) -> Vec<String> {
    let mut names = BTreeSet::new();
    loop {
        names.extend(classes[at].methods.iter().cloned());
        match classes[at].parent {
            Some(p) => at = p,
            None => break,
        }
    }
    names.into_iter().collect()
}

fn random_body(rng: &mut ChaCha8Rng, classes: &[ClassSketch], owner: usize) -> Vec<Stmt> {
    let mut body = Vec::new();
    let n_locals = rng.gen_range(0..=2);
    let mut locals = Vec::new();
    for i in 0..n_locals {
        let ty = rng.gen_range(0..classes.len());
        locals.push((format!("v{i}"), ty));
        body.push(Stmt::Var {
            name: format!("v{i}"),
            ty: classes[ty].name.clone(),
        });
    }
    for _ in 0..rng.gen_range(0..=1) {
        let c = rng.gen_range(0..classes.len());
        body.push(Stmt::New(classes[c].name.clone()));
    }
    for _ in 0..rng.gen_range(0..=4) {
        if !locals.is_empty() && rng.gen_bool(0.4) {
            let (var, ty) = locals.choose(rng).unwrap();
            let target = visible(classes, *ty).choose(rng).unwrap().clone();
            body.push(Stmt::Call {
                receiver: Receiver::Local(var.clone()),
                target,
            });
        } else {
            let target = visible(classes, owner).choose(rng).unwrap().clone();
            body.push(Stmt::Call {
                receiver: Receiver::This,
                target,
            });
        }
    }
    body
}

fn render_stmt(out: &mut String, stmt: &Stmt) {
    match stmt {
        Stmt::Var { name, ty } => write!(out, " var {name}: {ty};"),
        Stmt::New(c) => write!(out, " new {c};"),
        Stmt::Call {
            receiver: Receiver::This,
            target,
        } => write!(out, " {target}();"),
        Stmt::Call {
            receiver: Receiver::Local(v),
            target,
        } => write!(out, " {v}.{target}();"),
    }
    .unwrap();
}

/// A random valid program: up to 30 classes, hierarchies at most four levels
/// deep, direct and mutual recursion arising from random call choices. The
/// first class always has `main`; sometimes a second class does too.
pub fn random_program(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_classes = rng.gen_range(1..=30);
    let mut depth = Vec::new();
    let mut classes: Vec<ClassSketch> = Vec::new();
    for i in 0..n_classes {
        let candidates: Vec<usize> = (0..i).filter(|&j| depth[j] < 3).collect();
        let parent = if i > 0 && !candidates.is_empty() && rng.gen_bool(0.7) {
            Some(*candidates.choose(&mut rng).unwrap())
        } else {
            None
        };
        depth.push(parent.map_or(0, |p| depth[p] + 1));
        let count = rng.gen_range(1..=3);
        let mut methods: Vec<String> = NAMES
            .choose_multiple(&mut rng, count)
            .map(|s| s.to_string())
            .collect();
        methods.sort();
        classes.push(ClassSketch {
            name: format!("C{i}"),
            parent,
            methods,
        });
    }
    classes[0].methods.insert(0, "main".into());
    if n_classes > 3 && rng.gen_bool(0.3) {
        let extra = rng.gen_range(1..n_classes);
        if !classes[extra].methods.contains(&"main".to_string()) {
            classes[extra].methods.push("main".into());
        }
    }

    let mut src = format!("// random program, seed {seed}\n");
    for (i, class) in classes.iter().enumerate() {
        match class.parent {
            Some(p) => writeln!(src, "class {} extends {} {{", class.name, classes[p].name),
            None => writeln!(src, "class {} {{", class.name),
        }
        .unwrap();
        for m in &class.methods {
            let body = random_body(&mut rng, &classes, i);
            write!(src, "  def {m}() {{").unwrap();
            for stmt in &body {
                render_stmt(&mut src, stmt);
            }
            src.push_str(" }\n");
        }
        src.push_str("}\n");
    }
    src
}

/// A random replacement body for `method`, valid against `model`.
pub fn random_edit(model: &ProgramModel, method: &MethodId, seed: u64) -> Delta {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let index: BTreeMap<&str, usize> = model
        .classes
        .keys()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let classes: Vec<ClassSketch> = model
        .classes
        .values()
        .map(|c| ClassSketch {
            name: c.name.clone(),
            parent: c.superclass.as_deref().map(|s| index[s]),
            methods: c.methods.keys().cloned().collect(),
        })
        .collect();
    let owner = index[method.class_name.as_str()];
    Delta {
        method: method.clone(),
        new_body: random_body(&mut rng, &classes, owner),
    }
}

/// What the oracle expects a call graph to contain, by display name.
#[derive(Debug, PartialEq, Eq)]
pub struct Expected {
    pub nodes: BTreeSet<String>,
    pub edges: BTreeMap<(String, String), usize>,
    pub self_loops: BTreeSet<String>,
    pub entries: BTreeSet<String>,
}

impl Expected {
    pub fn of(g: &CallGraph) -> Self {
        Expected {
            nodes: g.nodes().iter().map(ToString::to_string).collect(),
            edges: g
                .edge_multiset()
                .into_iter()
                .map(|((a, b), n)| ((a.to_string(), b.to_string()), n))
                .collect(),
            self_loops: g.self_loops().iter().map(ToString::to_string).collect(),
            entries: g.entries().iter().map(ToString::to_string).collect(),
        }
    }
}

fn lookup(model: &ProgramModel, class: &str, name: &str) -> Option<String> {
    let decl = model.classes.get(class)?;
    if decl.methods.contains_key(name) {
        return Some(format!("{class}.{name}"));
    }
    lookup(model, decl.superclass.as_deref()?, name)
}

fn descends_from(model: &ProgramModel, class: &str, ancestor: &str) -> bool {
    class == ancestor
        || model.classes[class]
            .superclass
            .as_deref()
            .is_some_and(|p| descends_from(model, p, ancestor))
}

fn oracle_targets(
    model: &ProgramModel,
    owner: &str,
    method: &str,
    receiver: &Receiver,
    name: &str,
) -> BTreeSet<String> {
    match receiver {
        Receiver::This => lookup(model, owner, name).into_iter().collect(),
        Receiver::Local(var) => {
            let static_ty = &model.classes[owner].methods[method].locals[var];
            model
                .classes
                .keys()
                .filter(|c| descends_from(model, c, static_ty))
                .filter_map(|c| lookup(model, c, name))
                .collect()
        }
    }
}

fn visit(model: &ProgramModel, method: &str, seen: &mut BTreeSet<String>, exp: &mut Expected) {
    if !seen.insert(method.to_string()) {
        return;
    }
    exp.nodes.insert(method.to_string());
    let (class, name) = method.split_once('.').unwrap();
    let decl = &model.classes[class].methods[name];
    for site in &decl.call_sites {
        for target in oracle_targets(model, class, name, &site.receiver, &site.target_name) {
            if target == method {
                exp.self_loops.insert(target);
                continue;
            }
            *exp.edges
                .entry((method.to_string(), target.clone()))
                .or_insert(0) += 1;
            visit(model, &target, seen, exp);
        }
    }
}

/// Brute-force CHA call graph: recursive DFS from every `main`.
pub fn oracle(model: &ProgramModel) -> Expected {
    let mut exp = Expected {
        nodes: BTreeSet::new(),
        edges: BTreeMap::new(),
        self_loops: BTreeSet::new(),
        entries: BTreeSet::new(),
    };
    let mut seen = BTreeSet::new();
    for class in model.classes.values() {
        if class.methods.contains_key("main") {
            let entry = format!("{}.main", class.name);
            exp.entries.insert(entry.clone());
            visit(model, &entry, &mut seen, &mut exp);
        }
    }
    exp
}

/// Directed reachability from the entries, computed from the oracle's edges.
pub fn oracle_reachable(exp: &Expected) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<String> = exp.entries.iter().cloned().collect();
    while let Some(m) = stack.pop() {
        if seen.insert(m.clone()) {
            for (a, b) in exp.edges.keys() {
                if *a == m {
                    stack.push(b.clone());
                }
            }
        }
    }
    seen
}
