//! Command-line front end.
//!
//! Data goes to `out`, diagnostics to `err`. Exit codes:
//!
//! | code | meaning                                  |
//! |------|------------------------------------------|
//! | 0    | success                                  |
//! | 1    | usage error                              |
//! | 2    | parse or semantic error                  |
//! | 3    | skip fault (stack not empty at the end)  |
//! | 4    | no entry point for the stack builder     |
//! | 5    | the two builders disagree (`check`)      |

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bench::{run_bench, BenchError, Shape};
use crate::callgraph::{
    connected_components, export_dot, graphs_equal, unreachable_methods, CallGraph, JsonGraph,
};
use crate::classic::{classic_build, classic_incremental, find_entry_points, ClassicError};
use crate::costmodel::{table1, table_csv, DEFAULT_SIZES};
use crate::frontend::{
    apply_edit, parse_patch, parse_program, FrontendError, MethodId, ProgramModel,
};
use crate::hierarchy::{build_hierarchy, ClassHierarchy};
use crate::krab::{
    fault, krab_build, krab_incremental, krab_multi_entry, validate_traversal, KrabError,
    TraversalState,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SKIP: i32 = 3;
pub const EXIT_NO_ENTRY: i32 = 4;
pub const EXIT_DISAGREE: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "krabcg",
    version,
    about = "Static call graphs for MiniJ programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Krab,
    Classic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(clap::Args, Debug)]
struct BuildArgs {
    /// Builder to run.
    #[arg(long, value_enum, default_value = "krab")]
    algo: Algo,
    /// Output format for the graph.
    #[arg(long, value_enum, default_value = "dot")]
    format: Format,
    /// Root method for the stack builder, as `Class.method`. Defaults to the
    /// sole `main`; with several `main`s every one is used.
    #[arg(long)]
    entry: Option<MethodId>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and print the call graph, unreachable methods and components.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        /// Refine dispatch with live (instantiated) types. Classic builder only.
        #[arg(long)]
        rta: bool,
        #[arg(long, hide = true, default_value_t = 0)]
        inject_skip_pops: usize,
    },
    /// Apply an edit patch and update the graph incrementally.
    Incremental {
        file: PathBuf,
        /// Patch file: `@@ Class.method` followed by the new declaration.
        #[arg(long)]
        edit: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Print the cost-model table as CSV.
    Model {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIZES)]
        sizes: Vec<u64>,
    },
    /// Run both builders on generated programs and print counters as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = Shape::ALL.map(|s| s.to_string()))]
        shapes: Vec<String>,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIZES.map(|n| n as usize))]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run both builders and report whether their graphs agree.
    Check {
        file: PathBuf,
        /// Refine the classic builder with live types; differences then show
        /// the calls that refinement removes.
        #[arg(long)]
        rta: bool,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<FrontendError> for Failure {
    fn from(e: FrontendError) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

impl From<ClassicError> for Failure {
    fn from(e: ClassicError) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

impl From<KrabError> for Failure {
    fn from(e: KrabError) -> Self {
        let code = match e {
            KrabError::Hierarchy(_) | KrabError::UnknownMethod(_) => EXIT_INPUT,
            KrabError::MissingEntry(_) | KrabError::NoEntryPoint => EXIT_NO_ENTRY,
            KrabError::Skip(_) => EXIT_SKIP,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::EmptyProgram => Failure::usage(e.to_string()),
            BenchError::Frontend(e) => e.into(),
            BenchError::Krab(e) => e.into(),
            BenchError::Classic(e) => e.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Analyze {
            file,
            build,
            rta,
            inject_skip_pops,
        } => analyze(&file, &build, rta, inject_skip_pops, out, err),
        Command::Incremental { file, edit, build } => incremental(&file, &edit, &build, out),
        Command::Model { sizes } => {
            out.write_all(table_csv(&table1(&sizes)).as_bytes())?;
            Ok(())
        }
        Command::Bench {
            shapes,
            sizes,
            seed,
        } => {
            let shapes = shapes
                .iter()
                .map(|s| s.parse::<Shape>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::usage)?;
            let report = run_bench(&shapes, &sizes, seed)?;
            out.write_all(report.to_csv().as_bytes())?;
            Ok(())
        }
        Command::Check { file, rta } => check(&file, rta, out, err),
    }
}

fn load(path: &Path) -> Result<ProgramModel, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_program(&text)?)
}

/// Stack-builder run honoring `--entry`: a single root if one is named or
/// only one `main` exists, otherwise the union over all `main`s.
fn krab_graph(
    model: &ProgramModel,
    h: &ClassHierarchy,
    entry: Option<&MethodId>,
    inject_skip_pops: usize,
) -> Result<(CallGraph, Vec<TraversalState>), Failure> {
    let entries = find_entry_points(model);
    let root = match (entry, entries.as_slice()) {
        (Some(e), _) => Some(e.clone()),
        (None, [only]) => Some(only.clone()),
        (None, []) => return Err(KrabError::NoEntryPoint.into()),
        (None, _) => None,
    };
    match root {
        Some(root) => {
            let (graph, state) = if inject_skip_pops > 0 {
                fault::krab_build_suppressing_pops(model, h, &root, inject_skip_pops)?
            } else {
                krab_build(model, h, &root)?
            };
            validate_traversal(&state).map_err(KrabError::from)?;
            Ok((graph, vec![state]))
        }
        None if inject_skip_pops > 0 => Err(Failure::usage(
            "--inject-skip-pops needs a single entry; pass --entry",
        )),
        None => Ok(krab_multi_entry(model, h)?),
    }
}

fn check_flags(build: &BuildArgs, rta: bool, inject_skip_pops: usize) -> Result<(), Failure> {
    if build.algo == Algo::Classic && build.entry.is_some() {
        return Err(Failure::usage("--entry applies to --algo krab only"));
    }
    if build.algo == Algo::Classic && inject_skip_pops > 0 {
        return Err(Failure::usage(
            "--inject-skip-pops applies to --algo krab only",
        ));
    }
    if build.algo == Algo::Krab && rta {
        return Err(Failure::usage("--rta applies to --algo classic only"));
    }
    Ok(())
}

fn names<'a>(ids: impl IntoIterator<Item = &'a MethodId>) -> Vec<String> {
    ids.into_iter().map(ToString::to_string).collect()
}

fn render(
    graph: &CallGraph,
    format: Format,
    extra: Vec<(&str, Value)>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match format {
        Format::Dot => {
            out.write_all(export_dot(graph).as_bytes())?;
            for (key, value) in extra {
                match value {
                    Value::Array(items) => {
                        for (i, item) in items.iter().enumerate() {
                            writeln!(out, "// {key} {i}: {}", plain(item))?;
                        }
                        if items.is_empty() {
                            writeln!(out, "// {key}: none")?;
                        }
                    }
                    other => writeln!(out, "// {key}: {}", plain(&other))?,
                }
            }
        }
        Format::Json => {
            let mut doc = serde_json::to_value(JsonGraph::from(graph)).expect("serializable");
            let obj = doc.as_object_mut().expect("graph dump is an object");
            for (key, value) in extra {
                obj.insert(key.to_string(), value);
            }
            serde_json::to_writer_pretty(&mut *out, &doc)
                .map_err(|e| Failure::usage(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Flattens a JSON value into a DOT comment payload.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(" "),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", plain(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

fn analyze(
    file: &Path,
    build: &BuildArgs,
    rta: bool,
    inject_skip_pops: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    check_flags(build, rta, inject_skip_pops)?;
    let model = load(file)?;
    let graph = match build.algo {
        Algo::Classic => {
            let outcome = classic_build(&model, rta)?;
            for p in &outcome.pruned {
                writeln!(
                    err,
                    "note: live types pruned {} at site {} of {}",
                    p.target, p.site, p.caller
                )?;
            }
            outcome.graph
        }
        Algo::Krab => {
            let h = build_hierarchy(&model);
            krab_graph(&model, &h, build.entry.as_ref(), inject_skip_pops)?.0
        }
    };
    let unreachable = names(&unreachable_methods(&model, &graph));
    let components: Vec<Vec<String>> = connected_components(&graph).iter().map(names).collect();
    render(
        &graph,
        build.format,
        vec![
            ("unreachable", json!(unreachable)),
            ("components", json!(components)),
        ],
        out,
    )
}

fn incremental(
    file: &Path,
    patch: &Path,
    build: &BuildArgs,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    check_flags(build, false, 0)?;
    let model = load(file)?;
    let patch_text = std::fs::read_to_string(patch)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", patch.display())))?;
    let delta = parse_patch(&patch_text)?;
    let edited = apply_edit(&model, &delta)?;

    let (graph, incremental, full, equivalent) = match build.algo {
        Algo::Classic => {
            let prior = classic_build(&model, false)?.graph;
            let inc = classic_incremental(&edited, &prior, &delta.method)?;
            let full = classic_build(&edited, false)?;
            let counters = |c: crate::classic::Counters| {
                json!({
                    "methods_processed": c.methods_processed,
                    "resolutions": c.resolutions,
                    "reenqueues": c.reenqueues,
                })
            };
            let equivalent = graphs_equal(&inc.graph, &full.graph);
            (
                inc.graph,
                counters(inc.counters),
                counters(full.counters),
                equivalent,
            )
        }
        Algo::Krab => {
            let h = build_hierarchy(&model);
            let (prior, _) = krab_graph(&model, &h, build.entry.as_ref(), 0)?;
            let entry = prior
                .entries()
                .iter()
                .next()
                .cloned()
                .ok_or(KrabError::NoEntryPoint)?;
            let (graph, state) = krab_incremental(&edited, &h, &prior, &delta.method, &entry)?;
            validate_traversal(&state).map_err(KrabError::from)?;
            let (full_graph, full_states) = krab_graph(&edited, &h, build.entry.as_ref(), 0)?;
            let counters = |states: &[TraversalState]| {
                json!({
                    "steps": states.iter().map(|s| s.steps).sum::<u64>(),
                    "weighted_steps": states.iter().map(|s| s.weighted_steps).sum::<u64>(),
                    "pushes": states.iter().map(|s| s.pushes).sum::<u64>(),
                })
            };
            let equivalent = graphs_equal(&graph, &full_graph);
            let inc = counters(std::slice::from_ref(&state));
            (graph, inc, counters(&full_states), equivalent)
        }
    };
    render(
        &graph,
        build.format,
        vec![
            ("incremental", incremental),
            ("full_rebuild", full),
            ("matches_full_rebuild", json!(equivalent)),
        ],
        out,
    )
}

fn check(file: &Path, rta: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let model = load(file)?;
    let classic = classic_build(&model, rta)?.graph;
    let h = build_hierarchy(&model);
    let (krab, _) = krab_multi_entry(&model, &h)?;
    if graphs_equal(&classic, &krab) {
        writeln!(out, "graphs equivalent")?;
        return Ok(());
    }
    writeln!(out, "graphs differ")?;
    writeln!(err, "classic:\n{}", export_dot(&classic))?;
    writeln!(err, "krab:\n{}", export_dot(&krab))?;
    Err(Failure {
        code: EXIT_DISAGREE,
        message: "classic and krab call graphs differ".into(),
    })
}
