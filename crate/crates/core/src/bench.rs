//! Synthetic programs for the three cost cases and a harness that runs both
//! builders on them, reporting measured counters next to the model value.

use std::fmt::{self, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classic::{classic_build, ClassicError, Counters};
use crate::costmodel::{krab_cost, KrabCase};
use crate::frontend::{parse_program, FrontendError, MethodId};
use crate::hierarchy::build_hierarchy;
use crate::krab::{krab_build, validate_traversal, KrabError};

pub const GENERATED_CLASS: &str = "Main";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    /// `main` calls `n` distinct empty methods.
    Flat,
    /// `main → f1 → f2 → … → fn`.
    Chain,
    /// `n` call sites in total, `⌊ln n⌋` of them heading nested sub-chains.
    Mixed,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Flat, Shape::Chain, Shape::Mixed];

    /// The cost case this shape stands for.
    pub fn case(self) -> KrabCase {
        match self {
            Shape::Flat => KrabCase::Best,
            Shape::Chain => KrabCase::Worst,
            Shape::Mixed => KrabCase::Average,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Flat => "flat",
            Shape::Chain => "chain",
            Shape::Mixed => "mixed",
        })
    }
}

impl FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flat" => Ok(Shape::Flat),
            "chain" => Ok(Shape::Chain),
            "mixed" => Ok(Shape::Mixed),
            other => Err(format!(
                "unknown shape `{other}` (expected flat, chain or mixed)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BenchError {
    #[error("program size must be at least 1")]
    EmptyProgram,
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Krab(#[from] KrabError),
    #[error(transparent)]
    Classic(#[from] ClassicError),
}

/// Number of nested heads in a mixed program of `n` call sites.
pub fn nested_heads(n: usize) -> usize {
    (n as f64).ln().floor() as usize
}

/// MiniJ source for one synthetic program with exactly `n` call sites, all
/// reachable from `Main.main`. Only `Mixed` uses the seed.
pub fn generate_program(shape: Shape, n: usize, seed: u64) -> Result<String, BenchError> {
    if n < 1 {
        return Err(BenchError::EmptyProgram);
    }
    let mut methods: Vec<(String, Vec<String>)> = Vec::new();
    match shape {
        Shape::Flat => {
            let leaves: Vec<String> = (1..=n).map(|i| format!("f{i}")).collect();
            methods.push(("main".into(), leaves.clone()));
            methods.extend(leaves.into_iter().map(|l| (l, Vec::new())));
        }
        Shape::Chain => {
            methods.push(("main".into(), vec!["f1".into()]));
            for i in 1..=n {
                let next = if i < n {
                    vec![format!("f{}", i + 1)]
                } else {
                    Vec::new()
                };
                methods.push((format!("f{i}"), next));
            }
        }
        Shape::Mixed => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let heads = nested_heads(n);
            // each head owns at least one nested site; the rest stay flat
            let spare = n - 2 * heads;
            let nested_total = heads
                + if heads > 0 {
                    rng.gen_range(0..=spare / 2)
                } else {
                    0
                };
            let mut depths = vec![1usize; heads];
            for _ in heads..nested_total {
                let j = rng.gen_range(0..heads);
                depths[j] += 1;
            }
            let flat = n - heads - nested_total;

            let mut main_calls: Vec<String> = (0..heads)
                .map(|j| format!("h{j}_0"))
                .chain((0..flat).map(|i| format!("leaf{i}")))
                .collect();
            main_calls.shuffle(&mut rng);
            methods.push(("main".into(), main_calls));
            for (j, depth) in depths.iter().enumerate() {
                for k in 0..=*depth {
                    let next = if k < *depth {
                        vec![format!("h{j}_{}", k + 1)]
                    } else {
                        Vec::new()
                    };
                    methods.push((format!("h{j}_{k}"), next));
                }
            }
            methods.extend((0..flat).map(|i| (format!("leaf{i}"), Vec::new())));
        }
    }

    let mut src =
        format!("// {shape} program, n = {n}, seed = {seed}\nclass {GENERATED_CLASS} {{\n");
    for (name, calls) in methods {
        if calls.is_empty() {
            writeln!(src, "    def {name}() {{ }}").unwrap();
        } else {
            writeln!(src, "    def {name}() {{").unwrap();
            for c in calls {
                writeln!(src, "        {c}();").unwrap();
            }
            src.push_str("    }\n");
        }
    }
    src.push_str("}\n");
    Ok(src)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub shape: Shape,
    pub n: usize,
    pub steps: u64,
    pub weighted_steps: u64,
    /// Cost-model value for the shape's case at `n`.
    pub model: f64,
    pub classic: Counters,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "shape,n,steps,weighted_steps,model,classic_methods,classic_resolutions,classic_reenqueues\n",
        );
        for r in &self.rows {
            let model = match r.shape.case() {
                KrabCase::Average => format!("{:.3}", r.model),
                _ => format!("{}", r.model as u64),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.shape,
                r.n,
                r.steps,
                r.weighted_steps,
                model,
                r.classic.methods_processed,
                r.classic.resolutions,
                r.classic.reenqueues
            )
            .unwrap();
        }
        out
    }
}

fn run_cell(shape: Shape, n: usize, seed: u64) -> Result<BenchRow, BenchError> {
    let model = parse_program(&generate_program(shape, n, seed)?)?;
    let h = build_hierarchy(&model);
    let (_, state) = krab_build(&model, &h, &MethodId::new(GENERATED_CLASS, "main"))?;
    validate_traversal(&state).map_err(KrabError::from)?;
    let classic = classic_build(&model, false)?;
    Ok(BenchRow {
        shape,
        n,
        steps: state.steps,
        weighted_steps: state.weighted_steps,
        model: krab_cost(n as u64, shape.case()),
        classic: classic.counters,
    })
}

/// One row per (shape, size) pair, shapes outermost. Cells run in parallel;
/// row order does not depend on scheduling.
pub fn run_bench(shapes: &[Shape], sizes: &[usize], seed: u64) -> Result<BenchReport, BenchError> {
    let cells: Vec<(Shape, usize)> = shapes
        .iter()
        .flat_map(|&s| sizes.iter().map(move |&n| (s, n)))
        .collect();
    let rows = cells
        .into_par_iter()
        .map(|(shape, n)| run_cell(shape, n, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BenchReport { rows })
}
