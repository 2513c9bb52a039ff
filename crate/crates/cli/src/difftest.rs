//! Differential testing: core evaluation against erased evaluation, and
//! erased evaluation before and after dearging.

use std::fmt;
use std::rc::Rc;

use boxtract_core::ast::{GlobalEnv, Kername, Term};
use boxtract_core::boxir::{box_value_eq, show_value, BoxEvaluator, BoxValue, EvalError};
use boxtract_core::check::CheckError;
use boxtract_core::dearg::AnalysisOptions;
use boxtract_core::erasure::{ErasedDecl, ErasedEnv};
use boxtract_core::eval::{eval_core, CoreValue};
use boxtract_core::surface::{extend_program, SourceFile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gen::{shrink, Generator, Node, ALL_TYS};
use crate::pipeline::{self, EtaMode, PassName, PipelineConfig};

/// Declarations the generated programs draw on besides the prelude.
pub const SIGNATURE: [(&str, &str); 3] = [
    ("lists.src", include_str!("../../../fixtures/lists.src")),
    ("foo.src", include_str!("../../../fixtures/foo.src")),
    (
        "safe_head.src",
        include_str!("../../../fixtures/safe_head.src"),
    ),
];

const MAIN: &str = "Difftest.main";

#[derive(Clone, Debug)]
pub struct DifftestConfig {
    pub seed: u64,
    pub count: usize,
    pub depth: usize,
    pub fuel: u64,
    /// Analysis options for dearging; turning off keep-one injects a fault.
    pub analysis: AnalysisOptions,
    pub shrink: bool,
}

impl Default for DifftestConfig {
    fn default() -> Self {
        DifftestConfig {
            seed: 0,
            count: 200,
            depth: 4,
            fuel: 2_000_000,
            analysis: AnalysisOptions::default(),
            shrink: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    /// Core result equals the erased result.
    Erasure,
    /// Erased result, projected through the masks, equals the dearged one.
    Dearg,
    /// The generated program or one of the stages failed.
    Pipeline,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Erasure => "erasure",
            Property::Dearg => "dearg",
            Property::Pipeline => "pipeline",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub index: usize,
    pub property: Property,
    pub message: String,
    pub program: String,
    /// Smallest failing program found by shrinking.
    pub minimized: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub run: usize,
    /// Programs whose core evaluation ran out of fuel.
    pub skipped: usize,
    pub erasure_passed: usize,
    pub dearg_passed: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} programs, {} skipped, erasure {}/{}, dearg {}/{}, {} failures",
            self.run + self.skipped,
            self.skipped,
            self.erasure_passed,
            self.run,
            self.dearg_passed,
            self.run,
            self.failures.len()
        )?;
        for x in &self.failures {
            writeln!(f, "#{} {}: {}", x.index, x.property, x.message)?;
            writeln!(f, "  program:   {}", x.program)?;
            writeln!(f, "  minimized: {}", x.minimized)?;
        }
        Ok(())
    }
}

/// The prelude plus the signature modules.
pub fn base_env() -> GlobalEnv {
    let files: Vec<SourceFile> = SIGNATURE
        .iter()
        .map(|(n, t)| SourceFile::new(*n, *t))
        .collect();
    extend_program(pipeline::prelude_env(), &files).expect("the signature modules check")
}

/// Outcome of running one program through both properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// Core evaluation did not finish within the fuel budget.
    Skip,
    Fail(Property, String),
}

/// Does a core value agree with an erased one? Boxes match anything.
pub fn agree(core: &CoreValue, v: &BoxValue) -> bool {
    match (core, v) {
        (_, BoxValue::BoxVal) => true,
        (
            CoreValue::Construct { ind, k, args },
            BoxValue::ConstructVal {
                ind: i2,
                ctor,
                args: a2,
            },
        ) => {
            ind == i2
                && k == ctor
                && args.len() == a2.len()
                && args.iter().zip(a2).all(|(x, y)| agree(x, y))
        }
        _ => false,
    }
}

fn main_name() -> Kername {
    MAIN.parse().expect("valid name")
}

pub fn program_source(n: &Node) -> String {
    format!("module Difftest\n\ndef main : {} := {}\n", n.ty, n.source())
}

/// Check both properties for a closed program given as source text.
pub fn check_source(base: &GlobalEnv, src: &str, cfg: &DifftestConfig) -> Outcome {
    let env = match extend_program(base.clone(), &[SourceFile::new("difftest.src", src)]) {
        Ok(e) => e,
        Err(e) => return Outcome::Fail(Property::Pipeline, format!("generated program: {e}")),
    };
    check_env_main(&env, cfg)
}

/// Check both properties for `Difftest.main` in `env`.
pub fn check_env_main(env: &GlobalEnv, cfg: &DifftestConfig) -> Outcome {
    check_root(env, &main_name(), &Term::Const(main_name()), cfg)
}

/// Check both properties for the closed term `t`, bound to `root` in `env`.
pub fn check_root(env: &GlobalEnv, root: &Kername, t: &Term, cfg: &DifftestConfig) -> Outcome {
    let core = match eval_core(env, t, cfg.fuel) {
        Ok(v) => v,
        Err(CheckError::OutOfFuel(_)) => return Outcome::Skip,
        Err(e) => return Outcome::Fail(Property::Pipeline, format!("core evaluation: {e}")),
    };
    let roots = [root.clone()];
    let fail = |p: Property, m: String| Outcome::Fail(p, m);

    // Erasure soundness on the program as written.
    let er = match boxtract_core::erasure::erase_env(env, &roots) {
        Ok(er) => er,
        Err(e) => return fail(Property::Pipeline, format!("erasure: {e}")),
    };
    let ev = BoxEvaluator::new(&er, cfg.fuel);
    match ev.global(root) {
        Ok(v) if agree(&core, &v) => {}
        Ok(v) => {
            return fail(
                Property::Erasure,
                format!("core gives {core:?}, erased gives {}", show_value(&er, &v)),
            )
        }
        Err(EvalError::OutOfFuel(_)) => return Outcome::Skip,
        Err(e) => return fail(Property::Erasure, format!("erased evaluation: {e}")),
    }

    // Dearg soundness after the transforms that prepare for it.
    let pcfg = PipelineConfig {
        passes: vec![PassName::Eta, PassName::Branches],
        eta: EtaMode::Masks,
        keep_one: cfg.analysis.keep_one,
        ..PipelineConfig::default()
    };
    let prepared = pipeline::transform(env, &roots, &pcfg)
        .map_err(|e| e.to_string())
        .and_then(|(env, _)| pipeline::erase(&env, &roots).map_err(|e| e.to_string()))
        .and_then(|(er, ann)| {
            pipeline::dearg(&er, &ann, &pcfg)
                .map(|out| (er, out))
                .map_err(|e| e.to_string())
        });
    let (pre_env, out) = match prepared {
        Ok(x) => x,
        Err(e) => return fail(Property::Pipeline, e),
    };
    let pre = match run_erased(&pre_env, root, cfg.fuel) {
        Ok(v) => v,
        Err(e) => return fail(Property::Dearg, format!("before dearging: {e}")),
    };
    let post = match run_erased(&out.env, root, cfg.fuel) {
        Ok(v) => v,
        Err(e) => return fail(Property::Dearg, format!("after dearging: {e}")),
    };
    if !box_value_eq(&out.project(&pre), &post) {
        return fail(
            Property::Dearg,
            format!(
                "before gives {}, after gives {}",
                show_value(&pre_env, &pre),
                show_value(&out.env, &post)
            ),
        );
    }
    Outcome::Pass
}

/// Evaluate every constant body, as a strict target does when loading the
/// program, then `root`.
fn run_erased<'e>(
    env: &'e ErasedEnv,
    root: &Kername,
    fuel: u64,
) -> Result<Rc<BoxValue<'e>>, String> {
    let ev = BoxEvaluator::new(env, fuel);
    for d in env.decls() {
        if let ErasedDecl::Constant(c) = d {
            if c.body.is_some() {
                ev.global(&c.name)
                    .map_err(|e| format!("loading {}: {e}", c.name))?;
            }
        }
    }
    ev.global(root)
        .map_err(|e| format!("evaluating {root}: {e}"))
}

/// Generate `cfg.count` programs from `cfg.seed` and check each.
pub fn run_difftest(cfg: &DifftestConfig) -> Report {
    let base = base_env();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = Report::default();
    for index in 0..cfg.count {
        let ty = ALL_TYS[index % ALL_TYS.len()];
        let node = Generator::new(&mut rng).gen(ty, cfg.depth);
        let src = program_source(&node);
        match check_source(&base, &src, cfg) {
            Outcome::Pass => {
                report.run += 1;
                report.erasure_passed += 1;
                report.dearg_passed += 1;
            }
            Outcome::Skip => report.skipped += 1,
            Outcome::Fail(property, message) => {
                report.run += 1;
                if property == Property::Dearg {
                    report.erasure_passed += 1;
                }
                let minimized = if cfg.shrink {
                    let small = shrink(node.clone(), |c| {
                        matches!(
                            check_source(&base, &program_source(c), cfg),
                            Outcome::Fail(p, _) if p == property
                        )
                    });
                    small.source()
                } else {
                    node.source()
                };
                report.failures.push(Failure {
                    index,
                    property,
                    message,
                    program: node.source(),
                    minimized,
                });
            }
        }
    }
    report
}
