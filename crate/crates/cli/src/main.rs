use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use boxtract_backends::{MlDialect, Target};
use boxtract_cli::difftest::{run_difftest, DifftestConfig};
use boxtract_cli::pipeline::{
    run_pipeline, Emit, EtaMode, PassName, PipelineConfig, PipelineError, Stage,
};
use boxtract_core::dearg::AnalysisOptions;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "boxtract",
    version,
    about = "Extract programs from a dependent calculus"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and type check.
    Check(PipelineArgs),
    /// Run the source passes and certify them.
    Transform(PipelineArgs),
    /// Erase to λ□ with box types.
    Erase(PipelineArgs),
    /// Erase and remove dead arguments.
    Optimize(PipelineArgs),
    /// Run the whole pipeline and print target code.
    Extract(PipelineArgs),
    /// Compare evaluation before and after erasure and dearging on
    /// generated programs.
    Difftest(DifftestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Dialect {
    Cameligo,
    Liquidity,
}

#[derive(Args)]
struct PipelineArgs {
    /// Source files, or a single `.ir` file written by `--emit=ir`.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Declarations to extract (short or qualified names); repeatable.
    #[arg(long = "root")]
    roots: Vec<String>,
    /// Do not load the standard prelude.
    #[arg(long)]
    no_prelude: bool,
    /// Target language: ml, cameligo, liquidity, elm or rust.
    #[arg(long)]
    target: Option<String>,
    /// ML dialect; `--target=liquidity` implies liquidity.
    #[arg(long, value_enum)]
    dialect: Option<Dialect>,
    /// Prefix ML names with `coq_` and constructors with `Coq_`.
    #[arg(long)]
    ml_prefix: bool,
    /// Artifacts to emit: core, ir, masks, types, code (comma separated).
    #[arg(long, value_delimiter = ',')]
    emit: Vec<Emit>,
    /// Remapping table (JSON).
    #[arg(long)]
    remap: Option<PathBuf>,
    /// Replace the target prelude with the contents of this file.
    #[arg(long)]
    backend_prelude: Option<PathBuf>,
    /// Source passes in order: eta, branches, inline (comma separated);
    /// an empty list runs none.
    #[arg(long, value_delimiter = ',', default_value = "eta,branches")]
    passes: Vec<String>,
    /// Constants to inline when the inline pass runs; repeatable.
    #[arg(long = "inline")]
    inline: Vec<String>,
    /// η-expansion extent: masks or full.
    #[arg(long, default_value = "masks")]
    eta: EtaMode,
    #[arg(long, default_value_t = 1)]
    dearg_iterations: usize,
    /// Drop every argument of constants whose arguments are all logical.
    #[arg(long)]
    no_keep_one: bool,
    /// ML entry point wrapping this function.
    #[arg(long)]
    entrypoint: Option<String>,
    /// Write artifacts to this directory instead of standard output.
    #[arg(long, short = 'o')]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct DifftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Evaluation fuel; defaults to BOXTRACT_FUEL or the built-in budget.
    #[arg(long)]
    fuel: Option<u64>,
    /// Inject a known fault: `skip-keep-one`.
    #[arg(long)]
    inject_fault: Option<String>,
    #[arg(long)]
    no_shrink: bool,
}

impl PipelineArgs {
    fn config(&self, stage: Stage) -> Result<PipelineConfig, PipelineError> {
        let mut emit: BTreeSet<Emit> = self.emit.iter().copied().collect();
        if emit.is_empty() {
            emit.insert(match stage {
                Stage::Check | Stage::Transform => Emit::Core,
                Stage::Erase | Stage::Optimize => Emit::Ir,
                Stage::Extract => Emit::Code,
            });
        }
        let target = self
            .target
            .as_deref()
            .map(|t| t.parse::<Target>())
            .transpose()
            .map_err(PipelineError::Config)?;
        let liquidity = self
            .target
            .as_deref()
            .is_some_and(|t| t.eq_ignore_ascii_case("liquidity"));
        let dialect = match self.dialect {
            Some(Dialect::Liquidity) => MlDialect::Liquidity,
            Some(Dialect::Cameligo) => MlDialect::CameLigo,
            None if liquidity => MlDialect::Liquidity,
            None => MlDialect::CameLigo,
        };
        let passes = self
            .passes
            .iter()
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<PassName>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(PipelineError::Config)?;
        Ok(PipelineConfig {
            inputs: self.inputs.clone(),
            prelude: !self.no_prelude,
            roots: self.roots.clone(),
            passes,
            inline: self.inline.clone(),
            eta: self.eta,
            target,
            remap: self.remap.clone(),
            backend_prelude: self.backend_prelude.clone(),
            dialect,
            ml_prefix: self.ml_prefix,
            entrypoint: self.entrypoint.clone(),
            emit,
            dearg_iterations: self.dearg_iterations,
            keep_one: !self.no_keep_one,
        })
    }
}

fn run_stage(args: &PipelineArgs, stage: Stage) -> Result<(), PipelineError> {
    let cfg = args.config(stage)?;
    let art = run_pipeline(&cfg, stage)?;
    for w in &art.warnings {
        eprintln!("warning: {w}");
    }
    let failed: Vec<_> = art
        .certificates
        .iter()
        .filter(|c| c.convertible != Some(true))
        .collect();
    if !failed.is_empty() {
        eprintln!("{} certificates did not check", failed.len());
    }
    match &args.out_dir {
        Some(dir) => {
            let stem = cfg.inputs[0]
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("out")
                .to_string();
            for p in art.write_to(dir, &stem, &cfg.emit, cfg.target)? {
                eprintln!("wrote {}", p.display());
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            for e in &cfg.emit {
                if let Some(text) = art.get(*e) {
                    let _ = out.write_all(text.as_bytes());
                }
            }
        }
    }
    Ok(())
}

fn difftest(args: &DifftestArgs) -> ExitCode {
    let mut cfg = DifftestConfig {
        seed: args.seed,
        count: args.count,
        depth: args.depth,
        shrink: !args.no_shrink,
        ..DifftestConfig::default()
    };
    cfg.fuel = args
        .fuel
        .or_else(|| std::env::var("BOXTRACT_FUEL").ok()?.parse().ok())
        .unwrap_or(cfg.fuel);
    match args.inject_fault.as_deref() {
        None => {}
        Some("skip-keep-one") => cfg.analysis = AnalysisOptions { keep_one: false },
        Some(other) => {
            eprintln!("error: unknown fault `{other}` (skip-keep-one)");
            return ExitCode::from(1);
        }
    }
    // Generated programs nest deeply; evaluate them on a large stack.
    let report = std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(move || run_difftest(&cfg))
        .expect("spawn difftest thread")
        .join()
        .expect("difftest thread panicked");
    print!("{report}");
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, stage) = match &cli.cmd {
        Cmd::Difftest(d) => return difftest(d),
        Cmd::Check(a) => (a, Stage::Check),
        Cmd::Transform(a) => (a, Stage::Transform),
        Cmd::Erase(a) => (a, Stage::Erase),
        Cmd::Optimize(a) => (a, Stage::Optimize),
        Cmd::Extract(a) => (a, Stage::Extract),
    };
    // Deeply nested terms recurse deeply in the checker and printers.
    let result = std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(256 << 20)
            .spawn_scoped(s, || run_stage(args, stage))
            .expect("spawn pipeline thread")
            .join()
            .expect("pipeline thread panicked")
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
