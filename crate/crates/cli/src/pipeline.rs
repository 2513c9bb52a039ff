//! The extraction pipeline: parse, check, transform, certify, erase, dearg
//! and print, with intermediate artifacts.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use boxtract_backends::{
    ml_entrypoint, print, BackendConfig, BackendError, MlDialect, Printed, RemapTable, Target,
};
use boxtract_core::ast::{GlobalEnv, Kername};
use boxtract_core::boxir::{parse_env_annotated, write_env_annotated, SexpError};
use boxtract_core::check::{check_env, CheckError};
use boxtract_core::dearg::{
    analyze_usage_with, run_dearg, write_masks, AnalysisOptions, DeargError, DeargOutput,
};
use boxtract_core::erasure::{
    annotate, erase_env, erase_env_annotated, AnnotatedEnv, ErasedDecl, ErasedEnv, ErasureError,
};
use boxtract_core::surface::{
    extend_program, print_decl, print_program, FileError, Scope, SourceFile,
};
use boxtract_core::transforms::{
    compose_transforms, Certificate, ExpansionTable, Pass, TransformError,
};
use thiserror::Error;

/// The standard library every program is checked against unless disabled.
pub const PRELUDE: &str = include_str!("../../../fixtures/prelude.src");

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read `{0}`: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("parse: {0}")]
    Parse(#[from] FileError),
    #[error("check: {0}")]
    Check(#[from] CheckError),
    #[error("ir: {0}")]
    Ir(#[from] SexpError),
    #[error("remap: {0}")]
    Remap(String),
    #[error("transform: {0}")]
    Transform(#[from] TransformError),
    #[error("erase: unknown root `{0}`")]
    UnknownRoot(String),
    #[error("erase: {0}")]
    Erasure(#[from] ErasureError),
    #[error("dearg: {0}")]
    Dearg(#[from] DeargError),
    #[error("print: {0}")]
    Backend(#[from] BackendError),
    #[error("config: {0}")]
    Config(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Io(..) | PipelineError::Config(_) | PipelineError::Remap(_) => 1,
            PipelineError::Parse(_) | PipelineError::Check(_) | PipelineError::Ir(_) => 2,
            PipelineError::Transform(_) => 3,
            PipelineError::UnknownRoot(_) | PipelineError::Erasure(_) => 4,
            PipelineError::Dearg(_) => 5,
            PipelineError::Backend(_) => 6,
        }
    }
}

pub type PResult<T> = Result<T, PipelineError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Emit {
    Core,
    Ir,
    Masks,
    Types,
    Code,
}

impl FromStr for Emit {
    type Err = String;

    fn from_str(s: &str) -> Result<Emit, String> {
        match s {
            "core" => Ok(Emit::Core),
            "ir" => Ok(Emit::Ir),
            "masks" => Ok(Emit::Masks),
            "types" => Ok(Emit::Types),
            "code" => Ok(Emit::Code),
            _ => Err(format!(
                "unknown artifact `{s}` (core, ir, masks, types, code)"
            )),
        }
    }
}

impl Emit {
    pub fn extension(self, target: Option<Target>) -> &'static str {
        match self {
            Emit::Core => "core.src",
            Emit::Ir => "ir",
            Emit::Masks => "masks",
            Emit::Types => "types",
            Emit::Code => match target {
                Some(Target::Ml) | None => "mligo",
                Some(Target::Elm) => "elm",
                Some(Target::Rust) => "rs",
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PassName {
    Eta,
    Branches,
    Inline,
}

impl FromStr for PassName {
    type Err = String;

    fn from_str(s: &str) -> Result<PassName, String> {
        match s {
            "eta" => Ok(PassName::Eta),
            "branches" => Ok(PassName::Branches),
            "inline" => Ok(PassName::Inline),
            _ => Err(format!("unknown pass `{s}` (eta, branches, inline)")),
        }
    }
}

/// How far η-expansion goes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EtaMode {
    /// Just enough for dearging with the computed masks.
    #[default]
    Masks,
    /// Every constant and constructor to its full arity.
    Full,
}

impl FromStr for EtaMode {
    type Err = String;

    fn from_str(s: &str) -> Result<EtaMode, String> {
        match s {
            "masks" => Ok(EtaMode::Masks),
            "full" => Ok(EtaMode::Full),
            _ => Err(format!("unknown eta mode `{s}` (masks, full)")),
        }
    }
}

/// Where the pipeline stops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Check,
    Transform,
    Erase,
    Optimize,
    Extract,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub inputs: Vec<PathBuf>,
    /// Check the inputs against the standard prelude.
    pub prelude: bool,
    /// Short or qualified names; empty means every declaration of the inputs.
    pub roots: Vec<String>,
    pub passes: Vec<PassName>,
    pub inline: Vec<String>,
    pub eta: EtaMode,
    pub target: Option<Target>,
    pub remap: Option<PathBuf>,
    pub backend_prelude: Option<PathBuf>,
    pub dialect: MlDialect,
    pub ml_prefix: bool,
    pub entrypoint: Option<String>,
    pub emit: BTreeSet<Emit>,
    pub dearg_iterations: usize,
    pub keep_one: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            inputs: vec![],
            prelude: true,
            roots: vec![],
            passes: vec![PassName::Eta, PassName::Branches],
            inline: vec![],
            eta: EtaMode::Masks,
            target: None,
            remap: None,
            backend_prelude: None,
            dialect: MlDialect::CameLigo,
            ml_prefix: false,
            entrypoint: None,
            emit: BTreeSet::new(),
            dearg_iterations: 1,
            keep_one: true,
        }
    }
}

impl PipelineConfig {
    pub fn analysis(&self) -> AnalysisOptions {
        AnalysisOptions {
            keep_one: self.keep_one,
        }
    }

    pub fn validate(&self, stage: Stage) -> PResult<()> {
        if self.inputs.is_empty() {
            return Err(PipelineError::Config("no input files".into()));
        }
        if (stage == Stage::Extract || self.emit.contains(&Emit::Code)) && self.target.is_none() {
            return Err(PipelineError::Config("emitting code needs --target".into()));
        }
        if self.emit.contains(&Emit::Code) && stage < Stage::Extract {
            return Err(PipelineError::Config(
                "code is only emitted by `extract`".into(),
            ));
        }
        Ok(())
    }
}

/// Everything a run produced, as text.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Artifacts {
    pub core: Option<String>,
    pub ir: Option<String>,
    pub masks: Option<String>,
    pub types: Option<String>,
    pub code: Option<String>,
    pub warnings: Vec<String>,
    pub certificates: Vec<Certificate>,
}

impl Artifacts {
    pub fn get(&self, e: Emit) -> Option<&str> {
        match e {
            Emit::Core => self.core.as_deref(),
            Emit::Ir => self.ir.as_deref(),
            Emit::Masks => self.masks.as_deref(),
            Emit::Types => self.types.as_deref(),
            Emit::Code => self.code.as_deref(),
        }
    }

    /// Write each artifact in `emit` to `dir/<stem>.<ext>`; returns the paths.
    pub fn write_to(
        &self,
        dir: &Path,
        stem: &str,
        emit: &BTreeSet<Emit>,
        target: Option<Target>,
    ) -> PResult<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| PipelineError::Io(dir.to_path_buf(), e))?;
        let mut out = vec![];
        for e in emit {
            if let Some(text) = self.get(*e) {
                let p = dir.join(format!("{stem}.{}", e.extension(target)));
                std::fs::write(&p, text).map_err(|err| PipelineError::Io(p.clone(), err))?;
                out.push(p);
            }
        }
        Ok(out)
    }
}

fn read(path: &Path) -> PResult<String> {
    std::fs::read_to_string(path).map_err(|e| PipelineError::Io(path.to_path_buf(), e))
}

/// Is `path` a λ□ file written by `--emit=ir`?
pub fn is_ir_file(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "ir")
}

pub fn prelude_env() -> GlobalEnv {
    extend_program(GlobalEnv::new(), &[SourceFile::new("prelude.src", PRELUDE)])
        .expect("the bundled prelude checks")
}

/// Parse and check the inputs; returns the environment and the number of
/// declarations that came from the prelude.
pub fn load_sources(cfg: &PipelineConfig) -> PResult<(GlobalEnv, usize)> {
    let base = if cfg.prelude {
        prelude_env()
    } else {
        GlobalEnv::new()
    };
    let n = base.len();
    let files = cfg
        .inputs
        .iter()
        .map(|p| Ok(SourceFile::new(p.clone(), read(p)?)))
        .collect::<PResult<Vec<_>>>()?;
    let env = extend_program(base, &files)?;
    check_env(&env)?;
    Ok((env, n))
}

pub fn resolve_roots(env: &GlobalEnv, names: &[String], skip: usize) -> PResult<Vec<Kername>> {
    if names.is_empty() {
        return Ok(env.decls()[skip..]
            .iter()
            .map(|d| d.name().clone())
            .collect());
    }
    let scope = Scope::from_env(env);
    names.iter().map(|n| resolve(env, &scope, n)).collect()
}

fn resolve(env: &GlobalEnv, scope: &Scope, name: &str) -> PResult<Kername> {
    if let Ok(k) = name.parse::<Kername>() {
        if env.lookup(&k).is_some() {
            return Ok(k);
        }
    }
    match scope.resolve(name).map(|r| r.to_term()) {
        Some(boxtract_core::ast::Term::Const(k)) | Some(boxtract_core::ast::Term::Ind(k)) => Ok(k),
        _ => Err(PipelineError::UnknownRoot(name.to_string())),
    }
}

/// Run the configured passes and certify the result.
pub fn transform(
    env: &GlobalEnv,
    roots: &[Kername],
    cfg: &PipelineConfig,
) -> PResult<(GlobalEnv, Vec<Certificate>)> {
    if cfg.passes.is_empty() {
        return Ok((env.clone(), vec![]));
    }
    let scope = Scope::from_env(env);
    let mut passes = vec![];
    for p in &cfg.passes {
        let pass = match p {
            PassName::Eta => Pass::Eta(match cfg.eta {
                EtaMode::Full => ExpansionTable::full(env),
                EtaMode::Masks => {
                    let er = erase_env(env, roots)?;
                    let (im, cm) = analyze_usage_with(&er, cfg.analysis());
                    ExpansionTable::from_masks(env, &im, &cm)
                }
            }),
            PassName::Branches => Pass::Branches,
            PassName::Inline => Pass::Inline(
                cfg.inline
                    .iter()
                    .map(|n| resolve(env, &scope, n))
                    .collect::<PResult<_>>()?,
            ),
        };
        passes.push(pass.into_transform());
    }
    let r = compose_transforms(passes)(env)?;
    Ok((r.new_env, r.certificates))
}

pub fn erase(env: &GlobalEnv, roots: &[Kername]) -> PResult<(ErasedEnv, AnnotatedEnv)> {
    let (er, trace) = erase_env_annotated(env, roots)?;
    let ann = annotate(&er, trace)?;
    Ok((er, ann))
}

pub fn dearg(er: &ErasedEnv, ann: &AnnotatedEnv, cfg: &PipelineConfig) -> PResult<DeargOutput> {
    Ok(run_dearg(
        er,
        Some(ann),
        cfg.dearg_iterations,
        cfg.analysis(),
    )?)
}

pub fn backend_config(cfg: &PipelineConfig, target: Target) -> PResult<BackendConfig> {
    let mut bc = BackendConfig::new(target);
    bc.ml.dialect = cfg.dialect;
    bc.ml.prefix = cfg.ml_prefix;
    if let Some(p) = &cfg.backend_prelude {
        bc.prelude = read(p)?;
    }
    Ok(bc)
}

pub fn load_remap(cfg: &PipelineConfig) -> PResult<RemapTable> {
    match &cfg.remap {
        Some(p) => RemapTable::from_json(&read(p)?)
            .map_err(|e| PipelineError::Remap(format!("{}: {e}", p.display()))),
        None => Ok(RemapTable::default()),
    }
}

/// Print an erased environment, with the ML entry point when requested.
pub fn print_code(
    er: &ErasedEnv,
    ann: &AnnotatedEnv,
    cfg: &PipelineConfig,
    target: Target,
) -> PResult<Printed> {
    let bc = backend_config(cfg, target)?;
    let remap = load_remap(cfg)?;
    let mut p = print(er, ann, &bc, &remap)?;
    if let (Target::Ml, Some(e)) = (target, &cfg.entrypoint) {
        let k = match e.parse::<Kername>() {
            Ok(k) if er.lookup(&k).is_some() => k,
            _ => er
                .decls()
                .iter()
                .map(|d| d.name())
                .find(|k| k.short() == e)
                .cloned()
                .ok_or_else(|| PipelineError::UnknownRoot(e.clone()))?,
        };
        p.text.push('\n');
        p.text += &ml_entrypoint(er, &bc, &remap, &k)?;
    }
    Ok(p)
}

/// Erased signatures, one declaration per line.
pub fn types_text(er: &ErasedEnv) -> String {
    let mut s = String::new();
    for d in er.decls() {
        match d {
            ErasedDecl::Constant(c) => writeln!(s, "{} : {}", c.name, c.ty).unwrap(),
            ErasedDecl::TypeAlias(a) => {
                writeln!(s, "type {} {} := {}", a.name, a.type_vars.join(" "), a.ty).unwrap()
            }
            ErasedDecl::Inductive(i) => {
                let tvs: Vec<&str> = i.type_vars.iter().map(|t| t.name.as_str()).collect();
                writeln!(s, "inductive {} {}", i.name, tvs.join(" ")).unwrap();
                for (c, ctor) in i.ctors.iter().enumerate() {
                    let ty = i.ctor_type(c).map(|t| t.to_string()).unwrap_or_default();
                    writeln!(s, "  | {} : {ty}", ctor.name).unwrap();
                }
            }
        }
    }
    s
}

/// Source text of the declarations after the prelude.
fn core_text(env: &GlobalEnv, skip: usize) -> String {
    if skip == 0 {
        return print_program(env);
    }
    env.decls()[skip..]
        .iter()
        .map(|d| print_decl(env, d) + "\n")
        .collect::<Vec<_>>()
        .join("\n")
}

/// Run the pipeline up to `stage`, collecting the artifacts in `cfg.emit`.
pub fn run_pipeline(cfg: &PipelineConfig, stage: Stage) -> PResult<Artifacts> {
    cfg.validate(stage)?;
    if cfg.inputs.len() == 1 && is_ir_file(&cfg.inputs[0]) {
        return run_from_ir(cfg, stage);
    }
    let mut art = Artifacts::default();
    let (env, skip) = load_sources(cfg)?;
    if stage == Stage::Check {
        if cfg.emit.contains(&Emit::Core) {
            art.core = Some(core_text(&env, skip));
        }
        return Ok(art);
    }
    let roots = resolve_roots(&env, &cfg.roots, skip)?;
    let (env, certs) = transform(&env, &roots, cfg)?;
    art.certificates = certs;
    if cfg.emit.contains(&Emit::Core) {
        art.core = Some(core_text(&env, skip));
    }
    if stage == Stage::Transform {
        return Ok(art);
    }
    let (er, ann) = erase(&env, &roots)?;
    if stage == Stage::Erase {
        collect_erased(&mut art, cfg, &er, &ann, None);
        return Ok(art);
    }
    let out = dearg(&er, &ann, cfg)?;
    let ann = out.annots.clone().unwrap_or_default();
    collect_erased(&mut art, cfg, &out.env, &ann, Some(&out));
    if stage == Stage::Extract {
        let target = cfg.target.expect("validated");
        let p = print_code(&out.env, &ann, cfg, target)?;
        art.warnings = p.warnings.iter().map(|w| w.to_string()).collect();
        art.code = Some(p.text);
    }
    Ok(art)
}

fn collect_erased(
    art: &mut Artifacts,
    cfg: &PipelineConfig,
    er: &ErasedEnv,
    ann: &AnnotatedEnv,
    dearged: Option<&DeargOutput>,
) {
    if cfg.emit.contains(&Emit::Ir) {
        art.ir = Some(write_env_annotated(er, ann));
    }
    if cfg.emit.contains(&Emit::Types) {
        art.types = Some(types_text(er));
    }
    if let (true, Some(d)) = (cfg.emit.contains(&Emit::Masks), dearged) {
        art.masks = Some(
            d.rounds
                .iter()
                .map(|(im, cm)| write_masks(im, cm))
                .collect::<Vec<_>>()
                .join("\n"),
        );
    }
}

/// Continue from an IR file: `optimize` dearg it again, `extract` prints it
/// as is.
fn run_from_ir(cfg: &PipelineConfig, stage: Stage) -> PResult<Artifacts> {
    let (er, ann) = parse_env_annotated(&read(&cfg.inputs[0])?)?;
    let mut art = Artifacts::default();
    match stage {
        Stage::Check | Stage::Transform | Stage::Erase => {
            collect_erased(&mut art, cfg, &er, &ann, None);
        }
        Stage::Optimize => {
            let out = dearg(&er, &ann, cfg)?;
            let a = out.annots.clone().unwrap_or_default();
            collect_erased(&mut art, cfg, &out.env, &a, Some(&out));
        }
        Stage::Extract => {
            collect_erased(&mut art, cfg, &er, &ann, None);
            let p = print_code(&er, &ann, cfg, cfg.target.expect("validated"))?;
            art.warnings = p.warnings.iter().map(|w| w.to_string()).collect();
            art.code = Some(p.text);
        }
    }
    Ok(art)
}
