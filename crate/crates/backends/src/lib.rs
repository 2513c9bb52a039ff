//! Printers for erased programs: an ML family (CameLIGO and Liquidity),
//! Elm and Rust.

mod common;
mod elm;
mod ml;
mod names;
mod remap;
mod rust;

use std::fmt;
use std::str::FromStr;

use boxtract_core::ast::Kername;
use boxtract_core::erasure::{AnnotatedEnv, ErasedEnv};
use thiserror::Error;

pub use elm::print_elm;
pub use ml::{ml_entrypoint, print_ml};
pub use names::{sanitize_names, Renaming};
pub use remap::{IndRemap, RemapTable};
pub use rust::print_rust;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Ml,
    Elm,
    Rust,
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Target, String> {
        match s.to_ascii_lowercase().as_str() {
            "ml" | "cameligo" | "liquidity" => Ok(Target::Ml),
            "elm" => Ok(Target::Elm),
            "rust" => Ok(Target::Rust),
            _ => Err(format!("unknown target `{s}`")),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Ml => "ml",
            Target::Elm => "elm",
            Target::Rust => "rust",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MlDialect {
    #[default]
    CameLigo,
    Liquidity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlOptions {
    pub dialect: MlDialect,
    /// Prefix generated names with `coq_` and constructors with `Coq_`.
    pub prefix: bool,
}

impl Default for MlOptions {
    fn default() -> Self {
        MlOptions {
            dialect: MlDialect::CameLigo,
            prefix: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RustOptions {
    /// Arena type owned by the generated `Program`.
    pub arena: String,
}

impl Default for RustOptions {
    fn default() -> Self {
        RustOptions {
            arena: "bumpalo::Bump".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackendConfig {
    pub target: Target,
    pub prelude: String,
    pub top_level_annotations: bool,
    pub ml: MlOptions,
    pub rust: RustOptions,
}

impl BackendConfig {
    pub fn new(target: Target) -> BackendConfig {
        BackendConfig {
            target,
            prelude: default_prelude(target).to_string(),
            top_level_annotations: true,
            ml: MlOptions::default(),
            rust: RustOptions::default(),
        }
    }

    /// ML and Elm always annotate top-level definitions.
    pub fn annotate_top_level(&self) -> bool {
        match self.target {
            Target::Ml | Target::Elm => true,
            Target::Rust => self.top_level_annotations,
        }
    }
}

pub fn default_prelude(target: Target) -> &'static str {
    match target {
        Target::Ml => CAMELIGO_PRELUDE,
        Target::Elm => "",
        Target::Rust => RUST_PRELUDE,
    }
}

/// Number, tez, time and address operations for extracted contracts.
const CAMELIGO_PRELUDE: &str = include_str!("cameligo_prelude.mligo");

const RUST_PRELUDE: &str = "#![allow(dead_code)]
#![allow(non_camel_case_types)]
#![allow(non_snake_case)]
#![allow(unused_imports)]
#![allow(unused_variables)]

use std::marker::PhantomData;

fn hint_app<TArg, TRet>(f: &dyn Fn(TArg) -> TRet) -> &dyn Fn(TArg) -> TRet {
  f
}";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("missing type annotation for {0}")]
    MissingAnnotation(String),
    #[error("constructor `{0}` is not fully applied")]
    NotFullyApplied(String),
    #[error("recursive function `{0}` takes {1} arguments but the target allows one")]
    UnsupportedRecursion(String, usize),
    #[error("mutual fixpoints are not supported (in `{0}`)")]
    MutualFixpoint(String),
    #[error("`{0}` refers to an unknown declaration `{1}`")]
    UnknownGlobal(String, Kername),
    #[error("variable index {0} is unbound")]
    UnboundVariable(usize),
}

pub type BackendResult<T> = Result<T, BackendError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// A `𝕋` type was printed as the target's opaque unit-like type.
    UnsupportedType(String),
    /// An axiom without a remapping was printed as a failing stub.
    Axiom(Kername),
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::UnsupportedType(w) => {
                write!(
                    f,
                    "type in {w} cannot be expressed in the target; printed as unit"
                )
            }
            Warning::Axiom(k) => {
                write!(f, "axiom `{k}` has no remapping; printed as a failing stub")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Printed {
    pub text: String,
    pub warnings: Vec<Warning>,
}

pub fn print(
    env: &ErasedEnv,
    annots: &AnnotatedEnv,
    cfg: &BackendConfig,
    remap: &RemapTable,
) -> BackendResult<Printed> {
    match cfg.target {
        Target::Ml => print_ml(env, annots, cfg, remap),
        Target::Elm => print_elm(env, annots, cfg, remap),
        Target::Rust => print_rust(env, annots, cfg, remap),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Collapse whitespace: runs between two identifier characters become one
/// space, all other whitespace disappears.
pub fn normalize_ws(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending = false;
    for c in s.chars() {
        if c.is_whitespace() {
            pending = true;
            continue;
        }
        if pending && out.chars().last().is_some_and(is_ident_char) && is_ident_char(c) {
            out.push(' ');
        }
        pending = false;
        out.push(c);
    }
    out
}

/// Split listing text into top-level blocks: a block starts at an unindented
/// line that follows a blank line. `--` comment lines and `...` elision lines
/// are dropped and count as blank.
pub fn listing_blocks(text: &str) -> Vec<String> {
    let mut blocks: Vec<String> = vec![];
    let mut cur = String::new();
    let mut after_blank = false;
    for line in text.lines() {
        let t = line.trim();
        if t.starts_with("--") || t == "..." || t.is_empty() {
            after_blank = true;
            continue;
        }
        if after_blank && !line.starts_with(char::is_whitespace) && !cur.is_empty() {
            blocks.push(std::mem::take(&mut cur));
        }
        after_blank = false;
        cur.push_str(line);
        cur.push('\n');
    }
    if !cur.is_empty() {
        blocks.push(cur);
    }
    blocks
}

/// Is every block of `listing` found, whitespace-normalized, in `output`?
/// Returns the blocks that are missing.
pub fn missing_blocks(listing: &str, output: &str) -> Vec<String> {
    let out = normalize_ws(output);
    listing_blocks(listing)
        .into_iter()
        .filter(|b| !out.contains(&normalize_ws(b)))
        .collect()
}

#[cfg(test)]
mod tests;
