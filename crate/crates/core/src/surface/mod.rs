//! Textual surface syntax: parsing into a [`GlobalEnv`] and printing back.

mod elab;
mod lexer;
mod parser;
mod print;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ast::{GlobalEnv, Kername};
use crate::check::{default_fuel, CheckError};

pub use elab::{ctor_kername, GlobalRef, Scope};
pub use print::{print_core, print_decl, print_program, Printer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    SyntaxError {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unbound name `{name}`")]
    UnboundName {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("duplicate name `{0}`")]
    DuplicateName(Kername),
    #[error("{line}:{col}: {source}")]
    TypeError {
        line: usize,
        col: usize,
        #[source]
        source: CheckError,
    },
}

#[derive(Clone, Debug)]
pub struct SourceFile {
    pub path: PathBuf,
    pub text: String,
}

impl SourceFile {
    pub fn new(path: impl Into<PathBuf>, text: impl Into<String>) -> SourceFile {
        SourceFile {
            path: path.into(),
            text: text.into(),
        }
    }

    pub fn read(path: &Path) -> std::io::Result<SourceFile> {
        Ok(SourceFile {
            path: path.to_path_buf(),
            text: std::fs::read_to_string(path)?,
        })
    }
}

/// A parse error tagged with the file it came from.
#[derive(Debug, Clone, Error)]
#[error("{}: {error}", path.display())]
pub struct FileError {
    pub path: PathBuf,
    #[source]
    pub error: ParseError,
}

/// Parse, resolve and type check a whole program.
pub fn parse_program(src: &SourceFile) -> Result<GlobalEnv, ParseError> {
    parse_str(&src.text)
}

/// Parse several files in order into one environment; later files see the
/// declarations of earlier ones.
pub fn parse_programs(files: &[SourceFile]) -> Result<GlobalEnv, FileError> {
    extend_program(GlobalEnv::new(), files)
}

/// Parse more files on top of `env`, which must already be checked.
pub fn extend_program(env: GlobalEnv, files: &[SourceFile]) -> Result<GlobalEnv, FileError> {
    let mut el = elab::Elaborator::with_env(env, default_fuel());
    for f in files {
        let tag = |error| FileError {
            path: f.path.clone(),
            error,
        };
        let toks = lexer::lex(&f.text).map_err(tag)?;
        let decls = parser::Parser::new(toks).program().map_err(tag)?;
        el.reset_module();
        for d in &decls {
            el.decl(d).map_err(tag)?;
        }
    }
    Ok(el.into_env())
}

pub fn parse_str(text: &str) -> Result<GlobalEnv, ParseError> {
    let toks = lexer::lex(text)?;
    let decls = parser::Parser::new(toks).program()?;
    let mut el = elab::Elaborator::new(default_fuel());
    for d in &decls {
        el.decl(d)?;
    }
    Ok(el.into_env())
}

#[cfg(test)]
mod tests;
