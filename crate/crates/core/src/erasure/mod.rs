//! Erasure from the core calculus to λ□ terms and prenex box types.

mod env;
mod term;
mod types;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::ast::{Kername, Name};
use crate::boxir::BoxTerm;
use crate::check::CheckError;

pub use env::{erase_env, erase_env_annotated, erase_env_with, ErasureTrace};
pub use term::{annotate, erase_term, erase_term_annotated, Annot, AnnotatedEnv};
pub use types::{
    can_have_args, erase_type, erase_type_app, erase_type_scheme, erase_type_with, ECtx, ECtxEntry,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErasureError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("unknown root `{0}`")]
    UnknownRoot(Kername),
    #[error("cannot erase a match on the proposition `{0}` into a computational type")]
    UnsupportedPropMatch(Kername),
    #[error("annotation shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub type ErasureResult<T> = Result<T, ErasureError>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoxType {
    TVar(usize),
    TInd(Kername),
    TConst(Kername),
    TApp(Box<BoxType>, Box<BoxType>),
    TArr(Box<BoxType>, Box<BoxType>),
    TBox,
    TAny,
}

impl BoxType {
    pub fn app(h: BoxType, a: BoxType) -> BoxType {
        BoxType::TApp(Box::new(h), Box::new(a))
    }

    pub fn arr(d: BoxType, c: BoxType) -> BoxType {
        BoxType::TArr(Box::new(d), Box::new(c))
    }

    /// Head and arguments of a `TApp` spine.
    pub fn decompose_app(&self) -> (&BoxType, Vec<&BoxType>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let BoxType::TApp(h, a) = cur {
            args.push(&**a);
            cur = h;
        }
        args.reverse();
        (cur, args)
    }

    /// Domains and codomain of a `TArr` spine.
    pub fn decompose_arr(&self) -> (Vec<&BoxType>, &BoxType) {
        let mut doms = Vec::new();
        let mut cur = self;
        while let BoxType::TArr(d, c) = cur {
            doms.push(&**d);
            cur = c;
        }
        (doms, cur)
    }

    /// Largest `TVar` level plus one, or zero.
    pub fn var_bound(&self) -> usize {
        match self {
            BoxType::TVar(i) => i + 1,
            BoxType::TApp(a, b) | BoxType::TArr(a, b) => a.var_bound().max(b.var_bound()),
            _ => 0,
        }
    }

    /// Global names mentioned by the type.
    pub fn globals(&self, out: &mut Vec<Kername>) {
        match self {
            BoxType::TInd(k) | BoxType::TConst(k) => out.push(k.clone()),
            BoxType::TApp(a, b) | BoxType::TArr(a, b) => {
                a.globals(out);
                b.globals(out);
            }
            _ => {}
        }
    }
}

impl fmt::Display for BoxType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &BoxType, f: &mut fmt::Formatter<'_>, atom: bool) -> fmt::Result {
            match t {
                BoxType::TVar(i) => write!(f, "'{i}"),
                BoxType::TInd(k) | BoxType::TConst(k) => write!(f, "{}", k.short()),
                BoxType::TBox => write!(f, "□"),
                BoxType::TAny => write!(f, "𝕋"),
                BoxType::TApp(..) => {
                    let (h, args) = t.decompose_app();
                    if atom {
                        write!(f, "(")?;
                    }
                    go(h, f, true)?;
                    for a in args {
                        write!(f, " ")?;
                        go(a, f, true)?;
                    }
                    if atom {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                BoxType::TArr(d, c) => {
                    if atom {
                        write!(f, "(")?;
                    }
                    go(d, f, true)?;
                    write!(f, " → ")?;
                    go(c, f, false)?;
                    if atom {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, false)
    }
}

/// A type parameter of an erased inductive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeVarInfo {
    pub name: Name,
    pub is_logical: bool,
    pub is_arity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasedConstant {
    pub name: Kername,
    pub type_vars: Vec<Name>,
    pub ty: BoxType,
    pub body: Option<BoxTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasedCtor {
    pub name: Name,
    pub args: Vec<(Name, BoxType)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasedInductive {
    pub name: Kername,
    pub type_vars: Vec<TypeVarInfo>,
    /// Parameters carried by constructor applications at term level.
    pub npars: usize,
    /// The inductive lives in `Prop`.
    pub is_prop: bool,
    pub ctors: Vec<ErasedCtor>,
}

impl ErasedInductive {
    /// The inductive applied to its type variables; logical ones show as `□`.
    pub fn self_type(&self) -> BoxType {
        self.type_vars
            .iter()
            .enumerate()
            .fold(BoxType::TInd(self.name.clone()), |acc, (i, tv)| {
                let a = if tv.is_logical {
                    BoxType::TBox
                } else {
                    BoxType::TVar(i)
                };
                BoxType::app(acc, a)
            })
    }

    /// Function type of constructor `c` over its arguments.
    pub fn ctor_type(&self, c: usize) -> Option<BoxType> {
        let ctor = self.ctors.get(c)?;
        Some(
            ctor.args
                .iter()
                .rev()
                .fold(self.self_type(), |acc, (_, t)| BoxType::arr(t.clone(), acc)),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeAlias {
    pub name: Kername,
    pub type_vars: Vec<Name>,
    pub ty: BoxType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErasedDecl {
    Constant(ErasedConstant),
    Inductive(ErasedInductive),
    TypeAlias(TypeAlias),
}

impl ErasedDecl {
    pub fn name(&self) -> &Kername {
        match self {
            ErasedDecl::Constant(c) => &c.name,
            ErasedDecl::Inductive(i) => &i.name,
            ErasedDecl::TypeAlias(a) => &a.name,
        }
    }
}

/// Dependency-ordered erased declarations.
#[derive(Clone, Debug, Default)]
pub struct ErasedEnv {
    decls: Vec<ErasedDecl>,
    index: HashMap<Kername, usize>,
}

impl PartialEq for ErasedEnv {
    fn eq(&self, other: &ErasedEnv) -> bool {
        self.decls == other.decls
    }
}

impl Eq for ErasedEnv {}

impl ErasedEnv {
    pub fn new() -> ErasedEnv {
        ErasedEnv::default()
    }

    /// Later declarations with an existing name replace the earlier one.
    pub fn from_decls(decls: Vec<ErasedDecl>) -> ErasedEnv {
        let mut env = ErasedEnv::new();
        for d in decls {
            env.push(d);
        }
        env
    }

    pub fn push(&mut self, d: ErasedDecl) {
        match self.index.get(d.name()) {
            Some(&i) => self.decls[i] = d,
            None => {
                self.index.insert(d.name().clone(), self.decls.len());
                self.decls.push(d);
            }
        }
    }

    pub fn decls(&self) -> &[ErasedDecl] {
        &self.decls
    }

    pub fn decls_mut(&mut self) -> &mut [ErasedDecl] {
        &mut self.decls
    }

    pub fn into_decls(self) -> Vec<ErasedDecl> {
        self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn lookup(&self, k: &Kername) -> Option<&ErasedDecl> {
        self.index.get(k).map(|&i| &self.decls[i])
    }

    pub fn constant(&self, k: &Kername) -> Option<&ErasedConstant> {
        match self.lookup(k) {
            Some(ErasedDecl::Constant(c)) => Some(c),
            _ => None,
        }
    }

    pub fn inductive(&self, k: &Kername) -> Option<&ErasedInductive> {
        match self.lookup(k) {
            Some(ErasedDecl::Inductive(i)) => Some(i),
            _ => None,
        }
    }

    pub fn alias(&self, k: &Kername) -> Option<&TypeAlias> {
        match self.lookup(k) {
            Some(ErasedDecl::TypeAlias(a)) => Some(a),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests;
