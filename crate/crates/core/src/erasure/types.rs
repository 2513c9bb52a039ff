//! Erasure of types and type schemes to [`BoxType`].

use super::{BoxType, ErasureResult};
use crate::ast::{decompose_app, lift, GlobalEnv, Kername, Name, Term, ANON};
use crate::check::{Checker, Ctx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ECtxEntry {
    RelTypeVar(usize),
    RelInductive(Kername),
    RelOther,
}

/// Erasure context aligned with a [`Ctx`]; the last entry is `Rel 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ECtx {
    entries: Vec<ECtxEntry>,
}

impl ECtx {
    pub fn new() -> ECtx {
        ECtx::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, e: ECtxEntry) {
        self.entries.push(e);
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn with(&self, e: ECtxEntry) -> ECtx {
        let mut c = self.clone();
        c.push(e);
        c
    }

    pub fn get(&self, i: usize) -> Option<&ECtxEntry> {
        self.entries
            .len()
            .checked_sub(i + 1)
            .map(|j| &self.entries[j])
    }
}

/// Only inductives and constants may head a type application.
pub fn can_have_args(t: &BoxType) -> bool {
    matches!(t, BoxType::TInd(_) | BoxType::TConst(_))
}

fn erase_var(ectx: &ECtx, i: usize) -> BoxType {
    match ectx.get(i) {
        Some(ECtxEntry::RelTypeVar(l)) => BoxType::TVar(*l),
        Some(ECtxEntry::RelInductive(k)) => BoxType::TInd(k.clone()),
        _ => BoxType::TAny,
    }
}

fn erase_type_head(ectx: &ECtx, t: &Term) -> BoxType {
    match t {
        Term::Rel(i) => match ectx.get(*i) {
            Some(ECtxEntry::RelInductive(k)) => BoxType::TInd(k.clone()),
            Some(ECtxEntry::RelTypeVar(l)) => BoxType::TVar(*l),
            _ => BoxType::TAny,
        },
        Term::Const(k) => BoxType::TConst(k.clone()),
        Term::Ind(k) => BoxType::TInd(k.clone()),
        _ => BoxType::TAny,
    }
}

/// Erase a type. With `next_var = Some(n)`, product domains that are arities
/// become type variables numbered from `n`, and their names are returned.
pub fn erase_type_with(
    ck: &Checker<'_>,
    ctx: &Ctx,
    ectx: &ECtx,
    ty: &Term,
    next_var: Option<usize>,
) -> ErasureResult<(Vec<Name>, BoxType)> {
    let t = ck.reduce_biz(ctx, ty)?;
    if ck.flag_of_type(ctx, &t)?.is_logical {
        return Ok((vec![], BoxType::TBox));
    }
    match &t {
        Term::Rel(i) => Ok((vec![], erase_var(ectx, *i))),
        Term::Sort(_) => Ok((vec![], BoxType::TBox)),
        Term::Product { name, dom, cod } => {
            let dflag = ck.flag_of_type(ctx, dom)?;
            let inner = ctx.with(name.clone(), (**dom).clone());
            if dflag.is_logical {
                let (vs, c) =
                    erase_type_with(ck, &inner, &ectx.with(ECtxEntry::RelOther), cod, next_var)?;
                Ok((vs, BoxType::arr(BoxType::TBox, c)))
            } else if !dflag.conv_to_arity {
                // Type variables inside a domain would not be collected, so the
                // domain is erased without allocating any.
                let (_, d) = erase_type_with(ck, ctx, ectx, dom, None)?;
                let (vs, c) =
                    erase_type_with(ck, &inner, &ectx.with(ECtxEntry::RelOther), cod, next_var)?;
                Ok((vs, BoxType::arr(d, c)))
            } else {
                let kind = match next_var {
                    Some(n) => ECtxEntry::RelTypeVar(n),
                    None => ECtxEntry::RelOther,
                };
                let (mut vs, c) =
                    erase_type_with(ck, &inner, &ectx.with(kind), cod, next_var.map(|n| n + 1))?;
                if next_var.is_some() {
                    vs.insert(0, name.clone());
                }
                Ok((vs, BoxType::arr(BoxType::TBox, c)))
            }
        }
        Term::App(..) => {
            let (hd, args) = decompose_app(&t);
            let h = erase_type_head(ectx, hd);
            if can_have_args(&h) {
                let args: Vec<Term> = args.into_iter().cloned().collect();
                Ok((vec![], erase_type_app(ck, ctx, ectx, &args, h)?))
            } else {
                Ok((vec![], h))
            }
        }
        Term::Const(k) => Ok((vec![], BoxType::TConst(k.clone()))),
        Term::Ind(k) => Ok((vec![], BoxType::TInd(k.clone()))),
        _ => Ok((vec![], BoxType::TAny)),
    }
}

/// Fold type arguments onto `head`: proofs and propositions become `TBox`,
/// types are erased, anything else becomes `TAny`.
pub fn erase_type_app(
    ck: &Checker<'_>,
    ctx: &Ctx,
    ectx: &ECtx,
    args: &[Term],
    head: BoxType,
) -> ErasureResult<BoxType> {
    let mut acc = head;
    for a in args {
        let aty = ck.infer(ctx, a)?;
        let flag = ck.flag_of_type(ctx, &aty)?;
        let ea = if flag.is_logical {
            BoxType::TBox
        } else if flag.is_sort {
            erase_type_with(ck, ctx, ectx, a, None)?.1
        } else {
            BoxType::TAny
        };
        acc = BoxType::app(acc, ea);
    }
    Ok(acc)
}

/// Environment-level entry point with a fresh checker.
pub fn erase_type(
    env: &GlobalEnv,
    ctx: &Ctx,
    ectx: &ECtx,
    ty: &Term,
    next_var: Option<usize>,
) -> ErasureResult<(Vec<Name>, BoxType)> {
    erase_type_with(&Checker::new(env), ctx, ectx, ty, next_var)
}

/// Erase a type scheme `t` inhabiting the arity whose binders are `actx`.
/// Every binder of the spine contributes a name; binders whose type is an
/// arity become the type variable with the binder's position as level.
pub fn erase_type_scheme(
    ck: &Checker<'_>,
    ctx: &Ctx,
    ectx: &ECtx,
    actx: &[(Name, Term)],
    t: &Term,
    next_var: usize,
) -> ErasureResult<(Vec<Name>, BoxType)> {
    let Some(((aname, aty), rest)) = actx.split_first() else {
        return Ok((vec![], erase_type_with(ck, ctx, ectx, t, None)?.1));
    };
    let t = ck.reduce_biz(ctx, t)?;
    let (name, dom, body) = match t {
        Term::Lambda { name, ty, body } => (name, *ty, *body),
        other => {
            let name = if aname == ANON {
                eta_name(next_var)
            } else {
                aname.clone()
            };
            let body = Term::app(lift(&other, 1, 0), Term::Rel(0));
            (name, aty.clone(), body)
        }
    };
    let flag = ck.flag_of_type(ctx, &dom)?;
    let kind = if flag.conv_to_arity {
        ECtxEntry::RelTypeVar(next_var)
    } else {
        ECtxEntry::RelOther
    };
    let inner = ctx.with(name.clone(), dom);
    let (mut vs, ty) = erase_type_scheme(ck, &inner, &ectx.with(kind), rest, &body, next_var + 1)?;
    vs.insert(0, name);
    Ok((vs, ty))
}

fn eta_name(i: usize) -> Name {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}
