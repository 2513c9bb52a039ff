//! Erasure of whole environments, restricted to what the roots depend on.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::term::{Annot, TermEraser};
use super::types::{erase_type_scheme, erase_type_with, ECtx, ECtxEntry};
use super::{
    BoxType, ErasedConstant, ErasedCtor, ErasedDecl, ErasedEnv, ErasedInductive, ErasureError,
    ErasureResult, TypeAlias, TypeVarInfo,
};
use crate::ast::{ConstantDecl, Decl, GlobalEnv, InductiveDecl, Kername, Name, Sort, Term};
use crate::check::{Checker, Ctx};

/// Annotations recorded while erasing constant bodies.
#[derive(Clone, Debug, Default)]
pub struct ErasureTrace {
    pub bodies: HashMap<Kername, Annot>,
}

pub fn erase_env(env: &GlobalEnv, roots: &[Kername]) -> ErasureResult<ErasedEnv> {
    erase_env_with(&Checker::new(env), roots, false).map(|(e, _)| e)
}

pub fn erase_env_annotated(
    env: &GlobalEnv,
    roots: &[Kername],
) -> ErasureResult<(ErasedEnv, ErasureTrace)> {
    erase_env_with(&Checker::new(env), roots, true)
}

/// Erase `roots` and, transitively, every declaration their erased forms
/// mention. The result keeps the source order.
pub fn erase_env_with(
    ck: &Checker<'_>,
    roots: &[Kername],
    annotate: bool,
) -> ErasureResult<(ErasedEnv, ErasureTrace)> {
    let env = ck.env();
    let mut done: HashMap<Kername, ErasedDecl> = HashMap::new();
    let mut trace = ErasureTrace::default();
    let mut queued: HashSet<Kername> = HashSet::new();
    let mut work: Vec<Kername> = Vec::new();
    for r in roots {
        if env.lookup(r).is_none() {
            return Err(ErasureError::UnknownRoot(r.clone()));
        }
        if queued.insert(r.clone()) {
            work.push(r.clone());
        }
    }
    while let Some(k) = work.pop() {
        ck.refuel();
        ck.set_location(k.to_string());
        let (d, annot) = match env.lookup(&k) {
            Some(Decl::Constant(c)) => erase_constant(ck, c, annotate)?,
            Some(Decl::Inductive(i)) => (ErasedDecl::Inductive(erase_inductive(ck, i)?), None),
            None => return Err(ErasureError::UnknownRoot(k)),
        };
        if let Some(a) = annot {
            trace.bodies.insert(k.clone(), a);
        }
        let mut deps = Vec::new();
        decl_globals(&d, &mut deps);
        for dep in deps {
            if env.lookup(&dep).is_some() && queued.insert(dep.clone()) {
                work.push(dep);
            }
        }
        done.insert(k, d);
    }
    let order: BTreeSet<(usize, Kername)> = done
        .keys()
        .map(|k| (env.position(k).unwrap_or(usize::MAX), k.clone()))
        .collect();
    let decls = order
        .into_iter()
        .map(|(_, k)| done.remove(&k).expect("erased"))
        .collect();
    Ok((ErasedEnv::from_decls(decls), trace))
}

/// Global names an erased declaration refers to.
pub fn decl_globals(d: &ErasedDecl, out: &mut Vec<Kername>) {
    match d {
        ErasedDecl::Constant(c) => {
            c.ty.globals(out);
            if let Some(b) = &c.body {
                b.globals(out);
            }
        }
        ErasedDecl::Inductive(i) => {
            for c in &i.ctors {
                for (_, t) in &c.args {
                    t.globals(out);
                }
            }
        }
        ErasedDecl::TypeAlias(a) => a.ty.globals(out),
    }
}

/// Binders of a type that reduces to `forall .., sort`.
fn arity_binders(ck: &Checker<'_>, ty: &Term) -> ErasureResult<Vec<(Name, Term)>> {
    let mut ctx = Ctx::new();
    let mut out = Vec::new();
    let mut cur = ck.whnf(&ctx, ty)?;
    while let Term::Product { name, dom, cod } = cur {
        out.push((name.clone(), (*dom).clone()));
        ctx.push(name, *dom);
        cur = ck.whnf(&ctx, &cod)?;
    }
    Ok(out)
}

/// Erasure-context kinds of the leading products of a constant's type, in
/// the numbering used by [`erase_type_with`].
fn leading_kinds(ck: &Checker<'_>, ty: &Term) -> ErasureResult<Vec<ECtxEntry>> {
    let mut ctx = Ctx::new();
    let mut out = Vec::new();
    let mut next = 0;
    let mut cur = ck.reduce_biz(&ctx, ty)?;
    while let Term::Product { name, dom, cod } = cur {
        let flag = ck.flag_of_type(&ctx, &dom)?;
        if !flag.is_logical && flag.conv_to_arity {
            out.push(ECtxEntry::RelTypeVar(next));
            next += 1;
        } else {
            out.push(ECtxEntry::RelOther);
        }
        ctx.push(name, *dom);
        cur = ck.reduce_biz(&ctx, &cod)?;
    }
    Ok(out)
}

fn erase_constant(
    ck: &Checker<'_>,
    c: &ConstantDecl,
    annotate: bool,
) -> ErasureResult<(ErasedDecl, Option<Annot>)> {
    let ctx = Ctx::new();
    let flag = ck.flag_of_type(&ctx, &c.ty)?;
    if flag.conv_to_arity {
        let binders = arity_binders(ck, &c.ty)?;
        let (type_vars, ty) = if flag.is_logical {
            (binders.into_iter().map(|b| b.0).collect(), BoxType::TBox)
        } else {
            match &c.body {
                Some(b) => erase_type_scheme(ck, &ctx, &ECtx::new(), &binders, b, 0)?,
                None => (binders.into_iter().map(|b| b.0).collect(), BoxType::TAny),
            }
        };
        let alias = TypeAlias {
            name: c.name.clone(),
            type_vars,
            ty,
        };
        return Ok((ErasedDecl::TypeAlias(alias), None));
    }
    let (type_vars, ty) = erase_type_with(ck, &ctx, &ECtx::new(), &c.ty, Some(0))?;
    let (body, annot) = match &c.body {
        Some(b) => {
            let lead = leading_kinds(ck, &c.ty)?;
            let er = TermEraser { ck, annotate };
            let (t, a) = er.erase(&mut Ctx::new(), &mut ECtx::new(), b, &lead)?;
            (Some(t), annotate.then_some(a))
        }
        None => (None, None),
    };
    Ok((
        ErasedDecl::Constant(ErasedConstant {
            name: c.name.clone(),
            type_vars,
            ty,
            body,
        }),
        annot,
    ))
}

fn erase_inductive(ck: &Checker<'_>, d: &InductiveDecl) -> ErasureResult<ErasedInductive> {
    let mut ctx = Ctx::new();
    let mut ectx = ECtx::new();
    let mut type_vars = Vec::new();
    for (i, (n, ty)) in d.params.iter().enumerate() {
        let flag = ck.flag_of_type(&ctx, ty)?;
        type_vars.push(TypeVarInfo {
            name: n.clone(),
            is_logical: flag.is_logical,
            is_arity: flag.conv_to_arity,
        });
        ctx.push(n.clone(), ty.clone());
        ectx.push(ECtxEntry::RelTypeVar(i));
    }
    let mut ctors = Vec::new();
    for c in &d.ctors {
        let mut cctx = ctx.clone();
        let mut cectx = ectx.clone();
        let mut args = Vec::new();
        for (n, ty) in &c.args {
            let (_, t) = erase_type_with(ck, &cctx, &cectx, ty, None)?;
            args.push((n.clone(), t));
            cctx.push(n.clone(), ty.clone());
            cectx.push(ECtxEntry::RelOther);
        }
        ctors.push(ErasedCtor {
            name: c.name.clone(),
            args,
        });
    }
    Ok(ErasedInductive {
        name: d.name.clone(),
        type_vars,
        npars: d.param_count(),
        is_prop: d.arity_telescope().1 == Some(Sort::Prop),
        ctors,
    })
}
