//! Helpers shared by the printers.

use boxtract_core::ast::Name;
use boxtract_core::boxir::BoxTerm;
use boxtract_core::erasure::{Annot, BoxType, ErasedConstant, ErasedEnv, ErasedInductive};

use crate::{BackendError, BackendResult};

pub(crate) static NO_ANNOT: Annot = Annot {
    ty: None,
    children: Vec::new(),
};

pub(crate) fn child(a: &Annot, i: usize) -> &Annot {
    a.children.get(i).unwrap_or(&NO_ANNOT)
}

/// Head and arguments of an application, each with its annotation.
pub(crate) fn spine<'t>(
    t: &'t BoxTerm,
    a: &'t Annot,
) -> (&'t BoxTerm, &'t Annot, Vec<(&'t BoxTerm, &'t Annot)>) {
    let mut args = vec![];
    let (mut t, mut a) = (t, a);
    while let BoxTerm::App(f, x) = t {
        args.push((&**x, child(a, 1)));
        a = child(a, 0);
        t = f;
    }
    args.reverse();
    (t, a, args)
}

/// Domain recorded on a lambda node.
pub(crate) fn lambda_domain(a: &Annot) -> Option<&BoxType> {
    match &a.ty {
        Some(BoxType::TArr(d, _)) => Some(d),
        _ => None,
    }
}

/// Leading lambdas: binder names and lambda annotations, then the body.
pub(crate) fn lambdas<'t>(
    t: &'t BoxTerm,
    a: &'t Annot,
) -> (Vec<(&'t Name, &'t Annot)>, &'t BoxTerm, &'t Annot) {
    let mut binders = vec![];
    let (mut t, mut a) = (t, a);
    while let BoxTerm::Lambda { name, body } = t {
        binders.push((name, a));
        a = child(a, 0);
        t = body;
    }
    (binders, t, a)
}

/// `ty` without its first `n` arrows.
pub(crate) fn drop_arrows(ty: &BoxType, n: usize) -> Option<&BoxType> {
    let mut cur = ty;
    for _ in 0..n {
        match cur {
            BoxType::TArr(_, c) => cur = c,
            _ => return None,
        }
    }
    Some(cur)
}

/// A top-level constant seen as a function definition.
pub(crate) struct FunView<'t> {
    /// Name of the fixpoint when the body is a single recursive definition.
    pub fix_name: Option<&'t Name>,
    pub params: Vec<(&'t Name, Option<BoxType>)>,
    pub ret: Option<BoxType>,
    pub body: &'t BoxTerm,
    pub body_annot: &'t Annot,
}

pub(crate) fn fun_view<'t>(
    c: &'t ErasedConstant,
    body: &'t BoxTerm,
    annot: &'t Annot,
) -> BackendResult<FunView<'t>> {
    let (fix_name, t, a) = match body {
        BoxTerm::Fix { defs, .. } if defs.len() == 1 => {
            (Some(&defs[0].name), &defs[0].body, child(annot, 0))
        }
        BoxTerm::Fix { .. } => return Err(BackendError::MutualFixpoint(c.name.to_string())),
        _ => (None, body, annot),
    };
    let (binders, body, body_annot) = lambdas(t, a);
    let (doms, _) = c.ty.decompose_arr();
    let params = binders
        .iter()
        .enumerate()
        .map(|(i, (n, la))| {
            let ty = doms
                .get(i)
                .map(|d| (*d).clone())
                .or_else(|| lambda_domain(la).cloned());
            (*n, ty)
        })
        .collect::<Vec<_>>();
    let ret = drop_arrows(&c.ty, params.len())
        .cloned()
        .or_else(|| body_annot.ty.clone());
    Ok(FunView {
        fix_name,
        params,
        ret,
        body,
        body_annot,
    })
}

/// Number of parameters the printed function for `c` takes.
pub(crate) fn arity(c: &ErasedConstant) -> usize {
    let t = match &c.body {
        Some(BoxTerm::Fix { defs, .. }) if defs.len() == 1 => &defs[0].body,
        Some(t) => t,
        None => return 0,
    };
    let mut n = 0;
    let mut cur = t;
    while let BoxTerm::Lambda { body, .. } = cur {
        n += 1;
        cur = body;
    }
    n
}

/// Does the type mention `𝕋`?
pub(crate) fn has_any(t: &BoxType) -> bool {
    match t {
        BoxType::TAny => true,
        BoxType::TApp(a, b) | BoxType::TArr(a, b) => has_any(a) || has_any(b),
        _ => false,
    }
}

/// Type variables that occur in `t`.
pub(crate) fn occurring_vars(t: &BoxType, out: &mut Vec<usize>) {
    match t {
        BoxType::TVar(i) => {
            if !out.contains(i) {
                out.push(*i);
            }
        }
        BoxType::TApp(a, b) | BoxType::TArr(a, b) => {
            occurring_vars(a, out);
            occurring_vars(b, out);
        }
        _ => {}
    }
}

pub(crate) fn inductive<'e>(
    env: &'e ErasedEnv,
    owner: &str,
    k: &boxtract_core::ast::Kername,
) -> BackendResult<&'e ErasedInductive> {
    env.inductive(k)
        .ok_or_else(|| BackendError::UnknownGlobal(owner.to_string(), k.clone()))
}

pub(crate) fn indent(s: &str, n: usize) -> String {
    let pad = " ".repeat(n);
    s.lines()
        .map(|l| {
            if l.is_empty() {
                String::new()
            } else {
                format!("{pad}{l}")
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Is parameter `i` of a top-level body read?
pub(crate) fn param_used(body: &BoxTerm, i: usize) -> bool {
    let mut cur = match body {
        BoxTerm::Fix { defs, .. } => &defs[0].body,
        t => t,
    };
    for _ in 0..i {
        match cur {
            BoxTerm::Lambda { body, .. } => cur = body,
            _ => return true,
        }
    }
    match cur {
        BoxTerm::Lambda { body, .. } => body.occurs(0),
        _ => true,
    }
}
