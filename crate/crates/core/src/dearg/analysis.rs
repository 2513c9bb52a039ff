//! Usage analysis: which parameters and constructor arguments are dead.

use std::collections::BTreeMap;

use super::{trim, ConstMasks, DeargError, DeargResult, IndMasks, Mask, MibMask};
use crate::ast::Kername;
use crate::boxir::BoxTerm;
use crate::erasure::{BoxType, ErasedConstant, ErasedDecl, ErasedEnv};

#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions {
    /// Keep one argument of constants whose arguments are all logical, so
    /// their bodies stay guarded by a lambda.
    pub keep_one: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { keep_one: true }
    }
}

/// The lambdas a constant mask ranges over.
pub(super) struct Spine<'a> {
    /// Body under the `i`-th lambda, for each leading lambda.
    pub bodies: Vec<&'a BoxTerm>,
    /// Set when the constant body is a single fixpoint whose lambdas are used.
    pub fix_struct: Option<usize>,
}

pub(super) fn spine(body: &BoxTerm) -> Spine<'_> {
    let (mut cur, fix_struct) = match body {
        BoxTerm::Fix { defs, struct_index } if defs.len() == 1 => {
            (&defs[0].body, Some(*struct_index))
        }
        _ => (body, None),
    };
    let mut bodies = vec![];
    while let BoxTerm::Lambda { body, .. } = cur {
        bodies.push(&**body);
        cur = body;
    }
    Spine { bodies, fix_struct }
}

/// Smallest number of arguments `Rel var` is applied to inside `t`.
pub(super) fn min_applied(t: &BoxTerm, var: usize) -> Option<usize> {
    fn go(t: &BoxTerm, var: usize, best: &mut Option<usize>) {
        let (head, args) = t.decompose_app();
        if let BoxTerm::Rel(i) = head {
            if *i == var {
                *best = Some(best.map_or(args.len(), |b| b.min(args.len())));
            }
        }
        if !args.is_empty() {
            if !matches!(head, BoxTerm::Rel(_)) {
                go(head, var, best);
            }
            for a in args {
                go(a, var, best);
            }
            return;
        }
        match t {
            BoxTerm::Lambda { body, .. } => go(body, var + 1, best),
            BoxTerm::LetIn { value, body, .. } => {
                go(value, var, best);
                go(body, var + 1, best);
            }
            BoxTerm::Case {
                discr, branches, ..
            } => {
                go(discr, var, best);
                for (_, b) in branches {
                    go(b, var, best);
                }
            }
            BoxTerm::Fix { defs, .. } => {
                for d in defs {
                    go(&d.body, var + defs.len(), best);
                }
            }
            BoxTerm::EmptyMatch { discr, .. } => go(discr, var, best),
            _ => {}
        }
    }
    let mut best = None;
    go(t, var, &mut best);
    best
}

fn is_logical_ty(t: &BoxType) -> bool {
    matches!(t, BoxType::TBox | BoxType::TAny)
}

fn constant_mask(c: &ErasedConstant, body: &BoxTerm, opts: AnalysisOptions) -> Mask {
    let sp = spine(body);
    let n = sp.bodies.len();
    let mut mask: Mask = sp.bodies.iter().map(|b| !b.occurs(0)).collect();
    if let Some(si) = sp.fix_struct {
        // The fixpoint variable sits just outside the lambdas.
        let inner = sp.bodies.last().copied().unwrap_or(body);
        let limit = if n == 0 {
            0
        } else {
            min_applied(inner, n).unwrap_or(n)
        };
        for (i, bit) in mask.iter_mut().enumerate() {
            if i >= limit || i == si {
                *bit = false;
            }
        }
    }
    if opts.keep_one && n > 0 {
        let (doms, _) = c.ty.decompose_arr();
        if doms.len() >= n && doms[..n].iter().all(|d| is_logical_ty(d)) {
            mask[0] = false;
        }
    }
    mask
}

/// Mark which branch binders of every match are read.
fn collect_ctor_usage(t: &BoxTerm, used: &mut BTreeMap<Kername, Vec<Vec<bool>>>) {
    if let BoxTerm::Case { ind, branches, .. } = t {
        if let Some(u) = used.get_mut(ind) {
            for (c, (arity, body)) in branches.iter().enumerate() {
                let Some(uc) = u.get_mut(c) else { continue };
                let mut cur = body;
                for j in 0..*arity {
                    match cur {
                        BoxTerm::Lambda { body, .. } => {
                            if body.occurs(0) {
                                if let Some(b) = uc.get_mut(j) {
                                    *b = true;
                                }
                            }
                            cur = body;
                        }
                        _ => {
                            // Unexpanded branch: everything past here counts as used.
                            for b in uc.iter_mut().skip(j) {
                                *b = true;
                            }
                            break;
                        }
                    }
                }
            }
        }
    }
    for c in t.children() {
        collect_ctor_usage(c, used);
    }
}

pub fn analyze_usage(env: &ErasedEnv) -> (IndMasks, ConstMasks) {
    analyze_usage_with(env, AnalysisOptions::default())
}

pub fn analyze_usage_with(env: &ErasedEnv, opts: AnalysisOptions) -> (IndMasks, ConstMasks) {
    let mut used: BTreeMap<Kername, Vec<Vec<bool>>> = BTreeMap::new();
    for d in env.decls() {
        if let ErasedDecl::Inductive(i) = d {
            used.insert(
                i.name.clone(),
                i.ctors.iter().map(|c| vec![false; c.args.len()]).collect(),
            );
        }
    }
    let mut cm = ConstMasks::default();
    for d in env.decls() {
        if let ErasedDecl::Constant(c) = d {
            if let Some(b) = &c.body {
                collect_ctor_usage(b, &mut used);
                cm.0.insert(c.name.clone(), constant_mask(c, b, opts));
            }
        }
    }
    let mut im = IndMasks::default();
    for d in env.decls() {
        if let ErasedDecl::Inductive(i) = d {
            let u = &used[&i.name];
            let ctor_masks = i
                .ctors
                .iter()
                .zip(u)
                .map(|(c, uc)| {
                    c.args
                        .iter()
                        .zip(uc)
                        .map(|((_, ty), used)| !used && *ty == BoxType::TBox)
                        .collect()
                })
                .collect();
            im.0.insert(
                i.name.clone(),
                MibMask {
                    param_mask: i.type_vars.iter().map(|tv| tv.is_logical).collect(),
                    npars: i.npars,
                    ctor_masks,
                },
            );
        }
    }
    (im, cm)
}

/// Every constant and constructor in `t` is applied to at least as many
/// arguments as its trimmed mask is long.
pub fn is_expanded(im: &IndMasks, cm: &ConstMasks, t: &BoxTerm) -> bool {
    let (head, args) = t.decompose_app();
    let need = match head {
        BoxTerm::Const(k) => cm.get(k).map_or(0, |m| trim(m).len()),
        BoxTerm::Construct(ind, c) => im.ctor_app_mask(ind, *c).map_or(0, |m| trim(&m).len()),
        _ => 0,
    };
    if args.len() < need {
        return false;
    }
    if !args.is_empty() {
        let atomic = matches!(
            head,
            BoxTerm::Const(_) | BoxTerm::Construct(..) | BoxTerm::Rel(_)
        );
        return (atomic || is_expanded(im, cm, head))
            && args.iter().all(|a| is_expanded(im, cm, a));
    }
    t.children().into_iter().all(|c| is_expanded(im, cm, c))
}

/// Check that every bit set in the masks marks something genuinely unused.
pub fn check_masks(env: &ErasedEnv, im: &IndMasks, cm: &ConstMasks) -> DeargResult<()> {
    let bad = |s: String| Err(DeargError::InvalidMasks(s));
    for (k, m) in &cm.0 {
        let Some(c) = env.constant(k) else {
            return bad(format!("mask for unknown constant {k}"));
        };
        let Some(body) = &c.body else {
            if trim(m).is_empty() {
                continue;
            }
            return bad(format!("mask for axiom {k}"));
        };
        let sp = spine(body);
        let m = trim(m);
        if m.len() > sp.bodies.len() {
            return bad(format!("mask of {k} is longer than its lambdas"));
        }
        for (i, bit) in m.iter().enumerate() {
            if *bit && sp.bodies[i].occurs(0) {
                return bad(format!("argument {i} of {k} is used"));
            }
        }
        if let Some(si) = sp.fix_struct {
            if m.get(si).copied().unwrap_or(false) {
                return bad(format!("mask of {k} removes the structural argument"));
            }
            let n = sp.bodies.len();
            let inner = sp.bodies.last().copied().unwrap_or(body);
            if n > 0 && min_applied(inner, n).is_some_and(|a| a < m.len()) {
                return bad(format!("recursive call of {k} is under-applied"));
            }
        }
    }
    for (k, mm) in &im.0 {
        let Some(i) = env.inductive(k) else {
            return bad(format!("mask for unknown inductive {k}"));
        };
        if mm.npars != i.npars || mm.ctor_masks.len() != i.ctors.len() {
            return bad(format!("mask of {k} does not match its declaration"));
        }
        for (c, m) in i.ctors.iter().zip(&mm.ctor_masks) {
            if trim(m).len() > c.args.len() {
                return bad(format!("mask of {} is too long", c.name));
            }
        }
    }
    let mut used: BTreeMap<Kername, Vec<Vec<bool>>> = BTreeMap::new();
    for (k, mm) in &im.0 {
        used.insert(
            k.clone(),
            mm.ctor_masks.iter().map(|m| vec![false; m.len()]).collect(),
        );
    }
    for d in env.decls() {
        if let ErasedDecl::Constant(c) = d {
            if let Some(b) = &c.body {
                collect_ctor_usage(b, &mut used);
            }
        }
    }
    for (k, u) in &used {
        for (c, (uc, m)) in u.iter().zip(&im.0[k].ctor_masks).enumerate() {
            if uc.iter().zip(m).any(|(used, bit)| *used && *bit) {
                return bad(format!("constructor {c} of {k} has a used argument masked"));
            }
        }
    }
    Ok(())
}

pub fn valid_masks(env: &ErasedEnv, im: &IndMasks, cm: &ConstMasks) -> bool {
    check_masks(env, im, cm).is_ok()
}
