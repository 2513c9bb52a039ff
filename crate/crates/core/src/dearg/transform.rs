//! Removal of masked arguments from terms, declarations and values.

use std::collections::HashMap;
use std::rc::Rc;

use super::analysis::{analyze_usage_with, check_masks, spine, AnalysisOptions};
use super::{filter_by, trim, ConstMasks, DeargError, DeargResult, IndMasks, Mask};
use crate::ast::Kername;
use crate::boxir::{BoxFixDef, BoxTerm, BoxValue};
use crate::erasure::{
    Annot, AnnotatedEnv, BoxType, ErasedConstant, ErasedCtor, ErasedDecl, ErasedEnv,
    ErasedInductive, TypeAlias,
};

static EMPTY: Annot = Annot {
    ty: None,
    children: Vec::new(),
};

fn child(a: &Annot, i: usize) -> &Annot {
    a.child(i).unwrap_or(&EMPTY)
}

/// Drop the arrow domains at masked positions.
pub(super) fn drop_domains(ty: &BoxType, mask: &[bool]) -> BoxType {
    match (ty, mask.split_first()) {
        (BoxType::TArr(d, c), Some((bit, rest))) => {
            let c = drop_domains(c, rest);
            if *bit {
                c
            } else {
                BoxType::arr((**d).clone(), c)
            }
        }
        _ => ty.clone(),
    }
}

/// Remove the logical parameters of inductive types applied in `ty`.
pub fn dearg_type_params(im: &IndMasks, ty: &BoxType) -> BoxType {
    match ty {
        BoxType::TArr(d, c) => BoxType::arr(dearg_type_params(im, d), dearg_type_params(im, c)),
        BoxType::TApp(..) => {
            let (head, args) = ty.decompose_app();
            let args: Vec<BoxType> = args.iter().map(|a| dearg_type_params(im, a)).collect();
            let args = match head {
                BoxType::TInd(k) => match im.get(k) {
                    Some(m) => filter_by(&m.param_mask, &args),
                    None => args,
                },
                _ => args,
            };
            args.into_iter().fold(head.clone(), BoxType::app)
        }
        _ => ty.clone(),
    }
}

struct Dg<'m> {
    im: &'m IndMasks,
    cm: &'m ConstMasks,
    /// Constant being processed, for error reports.
    owner: Kername,
}

impl Dg<'_> {
    fn ty(&self, a: &Annot) -> Option<BoxType> {
        a.ty.as_ref().map(|t| dearg_type_params(self.im, t))
    }

    fn head_mask(&self, head: &BoxTerm, locals: &[Option<Mask>]) -> Option<Mask> {
        match head {
            BoxTerm::Const(k) => self.cm.get(k).cloned(),
            BoxTerm::Construct(ind, c) => self.im.ctor_app_mask(ind, *c),
            BoxTerm::Rel(i) => locals
                .len()
                .checked_sub(i + 1)
                .and_then(|j| locals[j].clone()),
            _ => None,
        }
    }

    fn not_expanded(&self, head: &BoxTerm) -> DeargError {
        DeargError::NotExpanded(match head {
            BoxTerm::Const(k) | BoxTerm::Construct(k, _) => k.clone(),
            _ => self.owner.clone(),
        })
    }

    fn term(
        &self,
        t: &BoxTerm,
        a: &Annot,
        locals: &mut Vec<Option<Mask>>,
    ) -> DeargResult<(BoxTerm, Annot)> {
        match t {
            BoxTerm::App(..) => self.spine(t, a, locals),
            BoxTerm::Box => Ok((t.clone(), Annot::leaf(self.ty(a)))),
            BoxTerm::Rel(_) | BoxTerm::Const(_) | BoxTerm::Construct(..) => {
                let ty = self.ty(a);
                match self.head_mask(t, locals) {
                    Some(m) if !trim(&m).is_empty() => Err(self.not_expanded(t)),
                    _ => Ok((t.clone(), Annot::leaf(ty))),
                }
            }
            BoxTerm::Lambda { name, body } => {
                locals.push(None);
                let r = self.term(body, child(a, 0), locals);
                locals.pop();
                let (b, ba) = r?;
                Ok((
                    BoxTerm::lam(name.clone(), b),
                    Annot::node(self.ty(a), vec![ba]),
                ))
            }
            BoxTerm::LetIn { name, value, body } => {
                let (v, va) = self.term(value, child(a, 0), locals)?;
                locals.push(None);
                let r = self.term(body, child(a, 1), locals);
                locals.pop();
                let (b, ba) = r?;
                Ok((
                    BoxTerm::LetIn {
                        name: name.clone(),
                        value: Box::new(v),
                        body: Box::new(b),
                    },
                    Annot::node(self.ty(a), vec![va, ba]),
                ))
            }
            BoxTerm::Case {
                ind,
                discr,
                branches,
            } => {
                let (d, da) = self.term(discr, child(a, 0), locals)?;
                let masks = self.im.get(ind).map(|m| &m.ctor_masks);
                let mut out = Vec::with_capacity(branches.len());
                let mut annots = vec![da];
                for (c, (arity, body)) in branches.iter().enumerate() {
                    let (b, ba) = self.term(body, child(a, c + 1), locals)?;
                    let m = masks
                        .and_then(|ms| ms.get(c))
                        .map(|m| trim(m))
                        .unwrap_or(&[]);
                    if m.len() > *arity {
                        return Err(DeargError::InvalidMasks(format!(
                            "mask of constructor {c} of {ind} exceeds the branch arity"
                        )));
                    }
                    let (b, ba) = strip_lambdas(&b, &ba, m)
                        .ok_or_else(|| DeargError::NotExpanded(ind.clone()))??;
                    let removed = m.iter().filter(|x| **x).count();
                    out.push((arity - removed, b));
                    annots.push(ba);
                }
                Ok((
                    BoxTerm::Case {
                        ind: ind.clone(),
                        discr: Box::new(d),
                        branches: out,
                    },
                    Annot::node(self.ty(a), annots),
                ))
            }
            BoxTerm::Fix { defs, struct_index } => {
                let n = defs.len();
                locals.extend(std::iter::repeat_n(None, n));
                let r: DeargResult<Vec<(BoxFixDef, Annot)>> = defs
                    .iter()
                    .enumerate()
                    .map(|(i, d)| {
                        let (b, ba) = self.term(&d.body, child(a, i), locals)?;
                        Ok((
                            BoxFixDef {
                                name: d.name.clone(),
                                body: b,
                            },
                            ba,
                        ))
                    })
                    .collect();
                locals.truncate(locals.len() - n);
                let (defs, annots): (Vec<_>, Vec<_>) = r?.into_iter().unzip();
                Ok((
                    BoxTerm::Fix {
                        defs,
                        struct_index: *struct_index,
                    },
                    Annot::node(self.ty(a), annots),
                ))
            }
            BoxTerm::EmptyMatch { ind, discr } => {
                let (d, da) = self.term(discr, child(a, 0), locals)?;
                Ok((
                    BoxTerm::EmptyMatch {
                        ind: ind.clone(),
                        discr: Box::new(d),
                    },
                    Annot::node(self.ty(a), vec![da]),
                ))
            }
        }
    }

    fn spine(
        &self,
        t: &BoxTerm,
        a: &Annot,
        locals: &mut Vec<Option<Mask>>,
    ) -> DeargResult<(BoxTerm, Annot)> {
        // Application nodes from the outside in, with their annotations.
        let mut nodes: Vec<(&Annot, &BoxTerm, &Annot)> = vec![];
        let (mut cur, mut ca) = (t, a);
        while let BoxTerm::App(f, x) = cur {
            nodes.push((ca, x, child(ca, 1)));
            cur = f;
            ca = child(ca, 0);
        }
        nodes.reverse();
        let head = cur;
        let mask = self.head_mask(head, locals).unwrap_or_default();
        if nodes.len() < trim(&mask).len() {
            return Err(self.not_expanded(head));
        }
        let (h, mut ha) = match head {
            BoxTerm::Rel(_) | BoxTerm::Const(_) | BoxTerm::Construct(..) => {
                (head.clone(), Annot::leaf(self.ty(ca)))
            }
            _ => self.term(head, ca, locals)?,
        };
        ha.ty = ha.ty.map(|t| drop_domains(&t, &mask));
        let kept: Vec<usize> = (0..nodes.len())
            .filter(|i| !mask.get(*i).copied().unwrap_or(false))
            .collect();
        if kept.is_empty() {
            // Every argument goes; the head stands for the whole application.
            ha.ty = self.ty(nodes.last().expect("non-empty spine").0).or(ha.ty);
            return Ok((h, ha));
        }
        let (mut res, mut ra) = (h, ha);
        for (j, &i) in kept.iter().enumerate() {
            let last = kept.get(j + 1).map_or(nodes.len() - 1, |n| n - 1);
            let (x, xa) = self.term(nodes[i].1, nodes[i].2, locals)?;
            res = BoxTerm::app(res, x);
            ra = Annot::node(self.ty(nodes[last].0), vec![ra, xa]);
        }
        Ok((res, ra))
    }
}

/// Remove the leading lambdas selected by `mask`. `None` when there are too
/// few lambdas; an error when a removed binder is still referenced.
fn strip_lambdas(t: &BoxTerm, a: &Annot, mask: &[bool]) -> Option<DeargResult<(BoxTerm, Annot)>> {
    let Some((bit, rest)) = mask.split_first() else {
        return Some(Ok((t.clone(), a.clone())));
    };
    let BoxTerm::Lambda { name, body } = t else {
        return None;
    };
    let (inner, ia) = match strip_lambdas(body, child(a, 0), rest)? {
        Ok(r) => r,
        Err(e) => return Some(Err(e)),
    };
    if *bit {
        if inner.occurs(0) {
            return Some(Err(DeargError::InvalidMasks(format!(
                "removed binder `{name}` is used"
            ))));
        }
        Some(Ok((inner.shift(-1, 0), ia)))
    } else {
        let ty = a.ty.as_ref().map(|t| drop_domains(t, mask));
        Some(Ok((
            BoxTerm::lam(name.clone(), inner),
            Annot::node(ty, vec![ia]),
        )))
    }
}

fn dearg_annotated(
    im: &IndMasks,
    cm: &ConstMasks,
    t: &BoxTerm,
    a: &Annot,
) -> DeargResult<(BoxTerm, Annot)> {
    let dg = Dg {
        im,
        cm,
        owner: Kername::new(["_"]),
    };
    dg.term(t, a, &mut vec![])
}

/// Remove masked arguments from applications and branches in `t`.
pub fn dearg(im: &IndMasks, cm: &ConstMasks, t: &BoxTerm) -> DeargResult<BoxTerm> {
    Ok(dearg_annotated(im, cm, t, &EMPTY)?.0)
}

fn dearg_body(
    im: &IndMasks,
    cm: &ConstMasks,
    c: &ErasedConstant,
    body: &BoxTerm,
    a: &Annot,
) -> DeargResult<(BoxTerm, Annot)> {
    let dg = Dg {
        im,
        cm,
        owner: c.name.clone(),
    };
    let mask = cm.get(&c.name).cloned().unwrap_or_default();
    let too_short =
        || DeargError::InvalidMasks(format!("mask of {} is longer than its lambdas", c.name));
    match body {
        BoxTerm::Fix { defs, struct_index }
            if defs.len() == 1 && spine(body).fix_struct.is_some() =>
        {
            let d = &defs[0];
            let mut locals = vec![Some(mask.clone())];
            let (b, ba) = dg.term(&d.body, child(a, 0), &mut locals)?;
            let (b, ba) = strip_lambdas(&b, &ba, &mask).ok_or_else(too_short)??;
            let removed = mask.iter().take(*struct_index).filter(|x| **x).count();
            let ty = dg.ty(a).map(|t| drop_domains(&t, &mask));
            Ok((
                BoxTerm::Fix {
                    defs: vec![BoxFixDef {
                        name: d.name.clone(),
                        body: b,
                    }],
                    struct_index: struct_index - removed,
                },
                Annot::node(ty, vec![ba]),
            ))
        }
        _ => {
            let (b, ba) = dg.term(body, a, &mut vec![])?;
            strip_lambdas(&b, &ba, &mask).ok_or_else(too_short)?
        }
    }
}

fn dearg_cst_annotated(
    im: &IndMasks,
    cm: &ConstMasks,
    c: &ErasedConstant,
    a: Option<&Annot>,
) -> DeargResult<(ErasedConstant, Option<Annot>)> {
    let mask = cm.get(&c.name).cloned().unwrap_or_default();
    let ty = dearg_type_params(im, &drop_domains(&c.ty, &mask));
    let (body, annot) = match &c.body {
        Some(b) => {
            let (b, ba) = dearg_body(im, cm, c, b, a.unwrap_or(&EMPTY))?;
            (Some(b), a.map(|_| ba))
        }
        None => (None, None),
    };
    Ok((
        ErasedConstant {
            name: c.name.clone(),
            type_vars: c.type_vars.clone(),
            ty,
            body,
        },
        annot,
    ))
}

/// Dearg a constant: its body, its own parameters and its signature.
pub fn dearg_cst(
    im: &IndMasks,
    cm: &ConstMasks,
    c: &ErasedConstant,
) -> DeargResult<ErasedConstant> {
    Ok(dearg_cst_annotated(im, cm, c, None)?.0)
}

/// Renumber type variables after some were removed; removed ones become `□`.
fn renumber(ty: &BoxType, map: &[Option<usize>]) -> BoxType {
    match ty {
        BoxType::TVar(i) => match map.get(*i) {
            Some(Some(j)) => BoxType::TVar(*j),
            Some(None) => BoxType::TBox,
            None => ty.clone(),
        },
        BoxType::TApp(f, x) => BoxType::app(renumber(f, map), renumber(x, map)),
        BoxType::TArr(d, c) => BoxType::arr(renumber(d, map), renumber(c, map)),
        _ => ty.clone(),
    }
}

/// Dearg an inductive: drop masked constructor arguments and logical
/// parameters. Constructor applications no longer carry parameters.
pub fn dearg_mib(im: &IndMasks, ind: &ErasedInductive) -> ErasedInductive {
    let Some(m) = im.get(&ind.name) else {
        return ind.clone();
    };
    let mut map = Vec::with_capacity(ind.type_vars.len());
    let mut next = 0;
    for i in 0..ind.type_vars.len() {
        if m.param_mask.get(i).copied().unwrap_or(false) {
            map.push(None);
        } else {
            map.push(Some(next));
            next += 1;
        }
    }
    let ctors = ind
        .ctors
        .iter()
        .enumerate()
        .map(|(c, ctor)| {
            let cmask = m.ctor_masks.get(c).map(Vec::as_slice).unwrap_or(&[]);
            ErasedCtor {
                name: ctor.name.clone(),
                args: filter_by(cmask, &ctor.args)
                    .into_iter()
                    .map(|(n, t)| (n, dearg_type_params(im, &renumber(&t, &map))))
                    .collect(),
            }
        })
        .collect();
    ErasedInductive {
        name: ind.name.clone(),
        type_vars: filter_by(&m.param_mask, &ind.type_vars),
        npars: if m.npars == ind.npars { 0 } else { ind.npars },
        is_prop: ind.is_prop,
        ctors,
    }
}

pub fn dearg_env(im: &IndMasks, cm: &ConstMasks, env: &ErasedEnv) -> DeargResult<ErasedEnv> {
    Ok(dearg_env_inner(im, cm, env, None)?.0)
}

pub fn dearg_env_annotated(
    im: &IndMasks,
    cm: &ConstMasks,
    env: &ErasedEnv,
    annots: &AnnotatedEnv,
) -> DeargResult<(ErasedEnv, AnnotatedEnv)> {
    let (env, a) = dearg_env_inner(im, cm, env, Some(annots))?;
    Ok((env, a.unwrap_or_default()))
}

fn dearg_env_inner(
    im: &IndMasks,
    cm: &ConstMasks,
    env: &ErasedEnv,
    annots: Option<&AnnotatedEnv>,
) -> DeargResult<(ErasedEnv, Option<AnnotatedEnv>)> {
    let mut decls = Vec::with_capacity(env.len());
    let mut bodies = HashMap::new();
    for d in env.decls() {
        decls.push(match d {
            ErasedDecl::Constant(c) => {
                let a = annots.and_then(|an| an.get(&c.name));
                let (c2, a2) = dearg_cst_annotated(im, cm, c, a)?;
                if let Some(a2) = a2 {
                    bodies.insert(c.name.clone(), a2);
                }
                ErasedDecl::Constant(c2)
            }
            ErasedDecl::Inductive(i) => ErasedDecl::Inductive(dearg_mib(im, i)),
            ErasedDecl::TypeAlias(t) => ErasedDecl::TypeAlias(TypeAlias {
                name: t.name.clone(),
                type_vars: t.type_vars.clone(),
                ty: dearg_type_params(im, &t.ty),
            }),
        });
    }
    Ok((
        ErasedEnv::from_decls(decls),
        annots.map(|_| AnnotatedEnv { bodies }),
    ))
}

/// Project a value of the original program onto the dearged program by
/// removing masked constructor arguments.
pub fn dearg_value<'a>(im: &IndMasks, v: &Rc<BoxValue<'a>>) -> Rc<BoxValue<'a>> {
    match &**v {
        BoxValue::ConstructVal { ind, ctor, args } => {
            let args: Vec<_> = match im.ctor_app_mask(ind, *ctor) {
                Some(m) => filter_by(&m, args),
                None => args.clone(),
            };
            Rc::new(BoxValue::ConstructVal {
                ind: ind.clone(),
                ctor: *ctor,
                args: args.iter().map(|a| dearg_value(im, a)).collect(),
            })
        }
        _ => v.clone(),
    }
}

#[derive(Clone, Debug)]
pub struct DeargOutput {
    pub env: ErasedEnv,
    pub annots: Option<AnnotatedEnv>,
    /// Masks used by each round, in order.
    pub rounds: Vec<(IndMasks, ConstMasks)>,
}

impl DeargOutput {
    /// Project a value of the input program through every round.
    pub fn project<'a>(&self, v: &Rc<BoxValue<'a>>) -> Rc<BoxValue<'a>> {
        self.rounds
            .iter()
            .fold(v.clone(), |v, (im, _)| dearg_value(im, &v))
    }
}

/// Analyse and dearg `iterations` times.
pub fn run_dearg(
    env: &ErasedEnv,
    annots: Option<&AnnotatedEnv>,
    iterations: usize,
    opts: AnalysisOptions,
) -> DeargResult<DeargOutput> {
    let mut env = env.clone();
    let mut annots = annots.cloned();
    let mut rounds = vec![];
    for _ in 0..iterations {
        let (im, cm) = analyze_usage_with(&env, opts);
        check_masks(&env, &im, &cm)?;
        let (e, a) = dearg_env_inner(&im, &cm, &env, annots.as_ref())?;
        env = e;
        annots = a;
        rounds.push((im, cm));
    }
    Ok(DeargOutput {
        env,
        annots,
        rounds,
    })
}
