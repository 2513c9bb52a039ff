//! Erasure of terms to λ□, with an optional mirror tree of erased types.

use std::collections::HashMap;

use super::types::{erase_type_with, ECtx, ECtxEntry};
use super::{BoxType, ErasedDecl, ErasedEnv, ErasureError, ErasureResult};
use crate::ast::{GlobalEnv, Kername, Sort, Term};
use crate::boxir::{BoxFixDef, BoxTerm};
use crate::check::{Checker, Ctx};

/// Per-node data shaped exactly like a [`BoxTerm`]: children follow the
/// order of [`BoxTerm::children`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annot {
    pub ty: Option<BoxType>,
    pub children: Vec<Annot>,
}

impl Annot {
    pub fn leaf(ty: Option<BoxType>) -> Annot {
        Annot {
            ty,
            children: vec![],
        }
    }

    pub fn node(ty: Option<BoxType>, children: Vec<Annot>) -> Annot {
        Annot { ty, children }
    }

    /// Annotation tree with no data for `t`.
    pub fn empty_for(t: &BoxTerm) -> Annot {
        Annot::node(
            None,
            t.children().into_iter().map(Annot::empty_for).collect(),
        )
    }

    pub fn child(&self, i: usize) -> Option<&Annot> {
        self.children.get(i)
    }

    pub fn shape_matches(&self, t: &BoxTerm) -> bool {
        let cs = t.children();
        cs.len() == self.children.len()
            && cs
                .iter()
                .zip(&self.children)
                .all(|(c, a)| a.shape_matches(c))
    }
}

/// Annotations for the bodies of erased constants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnnotatedEnv {
    pub bodies: HashMap<Kername, Annot>,
}

impl AnnotatedEnv {
    pub fn get(&self, k: &Kername) -> Option<&Annot> {
        self.bodies.get(k)
    }
}

/// Check that every recorded annotation mirrors its body.
pub fn annotate(env: &ErasedEnv, trace: super::ErasureTrace) -> ErasureResult<AnnotatedEnv> {
    let mut out = AnnotatedEnv::default();
    for d in env.decls() {
        if let ErasedDecl::Constant(c) = d {
            if let (Some(body), Some(a)) = (&c.body, trace.bodies.get(&c.name)) {
                if !a.shape_matches(body) {
                    return Err(ErasureError::ShapeMismatch(c.name.to_string()));
                }
                out.bodies.insert(c.name.clone(), a.clone());
            }
        }
    }
    Ok(out)
}

pub(super) struct TermEraser<'a, 'e> {
    pub ck: &'a Checker<'e>,
    pub annotate: bool,
}

impl TermEraser<'_, '_> {
    /// `lead` gives the erasure-context kinds for the leading binders of a
    /// constant body, so that its type parameters annotate as type variables.
    pub fn erase(
        &self,
        ctx: &mut Ctx,
        ectx: &mut ECtx,
        t: &Term,
        lead: &[ECtxEntry],
    ) -> ErasureResult<(BoxTerm, Annot)> {
        let ty = self.ck.infer(ctx, t)?;
        let flag = self.ck.flag_of_type(ctx, &ty)?;
        if flag.is_logical || flag.conv_to_arity {
            let a = self.annotate.then_some(BoxType::TBox);
            return Ok((BoxTerm::Box, Annot::leaf(a)));
        }
        let my_ty = if self.annotate {
            Some(erase_type_with(self.ck, ctx, ectx, &ty, None)?.1)
        } else {
            None
        };
        Ok(match t {
            Term::Rel(i) => (BoxTerm::Rel(*i), Annot::leaf(my_ty)),
            Term::Const(k) => (BoxTerm::Const(k.clone()), Annot::leaf(my_ty)),
            Term::Construct(k, i) => (BoxTerm::Construct(k.clone(), *i), Annot::leaf(my_ty)),
            Term::Sort(_) | Term::Product { .. } | Term::Ind(_) => (
                BoxTerm::Box,
                Annot::leaf(self.annotate.then_some(BoxType::TBox)),
            ),
            Term::Lambda { name, ty, body } => {
                let (kind, rest) = match lead.split_first() {
                    Some((k, rest)) => (k.clone(), rest),
                    None => (ECtxEntry::RelOther, lead),
                };
                ctx.push(name.clone(), (**ty).clone());
                ectx.push(kind);
                let r = self.erase(ctx, ectx, body, rest);
                ctx.pop();
                ectx.pop();
                let (b, ba) = r?;
                (
                    BoxTerm::Lambda {
                        name: name.clone(),
                        body: Box::new(b),
                    },
                    Annot::node(my_ty, vec![ba]),
                )
            }
            Term::LetIn {
                name,
                value,
                ty,
                body,
            } => {
                let (v, va) = self.erase(ctx, ectx, value, &[])?;
                ctx.push_def(name.clone(), (**value).clone(), (**ty).clone());
                ectx.push(ECtxEntry::RelOther);
                let r = self.erase(ctx, ectx, body, &[]);
                ctx.pop();
                ectx.pop();
                let (b, ba) = r?;
                (
                    BoxTerm::LetIn {
                        name: name.clone(),
                        value: Box::new(v),
                        body: Box::new(b),
                    },
                    Annot::node(my_ty, vec![va, ba]),
                )
            }
            Term::App(f, a) => {
                let (ef, fa) = self.erase(ctx, ectx, f, &[])?;
                let (ea, aa) = self.erase(ctx, ectx, a, &[])?;
                (
                    BoxTerm::App(Box::new(ef), Box::new(ea)),
                    Annot::node(my_ty, vec![fa, aa]),
                )
            }
            Term::Case {
                ind,
                discr,
                branches,
                ..
            } => self.erase_case(ctx, ectx, ind, discr, branches, my_ty)?,
            Term::Fix { defs, struct_index } => {
                let d = &defs[0];
                ctx.push(d.name.clone(), d.ty.clone());
                ectx.push(ECtxEntry::RelOther);
                let r = self.erase(ctx, ectx, &d.body, lead);
                ctx.pop();
                ectx.pop();
                let (b, ba) = r?;
                (
                    BoxTerm::Fix {
                        defs: vec![BoxFixDef {
                            name: d.name.clone(),
                            body: b,
                        }],
                        struct_index: *struct_index,
                    },
                    Annot::node(my_ty, vec![ba]),
                )
            }
        })
    }

    fn erase_case(
        &self,
        ctx: &mut Ctx,
        ectx: &mut ECtx,
        ind: &Kername,
        discr: &Term,
        branches: &[crate::ast::Branch],
        my_ty: Option<BoxType>,
    ) -> ErasureResult<(BoxTerm, Annot)> {
        let env = self.ck.env();
        let decl = env.inductive(ind).ok_or_else(|| {
            ErasureError::Check(crate::check::CheckError::TypeError {
                message: format!("unknown inductive {ind}"),
                location: "erasure".into(),
            })
        })?;
        let (d, da) = self.erase(ctx, ectx, discr, &[])?;
        if decl.ctors.is_empty() {
            return Ok((
                BoxTerm::EmptyMatch {
                    ind: ind.clone(),
                    discr: Box::new(d),
                },
                Annot::node(my_ty, vec![da]),
            ));
        }
        let is_prop = decl.arity_telescope().1 == Some(Sort::Prop);
        if is_prop {
            if decl.ctors.len() != 1 || !self.ck.elim_to_any(decl)? {
                return Err(ErasureError::UnsupportedPropMatch(ind.clone()));
            }
            // Singleton elimination: the branch applied to one box per argument.
            let br = &branches[0];
            let (mut t, mut a) = self.erase(ctx, ectx, &br.body, &[])?;
            for _ in 0..br.arity {
                t = BoxTerm::App(Box::new(t), Box::new(BoxTerm::Box));
                let bx = Annot::leaf(self.annotate.then_some(BoxType::TBox));
                a = Annot::node(None, vec![a, bx]);
            }
            a.ty = my_ty;
            return Ok((t, a));
        }
        let mut bs = Vec::with_capacity(branches.len());
        let mut annots = vec![da];
        for br in branches {
            let (b, ba) = self.erase(ctx, ectx, &br.body, &[])?;
            bs.push((br.arity, b));
            annots.push(ba);
        }
        Ok((
            BoxTerm::Case {
                ind: ind.clone(),
                discr: Box::new(d),
                branches: bs,
            },
            Annot::node(my_ty, annots),
        ))
    }
}

/// Erase a term in a local context.
pub fn erase_term(env: &GlobalEnv, ctx: &Ctx, t: &Term) -> ErasureResult<BoxTerm> {
    let ck = Checker::new(env);
    let er = TermEraser {
        ck: &ck,
        annotate: false,
    };
    let mut ectx = ECtx::new();
    for _ in 0..ctx.len() {
        ectx.push(ECtxEntry::RelOther);
    }
    Ok(er.erase(&mut ctx.clone(), &mut ectx, t, &[])?.0)
}

/// Erase a closed term and record the erased type of every node.
pub fn erase_term_annotated(env: &GlobalEnv, t: &Term) -> ErasureResult<(BoxTerm, Annot)> {
    let ck = Checker::new(env);
    let er = TermEraser {
        ck: &ck,
        annotate: true,
    };
    er.erase(&mut Ctx::new(), &mut ECtx::new(), t, &[])
}
