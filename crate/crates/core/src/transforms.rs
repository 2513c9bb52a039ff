//! Source-level passes run before erasure: η-expansion, branch expansion and
//! inlining. Each changed constant gets a certificate recording whether the
//! new body is convertible to the old one.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ast::{decompose_app, lift, mk_app, subst, Branch, FixDef, GlobalEnv, Kername, Term};
use crate::check::{CheckError, Checker, Ctx};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("cannot specialise the type of `{0}` to the arguments it needs")]
    TypeSpecializationFailed(Kername),
    #[error("`{0}` has no body to inline")]
    NoBody(Kername),
    #[error("unknown constant `{0}`")]
    UnknownConstant(Kername),
    #[error("transformed body of `{0}` is not convertible to the original")]
    CertificationFailed(Kername),
    #[error(transparent)]
    Check(#[from] CheckError),
}

pub type TransformResultT<T> = Result<T, TransformError>;

/// How many arguments to expand each constant or constructor to, with the
/// type used to name and type the new binders.
#[derive(Clone, Debug, Default)]
pub struct ExpansionTable {
    pub const_entries: BTreeMap<Kername, (usize, Term)>,
    pub ctor_entries: BTreeMap<(Kername, usize), (usize, Term)>,
}

impl ExpansionTable {
    /// Expand everything to the full length of its product spine.
    pub fn full(env: &GlobalEnv) -> ExpansionTable {
        let mut t = ExpansionTable::default();
        for d in env.decls() {
            match d {
                crate::ast::Decl::Constant(c) => {
                    let n = spine_len(env, &c.ty);
                    if n > 0 {
                        t.const_entries.insert(c.name.clone(), (n, c.ty.clone()));
                    }
                }
                crate::ast::Decl::Inductive(i) => {
                    for k in 0..i.ctors.len() {
                        let ty = i.ctor_type(k);
                        let n = spine_len(env, &ty);
                        if n > 0 {
                            t.ctor_entries.insert((i.name.clone(), k), (n, ty));
                        }
                    }
                }
            }
        }
        t
    }
}

fn spine_len(env: &GlobalEnv, ty: &Term) -> usize {
    let ck = Checker::new(env);
    let mut ctx = Ctx::new();
    let mut cur = ty.clone();
    let mut n = 0;
    loop {
        let w = match &cur {
            Term::Product { .. } => cur.clone(),
            _ => match ck.whnf(&ctx, &cur) {
                Ok(w) => w,
                Err(_) => return n,
            },
        };
        match w {
            Term::Product { name, dom, cod } => {
                ctx.push(name, *dom);
                cur = *cod;
                n += 1;
            }
            _ => return n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub name: Kername,
    pub original: Term,
    pub new: Term,
    /// `None` until [`certify`] has checked the pair.
    pub convertible: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct TransformResult {
    pub new_env: GlobalEnv,
    pub changed: Vec<Kername>,
    pub certificates: Vec<Certificate>,
}

impl TransformResult {
    pub fn unchanged(env: &GlobalEnv) -> TransformResult {
        TransformResult {
            new_env: env.clone(),
            changed: vec![],
            certificates: vec![],
        }
    }

    pub fn all_certified(&self) -> bool {
        self.certificates
            .iter()
            .all(|c| c.convertible == Some(true))
    }
}

/// Rewrite every constant body with `f`, recording certificates.
fn rewrite_bodies(
    env: &GlobalEnv,
    mut f: impl FnMut(&GlobalEnv, &Kername, &Term) -> TransformResultT<Term>,
) -> TransformResultT<TransformResult> {
    let mut new_env = env.clone();
    let mut changed = vec![];
    let mut certificates = vec![];
    for d in env.decls() {
        if let crate::ast::Decl::Constant(c) = d {
            if let Some(b) = &c.body {
                let nb = f(&new_env, &c.name, b)?;
                if &nb != b {
                    new_env.set_body(&c.name, nb.clone());
                    changed.push(c.name.clone());
                    certificates.push(Certificate {
                        name: c.name.clone(),
                        original: b.clone(),
                        new: nb,
                        convertible: None,
                    });
                }
            }
        }
    }
    Ok(TransformResult {
        new_env,
        changed,
        certificates,
    })
}

/// Push the product domains of `ty` after instantiating the first
/// `args.len()` binders with `args`; returns the next `extra` domains.
fn specialise(
    ck: &Checker<'_>,
    ty: &Term,
    args: &[Term],
    extra: usize,
) -> Option<Vec<(crate::ast::Name, Term)>> {
    let mut cur = ty.clone();
    let mut out = vec![];
    let empty = Ctx::new();
    for i in 0..args.len() + extra {
        if !matches!(cur, Term::Product { .. }) {
            cur = ck.whnf(&empty, &cur).ok()?;
        }
        let Term::Product { name, dom, cod } = cur else {
            return None;
        };
        if i < args.len() {
            cur = subst(&cod, 0, &args[i]);
        } else {
            out.push((name, *dom));
            cur = *cod;
        }
    }
    Some(out)
}

fn fresh_binder(name: &str, i: usize) -> String {
    if name == crate::ast::ANON || name.is_empty() {
        format!("x{i}")
    } else {
        name.to_string()
    }
}

struct Eta<'a, 'e> {
    ck: &'a Checker<'e>,
    table: &'a ExpansionTable,
}

impl Eta<'_, '_> {
    fn entry(&self, head: &Term) -> Option<(&(usize, Term), Kername)> {
        match head {
            Term::Const(k) => self.table.const_entries.get(k).map(|e| (e, k.clone())),
            Term::Construct(i, c) => self
                .table
                .ctor_entries
                .get(&(i.clone(), *c))
                .map(|e| (e, i.clone())),
            _ => None,
        }
    }

    fn term(&self, t: &Term) -> TransformResultT<Term> {
        let (head, args) = decompose_app(t);
        if let Some(((n, ty), owner)) = self.entry(head) {
            let args: Vec<Term> = args
                .into_iter()
                .map(|a| self.term(a))
                .collect::<TransformResultT<_>>()?;
            if args.len() >= *n {
                return Ok(mk_app(head.clone(), args));
            }
            let missing = n - args.len();
            let binders = specialise(self.ck, ty, &args, missing)
                .ok_or(TransformError::TypeSpecializationFailed(owner))?;
            let lifted = args.iter().map(|a| lift(a, missing, 0));
            let vars = (0..missing).rev().map(Term::Rel);
            let body = mk_app(mk_app(head.clone(), lifted), vars);
            return Ok(binders
                .into_iter()
                .enumerate()
                .rev()
                .fold(body, |acc, (i, (name, dom))| {
                    Term::lam(fresh_binder(&name, i), dom, acc)
                }));
        }
        map_children(t, &mut |c| self.term(c))
    }
}

/// Apply `f` to every direct subterm.
fn map_children(
    t: &Term,
    f: &mut dyn FnMut(&Term) -> TransformResultT<Term>,
) -> TransformResultT<Term> {
    Ok(match t {
        Term::Sort(_) | Term::Rel(_) | Term::Const(_) | Term::Ind(_) | Term::Construct(..) => {
            t.clone()
        }
        Term::Lambda { name, ty, body } => Term::lam(name.clone(), f(ty)?, f(body)?),
        Term::Product { name, dom, cod } => Term::pi(name.clone(), f(dom)?, f(cod)?),
        Term::LetIn {
            name,
            value,
            ty,
            body,
        } => Term::let_in(name.clone(), f(value)?, f(ty)?, f(body)?),
        Term::App(a, b) => Term::app(f(a)?, f(b)?),
        Term::Case {
            ind,
            discr,
            motive,
            branches,
        } => Term::Case {
            ind: ind.clone(),
            discr: Box::new(f(discr)?),
            motive: Box::new(f(motive)?),
            branches: branches
                .iter()
                .map(|b| {
                    Ok(Branch {
                        arity: b.arity,
                        body: f(&b.body)?,
                    })
                })
                .collect::<TransformResultT<_>>()?,
        },
        Term::Fix { defs, struct_index } => Term::Fix {
            defs: defs
                .iter()
                .map(|d| {
                    Ok(FixDef {
                        name: d.name.clone(),
                        ty: f(&d.ty)?,
                        body: f(&d.body)?,
                    })
                })
                .collect::<TransformResultT<_>>()?,
            struct_index: *struct_index,
        },
    })
}

/// Wrap under-applied constants and constructors in lambdas.
pub fn eta_expand(env: &GlobalEnv, table: &ExpansionTable) -> TransformResultT<TransformResult> {
    let ck = Checker::new(env);
    let eta = Eta { ck: &ck, table };
    rewrite_bodies(env, |_, _, b| eta.term(b))
}

struct Branches<'a, 'e> {
    ck: &'a Checker<'e>,
    owner: Kername,
}

impl Branches<'_, '_> {
    fn term(&self, ctx: &mut Ctx, t: &Term) -> TransformResultT<Term> {
        match t {
            Term::Lambda { name, ty, body } => {
                let ty2 = self.term(ctx, ty)?;
                ctx.push(name.clone(), (**ty).clone());
                let b = self.term(ctx, body);
                ctx.pop();
                Ok(Term::lam(name.clone(), ty2, b?))
            }
            Term::Product { name, dom, cod } => {
                let d2 = self.term(ctx, dom)?;
                ctx.push(name.clone(), (**dom).clone());
                let c = self.term(ctx, cod);
                ctx.pop();
                Ok(Term::pi(name.clone(), d2, c?))
            }
            Term::LetIn {
                name,
                value,
                ty,
                body,
            } => {
                let v = self.term(ctx, value)?;
                let ty2 = self.term(ctx, ty)?;
                ctx.push_def(name.clone(), (**value).clone(), (**ty).clone());
                let b = self.term(ctx, body);
                ctx.pop();
                Ok(Term::let_in(name.clone(), v, ty2, b?))
            }
            Term::Fix { defs, struct_index } => {
                let tys: Vec<Term> = defs
                    .iter()
                    .map(|d| self.term(ctx, &d.ty))
                    .collect::<TransformResultT<_>>()?;
                for (i, d) in defs.iter().enumerate() {
                    ctx.push(d.name.clone(), lift(&d.ty, i, 0));
                }
                let bodies: TransformResultT<Vec<Term>> =
                    defs.iter().map(|d| self.term(ctx, &d.body)).collect();
                for _ in defs {
                    ctx.pop();
                }
                Ok(Term::Fix {
                    defs: defs
                        .iter()
                        .zip(tys)
                        .zip(bodies?)
                        .map(|((d, ty), body)| FixDef {
                            name: d.name.clone(),
                            ty,
                            body,
                        })
                        .collect(),
                    struct_index: *struct_index,
                })
            }
            Term::Case {
                ind,
                discr,
                motive,
                branches,
            } => {
                let d2 = self.term(ctx, discr)?;
                let m2 = self.term(ctx, motive)?;
                let mut bs = Vec::with_capacity(branches.len());
                let mut params: Option<Vec<Term>> = None;
                for (k, b) in branches.iter().enumerate() {
                    let body = self.term(ctx, &b.body)?;
                    let have = count_lambdas(&body, b.arity);
                    if have >= b.arity {
                        bs.push(Branch {
                            arity: b.arity,
                            body,
                        });
                        continue;
                    }
                    if params.is_none() {
                        params = Some(self.params_of(ctx, ind, discr)?);
                    }
                    let body =
                        self.expand(ind, k, params.as_ref().unwrap(), body, b.arity, have)?;
                    bs.push(Branch {
                        arity: b.arity,
                        body,
                    });
                }
                Ok(Term::Case {
                    ind: ind.clone(),
                    discr: Box::new(d2),
                    motive: Box::new(m2),
                    branches: bs,
                })
            }
            _ => map_children(t, &mut |c| self.term(ctx, c)),
        }
    }

    fn params_of(&self, ctx: &Ctx, ind: &Kername, discr: &Term) -> TransformResultT<Vec<Term>> {
        let fail = || TransformError::TypeSpecializationFailed(self.owner.clone());
        let decl = self.ck.env().inductive(ind).ok_or_else(fail)?;
        let ty = self.ck.infer(ctx, discr)?;
        let ty = self.ck.whnf(ctx, &ty)?;
        let (h, args) = decompose_app(&ty);
        match h {
            Term::Ind(i) if i == ind && args.len() >= decl.param_count() => Ok(args
                [..decl.param_count()]
                .iter()
                .map(|a| (*a).clone())
                .collect()),
            _ => Err(fail()),
        }
    }

    /// Add the lambdas a branch is missing, typed by the constructor's
    /// argument telescope at the match parameters.
    fn expand(
        &self,
        ind: &Kername,
        k: usize,
        params: &[Term],
        body: Term,
        arity: usize,
        have: usize,
    ) -> TransformResultT<Term> {
        let fail = || TransformError::TypeSpecializationFailed(self.owner.clone());
        let decl = self.ck.env().inductive(ind).ok_or_else(fail)?;
        let tele = specialise(self.ck, &decl.ctor_type(k), params, arity).ok_or_else(fail)?;
        // Peel the lambdas already present.
        let mut outer = vec![];
        let mut cur = body;
        for _ in 0..have {
            match cur {
                Term::Lambda { name, ty, body } => {
                    outer.push((name, *ty));
                    cur = *body;
                }
                _ => unreachable!("counted lambdas"),
            }
        }
        let missing = arity - have;
        let inner = mk_app(lift(&cur, missing, 0), (0..missing).rev().map(Term::Rel));
        let mut out = tele[have..]
            .iter()
            .enumerate()
            .rev()
            .fold(inner, |acc, (i, (name, dom))| {
                Term::lam(fresh_binder(name, have + i), dom.clone(), acc)
            });
        for (name, ty) in outer.into_iter().rev() {
            out = Term::lam(name, ty, out);
        }
        Ok(out)
    }
}

fn count_lambdas(t: &Term, max: usize) -> usize {
    let mut n = 0;
    let mut cur = t;
    while n < max {
        match cur {
            Term::Lambda { body, .. } => {
                n += 1;
                cur = body;
            }
            _ => break,
        }
    }
    n
}

/// Make every match branch start with one lambda per constructor argument.
pub fn expand_branches(env: &GlobalEnv) -> TransformResultT<TransformResult> {
    let ck = Checker::new(env);
    rewrite_bodies(env, |_, name, b| {
        ck.refuel();
        Branches {
            ck: &ck,
            owner: name.clone(),
        }
        .term(&mut Ctx::new(), b)
    })
}

/// β- and ι-reduce at the head of an application spine.
fn reduce_site(t: Term, env: &GlobalEnv) -> Term {
    let mut cur = t;
    loop {
        let (head, args) = crate::ast::decompose_app_owned(cur);
        match head {
            Term::Lambda { body, .. } if !args.is_empty() => {
                let mut args = args;
                let a = args.remove(0);
                cur = mk_app(subst(&body, 0, &a), args);
            }
            Term::Case {
                ind,
                discr,
                motive,
                branches,
            } => {
                let (dh, dargs) = decompose_app(&discr);
                if let (Term::Construct(i, k), Some(decl)) = (dh, env.inductive(&ind)) {
                    if *i == ind {
                        if let Some(b) = branches.get(*k) {
                            let cargs = dargs.into_iter().skip(decl.param_count()).cloned();
                            cur = mk_app(mk_app(b.body.clone(), cargs), args);
                            continue;
                        }
                    }
                }
                return mk_app(
                    Term::Case {
                        ind,
                        discr,
                        motive,
                        branches,
                    },
                    args,
                );
            }
            other => return mk_app(other, args),
        }
    }
}

struct Inliner<'a> {
    env: &'a GlobalEnv,
    bodies: &'a BTreeMap<Kername, Term>,
}

impl Inliner<'_> {
    fn term(&self, t: &Term) -> TransformResultT<Term> {
        let (head, args) = decompose_app(t);
        if let Term::Const(k) = head {
            if let Some(b) = self.bodies.get(k) {
                let args: Vec<Term> = args
                    .into_iter()
                    .map(|a| self.term(a))
                    .collect::<TransformResultT<_>>()?;
                return Ok(reduce_site(mk_app(b.clone(), args), self.env));
            }
        }
        if let Term::App(..) = t {
            let args: Vec<Term> = args
                .into_iter()
                .map(|a| self.term(a))
                .collect::<TransformResultT<_>>()?;
            return Ok(reduce_site(mk_app(self.term(head)?, args), self.env));
        }
        map_children(t, &mut |c| self.term(c))
    }
}

/// Replace the selected constants by their bodies and reduce at each site.
pub fn inline(
    env: &GlobalEnv,
    should_inline: impl Fn(&Kername) -> bool,
) -> TransformResultT<TransformResult> {
    let mut selected = BTreeSet::new();
    for d in env.decls() {
        if let crate::ast::Decl::Constant(c) = d {
            if should_inline(&c.name) {
                if c.body.is_none() {
                    return Err(TransformError::NoBody(c.name.clone()));
                }
                selected.insert(c.name.clone());
            }
        }
    }
    if selected.is_empty() {
        return Ok(TransformResult::unchanged(env));
    }
    // Bodies are inlined in declaration order so that selected constants
    // see the already inlined bodies of earlier ones.
    let mut bodies: BTreeMap<Kername, Term> = BTreeMap::new();
    rewrite_bodies(env, |e, name, b| {
        let nb = Inliner {
            env: e,
            bodies: &bodies,
        }
        .term(b)?;
        if selected.contains(name) {
            bodies.insert(name.clone(), nb.clone());
        }
        Ok(nb)
    })
}

/// Check every certificate against `original`, the environment the passes
/// started from.
pub fn certify(original: &GlobalEnv, result: TransformResult) -> TransformResultT<TransformResult> {
    let ck = Checker::new(original);
    let mut result = result;
    for c in &mut result.certificates {
        ck.refuel();
        let ok = match ck.conv(&Ctx::new(), &c.original, &c.new) {
            Ok(b) => b,
            Err(CheckError::OutOfFuel(_)) => false,
            Err(e) => return Err(e.into()),
        };
        c.convertible = Some(ok);
        if !ok {
            return Err(TransformError::CertificationFailed(c.name.clone()));
        }
    }
    Ok(result)
}

pub type EnvTransform = Box<dyn Fn(&GlobalEnv) -> TransformResultT<TransformResult>>;

/// A named pass, as selected on the command line.
#[derive(Clone, Debug)]
pub enum Pass {
    Eta(ExpansionTable),
    Branches,
    Inline(BTreeSet<Kername>),
}

impl Pass {
    pub fn run(&self, env: &GlobalEnv) -> TransformResultT<TransformResult> {
        match self {
            Pass::Eta(t) => eta_expand(env, t),
            Pass::Branches => expand_branches(env),
            Pass::Inline(names) => inline(env, |k| names.contains(k)),
        }
    }

    pub fn into_transform(self) -> EnvTransform {
        Box::new(move |env| self.run(env))
    }
}

/// Run passes left to right, then certify once against the input.
pub fn compose_transforms(passes: Vec<EnvTransform>) -> EnvTransform {
    Box::new(move |env| {
        let mut cur = TransformResult::unchanged(env);
        for p in &passes {
            let r = p(&cur.new_env)?;
            for c in r.certificates {
                match cur.certificates.iter_mut().find(|x| x.name == c.name) {
                    Some(prev) => prev.new = c.new,
                    None => {
                        cur.changed.push(c.name.clone());
                        cur.certificates.push(Certificate {
                            original: env
                                .constant(&c.name)
                                .and_then(|d| d.body.clone())
                                .unwrap_or(c.original),
                            ..c
                        });
                    }
                }
            }
            cur.new_env = r.new_env;
        }
        certify(env, cur)
    })
}

impl ExpansionTable {
    /// Expand constants and constructors just far enough for dearging with
    /// the given masks.
    pub fn from_masks(
        env: &GlobalEnv,
        im: &crate::dearg::IndMasks,
        cm: &crate::dearg::ConstMasks,
    ) -> ExpansionTable {
        use crate::dearg::trim;
        let mut t = ExpansionTable::default();
        for (k, m) in &cm.0 {
            let n = trim(m).len();
            if let (true, Some(c)) = (n > 0, env.constant(k)) {
                t.const_entries.insert(k.clone(), (n, c.ty.clone()));
            }
        }
        for (k, mm) in &im.0 {
            let Some(decl) = env.inductive(k) else {
                continue;
            };
            for c in 0..mm.ctor_masks.len().min(decl.ctors.len()) {
                let n = im.ctor_app_mask(k, c).map_or(0, |m| trim(&m).len());
                if n > 0 {
                    t.ctor_entries
                        .insert((k.clone(), c), (n, decl.ctor_type(c)));
                }
            }
        }
        t
    }
}
