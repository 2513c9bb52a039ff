//! Type inference, reduction and conversion for the core calculus.
//!
//! There is no guard or positivity checking: well-founded recursion is the
//! user's responsibility. Every reduction step consumes one unit of fuel.

use std::cell::{Cell, RefCell};

use thiserror::Error;

use crate::ast::{
    alpha_eq, decompose_app_owned, decompose_products, instantiate, lift, mk_app, mk_products,
    subst, Branch, ConstantDecl, Decl, FixDef, GlobalEnv, InductiveDecl, Kername, Name, Sort, Term,
};

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Fuel budget: `BOXTRACT_FUEL` when set to a number, else [`DEFAULT_FUEL`].
pub fn default_fuel() -> u64 {
    std::env::var("BOXTRACT_FUEL")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_FUEL)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("type error in {location}: {message}")]
    TypeError { message: String, location: String },
    #[error("out of fuel (budget {0})")]
    OutOfFuel(u64),
    #[error("evaluation stuck: {0}")]
    Stuck(String),
}

pub type CheckResult<T> = Result<T, CheckError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtxEntry {
    pub name: Name,
    pub ty: Term,
    pub def: Option<Term>,
}

/// Local context; the last entry is `Rel 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ctx {
    entries: Vec<CtxEntry>,
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, name: impl Into<Name>, ty: Term) {
        self.entries.push(CtxEntry {
            name: name.into(),
            ty,
            def: None,
        });
    }

    pub fn push_def(&mut self, name: impl Into<Name>, value: Term, ty: Term) {
        self.entries.push(CtxEntry {
            name: name.into(),
            ty,
            def: Some(value),
        });
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn with(&self, name: impl Into<Name>, ty: Term) -> Ctx {
        let mut c = self.clone();
        c.push(name, ty);
        c
    }

    /// Raw entry, with types relative to the context below it.
    pub fn entry(&self, i: usize) -> Option<&CtxEntry> {
        if i < self.entries.len() {
            Some(&self.entries[self.entries.len() - 1 - i])
        } else {
            None
        }
    }

    /// Type of `Rel i` in the full context.
    pub fn type_of(&self, i: usize) -> Option<Term> {
        self.entry(i).map(|e| lift(&e.ty, i + 1, 0))
    }

    pub fn def_of(&self, i: usize) -> Option<Term> {
        self.entry(i)
            .and_then(|e| e.def.as_ref())
            .map(|d| lift(d, i + 1, 0))
    }

    pub fn names(&self) -> impl DoubleEndedIterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }
}

/// Classification of a type: is it logical, can it be reduced to an arity
/// (`forall .., sort`), and is it a sort itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeFlag {
    pub is_logical: bool,
    pub conv_to_arity: bool,
    pub is_sort: bool,
}

pub struct Checker<'e> {
    env: &'e GlobalEnv,
    budget: u64,
    remaining: Cell<u64>,
    location: RefCell<String>,
}

impl<'e> Checker<'e> {
    pub fn new(env: &'e GlobalEnv) -> Checker<'e> {
        Checker::with_fuel(env, default_fuel())
    }

    pub fn with_fuel(env: &'e GlobalEnv, fuel: u64) -> Checker<'e> {
        Checker {
            env,
            budget: fuel,
            remaining: Cell::new(fuel),
            location: RefCell::new(String::from("<term>")),
        }
    }

    pub fn env(&self) -> &'e GlobalEnv {
        self.env
    }

    /// Restore the full fuel budget.
    pub fn refuel(&self) {
        self.remaining.set(self.budget);
    }

    pub fn set_location(&self, loc: impl Into<String>) {
        *self.location.borrow_mut() = loc.into();
    }

    fn tick(&self) -> CheckResult<()> {
        let r = self.remaining.get();
        if r == 0 {
            return Err(CheckError::OutOfFuel(self.budget));
        }
        self.remaining.set(r - 1);
        Ok(())
    }

    fn err<T>(&self, message: impl Into<String>) -> CheckResult<T> {
        Err(CheckError::TypeError {
            message: message.into(),
            location: self.location.borrow().clone(),
        })
    }

    // ---------------------------------------------------------------- reduction

    /// Weak head normal form with β, δ, ι, ζ and fixpoint unfolding.
    pub fn whnf(&self, ctx: &Ctx, t: &Term) -> CheckResult<Term> {
        self.head_reduce(ctx, t, true)
    }

    /// Head β/ι/ζ reduction. A constant in head position is never unfolded,
    /// but constants may be unfolded inside a scrutinee or a recursive
    /// argument to expose a redex.
    pub fn reduce_biz(&self, ctx: &Ctx, t: &Term) -> CheckResult<Term> {
        self.head_reduce(ctx, t, false)
    }

    fn head_reduce(&self, ctx: &Ctx, t: &Term, delta: bool) -> CheckResult<Term> {
        let mut cur = t.clone();
        loop {
            let (head, mut args) = decompose_app_owned(cur);
            match head {
                Term::Lambda { body, .. } if !args.is_empty() => {
                    self.tick()?;
                    let a = args.remove(0);
                    cur = mk_app(subst(&body, 0, &a), args);
                }
                Term::LetIn { value, body, .. } => {
                    self.tick()?;
                    cur = mk_app(subst(&body, 0, &value), args);
                }
                Term::Rel(i) if ctx.def_of(i).is_some() => {
                    self.tick()?;
                    cur = mk_app(ctx.def_of(i).unwrap(), args);
                }
                Term::Const(ref c) if delta => match self.env.constant(c) {
                    Some(ConstantDecl { body: Some(b), .. }) => {
                        self.tick()?;
                        cur = mk_app(b.clone(), args);
                    }
                    _ => return Ok(mk_app(head, args)),
                },
                Term::Case {
                    ref ind,
                    ref discr,
                    ref branches,
                    ..
                } => {
                    let d = self.whnf(ctx, discr)?;
                    match self.iota(ind, &d, branches)? {
                        Some(reduct) => {
                            self.tick()?;
                            cur = mk_app(reduct, args);
                        }
                        None => return Ok(mk_app(head, args)),
                    }
                }
                Term::Fix {
                    ref defs,
                    struct_index,
                } if args.len() > struct_index => {
                    let a = self.whnf(ctx, &args[struct_index])?;
                    let (ah, _) = crate::ast::decompose_app(&a);
                    if matches!(ah, Term::Construct(..)) && defs.len() == 1 {
                        self.tick()?;
                        args[struct_index] = a;
                        let unfolded = subst(&defs[0].body, 0, &head);
                        cur = mk_app(unfolded, args);
                    } else {
                        return Ok(mk_app(head, args));
                    }
                }
                _ => return Ok(mk_app(head, args)),
            }
        }
    }

    /// Reduce `match d with branches` when `d` is a constructor application.
    fn iota(&self, ind: &Kername, d: &Term, branches: &[Branch]) -> CheckResult<Option<Term>> {
        let (dh, dargs) = crate::ast::decompose_app(d);
        if let Term::Construct(i, k) = dh {
            if i != ind {
                return self.err(format!("match on {ind} scrutinises a constructor of {i}"));
            }
            let decl = self.inductive(ind)?;
            let np = decl.param_count();
            let br = match branches.get(*k) {
                Some(b) => b,
                None => return self.err(format!("missing branch {k} for {ind}")),
            };
            let cargs = dargs.into_iter().skip(np).cloned();
            return Ok(Some(mk_app(br.body.clone(), cargs)));
        }
        Ok(None)
    }

    /// Full normal form.
    pub fn nf(&self, ctx: &Ctx, t: &Term) -> CheckResult<Term> {
        let w = self.whnf(ctx, t)?;
        let (head, args) = decompose_app_owned(w);
        let head = match head {
            Term::Lambda { name, ty, body } => {
                let ty = self.nf(ctx, &ty)?;
                let body = self.nf(&ctx.with(name.clone(), ty.clone()), &body)?;
                Term::lam(name, ty, body)
            }
            Term::Product { name, dom, cod } => {
                let dom = self.nf(ctx, &dom)?;
                let cod = self.nf(&ctx.with(name.clone(), dom.clone()), &cod)?;
                Term::pi(name, dom, cod)
            }
            Term::Case {
                ind,
                discr,
                motive,
                branches,
            } => Term::Case {
                ind,
                discr: Box::new(self.nf(ctx, &discr)?),
                motive: Box::new(self.nf(ctx, &motive)?),
                branches: branches
                    .into_iter()
                    .map(|b| {
                        Ok(Branch {
                            arity: b.arity,
                            body: self.nf(ctx, &b.body)?,
                        })
                    })
                    .collect::<CheckResult<_>>()?,
            },
            Term::Fix { defs, struct_index } => {
                let mut inner = ctx.clone();
                for d in &defs {
                    inner.push(d.name.clone(), d.ty.clone());
                }
                Term::Fix {
                    defs: defs
                        .iter()
                        .map(|d| {
                            Ok(FixDef {
                                name: d.name.clone(),
                                ty: self.nf(ctx, &d.ty)?,
                                body: self.nf(&inner, &d.body)?,
                            })
                        })
                        .collect::<CheckResult<_>>()?,
                    struct_index,
                }
            }
            other => other,
        };
        let args = args
            .iter()
            .map(|a| self.nf(ctx, a))
            .collect::<CheckResult<Vec<_>>>()?;
        Ok(mk_app(head, args))
    }

    // --------------------------------------------------------------- conversion

    /// Definitional equality up to β, δ, ι, ζ, fixpoint unfolding and η.
    pub fn conv(&self, ctx: &Ctx, a: &Term, b: &Term) -> CheckResult<bool> {
        self.conv_gen(ctx, a, b, false)
    }

    /// Cumulative subtyping: equal up to sort inclusion in covariant positions.
    pub fn conv_leq(&self, ctx: &Ctx, a: &Term, b: &Term) -> CheckResult<bool> {
        self.conv_gen(ctx, a, b, true)
    }

    fn conv_gen(&self, ctx: &Ctx, a: &Term, b: &Term, leq: bool) -> CheckResult<bool> {
        if alpha_eq(a, b) {
            return Ok(true);
        }
        let a = self.whnf(ctx, a)?;
        let b = self.whnf(ctx, b)?;
        if alpha_eq(&a, &b) {
            return Ok(true);
        }
        match (&a, &b) {
            (Term::Sort(s1), Term::Sort(s2)) => Ok(if leq { s1.leq(*s2) } else { s1 == s2 }),
            (
                Term::Product {
                    name,
                    dom: d1,
                    cod: c1,
                },
                Term::Product {
                    dom: d2, cod: c2, ..
                },
            ) => Ok(self.conv_gen(ctx, d1, d2, false)?
                && self.conv_gen(&ctx.with(name.clone(), (**d1).clone()), c1, c2, leq)?),
            (
                Term::Lambda {
                    name,
                    ty: t1,
                    body: b1,
                },
                Term::Lambda { body: b2, .. },
            ) => self.conv_gen(&ctx.with(name.clone(), (**t1).clone()), b1, b2, false),
            (Term::Lambda { name, ty, body }, other) | (other, Term::Lambda { name, ty, body }) => {
                let inner = ctx.with(name.clone(), (**ty).clone());
                let expanded = Term::app(lift(other, 1, 0), Term::Rel(0));
                self.conv_gen(&inner, body, &expanded, false)
            }
            _ => self.conv_spines(ctx, &a, &b),
        }
    }

    fn conv_spines(&self, ctx: &Ctx, a: &Term, b: &Term) -> CheckResult<bool> {
        let (h1, a1) = crate::ast::decompose_app(a);
        let (h2, a2) = crate::ast::decompose_app(b);
        if a1.len() != a2.len() {
            return Ok(false);
        }
        let heads = match (h1, h2) {
            (Term::Rel(i), Term::Rel(j)) => i == j,
            (Term::Const(x), Term::Const(y)) | (Term::Ind(x), Term::Ind(y)) => x == y,
            (Term::Construct(x, i), Term::Construct(y, j)) => x == y && i == j,
            (
                Term::Case {
                    ind: i1,
                    discr: d1,
                    motive: m1,
                    branches: bs1,
                },
                Term::Case {
                    ind: i2,
                    discr: d2,
                    motive: m2,
                    branches: bs2,
                },
            ) => {
                let mut ok = i1 == i2 && bs1.len() == bs2.len();
                ok = ok && self.conv(ctx, d1, d2)?;
                ok = ok && self.conv(ctx, m1, m2)?;
                for (x, y) in bs1.iter().zip(bs2) {
                    if !ok {
                        break;
                    }
                    ok = x.arity == y.arity && self.conv(ctx, &x.body, &y.body)?;
                }
                ok
            }
            (
                Term::Fix {
                    defs: ds1,
                    struct_index: s1,
                },
                Term::Fix {
                    defs: ds2,
                    struct_index: s2,
                },
            ) => {
                let mut ok = s1 == s2 && ds1.len() == ds2.len();
                let mut inner = ctx.clone();
                for d in ds1 {
                    inner.push(d.name.clone(), d.ty.clone());
                }
                for (x, y) in ds1.iter().zip(ds2) {
                    if !ok {
                        break;
                    }
                    ok = self.conv(ctx, &x.ty, &y.ty)? && self.conv(&inner, &x.body, &y.body)?;
                }
                ok
            }
            _ => false,
        };
        if !heads {
            return Ok(false);
        }
        for (x, y) in a1.iter().zip(a2.iter()) {
            if !self.conv(ctx, x, y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // ---------------------------------------------------------------- inference

    fn inductive(&self, name: &Kername) -> CheckResult<&'e InductiveDecl> {
        match self.env.inductive(name) {
            Some(i) => Ok(i),
            None => self.err(format!("unknown inductive {name}")),
        }
    }

    pub fn infer(&self, ctx: &Ctx, t: &Term) -> CheckResult<Term> {
        match t {
            Term::Sort(s) => Ok(Term::Sort(s.succ())),
            Term::Rel(i) => match ctx.type_of(*i) {
                Some(ty) => Ok(ty),
                None => self.err(format!("unbound variable Rel {i}")),
            },
            Term::Product { name, dom, cod } => {
                let s1 = self.infer_sort(ctx, dom)?;
                let s2 = self.infer_sort(&ctx.with(name.clone(), (**dom).clone()), cod)?;
                Ok(Term::Sort(product_sort(s1, s2)))
            }
            Term::Lambda { name, ty, body } => {
                self.infer_sort(ctx, ty)?;
                let bty = self.infer(&ctx.with(name.clone(), (**ty).clone()), body)?;
                Ok(Term::pi(name.clone(), (**ty).clone(), bty))
            }
            Term::LetIn {
                name,
                value,
                ty,
                body,
            } => {
                self.infer_sort(ctx, ty)?;
                self.check(ctx, value, ty)?;
                let mut inner = ctx.clone();
                inner.push_def(name.clone(), (**value).clone(), (**ty).clone());
                let bty = self.infer(&inner, body)?;
                Ok(subst(&bty, 0, value))
            }
            Term::App(f, a) => {
                let fty = self.infer(ctx, f)?;
                match self.whnf(ctx, &fty)? {
                    Term::Product { dom, cod, .. } => {
                        self.check(ctx, a, &dom)?;
                        Ok(subst(&cod, 0, a))
                    }
                    other => self.err(format!(
                        "applying a term whose type is not a product: {other:?}"
                    )),
                }
            }
            Term::Const(c) => match self.env.constant(c) {
                Some(d) => Ok(d.ty.clone()),
                None => self.err(format!("unknown constant {c}")),
            },
            Term::Ind(i) => Ok(self.inductive(i)?.full_type()),
            Term::Construct(i, k) => {
                let decl = self.inductive(i)?;
                if *k >= decl.ctors.len() {
                    return self.err(format!("{i} has no constructor {k}"));
                }
                Ok(decl.ctor_type(*k))
            }
            Term::Case {
                ind,
                discr,
                motive,
                branches,
            } => self.infer_case(ctx, ind, discr, motive, branches),
            Term::Fix { defs, struct_index } => {
                if defs.len() != 1 {
                    return self.err("only single fixpoints are supported");
                }
                let d = &defs[0];
                self.infer_sort(ctx, &d.ty)?;
                let (tele, _) = self.product_telescope(ctx, &d.ty)?;
                if *struct_index >= tele {
                    return self.err(format!(
                        "recursive argument {struct_index} out of range for {}",
                        d.name
                    ));
                }
                let inner = ctx.with(d.name.clone(), d.ty.clone());
                self.check(&inner, &d.body, &lift(&d.ty, 1, 0))?;
                Ok(d.ty.clone())
            }
        }
    }

    /// Number of leading products after reduction, and the conclusion.
    fn product_telescope(&self, ctx: &Ctx, ty: &Term) -> CheckResult<(usize, Term)> {
        let mut ctx = ctx.clone();
        let mut n = 0;
        let mut cur = self.whnf(&ctx, ty)?;
        while let Term::Product { name, dom, cod } = cur {
            ctx.push(name, *dom);
            n += 1;
            cur = self.whnf(&ctx, &cod)?;
        }
        Ok((n, cur))
    }

    fn infer_case(
        &self,
        ctx: &Ctx,
        ind: &Kername,
        discr: &Term,
        motive: &Term,
        branches: &[Branch],
    ) -> CheckResult<Term> {
        let decl = self.inductive(ind)?;
        let np = decl.param_count();
        let dty = self.infer(ctx, discr)?;
        let dty = self.whnf(ctx, &dty)?;
        let (dh, dargs) = crate::ast::decompose_app(&dty);
        match dh {
            Term::Ind(i) if i == ind => {}
            _ => return self.err(format!("scrutinee is not of inductive type {ind}")),
        }
        let (idx_tele, ind_sort) = {
            let (tele, concl) = decompose_products(&decl.arity);
            let sort = match concl {
                Term::Sort(s) => *s,
                _ => return self.err(format!("arity of {ind} does not end in a sort")),
            };
            (tele.len(), sort)
        };
        if dargs.len() != np + idx_tele {
            return self.err(format!("scrutinee type of {ind} is not fully applied"));
        }
        let pars: Vec<Term> = dargs[..np].iter().map(|t| (*t).clone()).collect();
        let indices: Vec<Term> = dargs[np..].iter().map(|t| (*t).clone()).collect();

        // motive : forall indices (x : I pars indices), sort
        let arity_inst = instantiate(&decl.arity, &pars, 0);
        let (itele, _) = decompose_products(&arity_inst);
        let x_ty = mk_app(
            Term::Ind(ind.clone()),
            pars.iter()
                .map(|p| lift(p, idx_tele, 0))
                .chain((0..idx_tele).rev().map(Term::Rel)),
        );
        let mut expected_doms = itele.clone();
        expected_doms.push(("x".to_string(), x_ty));
        let mty = self.infer(ctx, motive)?;
        let mut mctx = ctx.clone();
        let mut cur = self.whnf(&mctx, &mty)?;
        for (n, dom) in &expected_doms {
            match cur {
                Term::Product { dom: d, cod, .. } => {
                    if !self.conv(&mctx, &d, dom)? {
                        return self.err(format!("motive domain mismatch in match on {ind}"));
                    }
                    mctx.push(n.clone(), *d);
                    cur = self.whnf(&mctx, &cod)?;
                }
                _ => return self.err(format!("motive of match on {ind} has too few binders")),
            }
        }
        let target_sort = match cur {
            Term::Sort(s) => s,
            _ => return self.err(format!("motive of match on {ind} does not return a sort")),
        };
        if ind_sort == Sort::Prop && target_sort != Sort::Prop && !self.elim_to_any(decl)? {
            return self.err(format!(
                "{ind} lives in Prop and cannot be eliminated into {target_sort:?}"
            ));
        }

        if branches.len() != decl.ctors.len() {
            return self.err(format!(
                "match on {ind} has {} branches, expected {}",
                branches.len(),
                decl.ctors.len()
            ));
        }
        for (k, (c, br)) in decl.ctors.iter().zip(branches).enumerate() {
            let na = c.args.len();
            if br.arity != na {
                return self.err(format!(
                    "branch for {} binds {} arguments, expected {na}",
                    c.name, br.arity
                ));
            }
            let args_tele: Vec<(Name, Term)> = c
                .args
                .iter()
                .enumerate()
                .map(|(j, (n, ty))| (n.clone(), instantiate(ty, &pars, j)))
                .collect();
            let idx_inst: Vec<Term> = c
                .indices
                .iter()
                .map(|ix| instantiate(ix, &pars, na))
                .collect();
            let cterm = mk_app(
                Term::Construct(ind.clone(), k),
                pars.iter()
                    .map(|p| lift(p, na, 0))
                    .chain((0..na).rev().map(Term::Rel)),
            );
            let concl = mk_app(
                lift(motive, na, 0),
                idx_inst.into_iter().chain(std::iter::once(cterm)),
            );
            let bty = mk_products(&args_tele, concl);
            self.check(ctx, &br.body, &bty)?;
        }
        Ok(mk_app(
            motive.clone(),
            indices.into_iter().chain(std::iter::once(discr.clone())),
        ))
    }

    /// Propositions with no constructor, or one constructor whose arguments
    /// are all proofs, may be eliminated into any sort.
    pub fn elim_to_any(&self, decl: &InductiveDecl) -> CheckResult<bool> {
        match decl.ctors.len() {
            0 => Ok(true),
            1 => {
                let mut ctx = Ctx::new();
                for (n, ty) in &decl.params {
                    ctx.push(n.clone(), ty.clone());
                }
                for (n, ty) in &decl.ctors[0].args {
                    if self.infer_sort(&ctx, ty)? != Sort::Prop {
                        return Ok(false);
                    }
                    ctx.push(n.clone(), ty.clone());
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    pub fn infer_sort(&self, ctx: &Ctx, t: &Term) -> CheckResult<Sort> {
        let ty = self.infer(ctx, t)?;
        match self.whnf(ctx, &ty)? {
            Term::Sort(s) => Ok(s),
            other => self.err(format!("expected a type, found a term of type {other:?}")),
        }
    }

    pub fn check(&self, ctx: &Ctx, t: &Term, ty: &Term) -> CheckResult<()> {
        let inferred = self.infer(ctx, t)?;
        if self.conv_leq(ctx, &inferred, ty)? {
            Ok(())
        } else {
            self.err(format!(
                "type mismatch: expected {ty:?}, found {inferred:?}"
            ))
        }
    }

    // ------------------------------------------------------------ type flags

    /// Sort at the end of `ty` if it reduces to `forall .., sort`.
    pub fn arity_sort(&self, ctx: &Ctx, ty: &Term) -> CheckResult<Option<Sort>> {
        let (_, concl) = self.product_telescope(ctx, ty)?;
        Ok(match concl {
            Term::Sort(s) => Some(s),
            _ => None,
        })
    }

    pub fn flag_of_type(&self, ctx: &Ctx, ty: &Term) -> CheckResult<TypeFlag> {
        let w = self.whnf(ctx, ty)?;
        let is_sort = matches!(w, Term::Sort(_));
        let arity = self.arity_sort(ctx, &w)?;
        let is_logical = match arity {
            Some(s) => s == Sort::Prop,
            None => self.infer_sort(ctx, ty)? == Sort::Prop,
        };
        Ok(TypeFlag {
            is_logical,
            conv_to_arity: arity.is_some(),
            is_sort,
        })
    }

    // ---------------------------------------------------------- declarations

    pub fn check_constant(&self, c: &ConstantDecl) -> CheckResult<()> {
        self.set_location(c.name.to_string());
        let ctx = Ctx::new();
        self.infer_sort(&ctx, &c.ty)?;
        if let Some(b) = &c.body {
            self.check(&ctx, b, &c.ty)?;
        }
        Ok(())
    }

    /// Checks an inductive against an environment that already contains it.
    pub fn check_inductive(&self, d: &InductiveDecl) -> CheckResult<()> {
        self.set_location(d.name.to_string());
        let mut ctx = Ctx::new();
        for (n, ty) in &d.params {
            self.infer_sort(&ctx, ty)?;
            ctx.push(n.clone(), ty.clone());
        }
        self.infer_sort(&ctx, &d.arity)?;
        let (itele, concl) = decompose_products(&d.arity);
        if !matches!(concl, Term::Sort(_)) {
            return self.err("arity must end in a sort");
        }
        let np = d.param_count();
        for c in &d.ctors {
            let mut cctx = ctx.clone();
            for (n, ty) in &c.args {
                self.infer_sort(&cctx, ty)?;
                cctx.push(n.clone(), ty.clone());
            }
            if c.indices.len() != itele.len() {
                return self.err(format!(
                    "constructor {} gives {} indices, expected {}",
                    c.name,
                    c.indices.len(),
                    itele.len()
                ));
            }
            let na = c.args.len();
            let pars: Vec<Term> = (0..np).map(|i| Term::Rel(na + np - 1 - i)).collect();
            let full = mk_app(
                Term::Ind(d.name.clone()),
                pars.into_iter().chain(c.indices.iter().cloned()),
            );
            self.infer_sort(&cctx, &full)?;
        }
        Ok(())
    }
}

fn product_sort(dom: Sort, cod: Sort) -> Sort {
    match (dom, cod) {
        (_, Sort::Prop) => Sort::Prop,
        (Sort::Prop, Sort::Type(j)) => Sort::Type(j),
        (Sort::Type(i), Sort::Type(j)) => Sort::Type(i.max(j)),
    }
}

/// Type check every declaration in order, each against its prefix.
pub fn check_env(env: &GlobalEnv) -> CheckResult<()> {
    let mut prefix = GlobalEnv::new();
    for d in env.decls() {
        match d {
            Decl::Constant(c) => {
                let ch = Checker::new(&prefix);
                ch.check_constant(c)?;
                prefix.push(d.clone()).map_err(|e| CheckError::TypeError {
                    message: e.to_string(),
                    location: c.name.to_string(),
                })?;
            }
            Decl::Inductive(i) => {
                prefix.push(d.clone()).map_err(|e| CheckError::TypeError {
                    message: e.to_string(),
                    location: i.name.to_string(),
                })?;
                let ch = Checker::new(&prefix);
                ch.check_inductive(i)?;
            }
        }
    }
    Ok(())
}

/// Convenience wrapper with a fresh default-fuel checker.
pub fn infer(env: &GlobalEnv, ctx: &Ctx, t: &Term) -> CheckResult<Term> {
    Checker::new(env).infer(ctx, t)
}

pub fn reduce_biz(env: &GlobalEnv, ctx: &Ctx, t: &Term) -> CheckResult<Term> {
    Checker::new(env).reduce_biz(ctx, t)
}

pub fn flag_of_type(env: &GlobalEnv, ctx: &Ctx, ty: &Term) -> CheckResult<TypeFlag> {
    Checker::new(env).flag_of_type(ctx, ty)
}

pub fn check_convertible(env: &GlobalEnv, ctx: &Ctx, a: &Term, b: &Term) -> CheckResult<bool> {
    Checker::new(env).conv(ctx, a, b)
}
