//! Name resolution and elaboration of surface syntax into core terms.
//!
//! Elaboration is local: binder annotations are required except where an
//! expected type is known, and a `match` without `return` takes a
//! non-dependent motive from the expected type or from its branches.

use std::collections::HashMap;

use super::parser::{Pos, SBinder, SBranch, SDecl, SFix, STerm, StructArg};
use super::ParseError;
use crate::ast::{
    decompose_app, decompose_products, instantiate, lift, mk_app, mk_lambdas, mk_products, occurs,
    subst, subst_many, ConstantDecl, CtorDecl, Decl, GlobalEnv, InductiveDecl, Kername, Name, Term,
};
use crate::check::{CheckError, Checker, Ctx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlobalRef {
    Const(Kername),
    Ind(Kername),
    Ctor(Kername, usize),
}

impl GlobalRef {
    pub fn to_term(&self) -> Term {
        match self {
            GlobalRef::Const(k) => Term::Const(k.clone()),
            GlobalRef::Ind(k) => Term::Ind(k.clone()),
            GlobalRef::Ctor(k, i) => Term::Construct(k.clone(), *i),
        }
    }
}

/// Global namespace: full names plus lookup by trailing segments, where the
/// most recent declaration wins.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    full: HashMap<Kername, GlobalRef>,
    by_short: HashMap<String, Vec<Kername>>,
}

impl Scope {
    pub fn from_env(env: &GlobalEnv) -> Scope {
        let mut s = Scope::default();
        for d in env.decls() {
            match d {
                Decl::Constant(c) => {
                    let _ = s.add(c.name.clone(), GlobalRef::Const(c.name.clone()));
                }
                Decl::Inductive(i) => {
                    let _ = s.add(i.name.clone(), GlobalRef::Ind(i.name.clone()));
                    for (k, c) in i.ctors.iter().enumerate() {
                        let _ = s.add(
                            ctor_kername(&i.name, &c.name),
                            GlobalRef::Ctor(i.name.clone(), k),
                        );
                    }
                }
            }
        }
        s
    }

    pub fn add(&mut self, name: Kername, r: GlobalRef) -> Result<(), ParseError> {
        if self.full.contains_key(&name) {
            return Err(ParseError::DuplicateName(name));
        }
        self.by_short
            .entry(name.short().to_string())
            .or_default()
            .push(name.clone());
        self.full.insert(name, r);
        Ok(())
    }

    /// Resolve a possibly partially qualified name.
    pub fn resolve(&self, s: &str) -> Option<&GlobalRef> {
        let segs: Vec<&str> = s.split('.').collect();
        let cands = self.by_short.get(*segs.last()?)?;
        cands
            .iter()
            .rev()
            .find(|k| {
                let ks = k.segments();
                ks.len() >= segs.len()
                    && ks[ks.len() - segs.len()..]
                        .iter()
                        .zip(&segs)
                        .all(|(a, b)| a == b)
            })
            .and_then(|k| self.full.get(k))
    }

    pub fn get(&self, k: &Kername) -> Option<&GlobalRef> {
        self.full.get(k)
    }
}

/// Kernel name of a constructor: the inductive's module plus its own name.
pub fn ctor_kername(ind: &Kername, ctor: &str) -> Kername {
    Kername::qualified(ind.module(), ctor)
}

pub struct Elaborator {
    env: GlobalEnv,
    module: Vec<String>,
    scope: Scope,
    fuel: u64,
}

fn type_error(pos: Pos, source: CheckError) -> ParseError {
    ParseError::TypeError {
        line: pos.line,
        col: pos.col,
        source,
    }
}

fn elab_error(pos: Pos, location: &str, message: impl Into<String>) -> ParseError {
    type_error(
        pos,
        CheckError::TypeError {
            message: message.into(),
            location: location.to_string(),
        },
    )
}

impl Elaborator {
    pub fn new(fuel: u64) -> Elaborator {
        Elaborator {
            env: GlobalEnv::new(),
            module: vec!["Top".to_string()],
            scope: Scope::default(),
            fuel,
        }
    }

    /// Continue elaborating on top of an already checked environment.
    pub fn with_env(env: GlobalEnv, fuel: u64) -> Elaborator {
        Elaborator {
            scope: Scope::from_env(&env),
            env,
            module: vec!["Top".to_string()],
            fuel,
        }
    }

    /// Start a new source file: declarations default to module `Top` again.
    pub fn reset_module(&mut self) {
        self.module = vec!["Top".to_string()];
    }

    pub fn into_env(self) -> GlobalEnv {
        self.env
    }

    fn checker(&self) -> Checker<'_> {
        Checker::with_fuel(&self.env, self.fuel)
    }

    fn ck<T>(&self, pos: Pos, r: Result<T, CheckError>) -> Result<T, ParseError> {
        r.map_err(|e| type_error(pos, e))
    }

    pub fn decl(&mut self, d: &SDecl) -> Result<(), ParseError> {
        match d {
            SDecl::Module(path) => {
                self.module = path.clone();
                Ok(())
            }
            SDecl::Def {
                name,
                binders,
                ty,
                body,
                pos,
            } => {
                let kn = Kername::qualified(&self.module, name);
                let mut ctx = Ctx::new();
                let (ty, body) = match ty {
                    Some(t) => {
                        let full_ty = wrap_forall(binders, t, *pos);
                        let ty = self.elab_type(&mut ctx, &full_ty)?;
                        let body =
                            self.elab(&mut ctx, &wrap_fun(binders, body, *pos), Some(&ty))?;
                        (ty, body)
                    }
                    None => {
                        let body = self.elab(&mut ctx, &wrap_fun(binders, body, *pos), None)?;
                        let ty = self.ck(*pos, self.checker().infer(&ctx, &body))?;
                        (ty, body)
                    }
                };
                self.add_constant(kn, ty, Some(body), *pos)
            }
            SDecl::Axiom {
                name,
                binders,
                ty,
                pos,
            } => {
                let kn = Kername::qualified(&self.module, name);
                let ty = self.elab_type(&mut Ctx::new(), &wrap_forall(binders, ty, *pos))?;
                self.add_constant(kn, ty, None, *pos)
            }
            SDecl::Fixpoint(f) => {
                let kn = Kername::qualified(&self.module, &f.name);
                let (fix, ty) = self.elab_fix(&mut Ctx::new(), f)?;
                self.add_constant(kn, ty, Some(fix), f.pos)
            }
            SDecl::Inductive {
                name,
                params,
                arity,
                ctors,
                pos,
            } => self.inductive(name, params, arity, ctors, *pos),
        }
    }

    fn add_constant(
        &mut self,
        name: Kername,
        ty: Term,
        body: Option<Term>,
        pos: Pos,
    ) -> Result<(), ParseError> {
        if self.scope.get(&name).is_some() {
            return Err(ParseError::DuplicateName(name));
        }
        let decl = ConstantDecl {
            name: name.clone(),
            ty,
            body,
        };
        self.ck(pos, self.checker().check_constant(&decl))?;
        self.env
            .push(Decl::Constant(decl))
            .map_err(|e| ParseError::DuplicateName(e.0))?;
        self.scope.add(name.clone(), GlobalRef::Const(name))
    }

    fn inductive(
        &mut self,
        name: &str,
        params: &[SBinder],
        arity: &STerm,
        ctors: &[super::parser::SCtor],
        pos: Pos,
    ) -> Result<(), ParseError> {
        let kn = Kername::qualified(&self.module, name);
        if self.scope.get(&kn).is_some() {
            return Err(ParseError::DuplicateName(kn));
        }
        let mut ctx = Ctx::new();
        let mut pars = Vec::new();
        for b in params {
            let ty = match &b.ty {
                Some(t) => self.elab_type(&mut ctx, t)?,
                None => {
                    return Err(elab_error(
                        b.pos,
                        name,
                        format!("parameter `{}` needs a type", b.name),
                    ))
                }
            };
            ctx.push(b.name.clone(), ty.clone());
            pars.push((b.name.clone(), ty));
        }
        let arity_t = self.elab_type(&mut ctx, arity)?;
        let mut decl = InductiveDecl {
            name: kn.clone(),
            params: pars,
            arity: arity_t,
            ctors: vec![],
        };
        // Make the type visible to its own constructors.
        let saved_env = self.env.clone();
        let saved_scope = self.scope.clone();
        self.env
            .push(Decl::Inductive(decl.clone()))
            .map_err(|e| ParseError::DuplicateName(e.0))?;
        self.scope.add(kn.clone(), GlobalRef::Ind(kn.clone()))?;
        let np = decl.params.len();
        let mut seen = HashMap::new();
        for c in ctors {
            if seen.insert(c.name.clone(), ()).is_some() {
                self.env = saved_env;
                self.scope = saved_scope;
                return Err(ParseError::DuplicateName(ctor_kername(&kn, &c.name)));
            }
            let full = wrap_forall(&c.binders, &c.ty, c.pos);
            let cty = self.elab_type(&mut ctx, &full)?;
            let (args, concl) = decompose_products(&cty);
            let na = args.len();
            let (head, cargs) = decompose_app(concl);
            let ok_head = matches!(head, Term::Ind(k) if *k == kn);
            let ok_params =
                cargs.len() >= np && (0..np).all(|i| *cargs[i] == Term::Rel(na + np - 1 - i));
            if !ok_head || !ok_params {
                return Err(elab_error(
                    c.pos,
                    name,
                    format!(
                        "constructor `{}` must return `{}` applied to its parameters",
                        c.name, name
                    ),
                ));
            }
            decl.ctors.push(CtorDecl {
                name: c.name.clone(),
                args,
                indices: cargs[np..].iter().map(|t| (*t).clone()).collect(),
            });
        }
        let mut env = saved_env;
        env.push(Decl::Inductive(decl.clone()))
            .map_err(|e| ParseError::DuplicateName(e.0))?;
        self.env = env;
        self.ck(pos, self.checker().check_inductive(&decl))?;
        for (k, c) in decl.ctors.iter().enumerate() {
            self.scope
                .add(ctor_kername(&kn, &c.name), GlobalRef::Ctor(kn.clone(), k))?;
        }
        Ok(())
    }

    fn resolve(&self, ctx: &Ctx, s: &str, pos: Pos) -> Result<Term, ParseError> {
        if !s.contains('.') {
            if let Some(i) = ctx.names().rev().position(|n| n == s) {
                return Ok(Term::Rel(i));
            }
        }
        match self.scope.resolve(s) {
            Some(r) => Ok(r.to_term()),
            None => Err(ParseError::UnboundName {
                name: s.to_string(),
                line: pos.line,
                col: pos.col,
            }),
        }
    }

    fn elab_type(&self, ctx: &mut Ctx, t: &STerm) -> Result<Term, ParseError> {
        let ty = self.elab(ctx, t, None)?;
        self.ck(t.pos(), self.checker().infer_sort(ctx, &ty))?;
        Ok(ty)
    }

    fn binder_type(
        &self,
        ctx: &mut Ctx,
        b: &SBinder,
        hint: Option<&Term>,
    ) -> Result<Term, ParseError> {
        match (&b.ty, hint) {
            (Some(t), _) => self.elab_type(ctx, t),
            (None, Some(h)) => Ok(h.clone()),
            (None, None) => Err(elab_error(
                b.pos,
                "<binder>",
                format!("cannot infer the type of `{}`; add an annotation", b.name),
            )),
        }
    }

    pub fn elab(
        &self,
        ctx: &mut Ctx,
        t: &STerm,
        expected: Option<&Term>,
    ) -> Result<Term, ParseError> {
        match t {
            STerm::Var(s, pos) => self.resolve(ctx, s, *pos),
            STerm::Sort(s, _) => Ok(Term::Sort(*s)),
            STerm::Arrow(a, b, _) => {
                let a = self.elab_type(ctx, a)?;
                let b = self.elab_type(ctx, b)?;
                Ok(Term::arrow(a, b))
            }
            STerm::Forall(bs, body, _) => {
                let mut tele = Vec::new();
                for b in bs {
                    let ty = self.binder_type(ctx, b, None)?;
                    ctx.push(b.name.clone(), ty.clone());
                    tele.push((b.name.clone(), ty));
                }
                let body = self.elab_type(ctx, body);
                for _ in bs {
                    ctx.pop();
                }
                Ok(mk_products(&tele, body?))
            }
            STerm::Fun(bs, body, _) => {
                let mut tele = Vec::new();
                let mut exp = expected.cloned();
                let mut result = Ok(());
                for b in bs {
                    let (hint, next) = match &exp {
                        Some(e) => match self.checker().whnf(ctx, e) {
                            Ok(Term::Product { dom, cod, .. }) => (Some(*dom), Some(*cod)),
                            _ => (None, None),
                        },
                        None => (None, None),
                    };
                    match self.binder_type(ctx, b, hint.as_ref()) {
                        Ok(ty) => {
                            ctx.push(b.name.clone(), ty.clone());
                            tele.push((b.name.clone(), ty));
                            exp = next;
                        }
                        Err(e) => {
                            result = Err(e);
                            break;
                        }
                    }
                }
                let body = result.and_then(|_| self.elab(ctx, body, exp.as_ref()));
                for _ in &tele {
                    ctx.pop();
                }
                Ok(mk_lambdas(&tele, body?))
            }
            STerm::App(f, args, pos) => {
                let fe = self.elab(ctx, f, None)?;
                let mut fty = Some(self.ck(*pos, self.checker().infer(ctx, &fe))?);
                let mut out = Vec::new();
                for a in args {
                    let prod = match &fty {
                        Some(ft) => match self.ck(a.pos(), self.checker().whnf(ctx, ft))? {
                            Term::Product { dom, cod, .. } => Some((*dom, *cod)),
                            _ => None,
                        },
                        None => None,
                    };
                    match prod {
                        Some((dom, cod)) => {
                            let ae = self.elab(ctx, a, Some(&dom))?;
                            fty = Some(subst(&cod, 0, &ae));
                            out.push(ae);
                        }
                        None => {
                            return Err(elab_error(
                                a.pos(),
                                "<application>",
                                "too many arguments: the function type is not a product",
                            ))
                        }
                    }
                }
                Ok(mk_app(fe, out))
            }
            STerm::Let {
                name,
                ty,
                value,
                body,
                pos,
            } => {
                let (v, vty) = match ty {
                    Some(ty) => {
                        let vty = self.elab_type(ctx, ty)?;
                        (self.elab(ctx, value, Some(&vty))?, vty)
                    }
                    None => {
                        let v = self.elab(ctx, value, None)?;
                        let vty = self.ck(*pos, self.checker().infer(ctx, &v))?;
                        (v, vty)
                    }
                };
                ctx.push_def(name.clone(), v.clone(), vty.clone());
                let exp = expected.map(|e| lift(e, 1, 0));
                let b = self.elab(ctx, body, exp.as_ref());
                ctx.pop();
                Ok(Term::let_in(name.clone(), v, vty, b?))
            }
            STerm::LetFix(f, body, _) => {
                let (fix, fty) = self.elab_fix(ctx, f)?;
                ctx.push_def(f.name.clone(), fix.clone(), fty.clone());
                let exp = expected.map(|e| lift(e, 1, 0));
                let b = self.elab(ctx, body, exp.as_ref());
                ctx.pop();
                Ok(Term::let_in(f.name.clone(), fix, fty, b?))
            }
            STerm::Fix(f) => Ok(self.elab_fix(ctx, f)?.0),
            STerm::Match {
                discr,
                ret,
                branches,
                pos,
            } => self.elab_match(ctx, discr, ret.as_deref(), branches, *pos, expected),
        }
    }

    /// Returns the fixpoint term and its type.
    fn elab_fix(&self, ctx: &mut Ctx, f: &SFix) -> Result<(Term, Term), ParseError> {
        let mut tele = Vec::new();
        let mut res = Ok(());
        for b in &f.binders {
            match self.binder_type(ctx, b, None) {
                Ok(ty) => {
                    ctx.push(b.name.clone(), ty.clone());
                    tele.push((b.name.clone(), ty));
                }
                Err(e) => {
                    res = Err(e);
                    break;
                }
            }
        }
        let ret = res.and_then(|_| self.elab_type(ctx, &f.ret));
        for _ in &tele {
            ctx.pop();
        }
        let ret = ret?;
        let n = tele.len();
        let fix_ty = mk_products(&tele, ret.clone());

        let struct_index = match &f.struct_arg {
            Some(StructArg::Index(i)) => *i,
            Some(StructArg::Name(s)) => match tele.iter().position(|(n, _)| n == s) {
                Some(i) => i,
                None => {
                    return Err(elab_error(
                        f.pos,
                        &f.name,
                        format!("no binder `{s}` for the recursive argument"),
                    ))
                }
            },
            None => {
                let mut found = None;
                let mut c2 = ctx.clone();
                for (i, (n, ty)) in tele.iter().enumerate() {
                    let w = self.ck(f.pos, self.checker().whnf(&c2, ty))?;
                    if matches!(decompose_app(&w).0, Term::Ind(_)) {
                        found = Some(i);
                        break;
                    }
                    c2.push(n.clone(), ty.clone());
                }
                match found {
                    Some(i) => i,
                    None => {
                        return Err(elab_error(
                            f.pos,
                            &f.name,
                            "cannot guess the recursive argument; add {struct x}",
                        ))
                    }
                }
            }
        };

        ctx.push(f.name.clone(), fix_ty.clone());
        let inner_tele: Vec<(Name, Term)> = tele
            .iter()
            .enumerate()
            .map(|(i, (n, ty))| (n.clone(), lift(ty, 1, i)))
            .collect();
        for (n, ty) in &inner_tele {
            ctx.push(n.clone(), ty.clone());
        }
        let exp = lift(&ret, 1, n);
        let body = self.elab(ctx, &f.body, Some(&exp));
        for _ in 0..=n {
            ctx.pop();
        }
        let body = mk_lambdas(&inner_tele, body?);
        Ok((
            Term::Fix {
                defs: vec![crate::ast::FixDef {
                    name: f.name.clone(),
                    ty: fix_ty.clone(),
                    body,
                }],
                struct_index,
            },
            fix_ty,
        ))
    }

    fn elab_match(
        &self,
        ctx: &mut Ctx,
        discr: &STerm,
        ret: Option<&STerm>,
        branches: &[SBranch],
        pos: Pos,
        expected: Option<&Term>,
    ) -> Result<Term, ParseError> {
        let d = self.elab(ctx, discr, None)?;
        let dty = self.ck(pos, self.checker().infer(ctx, &d))?;
        let dty = self.ck(pos, self.checker().whnf(ctx, &dty))?;
        let (head, dargs) = decompose_app(&dty);
        let ind_name = match head {
            Term::Ind(k) => k.clone(),
            _ => {
                return Err(elab_error(
                    discr.pos(),
                    "<match>",
                    "the scrutinee does not have an inductive type",
                ))
            }
        };
        let decl = self.env.inductive(&ind_name).expect("resolved inductive");
        let np = decl.param_count();
        let pars: Vec<Term> = dargs.iter().take(np).map(|t| (*t).clone()).collect();
        let arity_inst = instantiate(&decl.arity, &pars, 0);
        let (itele, _) = decompose_products(&arity_inst);

        // Order branches by constructor.
        let mut by_ctor: Vec<Option<&SBranch>> = vec![None; decl.ctors.len()];
        for b in branches {
            let k = match self.scope.resolve(&b.ctor) {
                Some(GlobalRef::Ctor(i, k)) if *i == ind_name => *k,
                Some(_) => {
                    return Err(elab_error(
                        b.pos,
                        "<match>",
                        format!("`{}` is not a constructor of {ind_name}", b.ctor),
                    ))
                }
                None => {
                    return Err(ParseError::UnboundName {
                        name: b.ctor.clone(),
                        line: b.pos.line,
                        col: b.pos.col,
                    })
                }
            };
            if by_ctor[k].is_some() {
                return Err(elab_error(
                    b.pos,
                    "<match>",
                    format!("constructor `{}` matched twice", b.ctor),
                ));
            }
            by_ctor[k] = Some(b);
        }
        if let Some(k) = by_ctor.iter().position(Option::is_none) {
            return Err(elab_error(
                pos,
                "<match>",
                format!("missing branch for `{}`", decl.ctors[k].name),
            ));
        }

        let mut motive = match (ret, expected) {
            (Some(r), _) => Some(self.elab(ctx, r, None)?),
            (None, Some(e)) => Some(self.nondep_motive(&ind_name, &pars, &itele, e)),
            (None, None) => None,
        };

        let mut out = Vec::new();
        for (k, b) in by_ctor.into_iter().enumerate() {
            let b = b.expect("checked above");
            let c = &decl.ctors[k];
            let na = c.args.len();
            let args_inst: Vec<(Name, Term)> = c
                .args
                .iter()
                .enumerate()
                .map(|(j, (n, ty))| (n.clone(), instantiate(ty, &pars, j)))
                .collect();
            let branch_concl = |m: &Term| {
                let idx: Vec<Term> = c
                    .indices
                    .iter()
                    .map(|ix| instantiate(ix, &pars, na))
                    .collect();
                let cterm = mk_app(
                    Term::Construct(ind_name.clone(), k),
                    pars.iter()
                        .map(|p| lift(p, na, 0))
                        .chain((0..na).rev().map(Term::Rel)),
                );
                mk_app(
                    lift(m, na, 0),
                    idx.into_iter().chain(std::iter::once(cterm)),
                )
            };
            match &b.vars {
                None if na > 0 => {
                    let exp = motive
                        .as_ref()
                        .map(|m| mk_products(&args_inst, branch_concl(m)));
                    if exp.is_none() {
                        return Err(elab_error(
                            b.pos,
                            "<match>",
                            "a branch without pattern variables needs a `return` clause",
                        ));
                    }
                    let body = self.elab(ctx, &b.body, exp.as_ref())?;
                    out.push(crate::ast::Branch { arity: na, body });
                }
                vars => {
                    let vars: &[SBinder] = vars.as_deref().unwrap_or(&[]);
                    if vars.len() != na {
                        return Err(ParseError::SyntaxError {
                            line: b.pos.line,
                            col: b.pos.col,
                            message: format!(
                                "pattern `{}` binds {} variables, constructor has {na} arguments",
                                b.ctor,
                                vars.len()
                            ),
                        });
                    }
                    let mut tele = Vec::new();
                    let mut res = Ok(());
                    for (v, (_, aty)) in vars.iter().zip(&args_inst) {
                        match self.binder_type(ctx, v, Some(aty)) {
                            Ok(ty) => {
                                ctx.push(v.name.clone(), ty.clone());
                                tele.push((v.name.clone(), ty));
                            }
                            Err(e) => {
                                res = Err(e);
                                break;
                            }
                        }
                    }
                    let result = res.and_then(|_| {
                        let exp = match &motive {
                            Some(m) => Some(
                                self.ck(b.pos, self.checker().reduce_biz(ctx, &branch_concl(m)))?,
                            ),
                            None => None,
                        };
                        let body = self.elab(ctx, &b.body, exp.as_ref())?;
                        if motive.is_none() {
                            let bty = self.ck(b.pos, self.checker().infer(ctx, &body))?;
                            if (0..na).all(|i| !occurs(&bty, i)) {
                                let lowered = subst_many(&bty, &vec![Term::prop(); na], 0);
                                motive =
                                    Some(self.nondep_motive(&ind_name, &pars, &itele, &lowered));
                            }
                        }
                        Ok(body)
                    });
                    for _ in &tele {
                        ctx.pop();
                    }
                    out.push(crate::ast::Branch {
                        arity: na,
                        body: mk_lambdas(&tele, result?),
                    });
                }
            }
        }
        let motive = match motive {
            Some(m) => m,
            None => {
                return Err(elab_error(
                    pos,
                    "<match>",
                    "cannot infer the type of this match; add a `return` clause",
                ))
            }
        };
        Ok(Term::Case {
            ind: ind_name,
            discr: Box::new(d),
            motive: Box::new(motive),
            branches: out,
        })
    }

    /// `fun indices (x : I pars indices) => ret`
    fn nondep_motive(
        &self,
        ind: &Kername,
        pars: &[Term],
        itele: &[(Name, Term)],
        ret: &Term,
    ) -> Term {
        let ni = itele.len();
        let x_ty = mk_app(
            Term::Ind(ind.clone()),
            pars.iter()
                .map(|p| lift(p, ni, 0))
                .chain((0..ni).rev().map(Term::Rel)),
        );
        let mut tele = itele.to_vec();
        tele.push(("x".to_string(), x_ty));
        mk_lambdas(&tele, lift(ret, ni + 1, 0))
    }
}

fn wrap_forall(binders: &[SBinder], t: &STerm, pos: Pos) -> STerm {
    if binders.is_empty() {
        t.clone()
    } else {
        STerm::Forall(binders.to_vec(), Box::new(t.clone()), pos)
    }
}

fn wrap_fun(binders: &[SBinder], t: &STerm, pos: Pos) -> STerm {
    if binders.is_empty() {
        t.clone()
    } else {
        STerm::Fun(binders.to_vec(), Box::new(t.clone()), pos)
    }
}
