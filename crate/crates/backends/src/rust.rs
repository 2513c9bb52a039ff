//! Rust printer: data lives in an arena owned by a `Program` value and every
//! constant becomes a method on it.

use std::collections::{HashMap, HashSet};

use boxtract_core::ast::{Kername, Name};
use boxtract_core::boxir::BoxTerm;
use boxtract_core::erasure::{
    Annot, AnnotatedEnv, BoxType, ErasedConstant, ErasedDecl, ErasedEnv, ErasedInductive, TypeAlias,
};

use crate::common::{
    arity, child, fun_view, has_any, indent, inductive, occurring_vars, param_used, spine, NO_ANNOT,
};
use crate::names::{ident, is_keyword, sanitize_with, suffixed, Case, Renaming};
use crate::{BackendConfig, BackendError, BackendResult, Printed, RemapTable, Target, Warning};

const ABSURD: &str = "panic!(\"Absurd case!\")";

#[derive(Clone, Debug)]
enum Local {
    Var(String),
    /// A local fixpoint read through its cell.
    Knot(String),
    /// The enclosing top-level fixpoint.
    Method(String, usize),
}

#[derive(Default)]
struct RScope {
    locals: Vec<Local>,
}

impl RScope {
    fn fresh(&self, base: &str) -> String {
        suffixed(base, |c| {
            self.locals.iter().any(|l| match l {
                Local::Var(n) | Local::Knot(n) => n == c,
                Local::Method(..) => false,
            })
        })
    }

    fn get(&self, i: usize) -> BackendResult<&Local> {
        self.locals
            .iter()
            .rev()
            .nth(i)
            .ok_or(BackendError::UnboundVariable(i))
    }
}

struct Rust<'e> {
    env: &'e ErasedEnv,
    remap: &'e RemapTable,
    names: Renaming,
    arities: HashMap<Kername, usize>,
    /// Type aliases that take the arena lifetime.
    alias_lifetime: HashSet<Kername>,
    tvars: Vec<String>,
    owner: String,
    warnings: Vec<Warning>,
}

pub fn print_rust(
    env: &ErasedEnv,
    annots: &AnnotatedEnv,
    cfg: &BackendConfig,
    remap: &RemapTable,
) -> BackendResult<Printed> {
    let names = sanitize_with(env, Target::Rust, None, remap);
    let arities = env
        .decls()
        .iter()
        .filter_map(|d| match d {
            ErasedDecl::Constant(c) => Some((c.name.clone(), arity(c))),
            _ => None,
        })
        .collect();
    let mut p = Rust {
        env,
        remap,
        names,
        arities,
        alias_lifetime: HashSet::new(),
        tvars: vec![],
        owner: String::new(),
        warnings: vec![],
    };
    let mut types = vec![];
    let mut methods = vec![];
    for d in env.decls() {
        if remap.hides(d.name()) {
            continue;
        }
        p.owner = d.name().to_string();
        match d {
            ErasedDecl::Inductive(i) if i.is_prop => {}
            ErasedDecl::Inductive(i) => types.push(p.inductive(i)),
            ErasedDecl::TypeAlias(a) => types.push(p.alias(a)),
            ErasedDecl::Constant(c) => {
                let a = annots.get(&c.name).unwrap_or(&NO_ANNOT);
                methods.push(p.constant(c, a)?);
            }
        }
    }
    let arena = &cfg.rust.arena;
    let mut blocks = vec![];
    if !cfg.prelude.trim().is_empty() {
        blocks.push(cfg.prelude.trim_end().to_string());
    }
    blocks.extend(types);
    blocks.push(format!("struct Program {{\n  __alloc: {arena},\n}}"));
    let mut items = vec![
        format!("fn new() -> Self {{\n  Program {{\n    __alloc: {arena}::new(),\n  }}\n}}"),
        "fn alloc<T>(&'a self, t: T) -> &'a T {\n  self.__alloc.alloc(t)\n}".to_string(),
        "fn closure<TArg, TRet>(&'a self, F: impl Fn(TArg) -> TRet + 'a) -> &'a dyn Fn(TArg) -> TRet {\n  self.__alloc.alloc(F)\n}".to_string(),
    ];
    items.extend(methods);
    blocks.push(format!(
        "impl<'a> Program {{\n{}\n}}",
        indent(&items.join("\n\n"), 2)
    ));
    Ok(Printed {
        text: blocks.join("\n\n") + "\n",
        warnings: p.warnings,
    })
}

fn tvar_names(names: &[Name]) -> Vec<String> {
    let mut out: Vec<String> = vec![];
    for n in names {
        let base = ident(n, Case::Upper, Target::Rust);
        let v = suffixed(&base, |c| {
            out.iter().any(|o| o == c) || c == "T" || c == "F"
        });
        out.push(v);
    }
    out
}

fn local_ident(name: &str) -> String {
    let base = if name == "_" || name.is_empty() {
        "x"
    } else {
        name
    };
    let s = ident(base, Case::Lower, Target::Rust);
    if is_keyword(Target::Rust, &s) {
        format!("{s}_")
    } else {
        s
    }
}

impl Rust<'_> {
    fn warn_any(&mut self, t: &BoxType) {
        if has_any(t) {
            let w = Warning::UnsupportedType(self.owner.clone());
            if !self.warnings.contains(&w) {
                self.warnings.push(w);
            }
        }
    }

    fn ty(&mut self, t: &BoxType) -> String {
        self.warn_any(t);
        self.ty_go(t)
    }

    fn ty_go(&self, t: &BoxType) -> String {
        match t {
            BoxType::TVar(i) => self
                .tvars
                .get(*i)
                .cloned()
                .unwrap_or_else(|| format!("A{i}")),
            BoxType::TBox | BoxType::TAny => "()".into(),
            BoxType::TArr(d, c) => format!("&'a dyn Fn({}) -> {}", self.ty_go(d), self.ty_go(c)),
            _ => {
                let (h, args) = t.decompose_app();
                let args: Vec<String> = args.iter().map(|a| self.ty_go(a)).collect();
                match h {
                    BoxType::TInd(k) if self.remap.inductive(k).is_some() => {
                        generic(&self.names.ty(k), false, &args)
                    }
                    BoxType::TInd(k) => format!("&'a {}", generic(&self.names.ty(k), true, &args)),
                    BoxType::TConst(k) => {
                        generic(&self.names.ty(k), self.alias_lifetime.contains(k), &args)
                    }
                    other => self.ty_go(other),
                }
            }
        }
    }

    fn inductive(&mut self, i: &ErasedInductive) -> String {
        let names: Vec<Name> = i.type_vars.iter().map(|tv| tv.name.clone()).collect();
        self.tvars = tvar_names(&names);
        let name = self.names.ty(&i.name);
        let phantom = match self.tvars.len() {
            0 => "PhantomData<&'a ()>".to_string(),
            1 => format!("PhantomData<&'a {}>", self.tvars[0]),
            _ => format!("PhantomData<&'a ({})>", self.tvars.join(", ")),
        };
        let mut variants = vec![];
        for (ci, c) in i.ctors.iter().enumerate() {
            let mut fields = vec![phantom.clone()];
            for (_, t) in &c.args {
                fields.push(self.ty(t));
            }
            variants.push(format!(
                "{}({})",
                self.names.ctor(&i.name, ci),
                fields.join(", ")
            ));
        }
        if variants.is_empty() {
            variants.push(format!("__Never({phantom})"));
        }
        let head = generic(&name, true, &self.tvars);
        format!(
            "pub enum {head} {{\n{}\n}}",
            indent(&variants.join(",\n"), 2)
        )
    }

    fn alias(&mut self, a: &TypeAlias) -> String {
        self.tvars = tvar_names(&a.type_vars);
        let rhs = self.ty(&a.ty);
        let lifetime = rhs.contains("'a");
        if lifetime {
            self.alias_lifetime.insert(a.name.clone());
        }
        let used = {
            let mut v = vec![];
            occurring_vars(&a.ty, &mut v);
            v
        };
        let params: Vec<String> = self
            .tvars
            .iter()
            .enumerate()
            .filter(|(i, _)| used.contains(i))
            .map(|(_, n)| n.clone())
            .collect();
        format!(
            "type {} = {rhs};",
            generic(&self.names.ty(&a.name), lifetime, &params)
        )
    }

    fn generics(&self, t: &BoxType) -> String {
        let mut vars = vec![];
        occurring_vars(t, &mut vars);
        vars.sort();
        if vars.is_empty() {
            return String::new();
        }
        let bounds: Vec<String> = vars
            .iter()
            .map(|i| {
                format!(
                    "{}: Copy",
                    self.tvars
                        .get(*i)
                        .cloned()
                        .unwrap_or_else(|| format!("A{i}"))
                )
            })
            .collect();
        format!("<{}>", bounds.join(", "))
    }

    fn constant(&mut self, c: &ErasedConstant, annot: &Annot) -> BackendResult<String> {
        self.tvars = tvar_names(&c.type_vars);
        let name = self.names.value(&c.name);
        let generics = self.generics(&c.ty);
        let Some(body) = &c.body else {
            self.warnings.push(Warning::Axiom(c.name.clone()));
            let t = self.ty(&c.ty);
            return Ok(format!(
                "fn {name}{generics}(&'a self) -> {t} {{\n  panic!(\"axiom\")\n}}"
            ));
        };
        let fv = fun_view(c, body, annot)?;
        let mut sc = RScope::default();
        if fv.fix_name.is_some() {
            sc.locals.push(Local::Method(name.clone(), fv.params.len()));
        }
        let missing =
            |what: String| BackendError::MissingAnnotation(format!("{what} of {}", c.name));
        let mut params = vec![];
        let mut pnames = vec![];
        let mut ptypes = vec![];
        for (i, (n, t)) in fv.params.iter().enumerate() {
            let x = if *n == "_" && !param_used(body, i) {
                sc.fresh("_x")
            } else {
                sc.fresh(&local_ident(n))
            };
            let t = t
                .as_ref()
                .ok_or_else(|| missing(format!("parameter `{n}`")))?;
            let ts = self.ty(t);
            params.push(format!("{x}: {ts}"));
            ptypes.push(t.clone());
            pnames.push(x.clone());
            sc.locals.push(Local::Var(x));
        }
        let ret = fv
            .ret
            .clone()
            .ok_or_else(|| missing("the result type".into()))?;
        let rets = self.ty(&ret);
        let b = self.block(fv.body, fv.body_annot, &mut sc)?;
        let self_param = std::iter::once("&'a self".to_string())
            .chain(params)
            .collect::<Vec<_>>()
            .join(", ");
        let mut out = format!(
            "fn {name}{generics}({self_param}) -> {rets} {{\n{}\n}}",
            indent(&b, 2)
        );
        if !pnames.is_empty() {
            let full = ptypes
                .iter()
                .rev()
                .fold(ret, |acc, d| BoxType::arr(d.clone(), acc));
            let fts = self.ty(&full);
            let call = format!("self.{name}({})", pnames.join(", "));
            let wrapped = pnames.iter().rev().fold(call, |acc, x| {
                format!("self.closure(move |{x}| {{ {acc} }})")
            });
            out +=
                &format!("\nfn {name}__curried{generics}(&'a self) -> {fts} {{\n  {wrapped}\n}}");
        }
        Ok(out)
    }

    /// Statement sequence for a block body: lets become statements.
    fn block(&mut self, t: &BoxTerm, a: &Annot, sc: &mut RScope) -> BackendResult<String> {
        if let BoxTerm::LetIn { name, value, body } = t {
            let v = self.expr(value, child(a, 0), sc)?;
            let x = sc.fresh(&local_ident(name));
            sc.locals.push(Local::Var(x.clone()));
            let b = self.block(body, child(a, 1), sc);
            sc.locals.pop();
            return Ok(format!("let {x} = {v};\n{}", b?));
        }
        self.expr(t, a, sc)
    }

    fn expr(&mut self, t: &BoxTerm, a: &Annot, sc: &mut RScope) -> BackendResult<String> {
        Ok(match t {
            BoxTerm::Box => "()".into(),
            BoxTerm::Rel(i) => match sc.get(*i)? {
                Local::Var(n) => n.clone(),
                Local::Knot(n) => format!("{n}.get().unwrap()"),
                Local::Method(n, 0) => format!("self.{n}()"),
                Local::Method(n, _) => format!("self.{n}__curried()"),
            },
            BoxTerm::Const(k) => self.app_const(k, &[], sc)?,
            BoxTerm::Construct(ind, c) => self.ctor_app(ind, *c, &[], sc)?,
            BoxTerm::App(..) => self.app(t, a, sc)?,
            BoxTerm::Lambda { name, body } => {
                let x = sc.fresh(&local_ident(name));
                sc.locals.push(Local::Var(x.clone()));
                let b = self.block(body, child(a, 0), sc);
                sc.locals.pop();
                closure(&x, &b?)
            }
            BoxTerm::LetIn { .. } => format!("{{\n{}\n}}", indent(&self.block(t, a, sc)?, 2)),
            BoxTerm::Case {
                ind,
                discr,
                branches,
            } => {
                let d = self.expr(discr, child(a, 0), sc)?;
                inductive(self.env, &self.owner, ind)?;
                let ename = self.names.ty(ind);
                let remapped = self.remap.inductive(ind).is_some();
                let mut arms = vec![];
                for (ci, (n, body)) in branches.iter().enumerate() {
                    let (xs, b) = self.branch(*n, body, child(a, ci + 1), sc)?;
                    let cname = self.names.ctor(ind, ci);
                    let pat = if remapped {
                        if xs.is_empty() {
                            cname
                        } else {
                            format!("{cname}({})", xs.join(", "))
                        }
                    } else {
                        let fields = std::iter::once("_".to_string())
                            .chain(xs)
                            .collect::<Vec<_>>();
                        format!("&{ename}::{cname}({})", fields.join(", "))
                    };
                    arms.push(if b.contains('\n') {
                        format!("{pat} => {{\n{}\n}},", indent(&b, 2))
                    } else {
                        format!("{pat} => {{ {b} }},")
                    });
                }
                format!("match {d} {{\n{}\n}}", indent(&arms.join("\n"), 2))
            }
            BoxTerm::Fix { defs, .. } => {
                if defs.len() != 1 {
                    return Err(BackendError::MutualFixpoint(self.owner.clone()));
                }
                let d = &defs[0];
                let f = sc.fresh(&local_ident(&d.name));
                sc.locals.push(Local::Knot(f.clone()));
                let b = self.expr(&d.body, child(a, 0), sc);
                sc.locals.pop();
                format!(
                    "{{\n  let {f} = self.alloc(std::cell::Cell::new(None));\n  {f}.set(Some(\n{}));\n  {f}.get().unwrap()\n}}",
                    indent(&b?, 4)
                )
            }
            BoxTerm::EmptyMatch { .. } => ABSURD.into(),
        })
    }

    fn branch(
        &mut self,
        n: usize,
        body: &BoxTerm,
        a: &Annot,
        sc: &mut RScope,
    ) -> BackendResult<(Vec<String>, String)> {
        let mark = sc.locals.len();
        let mut xs = vec![];
        let (mut t, mut ta) = (body, a);
        while xs.len() < n {
            let BoxTerm::Lambda { name, body } = t else {
                break;
            };
            let x = if *name == "_" && !body.occurs(0) {
                "_".to_string()
            } else {
                sc.fresh(&local_ident(name))
            };
            sc.locals.push(Local::Var(x.clone()));
            xs.push(x);
            ta = child(ta, 0);
            t = body;
        }
        let res = if xs.len() < n {
            self.expr(t, ta, sc).map(|f| {
                let mut s = f;
                while xs.len() < n {
                    let x = sc.fresh("x");
                    sc.locals.push(Local::Var(x.clone()));
                    s = format!("hint_app({s})({x})");
                    xs.push(x);
                }
                s
            })
        } else {
            self.block(t, ta, sc)
        };
        sc.locals.truncate(mark);
        Ok((xs, res?))
    }

    fn args(&mut self, args: &[(&BoxTerm, &Annot)], sc: &mut RScope) -> BackendResult<Vec<String>> {
        args.iter().map(|(x, xa)| self.expr(x, xa, sc)).collect()
    }

    /// Call of a method taking `arity` arguments; the rest go through closures.
    fn method_call(
        &mut self,
        name: &str,
        arity: usize,
        args: &[(&BoxTerm, &Annot)],
        sc: &mut RScope,
    ) -> BackendResult<String> {
        let printed = self.args(args, sc)?;
        if arity == 0 {
            return Ok(apply_expr(format!("self.{name}()"), &printed));
        }
        if printed.len() >= arity {
            let call = format!("self.{name}({})", printed[..arity].join(", "));
            return Ok(apply_expr(call, &printed[arity..]));
        }
        Ok(apply_expr(format!("self.{name}__curried()"), &printed))
    }

    fn app_const(
        &mut self,
        k: &Kername,
        args: &[(&BoxTerm, &Annot)],
        sc: &mut RScope,
    ) -> BackendResult<String> {
        if let Some(text) = self.remap.constant(k) {
            let text = text.to_string();
            let printed = self.args(args, sc)?;
            return Ok(if printed.is_empty() {
                text
            } else {
                format!("{text}({})", printed.join(", "))
            });
        }
        let arity = *self
            .arities
            .get(k)
            .ok_or_else(|| BackendError::UnknownGlobal(self.owner.clone(), k.clone()))?;
        let name = self.names.value(k);
        self.method_call(&name, arity, args, sc)
    }

    fn app(&mut self, t: &BoxTerm, a: &Annot, sc: &mut RScope) -> BackendResult<String> {
        let (h, ha, args) = spine(t, a);
        match h {
            BoxTerm::Construct(ind, c) => self.ctor_app(ind, *c, &args, sc),
            BoxTerm::Const(k) => self.app_const(k, &args, sc),
            BoxTerm::Rel(i) => match sc.get(*i)?.clone() {
                Local::Method(n, ar) => self.method_call(&n, ar, &args, sc),
                Local::Var(n) => {
                    let printed = self.args(&args, sc)?;
                    Ok(apply_var(n, &printed))
                }
                // The cell's closure type is only known once the knot is
                // tied, so every call through it needs the inference hint.
                Local::Knot(n) => {
                    let printed = self.args(&args, sc)?;
                    Ok(apply_expr(format!("{n}.get().unwrap()"), &printed))
                }
            },
            _ => {
                let head = self.expr(h, ha, sc)?;
                let printed = self.args(&args, sc)?;
                Ok(apply_expr(head, &printed))
            }
        }
    }

    fn ctor_app(
        &mut self,
        ind: &Kername,
        c: usize,
        args: &[(&BoxTerm, &Annot)],
        sc: &mut RScope,
    ) -> BackendResult<String> {
        let i = inductive(self.env, &self.owner, ind)?;
        let n = i.ctors.get(c).map_or(0, |c| c.args.len());
        let ename = self.names.ty(ind);
        let cname = self.names.ctor(ind, c);
        let remapped = self.remap.inductive(ind).is_some();
        let mut printed = self.args(args, sc)?;
        // Missing arguments are taken by closures.
        let mut missing = vec![];
        while printed.len() < n {
            let x = sc.fresh("x");
            sc.locals.push(Local::Var(x.clone()));
            missing.push(x.clone());
            printed.push(x);
        }
        for _ in &missing {
            sc.locals.pop();
        }
        let extra = printed.split_off(n);
        let value = if remapped {
            if printed.is_empty() {
                cname
            } else {
                format!("{cname}({})", printed.join(", "))
            }
        } else {
            let fields = std::iter::once("PhantomData".to_string())
                .chain(printed)
                .collect::<Vec<_>>();
            format!("self.alloc({ename}::{cname}({}))", fields.join(", "))
        };
        let value = missing.iter().rev().fold(value, |acc, x| closure(x, &acc));
        Ok(apply_expr(value, &extra))
    }
}

fn generic(name: &str, lifetime: bool, args: &[String]) -> String {
    let mut ps = vec![];
    if lifetime {
        ps.push("'a".to_string());
    }
    ps.extend(args.iter().cloned());
    if ps.is_empty() {
        name.to_string()
    } else {
        format!("{name}<{}>", ps.join(", "))
    }
}

fn closure(x: &str, body: &str) -> String {
    if body.contains('\n') {
        format!("self.closure(move |{x}| {{\n{}\n}})", indent(body, 2))
    } else {
        format!("self.closure(move |{x}| {{ {body} }})")
    }
}

/// Apply a variable: the first call is direct, later ones go through `hint_app`.
fn apply_var(f: String, args: &[String]) -> String {
    match args.split_first() {
        None => f,
        Some((a, rest)) => apply_expr(format!("{f}({a})"), rest),
    }
}

/// Apply an arbitrary expression through `hint_app`.
fn apply_expr(f: String, args: &[String]) -> String {
    args.iter()
        .fold(f, |acc, a| format!("hint_app({acc})({a})"))
}
