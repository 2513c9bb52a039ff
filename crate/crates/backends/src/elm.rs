//! Elm printer.

use std::collections::HashSet;

use boxtract_core::ast::{Kername, Name};
use boxtract_core::boxir::BoxTerm;
use boxtract_core::erasure::{
    Annot, AnnotatedEnv, BoxType, ErasedConstant, ErasedDecl, ErasedEnv, ErasedInductive, TypeAlias,
};

use crate::common::{child, fun_view, has_any, indent, inductive, param_used, spine, NO_ANNOT};
use crate::names::{ident, sanitize_with, suffixed, Case, Renaming, Scope};
use crate::{BackendConfig, BackendError, BackendResult, Printed, RemapTable, Target, Warning};

const FALSE_REC: &str = "false_rec : () -> a\nfalse_rec _ = false_rec ()";

struct Elm<'e> {
    env: &'e ErasedEnv,
    remap: &'e RemapTable,
    names: Renaming,
    reserved: HashSet<String>,
    tvars: Vec<String>,
    owner: String,
    absurd: usize,
    warnings: Vec<Warning>,
}

pub fn print_elm(
    env: &ErasedEnv,
    annots: &AnnotatedEnv,
    cfg: &BackendConfig,
    remap: &RemapTable,
) -> BackendResult<Printed> {
    let names = sanitize_with(env, Target::Elm, None, remap);
    let mut reserved: HashSet<String> = names.values.values().cloned().collect();
    reserved.insert("false_rec".into());
    let mut p = Elm {
        env,
        remap,
        names,
        reserved,
        tvars: vec![],
        owner: String::new(),
        absurd: 0,
        warnings: vec![],
    };
    let mut blocks = vec![];
    for d in env.decls() {
        if remap.hides(d.name()) {
            continue;
        }
        p.owner = d.name().to_string();
        match d {
            ErasedDecl::Inductive(i) if i.is_prop => {}
            ErasedDecl::Inductive(i) => blocks.push(p.inductive(i)),
            ErasedDecl::TypeAlias(a) => blocks.push(p.alias(a)),
            ErasedDecl::Constant(c) => {
                let a = annots.get(&c.name).unwrap_or(&NO_ANNOT);
                blocks.push(p.constant(c, a)?);
            }
        }
    }
    if p.absurd > 0 {
        blocks.insert(0, FALSE_REC.to_string());
    }
    if !cfg.prelude.trim().is_empty() {
        blocks.insert(0, cfg.prelude.trim_end().to_string());
    }
    Ok(Printed {
        text: blocks.join("\n\n\n") + "\n",
        warnings: p.warnings,
    })
}

fn tvar_names(names: &[Name]) -> Vec<String> {
    let mut out: Vec<String> = vec![];
    for n in names {
        let base = ident(n, Case::Lower, Target::Elm);
        let v = suffixed(&base, |c| out.iter().any(|o| o == c));
        out.push(v);
    }
    out
}

/// Type precedence: 0 anywhere, 1 left of an arrow, 2 argument of an application.
impl Elm<'_> {
    fn ty(&mut self, t: &BoxType, prec: u8) -> String {
        if has_any(t) {
            let w = Warning::UnsupportedType(self.owner.clone());
            if !self.warnings.contains(&w) {
                self.warnings.push(w);
            }
        }
        self.ty_go(t, prec)
    }

    fn ty_go(&self, t: &BoxType, prec: u8) -> String {
        match t {
            BoxType::TVar(i) => self
                .tvars
                .get(*i)
                .cloned()
                .unwrap_or_else(|| format!("a{i}")),
            BoxType::TBox | BoxType::TAny => "()".into(),
            BoxType::TArr(d, c) => {
                let s = format!("{} -> {}", self.ty_go(d, 1), self.ty_go(c, 0));
                if prec > 0 {
                    format!("({s})")
                } else {
                    s
                }
            }
            _ => {
                let (h, args) = t.decompose_app();
                let name = match h {
                    BoxType::TInd(k) | BoxType::TConst(k) => self.names.ty(k),
                    other => self.ty_go(other, 2),
                };
                if name == "*" {
                    let parts: Vec<String> = args.iter().map(|a| self.ty_go(a, 0)).collect();
                    return format!("( {} )", parts.join(", "));
                }
                if args.is_empty() {
                    return name;
                }
                let parts: Vec<String> = args.iter().map(|a| self.ty_go(a, 2)).collect();
                let s = format!("{name} {}", parts.join(" "));
                if prec > 1 {
                    format!("({s})")
                } else {
                    s
                }
            }
        }
    }

    fn head(&self, name: &str) -> String {
        std::iter::once(name.to_string())
            .chain(self.tvars.iter().cloned())
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn inductive(&mut self, i: &ErasedInductive) -> String {
        let names: Vec<Name> = i.type_vars.iter().map(|tv| tv.name.clone()).collect();
        self.tvars = tvar_names(&names);
        let head = self.head(&self.names.ty(&i.name));
        if i.ctors.is_empty() {
            return format!("type alias {head} = Never");
        }
        let ctors: Vec<String> = i
            .ctors
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                let mut s = self.names.ctor(&i.name, ci);
                for (_, t) in &c.args {
                    s.push(' ');
                    s += &self.ty(t, 2);
                }
                s
            })
            .collect();
        if ctors.len() == 1 {
            format!("type {head} = {}", ctors[0])
        } else {
            format!("type {head}\n  = {}", ctors.join("\n  | "))
        }
    }

    fn alias(&mut self, a: &TypeAlias) -> String {
        self.tvars = tvar_names(&a.type_vars);
        let head = self.head(&self.names.ty(&a.name));
        format!("type alias {head} = {}", self.ty(&a.ty, 0))
    }

    fn constant(&mut self, c: &ErasedConstant, annot: &Annot) -> BackendResult<String> {
        self.tvars = tvar_names(&c.type_vars);
        let name = self.names.value(&c.name);
        let sig = format!("{name} : {}", self.ty(&c.ty, 0));
        let Some(body) = &c.body else {
            self.warnings.push(Warning::Axiom(c.name.clone()));
            return Ok(format!("{sig}\n{name} =\n  Debug.todo \"axiom\""));
        };
        let fv = fun_view(c, body, annot)?;
        let mut sc = Scope::new(self.reserved.clone());
        if fv.fix_name.is_some() {
            sc.push(name.clone());
        }
        let mut header = name.clone();
        for (i, (n, _)) in fv.params.iter().enumerate() {
            let x = bind(&sc, n, param_used(body, i));
            header += &format!(" {x}");
            sc.push(x);
        }
        let b = self.term(fv.body, fv.body_annot, &mut sc, false)?;
        Ok(format!("{sig}\n{header} =\n{}", indent(&b, 2)))
    }

    fn term(
        &mut self,
        t: &BoxTerm,
        a: &Annot,
        sc: &mut Scope,
        atom: bool,
    ) -> BackendResult<String> {
        let paren = |s: String| if atom { format!("({s})") } else { s };
        Ok(match t {
            BoxTerm::Box => "()".into(),
            BoxTerm::Rel(i) => sc
                .get(*i)
                .ok_or(BackendError::UnboundVariable(*i))?
                .to_string(),
            BoxTerm::Const(k) => self.constant_ref(k)?,
            BoxTerm::Construct(ind, c) => {
                inductive(self.env, &self.owner, ind)?;
                self.names.ctor(ind, *c)
            }
            BoxTerm::App(..) => self.app(t, a, sc, atom)?,
            BoxTerm::Lambda { .. } => {
                let mark = sc.len();
                let mut xs = vec![];
                let (mut cur, mut ca) = (t, a);
                while let BoxTerm::Lambda { name, body } = cur {
                    let x = bind(sc, name, body.occurs(0));
                    sc.push(x.clone());
                    xs.push(x);
                    ca = child(ca, 0);
                    cur = body;
                }
                let b = self.term(cur, ca, sc, false);
                sc.truncate(mark);
                paren(format!("\\{} -> {}", xs.join(" "), b?))
            }
            BoxTerm::LetIn { name, value, body } => {
                // Elm rejects shadowing, so the binder is chosen before the value.
                let x = bind(sc, name, true);
                let fresh = sc.reserve(&x);
                let def = match &**value {
                    BoxTerm::Fix { defs, .. } if defs.len() == 1 => {
                        self.fix_def(&x, &defs[0].body, child(child(a, 0), 0), sc)
                    }
                    _ => self
                        .term(value, child(a, 0), sc, false)
                        .map(|v| format!("{x} =\n{}", indent(&v, 2))),
                };
                if fresh {
                    sc.release(&x);
                }
                let def = def?;
                sc.push(x.clone());
                let b = self.term(body, child(a, 1), sc, false);
                sc.pop();
                paren(format!("let\n{}\nin\n{}", indent(&def, 2), b?))
            }
            BoxTerm::Case {
                ind,
                discr,
                branches,
            } => {
                let d = self.term(discr, child(a, 0), sc, false)?;
                let mut arms = vec![];
                for (ci, (n, body)) in branches.iter().enumerate() {
                    let (xs, b) = self.branch(*n, body, child(a, ci + 1), sc)?;
                    let name = self.names.ctor(ind, ci);
                    let pat = match name.as_str() {
                        "(,)" => format!("( {} )", xs.join(", ")),
                        "::" if xs.len() == 2 => format!("{} :: {}", xs[0], xs[1]),
                        _ => std::iter::once(name)
                            .chain(xs)
                            .collect::<Vec<_>>()
                            .join(" "),
                    };
                    arms.push(format!("{pat} ->\n{}", indent(&b, 2)));
                }
                paren(format!("case {d} of\n{}", indent(&arms.join("\n"), 2)))
            }
            BoxTerm::Fix { defs, .. } => {
                if defs.len() != 1 {
                    return Err(BackendError::MutualFixpoint(self.owner.clone()));
                }
                let f = bind(sc, &defs[0].name, true);
                let fresh = sc.reserve(&f);
                let def = self.fix_def(&f, &defs[0].body, child(a, 0), sc);
                if fresh {
                    sc.release(&f);
                }
                paren(format!("let\n{}\nin\n{f}", indent(&def?, 2)))
            }
            BoxTerm::EmptyMatch { .. } => {
                self.absurd += 1;
                paren("false_rec ()".into())
            }
        })
    }

    /// `f x y =\n  body` for a recursive definition named `f`.
    fn fix_def(
        &mut self,
        f: &str,
        body: &BoxTerm,
        a: &Annot,
        sc: &mut Scope,
    ) -> BackendResult<String> {
        let mark = sc.len();
        sc.push(f.to_string());
        let mut header = f.to_string();
        let (mut cur, mut ca) = (body, a);
        while let BoxTerm::Lambda { name, body } = cur {
            let x = bind(sc, name, body.occurs(0));
            header += &format!(" {x}");
            sc.push(x);
            ca = child(ca, 0);
            cur = body;
        }
        let b = self.term(cur, ca, sc, false);
        sc.truncate(mark);
        Ok(format!("{header} =\n{}", indent(&b?, 2)))
    }

    fn constant_ref(&self, k: &Kername) -> BackendResult<String> {
        match self.remap.constant(k) {
            Some(text) => Ok(text.to_string()),
            None if self.env.lookup(k).is_some() => Ok(self.names.value(k)),
            None => Err(BackendError::UnknownGlobal(self.owner.clone(), k.clone())),
        }
    }

    fn app(&mut self, t: &BoxTerm, a: &Annot, sc: &mut Scope, atom: bool) -> BackendResult<String> {
        let (h, ha, args) = spine(t, a);
        let mut parts = vec![];
        for (x, xa) in &args {
            parts.push(self.term(x, xa, sc, true)?);
        }
        if let BoxTerm::Construct(ind, c) = h {
            let name = self.names.ctor(ind, *c);
            match name.as_str() {
                "(,)" if parts.len() == 2 => return Ok(format!("( {}, {} )", parts[0], parts[1])),
                "::" if parts.len() == 2 => {
                    let s = format!("{} :: {}", parts[0], parts[1]);
                    return Ok(if atom { format!("({s})") } else { s });
                }
                _ => {}
            }
        }
        let head = self.term(h, ha, sc, true)?;
        let s = format!("{head} {}", parts.join(" "));
        Ok(if atom { format!("({s})") } else { s })
    }

    fn branch(
        &mut self,
        n: usize,
        body: &BoxTerm,
        a: &Annot,
        sc: &mut Scope,
    ) -> BackendResult<(Vec<String>, String)> {
        let mark = sc.len();
        let mut xs = vec![];
        let (mut t, mut ta) = (body, a);
        while xs.len() < n {
            let BoxTerm::Lambda { name, body } = t else {
                break;
            };
            let x = bind(sc, name, body.occurs(0));
            sc.push(x.clone());
            xs.push(x);
            ta = child(ta, 0);
            t = body;
        }
        let res = if xs.len() < n {
            self.term(t, ta, sc, true).map(|f| {
                let mut s = f;
                while xs.len() < n {
                    let x = sc.fresh("x");
                    sc.push(x.clone());
                    s += &format!(" {x}");
                    xs.push(x);
                }
                s
            })
        } else {
            self.term(t, ta, sc, false)
        };
        sc.truncate(mark);
        Ok((xs, res?))
    }
}

/// Elm binders are lower-case and never shadow; anonymous unused ones are `_`.
fn bind(sc: &Scope, name: &str, used: bool) -> String {
    if (name == "_" || name.is_empty()) && !used {
        return "_".into();
    }
    let base = if name == "_" || name.is_empty() {
        "x"
    } else {
        name
    };
    sc.fresh(&ident(base, Case::Lower, Target::Elm))
}
