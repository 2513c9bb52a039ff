//! Printing core terms back to surface syntax.
//!
//! Global references print with the shortest suffix that resolves to the same
//! declaration and is not shadowed by a local binder, so the output reparses
//! to the same term up to binder names.

use std::collections::HashSet;
use std::fmt::Write;

use super::elab::{ctor_kername, GlobalRef, Scope};
use super::lexer::is_keyword;
use crate::ast::{
    decompose_app, lift, occurs, Decl, GlobalEnv, InductiveDecl, Kername, Sort, Term, ANON,
};

pub struct Printer<'a> {
    env: &'a GlobalEnv,
    scope: Scope,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Term,
    App,
    Atom,
}

impl<'a> Printer<'a> {
    pub fn new(env: &'a GlobalEnv) -> Printer<'a> {
        Printer {
            env,
            scope: Scope::from_env(env),
        }
    }

    /// Print `t` in a context whose innermost binder is last in `names`.
    pub fn term_in(&self, names: &[String], t: &Term) -> String {
        let mut names = names.to_vec();
        self.term(&mut names, t, Prec::Term)
    }

    pub fn term_closed(&self, t: &Term) -> String {
        self.term_in(&[], t)
    }

    fn global_name(&self, names: &[String], full: &Kername, r: &GlobalRef) -> String {
        let segs = full.segments();
        for start in (0..segs.len()).rev() {
            let cand = segs[start..].join(".");
            if start == segs.len() - 1 && names.contains(&cand) {
                continue;
            }
            if self.scope.resolve(&cand) == Some(r) {
                return cand;
            }
        }
        full.to_string()
    }

    fn ctor_name(&self, names: &[String], ind: &Kername, k: usize) -> String {
        match self.env.inductive(ind).and_then(|d| d.ctors.get(k)) {
            Some(c) => self.global_name(
                names,
                &ctor_kername(ind, &c.name),
                &GlobalRef::Ctor(ind.clone(), k),
            ),
            None => format!("{ind}#{k}"),
        }
    }

    fn fresh(&self, names: &[String], base: &str, needed: bool) -> String {
        if base == ANON && !needed {
            return ANON.to_string();
        }
        let base = if base == ANON || base.is_empty() {
            "x"
        } else {
            base
        };
        let taken: HashSet<&str> = names.iter().map(String::as_str).collect();
        let ok = |s: &str| !taken.contains(s) && !is_keyword(s) && !s.contains('.');
        if ok(base) {
            return base.to_string();
        }
        (0..)
            .map(|i| format!("{base}{i}"))
            .find(|s| ok(s))
            .expect("infinite supply")
    }

    fn paren(s: String, need: bool) -> String {
        if need {
            format!("({s})")
        } else {
            s
        }
    }

    fn term(&self, names: &mut Vec<String>, t: &Term, prec: Prec) -> String {
        match t {
            Term::Rel(i) => {
                if *i < names.len() {
                    names[names.len() - 1 - i].clone()
                } else {
                    format!("#{i}")
                }
            }
            Term::Sort(Sort::Prop) => "Prop".into(),
            Term::Sort(Sort::Type(0)) => "Type".into(),
            Term::Sort(Sort::Type(l)) => format!("Type{l}"),
            Term::Const(k) => self.global_name(names, k, &GlobalRef::Const(k.clone())),
            Term::Ind(k) => self.global_name(names, k, &GlobalRef::Ind(k.clone())),
            Term::Construct(k, i) => self.ctor_name(names, k, *i),
            Term::App(..) => {
                let (h, args) = decompose_app(t);
                let mut s = self.term(names, h, Prec::Atom);
                for a in args {
                    s.push(' ');
                    s.push_str(&self.term(names, a, Prec::Atom));
                }
                Self::paren(s, prec == Prec::Atom)
            }
            Term::Lambda { .. } => {
                let mut s = String::from("fun");
                let mut cur = t;
                let depth = names.len();
                while let Term::Lambda { name, ty, body } = cur {
                    let ty_s = self.term(names, ty, Prec::Term);
                    let n = self.fresh(names, name, occurs(body, 0));
                    write!(s, " ({n} : {ty_s})").unwrap();
                    names.push(n);
                    cur = body;
                }
                let body = self.term(names, cur, Prec::Term);
                names.truncate(depth);
                write!(s, " => {body}").unwrap();
                Self::paren(s, prec > Prec::Term)
            }
            Term::Product { name, dom, cod } => {
                if !occurs(cod, 0) {
                    let d = self.term(names, dom, Prec::App);
                    names.push(ANON.to_string());
                    let c = self.term(names, cod, Prec::Term);
                    names.pop();
                    return Self::paren(format!("{d} -> {c}"), prec > Prec::Term);
                }
                let d = self.term(names, dom, Prec::Term);
                let n = self.fresh(names, name, true);
                names.push(n.clone());
                let c = self.term(names, cod, Prec::Term);
                names.pop();
                Self::paren(format!("forall ({n} : {d}), {c}"), prec > Prec::Term)
            }
            Term::LetIn {
                name,
                value,
                ty,
                body,
            } => {
                let v = self.term(names, value, Prec::Term);
                let ty_s = self.term(names, ty, Prec::Term);
                let n = self.fresh(names, name, true);
                names.push(n.clone());
                let b = self.term(names, body, Prec::Term);
                names.pop();
                Self::paren(format!("let {n} : {ty_s} := {v} in {b}"), prec > Prec::Term)
            }
            Term::Case {
                ind,
                discr,
                motive,
                branches,
            } => {
                let mut s = format!(
                    "match {} return {} with",
                    self.term(names, discr, Prec::Term),
                    self.term(names, motive, Prec::Term)
                );
                for (k, b) in branches.iter().enumerate() {
                    let c = self.ctor_name(names, ind, k);
                    write!(s, " | {c}").unwrap();
                    let depth = names.len();
                    let mut cur = &b.body;
                    let mut lambdas = 0;
                    {
                        let mut probe = &b.body;
                        while let Term::Lambda { body, .. } = probe {
                            lambdas += 1;
                            probe = body;
                        }
                    }
                    if b.arity > 0 && lambdas >= b.arity {
                        for _ in 0..b.arity {
                            if let Term::Lambda { name, ty, body } = cur {
                                let ty_s = self.term(names, ty, Prec::Term);
                                let n = self.fresh(names, name, true);
                                write!(s, " ({n} : {ty_s})").unwrap();
                                names.push(n);
                                cur = body;
                            }
                        }
                    }
                    let body = self.term(names, cur, Prec::Term);
                    names.truncate(depth);
                    write!(s, " => {body}").unwrap();
                }
                s.push_str(" end");
                s
            }
            Term::Fix { defs, struct_index } => {
                let d = &defs[0];
                let fname = self.fresh(names, &d.name, true);
                let (s, _) = self.fix_sugar(names, &fname, &d.ty, &d.body, *struct_index);
                Self::paren(format!("fix {s}"), prec > Prec::Term)
            }
        }
    }

    /// `f (x : A) .. {struct n} : R := body`, without the leading keyword.
    fn fix_sugar(
        &self,
        names: &mut Vec<String>,
        fname: &str,
        ty: &Term,
        body: &Term,
        struct_index: usize,
    ) -> (String, ()) {
        // Peel binders shared by the type and the body.
        let mut k = 0;
        {
            let (mut pt, mut bt) = (ty, body);
            while let (
                Term::Product { dom, cod, .. },
                Term::Lambda {
                    ty: lty, body: lb, ..
                },
            ) = (pt, bt)
            {
                if **lty != lift(dom, 1, k) {
                    break;
                }
                k += 1;
                pt = cod;
                bt = lb;
            }
        }
        let depth = names.len();
        let mut s = fname.to_string();
        let (mut pt, mut bt) = (ty, body);
        // Binder types are printed in the outer context (without `f`).
        let mut inner_names = names.clone();
        inner_names.push(fname.to_string());
        for _ in 0..k {
            if let (Term::Product { dom, cod, .. }, Term::Lambda { name, body: lb, .. }) = (pt, bt)
            {
                let ty_s = self.term(names, dom, Prec::Term);
                let mut taken = names.clone();
                taken.extend(inner_names.iter().cloned());
                let n = self.fresh(&taken, name, true);
                write!(s, " ({n} : {ty_s})").unwrap();
                names.push(n.clone());
                inner_names.push(n);
                pt = cod;
                bt = lb;
            }
        }
        let ret = self.term(names, pt, Prec::Term);
        let b = self.term(&mut inner_names, bt, Prec::Term);
        names.truncate(depth);
        write!(s, " {{struct {struct_index}}} : {ret} := {b}").unwrap();
        (s, ())
    }

    pub fn decl(&self, d: &Decl) -> String {
        match d {
            Decl::Constant(c) => {
                let ty = self.term_closed(&c.ty);
                match &c.body {
                    Some(b) => {
                        format!("def {} : {} := {}", c.name.short(), ty, self.term_closed(b))
                    }
                    None => format!("axiom {} : {}", c.name.short(), ty),
                }
            }
            Decl::Inductive(i) => self.inductive(i),
        }
    }

    fn inductive(&self, i: &InductiveDecl) -> String {
        let mut names = Vec::new();
        let mut s = format!("inductive {}", i.name.short());
        for (n, ty) in &i.params {
            let ty_s = self.term(&mut names, ty, Prec::Term);
            let n = self.fresh(&names, n, true);
            write!(s, " ({n} : {ty_s})").unwrap();
            names.push(n);
        }
        write!(s, " : {} :=", self.term(&mut names, &i.arity, Prec::Term)).unwrap();
        for (k, _) in i.ctors.iter().enumerate() {
            let full = i.ctor_type(k);
            // Strip the parameter products; the body lives under `names`.
            let mut cur = &full;
            for _ in 0..i.params.len() {
                if let Term::Product { cod, .. } = cur {
                    cur = cod;
                }
            }
            write!(
                s,
                "\n  | {} : {}",
                i.ctors[k].name,
                self.term(&mut names, cur, Prec::Term)
            )
            .unwrap();
        }
        s
    }

    pub fn program(&self) -> String {
        let mut out = String::new();
        let mut module: Option<Vec<String>> = None;
        for d in self.env.decls() {
            let m = d.name().module().to_vec();
            if module.as_ref() != Some(&m) {
                writeln!(out, "module {}\n", m.join(".")).unwrap();
                module = Some(m);
            }
            writeln!(out, "{}\n", self.decl(d)).unwrap();
        }
        out
    }
}

/// Print a closed term, resolving global names against `env`.
pub fn print_core(env: &GlobalEnv, t: &Term) -> String {
    Printer::new(env).term_closed(t)
}

pub fn print_decl(env: &GlobalEnv, d: &Decl) -> String {
    Printer::new(env).decl(d)
}

pub fn print_program(env: &GlobalEnv) -> String {
    Printer::new(env).program()
}
