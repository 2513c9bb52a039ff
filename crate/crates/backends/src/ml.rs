//! ML-family printer (CameLIGO and Liquidity).

use std::collections::{BTreeMap, HashSet};

use boxtract_core::ast::{Kername, Name};
use boxtract_core::boxir::BoxTerm;
use boxtract_core::erasure::{
    Annot, AnnotatedEnv, BoxType, ErasedConstant, ErasedDecl, ErasedEnv, ErasedInductive, TypeAlias,
};

use crate::common::{child, fun_view, has_any, indent, inductive, lambda_domain, spine, NO_ANNOT};
use crate::names::{ident, sanitize_with, suffixed, Case, Prefix, Renaming, Scope};
use crate::{
    BackendConfig, BackendError, BackendResult, MlDialect, Printed, RemapTable, Target, Warning,
};

const ABSURD: &str = "failwith \"Absurd case!\"";

/// How a non-remapped inductive is printed.
#[derive(Clone, Debug)]
enum Shape {
    Variant,
    /// One constructor with one field: the type is the field's type.
    Alias,
    /// One constructor with several fields: a native record.
    Record(Vec<String>),
}

struct Ml<'e> {
    env: &'e ErasedEnv,
    cfg: &'e BackendConfig,
    remap: &'e RemapTable,
    names: Renaming,
    /// Global value names, which binders must not shadow.
    reserved: HashSet<String>,
    shapes: BTreeMap<Kername, Shape>,
    tvars: Vec<String>,
    owner: String,
    warnings: Vec<Warning>,
}

pub fn print_ml(
    env: &ErasedEnv,
    annots: &AnnotatedEnv,
    cfg: &BackendConfig,
    remap: &RemapTable,
) -> BackendResult<Printed> {
    let mut p = Ml::new(env, cfg, remap);
    let mut blocks = vec![];
    if !cfg.prelude.trim().is_empty() {
        blocks.push(cfg.prelude.trim_end().to_string());
    }
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
    Ok(Printed {
        text: blocks.join("\n\n") + "\n",
        warnings: p.warnings,
    })
}

/// A `main` that runs `entry` on a parameter and a storage and fails when it
/// returns `None`.
pub fn ml_entrypoint(
    env: &ErasedEnv,
    cfg: &BackendConfig,
    remap: &RemapTable,
    entry: &Kername,
) -> BackendResult<String> {
    let mut p = Ml::new(env, cfg, remap);
    let c = env
        .constant(entry)
        .ok_or_else(|| BackendError::UnknownGlobal("entrypoint".into(), entry.clone()))?;
    p.owner = entry.to_string();
    p.tvars = tvar_names(&c.type_vars);
    let (doms, cod) = c.ty.decompose_arr();
    let missing = || BackendError::MissingAnnotation(format!("the entrypoint type of {entry}"));
    if doms.len() != 2 {
        return Err(missing());
    }
    let result = match cod {
        BoxType::TApp(_, r) => (**r).clone(),
        _ => return Err(missing()),
    };
    let (pt, st, rt) = (
        p.ty(doms[0], true),
        p.ty(doms[1], true),
        p.ty(&result, false),
    );
    let f = match remap.constant(entry) {
        Some(t) => t.to_string(),
        None => p.names.value(entry),
    };
    Ok(format!(
        "let main (p, s : {pt} * {st}) : {rt} =\n  match {f} p s with\n    Some r -> r\n  | None -> (failwith \"contract failed\" : {rt})\n"
    ))
}

fn tvar_names(names: &[Name]) -> Vec<String> {
    let mut out: Vec<String> = vec![];
    for n in names {
        let base = ident(n, Case::Lower, Target::Ml);
        let v = suffixed(&base, |c| out.iter().any(|o| o[1..] == *c));
        out.push(format!("'{v}"));
    }
    out
}

impl<'e> Ml<'e> {
    fn new(env: &'e ErasedEnv, cfg: &'e BackendConfig, remap: &'e RemapTable) -> Ml<'e> {
        let prefix = cfg.ml.prefix.then_some(Prefix {
            value: "coq_",
            ctor: "Coq_",
        });
        let names = sanitize_with(env, Target::Ml, prefix, remap);
        let mut shapes = BTreeMap::new();
        let mut fields: HashSet<String> = HashSet::new();
        for d in env.decls() {
            if let ErasedDecl::Inductive(i) = d {
                if remap.inductive(&i.name).is_some() || i.ctors.len() != 1 {
                    shapes.insert(i.name.clone(), Shape::Variant);
                    continue;
                }
                let args = &i.ctors[0].args;
                let shape = match args.len() {
                    0 => Shape::Variant,
                    1 => Shape::Alias,
                    _ => {
                        let tname = names.ty(&i.name);
                        let fs = args
                            .iter()
                            .enumerate()
                            .map(|(j, (n, _))| {
                                let base = if n == "_" || n.is_empty() {
                                    format!("{tname}_{j}")
                                } else {
                                    ident(n, Case::Lower, Target::Ml)
                                };
                                let f = suffixed(&base, |c| fields.contains(c));
                                fields.insert(f.clone());
                                f
                            })
                            .collect();
                        Shape::Record(fs)
                    }
                };
                shapes.insert(i.name.clone(), shape);
            }
        }
        let reserved = names.values.values().cloned().collect();
        Ml {
            env,
            cfg,
            remap,
            names,
            reserved,
            shapes,
            tvars: vec![],
            owner: String::new(),
            warnings: vec![],
        }
    }

    fn annotated_lambdas(&self) -> bool {
        self.cfg.ml.dialect == MlDialect::CameLigo
    }

    /// Remapped to the target's booleans: matches print as conditionals.
    fn is_bool(&self, k: &Kername) -> bool {
        self.remap
            .inductive(k)
            .is_some_and(|r| r.ctors.len() == 2 && r.ctors[0] == "true" && r.ctors[1] == "false")
    }

    fn shape(&self, k: &Kername) -> Shape {
        self.shapes.get(k).cloned().unwrap_or(Shape::Variant)
    }

    fn warn_any(&mut self, t: &BoxType) {
        if has_any(t) {
            let w = Warning::UnsupportedType(self.owner.clone());
            if !self.warnings.contains(&w) {
                self.warnings.push(w);
            }
        }
    }

    /// `arg` marks positions where an arrow type needs parentheses.
    fn ty(&mut self, t: &BoxType, arg: bool) -> String {
        self.warn_any(t);
        self.ty_go(t, arg)
    }

    fn ty_go(&self, t: &BoxType, arg: bool) -> String {
        match t {
            BoxType::TVar(i) => self
                .tvars
                .get(*i)
                .cloned()
                .unwrap_or_else(|| format!("'a{i}")),
            BoxType::TBox | BoxType::TAny => "unit".into(),
            BoxType::TArr(d, c) => {
                let s = format!("{} -> {}", self.ty_go(d, true), self.ty_go(c, false));
                if arg {
                    format!("({s})")
                } else {
                    s
                }
            }
            _ => {
                let (h, args) = t.decompose_app();
                let name = self.head_name(h);
                if name == "*" {
                    let parts: Vec<String> = args.iter().map(|a| self.ty_go(a, true)).collect();
                    return format!("({})", parts.join(" * "));
                }
                match args.len() {
                    0 => name,
                    1 => format!("{} {name}", self.ty_go(args[0], true)),
                    _ => {
                        let parts: Vec<String> =
                            args.iter().map(|a| self.ty_go(a, false)).collect();
                        format!("({}) {name}", parts.join(", "))
                    }
                }
            }
        }
    }

    fn head_name(&self, h: &BoxType) -> String {
        match h {
            BoxType::TInd(k) | BoxType::TConst(k) => self.names.ty(k),
            other => self.ty_go(other, true),
        }
    }

    /// Type written after a nullary constructor: arguments always in parentheses.
    fn ctor_annot_ty(&mut self, t: &BoxType) -> String {
        self.warn_any(t);
        let (h, args) = t.decompose_app();
        let name = self.head_name(h);
        if args.is_empty() || name == "*" {
            return self.ty_go(t, false);
        }
        let parts: Vec<String> = args.iter().map(|a| self.ty_go(a, false)).collect();
        format!("({}) {name}", parts.join(", "))
    }

    fn type_head(&self, tvars: &[String], name: &str) -> String {
        match tvars.len() {
            0 => name.to_string(),
            1 => format!("{} {name}", tvars[0]),
            _ => format!("({}) {name}", tvars.join(", ")),
        }
    }

    fn inductive(&mut self, i: &ErasedInductive) -> String {
        let names: Vec<Name> = i.type_vars.iter().map(|tv| tv.name.clone()).collect();
        self.tvars = tvar_names(&names);
        let head = self.type_head(&self.tvars.clone(), &self.names.ty(&i.name));
        match self.shape(&i.name) {
            Shape::Alias => {
                let t = self.ty(&i.ctors[0].args[0].1, false);
                format!("type {head} = {t}")
            }
            Shape::Record(fields) => {
                let fs: Vec<String> = i.ctors[0]
                    .args
                    .iter()
                    .zip(&fields)
                    .map(|((_, t), f)| format!("{f} : {}", self.ty(t, false)))
                    .collect();
                format!("type {head} = {{ {} }}", fs.join("; "))
            }
            Shape::Variant if i.ctors.is_empty() => format!("type {head} = unit"),
            Shape::Variant => {
                let mut ctors = vec![];
                for (ci, c) in i.ctors.iter().enumerate() {
                    let name = self.names.ctor(&i.name, ci);
                    if c.args.is_empty() {
                        ctors.push(name);
                    } else {
                        let ts: Vec<String> =
                            c.args.iter().map(|(_, t)| self.ty(t, true)).collect();
                        ctors.push(format!("{name} of ({})", ts.join(" * ")));
                    }
                }
                format!("type {head} = {}", ctors.join(" | "))
            }
        }
    }

    fn alias(&mut self, a: &TypeAlias) -> String {
        self.tvars = tvar_names(&a.type_vars);
        let head = self.type_head(&self.tvars.clone(), &self.names.ty(&a.name));
        let t = self.ty(&a.ty, false);
        format!("type {head} = {t}")
    }

    fn constant(&mut self, c: &ErasedConstant, annot: &Annot) -> BackendResult<String> {
        self.tvars = tvar_names(&c.type_vars);
        let name = self.names.value(&c.name);
        let Some(body) = &c.body else {
            self.warnings.push(Warning::Axiom(c.name.clone()));
            let t = self.ty(&c.ty, false);
            return Ok(format!("let {name} : {t} = failwith \"axiom\""));
        };
        let fv = fun_view(c, body, annot)?;
        let mut sc = Scope::new(self.reserved.clone());
        let rec = if fv.fix_name.is_some() {
            if fv.params.len() != 1 {
                return Err(BackendError::UnsupportedRecursion(name, fv.params.len()));
            }
            sc.push(name.clone());
            "rec "
        } else {
            ""
        };
        let mut header = format!("let {rec}{name}");
        for (n, t) in &fv.params {
            let p = bind(&sc, n, true);
            let t = t.as_ref().ok_or_else(|| {
                BackendError::MissingAnnotation(format!("parameter `{n}` of {}", c.name))
            })?;
            let ts = self.ty(t, false);
            header += &format!(" ({p} : {ts})");
            sc.push(p);
        }
        let body = self.term(fv.body, fv.body_annot, &mut sc, false)?;
        Ok(format!("{header} =\n{}", indent(&body, 2)))
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
            BoxTerm::Const(k) => self.constant_ref(k, None)?,
            BoxTerm::Construct(ind, c) => self.ctor_app(ind, *c, &[], a, sc, atom)?,
            BoxTerm::App(..) => self.app(t, a, sc, atom)?,
            BoxTerm::Lambda { name, body } => {
                let x = bind(sc, name, body.occurs(0));
                let binder = match (self.annotated_lambdas(), lambda_domain(a)) {
                    (true, Some(d)) => format!("({x} : {})", self.ty(d, false)),
                    (true, None) => {
                        return Err(BackendError::MissingAnnotation(format!(
                            "lambda `{x}` in {}",
                            self.owner
                        )))
                    }
                    (false, _) => x.clone(),
                };
                sc.push(x);
                let b = self.term(body, child(a, 0), sc, false);
                sc.pop();
                paren(format!("fun {binder} -> {}", b?))
            }
            BoxTerm::LetIn { name, value, body } => {
                let v = self.term(value, child(a, 0), sc, false)?;
                let x = bind(sc, name, body.occurs(0));
                sc.push(x.clone());
                let b = self.term(body, child(a, 1), sc, false);
                sc.pop();
                paren(format!("let {x} = {v} in\n{}", b?))
            }
            BoxTerm::Case {
                ind,
                discr,
                branches,
            } => paren(self.case(ind, discr, branches, a, sc)?),
            BoxTerm::Fix { defs, .. } => {
                if defs.len() != 1 {
                    return Err(BackendError::MutualFixpoint(self.owner.clone()));
                }
                let d = &defs[0];
                let f = bind(sc, &d.name, true);
                sc.push(f.clone());
                let r = match &d.body {
                    BoxTerm::Lambda { name, body } => {
                        let x = bind(sc, name, body.occurs(0));
                        let da = child(a, 0);
                        let binder = match (self.annotated_lambdas(), lambda_domain(da)) {
                            (true, Some(t)) => format!("({x} : {})", self.ty(t, false)),
                            _ => x.clone(),
                        };
                        if matches!(&**body, BoxTerm::Lambda { .. }) {
                            Err(BackendError::UnsupportedRecursion(f.clone(), 2))
                        } else {
                            sc.push(x);
                            let b = self.term(body, child(da, 0), sc, false);
                            sc.pop();
                            b.map(|b| format!("let rec {f} {binder} =\n{}\nin {f}", indent(&b, 2)))
                        }
                    }
                    _ => Err(BackendError::UnsupportedRecursion(f.clone(), 0)),
                };
                sc.pop();
                paren(r?)
            }
            BoxTerm::EmptyMatch { .. } => match &a.ty {
                Some(ty) => format!("({ABSURD} : {})", self.ty(ty, false)),
                None => format!("({ABSURD})"),
            },
        })
    }

    /// A constant used as a value; templates with `{ty}` take the type of
    /// their first argument.
    fn constant_ref(&mut self, k: &Kername, first_arg: Option<&Annot>) -> BackendResult<String> {
        match self.remap.constant(k) {
            Some(text) if text.contains("{ty}") => {
                let ty = first_arg.and_then(|a| a.ty.clone()).ok_or_else(|| {
                    BackendError::MissingAnnotation(format!("the argument of remapped {k}"))
                })?;
                let ts = self.ty(&ty, false);
                Ok(text.replace("{ty}", &ts))
            }
            Some(text) => Ok(text.to_string()),
            None if self.env.lookup(k).is_some() => Ok(self.names.value(k)),
            None => Err(BackendError::UnknownGlobal(self.owner.clone(), k.clone())),
        }
    }

    fn app(&mut self, t: &BoxTerm, a: &Annot, sc: &mut Scope, atom: bool) -> BackendResult<String> {
        let (h, ha, args) = spine(t, a);
        let head = match h {
            BoxTerm::Construct(ind, c) => return self.ctor_app(ind, *c, &args, a, sc, atom),
            BoxTerm::Const(k) => self.constant_ref(k, args.first().map(|(_, a)| *a))?,
            _ => self.term(h, ha, sc, true)?,
        };
        let mut s = head;
        for (x, xa) in &args {
            s.push(' ');
            s += &self.term(x, xa, sc, true)?;
        }
        Ok(if atom { format!("({s})") } else { s })
    }

    fn ctor_app(
        &mut self,
        ind: &Kername,
        c: usize,
        args: &[(&BoxTerm, &Annot)],
        node: &Annot,
        sc: &mut Scope,
        atom: bool,
    ) -> BackendResult<String> {
        let i = inductive(self.env, &self.owner, ind)?;
        let name = self.names.ctor(ind, c);
        let expected = i.ctors.get(c).map_or(0, |c| c.args.len());
        if args.len() != expected {
            return Err(BackendError::NotFullyApplied(name));
        }
        let polymorphic = !i.type_vars.is_empty();
        let shape = self.shape(ind);
        if let Shape::Alias = shape {
            return self.term(args[0].0, args[0].1, sc, atom);
        }
        let mut parts = vec![];
        for (x, xa) in args {
            parts.push(self.term(x, xa, sc, true)?);
        }
        if let Shape::Record(fields) = shape {
            let fs: Vec<String> = fields
                .iter()
                .zip(&parts)
                .map(|(f, p)| format!("{f} = {p}"))
                .collect();
            return Ok(format!("{{ {} }}", fs.join("; ")));
        }
        Ok(match name.as_str() {
            "(,)" => format!("({})", parts.join(", ")),
            "::" if parts.len() == 2 => format!("({} :: {})", parts[0], parts[1]),
            _ if parts.is_empty() && polymorphic => {
                let ty = node.ty.clone().ok_or_else(|| {
                    BackendError::MissingAnnotation(format!(
                        "constructor `{name}` in {}",
                        self.owner
                    ))
                })?;
                format!("({name}: {})", self.ctor_annot_ty(&ty))
            }
            _ if parts.is_empty() => name,
            _ => {
                let s = format!("{name} ({})", parts.join(", "));
                if atom {
                    format!("({s})")
                } else {
                    s
                }
            }
        })
    }

    fn case(
        &mut self,
        ind: &Kername,
        discr: &BoxTerm,
        branches: &[(usize, BoxTerm)],
        a: &Annot,
        sc: &mut Scope,
    ) -> BackendResult<String> {
        let d = self.term(discr, child(a, 0), sc, false)?;
        match self.shape(ind) {
            Shape::Alias if branches.len() == 1 => {
                let (n, body) = &branches[0];
                let ba = child(a, 1);
                if let BoxTerm::Rel(_) = discr {
                    let (_, b) = self.branch(*n, body, ba, sc, Some(&d))?;
                    return Ok(b);
                }
                let (xs, b) = self.branch(*n, body, ba, sc, None)?;
                Ok(format!("let {} = {d} in\n{b}", xs.join(", ")))
            }
            Shape::Record(fields) if branches.len() == 1 => {
                let (n, body) = &branches[0];
                let (xs, b) = self.branch(*n, body, child(a, 1), sc, None)?;
                let (r, bind_r) = match discr {
                    BoxTerm::Rel(_) => (d.clone(), String::new()),
                    _ => {
                        let r = sc.fresh("r");
                        (r.clone(), format!("let {r} = {d} in\n"))
                    }
                };
                let lets: String = xs
                    .iter()
                    .zip(&fields)
                    .filter(|(x, _)| *x != "_")
                    .map(|(x, f)| format!("let {x} = {r}.{f} in\n"))
                    .collect();
                Ok(format!("{bind_r}{lets}{b}"))
            }
            _ if self.is_bool(ind) && branches.iter().all(|(n, _)| *n == 0) => {
                let t = self.term(&branches[0].1, child(a, 1), sc, true)?;
                let f = self.term(&branches[1].1, child(a, 2), sc, true)?;
                Ok(format!("if {d}\nthen {t}\nelse {f}"))
            }
            _ => {
                let mut arms = vec![];
                for (ci, (n, body)) in branches.iter().enumerate() {
                    let (xs, b) = self.branch(*n, body, child(a, ci + 1), sc, None)?;
                    let name = self.names.ctor(ind, ci);
                    let pat = match (name.as_str(), xs.len()) {
                        ("(,)", _) => format!("({})", xs.join(", ")),
                        ("::", 2) => format!("{} :: {}", xs[0], xs[1]),
                        (_, 0) => name,
                        _ if self.cfg.ml.dialect == MlDialect::Liquidity && xs.len() == 1 => {
                            format!("{name} {}", xs[0])
                        }
                        _ => format!("{name} ({})", xs.join(", ")),
                    };
                    arms.push(format!("{pat} ->\n{}", indent(&b, 4)));
                }
                Ok(format!("match {d} with\n  {}", arms.join("\n| ")))
            }
        }
    }

    /// Binders and body of a branch expecting `n` arguments. Missing lambdas
    /// are supplied by applying the body to fresh names.
    fn branch(
        &mut self,
        n: usize,
        body: &BoxTerm,
        a: &Annot,
        sc: &mut Scope,
        first: Option<&str>,
    ) -> BackendResult<(Vec<String>, String)> {
        let mark = sc.len();
        let mut xs = vec![];
        let (mut t, mut ta) = (body, a);
        while xs.len() < n {
            let BoxTerm::Lambda { name, body } = t else {
                break;
            };
            let x = match (xs.is_empty(), first) {
                (true, Some(f)) => f.to_string(),
                _ => bind(sc, name, body.occurs(0)),
            };
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
                format!("({s})")
            })
        } else {
            self.term(t, ta, sc, true)
        };
        sc.truncate(mark);
        Ok((xs, res?))
    }
}

/// Name for a binder; anonymous unused binders print as `_`.
fn bind(sc: &Scope, name: &str, used: bool) -> String {
    if (name == "_" || name.is_empty()) && !used {
        return "_".into();
    }
    let base = if name == "_" || name.is_empty() {
        "x"
    } else {
        name
    };
    sc.fresh(&ident(base, Case::Lower, Target::Ml))
}
