//! Canonical s-expression text for box types, λ□ terms and erased
//! environments. Writing then reading gives back the same value.

use std::fmt::Write;

use thiserror::Error;

use super::{BoxFixDef, BoxTerm};
use crate::ast::Kername;
use crate::erasure::{
    Annot, AnnotatedEnv, BoxType, ErasedConstant, ErasedCtor, ErasedDecl, ErasedEnv,
    ErasedInductive, TypeAlias, TypeVarInfo,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("s-expression error: {0}")]
pub struct SexpError(pub String);

type SResult<T> = Result<T, SexpError>;

// ---------------------------------------------------------------- writing

pub fn write_type(t: &BoxType) -> String {
    let mut s = String::new();
    wtype(&mut s, t);
    s
}

fn wtype(s: &mut String, t: &BoxType) {
    match t {
        BoxType::TBox => s.push_str("box"),
        BoxType::TAny => s.push_str("any"),
        BoxType::TVar(i) => write!(s, "(var {i})").unwrap(),
        BoxType::TInd(k) => write!(s, "(ind {k})").unwrap(),
        BoxType::TConst(k) => write!(s, "(const {k})").unwrap(),
        BoxType::TApp(a, b) | BoxType::TArr(a, b) => {
            s.push_str(if matches!(t, BoxType::TApp(..)) {
                "(app "
            } else {
                "(arr "
            });
            wtype(s, a);
            s.push(' ');
            wtype(s, b);
            s.push(')');
        }
    }
}

pub fn write_term(t: &BoxTerm) -> String {
    let mut s = String::new();
    wterm(&mut s, t);
    s
}

fn wterm(s: &mut String, t: &BoxTerm) {
    match t {
        BoxTerm::Box => s.push_str("box"),
        BoxTerm::Rel(i) => write!(s, "(rel {i})").unwrap(),
        BoxTerm::Const(k) => write!(s, "(const {k})").unwrap(),
        BoxTerm::Construct(k, i) => write!(s, "(construct {k} {i})").unwrap(),
        BoxTerm::Lambda { name, body } => {
            write!(s, "(lambda {name} ").unwrap();
            wterm(s, body);
            s.push(')');
        }
        BoxTerm::LetIn { name, value, body } => {
            write!(s, "(let {name} ").unwrap();
            wterm(s, value);
            s.push(' ');
            wterm(s, body);
            s.push(')');
        }
        BoxTerm::App(f, a) => {
            s.push_str("(app ");
            wterm(s, f);
            s.push(' ');
            wterm(s, a);
            s.push(')');
        }
        BoxTerm::Case {
            ind,
            discr,
            branches,
        } => {
            write!(s, "(case {ind} ").unwrap();
            wterm(s, discr);
            for (n, b) in branches {
                write!(s, " (branch {n} ").unwrap();
                wterm(s, b);
                s.push(')');
            }
            s.push(')');
        }
        BoxTerm::Fix { defs, struct_index } => {
            write!(s, "(fix {struct_index}").unwrap();
            for d in defs {
                write!(s, " (def {} ", d.name).unwrap();
                wterm(s, &d.body);
                s.push(')');
            }
            s.push(')');
        }
        BoxTerm::EmptyMatch { ind, discr } => {
            write!(s, "(empty-match {ind} ").unwrap();
            wterm(s, discr);
            s.push(')');
        }
    }
}

fn wnames(s: &mut String, names: &[String]) {
    s.push_str("(tvars");
    for n in names {
        s.push(' ');
        s.push_str(n);
    }
    s.push(')');
}

/// One declaration per line.
pub fn write_env(env: &ErasedEnv) -> String {
    let mut s = String::new();
    for d in env.decls() {
        match d {
            ErasedDecl::Constant(c) => {
                write!(s, "(constant {} ", c.name).unwrap();
                wnames(&mut s, &c.type_vars);
                s.push(' ');
                wtype(&mut s, &c.ty);
                s.push(' ');
                match &c.body {
                    Some(b) => wterm(&mut s, b),
                    None => s.push_str("axiom"),
                }
                s.push(')');
            }
            ErasedDecl::Inductive(i) => {
                write!(
                    s,
                    "(inductive {} (npars {}) (prop {}) (tvars",
                    i.name, i.npars, i.is_prop
                )
                .unwrap();
                for tv in &i.type_vars {
                    write!(s, " (tvar {} {} {})", tv.name, tv.is_logical, tv.is_arity).unwrap();
                }
                s.push(')');
                for c in &i.ctors {
                    write!(s, " (ctor {}", c.name).unwrap();
                    for (n, t) in &c.args {
                        write!(s, " (arg {n} ").unwrap();
                        wtype(&mut s, t);
                        s.push(')');
                    }
                    s.push(')');
                }
                s.push(')');
            }
            ErasedDecl::TypeAlias(a) => {
                write!(s, "(alias {} ", a.name).unwrap();
                wnames(&mut s, &a.type_vars);
                s.push(' ');
                wtype(&mut s, &a.ty);
                s.push(')');
            }
        }
        s.push('\n');
    }
    s
}

fn wannot(s: &mut String, a: &Annot) {
    s.push_str("(a ");
    match &a.ty {
        Some(t) => wtype(s, t),
        None => s.push('_'),
    }
    for c in &a.children {
        s.push(' ');
        wannot(s, c);
    }
    s.push(')');
}

/// The environment followed by one `annot` form per annotated constant, in
/// declaration order.
pub fn write_env_annotated(env: &ErasedEnv, annots: &AnnotatedEnv) -> String {
    let mut s = write_env(env);
    for d in env.decls() {
        if let Some(a) = annots.get(d.name()) {
            write!(s, "(annot {} ", d.name()).unwrap();
            wannot(&mut s, a);
            s.push_str(")\n");
        }
    }
    s
}

// ---------------------------------------------------------------- reading

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn read_all(text: &str) -> SResult<Vec<Sexp>> {
    let mut stack: Vec<Vec<Sexp>> = vec![vec![]];
    let mut atom = String::new();
    let flush = |atom: &mut String, stack: &mut Vec<Vec<Sexp>>| {
        if !atom.is_empty() {
            stack
                .last_mut()
                .expect("stack")
                .push(Sexp::Atom(std::mem::take(atom)));
        }
    };
    for ch in text.chars() {
        match ch {
            '(' => {
                flush(&mut atom, &mut stack);
                stack.push(vec![]);
            }
            ')' => {
                flush(&mut atom, &mut stack);
                let items = stack.pop().expect("stack");
                match stack.last_mut() {
                    Some(parent) => parent.push(Sexp::List(items)),
                    None => return Err(SexpError("unbalanced `)`".into())),
                }
            }
            c if c.is_whitespace() => flush(&mut atom, &mut stack),
            c => atom.push(c),
        }
    }
    flush(&mut atom, &mut stack);
    if stack.len() != 1 {
        return Err(SexpError("unbalanced `(`".into()));
    }
    Ok(stack.pop().expect("stack"))
}

fn read_one(text: &str) -> SResult<Sexp> {
    let mut all = read_all(text)?;
    if all.len() != 1 {
        return Err(SexpError(format!(
            "expected one expression, found {}",
            all.len()
        )));
    }
    Ok(all.pop().expect("one"))
}

fn atom(e: &Sexp) -> SResult<&str> {
    match e {
        Sexp::Atom(a) => Ok(a),
        Sexp::List(_) => Err(SexpError("expected an atom".into())),
    }
}

fn list(e: &Sexp) -> SResult<(&str, &[Sexp])> {
    match e {
        Sexp::List(items) if !items.is_empty() => Ok((atom(&items[0])?, &items[1..])),
        _ => Err(SexpError(format!("expected a tagged list, found {e:?}"))),
    }
}

fn arity<'a>(tag: &str, args: &'a [Sexp], n: usize) -> SResult<&'a [Sexp]> {
    if args.len() == n {
        Ok(args)
    } else {
        Err(SexpError(format!(
            "`{tag}` takes {n} arguments, found {}",
            args.len()
        )))
    }
}

fn kn(e: &Sexp) -> SResult<Kername> {
    atom(e)?
        .parse()
        .map_err(|e: crate::ast::KernameError| SexpError(e.to_string()))
}

fn num(e: &Sexp) -> SResult<usize> {
    let a = atom(e)?;
    a.parse()
        .map_err(|_| SexpError(format!("expected a number, found `{a}`")))
}

fn boolean(e: &Sexp) -> SResult<bool> {
    match atom(e)? {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(SexpError(format!("expected a boolean, found `{other}`"))),
    }
}

fn to_type(e: &Sexp) -> SResult<BoxType> {
    if let Sexp::Atom(a) = e {
        return match a.as_str() {
            "box" => Ok(BoxType::TBox),
            "any" => Ok(BoxType::TAny),
            other => Err(SexpError(format!("unknown type atom `{other}`"))),
        };
    }
    let (tag, args) = list(e)?;
    match tag {
        "var" => Ok(BoxType::TVar(num(&arity(tag, args, 1)?[0])?)),
        "ind" => Ok(BoxType::TInd(kn(&arity(tag, args, 1)?[0])?)),
        "const" => Ok(BoxType::TConst(kn(&arity(tag, args, 1)?[0])?)),
        "app" => {
            let a = arity(tag, args, 2)?;
            Ok(BoxType::app(to_type(&a[0])?, to_type(&a[1])?))
        }
        "arr" => {
            let a = arity(tag, args, 2)?;
            Ok(BoxType::arr(to_type(&a[0])?, to_type(&a[1])?))
        }
        other => Err(SexpError(format!("unknown type form `{other}`"))),
    }
}

fn to_term(e: &Sexp) -> SResult<BoxTerm> {
    if let Sexp::Atom(a) = e {
        return match a.as_str() {
            "box" => Ok(BoxTerm::Box),
            other => Err(SexpError(format!("unknown term atom `{other}`"))),
        };
    }
    let (tag, args) = list(e)?;
    match tag {
        "rel" => Ok(BoxTerm::Rel(num(&arity(tag, args, 1)?[0])?)),
        "const" => Ok(BoxTerm::Const(kn(&arity(tag, args, 1)?[0])?)),
        "construct" => {
            let a = arity(tag, args, 2)?;
            Ok(BoxTerm::Construct(kn(&a[0])?, num(&a[1])?))
        }
        "lambda" => {
            let a = arity(tag, args, 2)?;
            Ok(BoxTerm::lam(atom(&a[0])?, to_term(&a[1])?))
        }
        "let" => {
            let a = arity(tag, args, 3)?;
            Ok(BoxTerm::LetIn {
                name: atom(&a[0])?.to_string(),
                value: Box::new(to_term(&a[1])?),
                body: Box::new(to_term(&a[2])?),
            })
        }
        "app" => {
            let a = arity(tag, args, 2)?;
            Ok(BoxTerm::app(to_term(&a[0])?, to_term(&a[1])?))
        }
        "case" => {
            if args.len() < 2 {
                return Err(SexpError(
                    "`case` needs an inductive and a scrutinee".into(),
                ));
            }
            let branches = args[2..]
                .iter()
                .map(|b| {
                    let (t, ba) = list(b)?;
                    if t != "branch" {
                        return Err(SexpError(format!("expected `branch`, found `{t}`")));
                    }
                    let ba = arity(t, ba, 2)?;
                    Ok((num(&ba[0])?, to_term(&ba[1])?))
                })
                .collect::<SResult<Vec<_>>>()?;
            Ok(BoxTerm::Case {
                ind: kn(&args[0])?,
                discr: Box::new(to_term(&args[1])?),
                branches,
            })
        }
        "fix" => {
            if args.is_empty() {
                return Err(SexpError("`fix` needs a recursive argument index".into()));
            }
            let defs = args[1..]
                .iter()
                .map(|d| {
                    let (t, da) = list(d)?;
                    if t != "def" {
                        return Err(SexpError(format!("expected `def`, found `{t}`")));
                    }
                    let da = arity(t, da, 2)?;
                    Ok(BoxFixDef {
                        name: atom(&da[0])?.to_string(),
                        body: to_term(&da[1])?,
                    })
                })
                .collect::<SResult<Vec<_>>>()?;
            Ok(BoxTerm::Fix {
                defs,
                struct_index: num(&args[0])?,
            })
        }
        "empty-match" => {
            let a = arity(tag, args, 2)?;
            Ok(BoxTerm::EmptyMatch {
                ind: kn(&a[0])?,
                discr: Box::new(to_term(&a[1])?),
            })
        }
        other => Err(SexpError(format!("unknown term form `{other}`"))),
    }
}

fn to_names(e: &Sexp) -> SResult<Vec<String>> {
    let (tag, args) = list(e)?;
    if tag != "tvars" {
        return Err(SexpError(format!("expected `tvars`, found `{tag}`")));
    }
    args.iter().map(|a| atom(a).map(str::to_string)).collect()
}

fn field<'a>(e: &'a Sexp, want: &str) -> SResult<&'a [Sexp]> {
    let (tag, args) = list(e)?;
    if tag != want {
        return Err(SexpError(format!("expected `{want}`, found `{tag}`")));
    }
    Ok(args)
}

fn to_decl(e: &Sexp) -> SResult<ErasedDecl> {
    let (tag, args) = list(e)?;
    match tag {
        "constant" => {
            let a = arity(tag, args, 4)?;
            let body = match &a[3] {
                Sexp::Atom(x) if x == "axiom" => None,
                b => Some(to_term(b)?),
            };
            Ok(ErasedDecl::Constant(ErasedConstant {
                name: kn(&a[0])?,
                type_vars: to_names(&a[1])?,
                ty: to_type(&a[2])?,
                body,
            }))
        }
        "alias" => {
            let a = arity(tag, args, 3)?;
            Ok(ErasedDecl::TypeAlias(TypeAlias {
                name: kn(&a[0])?,
                type_vars: to_names(&a[1])?,
                ty: to_type(&a[2])?,
            }))
        }
        "inductive" => {
            if args.len() < 4 {
                return Err(SexpError("`inductive` is missing fields".into()));
            }
            let npars = num(&arity("npars", field(&args[1], "npars")?, 1)?[0])?;
            let is_prop = boolean(&arity("prop", field(&args[2], "prop")?, 1)?[0])?;
            let type_vars = field(&args[3], "tvars")?
                .iter()
                .map(|tv| {
                    let f = arity("tvar", field(tv, "tvar")?, 3)?;
                    Ok(TypeVarInfo {
                        name: atom(&f[0])?.to_string(),
                        is_logical: boolean(&f[1])?,
                        is_arity: boolean(&f[2])?,
                    })
                })
                .collect::<SResult<Vec<_>>>()?;
            let ctors = args[4..]
                .iter()
                .map(|c| {
                    let f = field(c, "ctor")?;
                    if f.is_empty() {
                        return Err(SexpError("`ctor` needs a name".into()));
                    }
                    let cargs = f[1..]
                        .iter()
                        .map(|a| {
                            let fa = arity("arg", field(a, "arg")?, 2)?;
                            Ok((atom(&fa[0])?.to_string(), to_type(&fa[1])?))
                        })
                        .collect::<SResult<Vec<_>>>()?;
                    Ok(ErasedCtor {
                        name: atom(&f[0])?.to_string(),
                        args: cargs,
                    })
                })
                .collect::<SResult<Vec<_>>>()?;
            Ok(ErasedDecl::Inductive(ErasedInductive {
                name: kn(&args[0])?,
                type_vars,
                npars,
                is_prop,
                ctors,
            }))
        }
        other => Err(SexpError(format!("unknown declaration form `{other}`"))),
    }
}

pub fn parse_type(text: &str) -> SResult<BoxType> {
    to_type(&read_one(text)?)
}

pub fn parse_term(text: &str) -> SResult<BoxTerm> {
    to_term(&read_one(text)?)
}

fn to_annot(e: &Sexp) -> SResult<Annot> {
    let f = field(e, "a")?;
    if f.is_empty() {
        return Err(SexpError("`a` needs a type or `_`".into()));
    }
    let ty = match &f[0] {
        Sexp::Atom(x) if x == "_" => None,
        t => Some(to_type(t)?),
    };
    let children = f[1..].iter().map(to_annot).collect::<SResult<Vec<_>>>()?;
    Ok(Annot { ty, children })
}

/// Read declarations and `annot` forms.
pub fn parse_env_annotated(text: &str) -> SResult<(ErasedEnv, AnnotatedEnv)> {
    let mut decls = vec![];
    let mut annots = AnnotatedEnv::default();
    for e in read_all(text)? {
        if let Ok(("annot", args)) = list(&e) {
            let a = arity("annot", args, 2)?;
            annots.bodies.insert(kn(&a[0])?, to_annot(&a[1])?);
        } else {
            decls.push(to_decl(&e)?);
        }
    }
    Ok((ErasedEnv::from_decls(decls), annots))
}

/// Read declarations; `annot` forms are skipped.
pub fn parse_env(text: &str) -> SResult<ErasedEnv> {
    parse_env_annotated(text).map(|(env, _)| env)
}
