//! Identifier rules per target and collision-free renaming.

use std::collections::{BTreeMap, HashSet};

use boxtract_core::ast::Kername;
use boxtract_core::erasure::{ErasedDecl, ErasedEnv};

use crate::remap::RemapTable;
use crate::Target;

const ML_KEYWORDS: &[&str] = &[
    "and",
    "as",
    "assert",
    "begin",
    "class",
    "constraint",
    "do",
    "done",
    "downto",
    "else",
    "end",
    "exception",
    "external",
    "false",
    "for",
    "fun",
    "function",
    "functor",
    "if",
    "in",
    "include",
    "inherit",
    "initializer",
    "land",
    "lazy",
    "let",
    "lor",
    "lsl",
    "lsr",
    "lxor",
    "match",
    "method",
    "mod",
    "module",
    "mutable",
    "new",
    "nonrec",
    "object",
    "of",
    "open",
    "or",
    "private",
    "rec",
    "sig",
    "struct",
    "then",
    "to",
    "true",
    "try",
    "type",
    "val",
    "virtual",
    "when",
    "while",
    "with",
    "failwith",
];

const ELM_KEYWORDS: &[&str] = &[
    "if",
    "then",
    "else",
    "case",
    "of",
    "let",
    "in",
    "type",
    "module",
    "where",
    "import",
    "exposing",
    "as",
    "port",
    "alias",
    "infix",
    "effect",
    "command",
    "subscription",
    "false_rec",
];

const RUST_KEYWORDS: &[&str] = &[
    "as",
    "async",
    "await",
    "break",
    "const",
    "continue",
    "crate",
    "dyn",
    "else",
    "enum",
    "extern",
    "false",
    "fn",
    "for",
    "if",
    "impl",
    "in",
    "let",
    "loop",
    "match",
    "mod",
    "move",
    "mut",
    "pub",
    "ref",
    "return",
    "self",
    "Self",
    "static",
    "struct",
    "super",
    "trait",
    "true",
    "type",
    "unsafe",
    "use",
    "where",
    "while",
    "abstract",
    "become",
    "box",
    "do",
    "final",
    "macro",
    "override",
    "priv",
    "typeof",
    "unsized",
    "virtual",
    "yield",
    "try",
    "union",
    "Program",
    "PhantomData",
    "hint_app",
    "alloc",
    "closure",
    "new",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Case {
    Lower,
    Upper,
    Keep,
}

fn keywords(target: Target) -> &'static [&'static str] {
    match target {
        Target::Ml => ML_KEYWORDS,
        Target::Elm => ELM_KEYWORDS,
        Target::Rust => RUST_KEYWORDS,
    }
}

pub(crate) fn is_keyword(target: Target, s: &str) -> bool {
    keywords(target).contains(&s)
}

/// A valid identifier for `target` derived from `raw`.
pub(crate) fn ident(raw: &str, case: Case, target: Target) -> String {
    let mut s: String = raw
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() || s == "_" {
        s = "x".into();
    }
    if s.starts_with(|c: char| c.is_ascii_digit()) {
        s.insert(0, 'x');
    }
    let mut chars = s.chars();
    let first = chars.next().unwrap();
    let rest: String = chars.collect();
    s = match case {
        Case::Lower => format!("{}{rest}", first.to_ascii_lowercase()),
        Case::Upper => format!("{}{rest}", first.to_ascii_uppercase()),
        Case::Keep => s,
    };
    if s.starts_with('_') && case == Case::Upper {
        s.insert(0, 'U');
    }
    if is_keyword(target, &s) {
        s.push('_');
    }
    s
}

/// First of `base`, `base2`, `base3`, ... not rejected by `taken`.
pub(crate) fn suffixed(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (2..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !taken(c))
        .unwrap()
}

/// Target names for the global declarations of an environment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Renaming {
    pub types: BTreeMap<Kername, String>,
    pub values: BTreeMap<Kername, String>,
    pub ctors: BTreeMap<(Kername, usize), String>,
}

impl Renaming {
    pub fn ty(&self, k: &Kername) -> String {
        self.types
            .get(k)
            .cloned()
            .unwrap_or_else(|| k.short().to_string())
    }

    pub fn value(&self, k: &Kername) -> String {
        self.values
            .get(k)
            .cloned()
            .unwrap_or_else(|| k.short().to_string())
    }

    pub fn ctor(&self, k: &Kername, c: usize) -> String {
        self.ctors
            .get(&(k.clone(), c))
            .cloned()
            .unwrap_or_else(|| format!("C{c}"))
    }
}

/// Prefixes for generated ML names, as used by contract extraction.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Prefix {
    pub value: &'static str,
    pub ctor: &'static str,
}

pub fn sanitize_names(env: &ErasedEnv, target: Target) -> Renaming {
    sanitize_with(env, target, None, &RemapTable::default())
}

pub(crate) fn sanitize_with(
    env: &ErasedEnv,
    target: Target,
    prefix: Option<Prefix>,
    remap: &RemapTable,
) -> Renaming {
    let (type_case, value_case, ctor_case) = match target {
        Target::Ml => (Case::Lower, Case::Lower, Case::Upper),
        Target::Elm => (Case::Upper, Case::Lower, Case::Upper),
        Target::Rust => (Case::Keep, Case::Keep, Case::Keep),
    };
    let mut r = Renaming::default();
    let mut types: HashSet<String> = HashSet::new();
    let mut values: HashSet<String> = HashSet::new();
    // Constructors share one namespace except in Rust, where each enum scopes its own.
    let mut ctors: HashSet<String> = HashSet::new();
    // Remapped names are fixed; register them first so nothing collides with them.
    for d in env.decls() {
        let k = d.name();
        if let Some(ir) = remap.inductive(k) {
            r.types.insert(k.clone(), ir.name.clone());
            types.insert(ir.name.clone());
            for (i, c) in ir.ctors.iter().enumerate() {
                r.ctors.insert((k.clone(), i), c.clone());
                if target != Target::Rust {
                    ctors.insert(c.clone());
                }
            }
        } else if let Some(text) = remap.constant(k) {
            match d {
                ErasedDecl::Constant(_) => {
                    r.values.insert(k.clone(), text.to_string());
                }
                _ => {
                    r.types.insert(k.clone(), text.to_string());
                    types.insert(text.to_string());
                }
            }
        }
    }
    let pick = |set: &mut HashSet<String>, base: String| {
        let name = suffixed(&base, |c| set.contains(c));
        set.insert(name.clone());
        name
    };
    for d in env.decls() {
        let k = d.name();
        if remap.inductive(k).is_some() || remap.constant(k).is_some() {
            continue;
        }
        let short = k.short();
        match d {
            ErasedDecl::Constant(_) => {
                let base = match prefix {
                    Some(p) => format!("{}{}", p.value, ident(short, Case::Keep, target)),
                    None => ident(short, value_case, target),
                };
                let n = pick(&mut values, base);
                r.values.insert(k.clone(), n);
            }
            ErasedDecl::TypeAlias(_) => {
                let base = match prefix {
                    Some(p) => format!("{}{}", p.value, ident(short, Case::Keep, target)),
                    None => ident(short, type_case, target),
                };
                let n = pick(&mut types, base);
                r.types.insert(k.clone(), n);
            }
            ErasedDecl::Inductive(i) => {
                let base = match prefix {
                    Some(p) => format!("{}{}", p.value, ident(short, Case::Keep, target)),
                    None => ident(short, type_case, target),
                };
                let n = pick(&mut types, base);
                r.types.insert(k.clone(), n);
                let mut local: HashSet<String> = HashSet::new();
                for (ci, c) in i.ctors.iter().enumerate() {
                    let base = match prefix {
                        Some(p) => format!("{}{}", p.ctor, ident(&c.name, Case::Upper, target)),
                        None => ident(&c.name, ctor_case, target),
                    };
                    let set = if target == Target::Rust {
                        &mut local
                    } else {
                        &mut ctors
                    };
                    let n = pick(set, base);
                    r.ctors.insert((k.clone(), ci), n);
                }
            }
        }
    }
    r
}

/// Local binder names in scope, innermost last.
#[derive(Clone, Debug, Default)]
pub(crate) struct Scope {
    names: Vec<String>,
    /// Names no binder may take, such as top-level functions in Elm.
    reserved: HashSet<String>,
}

impl Scope {
    pub fn new(reserved: HashSet<String>) -> Scope {
        Scope {
            names: vec![],
            reserved,
        }
    }

    pub fn fresh(&self, base: &str) -> String {
        suffixed(base, |c| {
            self.reserved.contains(c) || self.names.iter().any(|n| n == c)
        })
    }

    /// Keep `name` from being chosen until [`Scope::release`].
    pub fn reserve(&mut self, name: &str) -> bool {
        self.reserved.insert(name.to_string())
    }

    pub fn release(&mut self, name: &str) {
        self.reserved.remove(name);
    }

    pub fn push(&mut self, name: String) {
        self.names.push(name);
    }

    pub fn pop(&mut self) {
        self.names.pop();
    }

    pub fn truncate(&mut self, n: usize) {
        self.names.truncate(n);
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Name of de Bruijn index `i`.
    pub fn get(&self, i: usize) -> Option<&str> {
        self.names.iter().rev().nth(i).map(String::as_str)
    }
}
