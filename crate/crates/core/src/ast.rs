//! Core calculus: terms, declarations and the global environment.
//!
//! Variables are de Bruijn indices; binder names are kept only as printing
//! hints. Inductive types are referred to by kernel name, constructors by
//! (inductive, index).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Binder name. `_` marks an anonymous binder.
pub type Name = String;

pub const ANON: &str = "_";

/// Fully qualified name made of dot-separated segments, e.g. `Top.nat`.
/// Segments are shared, so cloning is cheap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Kername {
    segments: Arc<[String]>,
}

impl Kername {
    pub fn new<I, S>(segments: I) -> Kername
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let segments: Vec<String> = segments.into_iter().map(Into::into).collect();
        assert!(!segments.is_empty(), "kername needs at least one segment");
        Kername {
            segments: segments.into(),
        }
    }

    /// Name `short` inside the module path `module`.
    pub fn qualified(module: &[String], short: &str) -> Kername {
        let mut segments = module.to_vec();
        segments.push(short.to_string());
        Kername {
            segments: segments.into(),
        }
    }

    pub fn segments(&self) -> &[String] {
        &self.segments
    }

    /// Last segment.
    pub fn short(&self) -> &str {
        self.segments.last().expect("non-empty")
    }

    /// All segments but the last.
    pub fn module(&self) -> &[String] {
        &self.segments[..self.segments.len() - 1]
    }
}

impl fmt::Display for Kername {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.segments.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid kernel name `{0}`")]
pub struct KernameError(pub String);

impl FromStr for Kername {
    type Err = KernameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let segments: Vec<String> = s.split('.').map(str::to_string).collect();
        if segments.iter().any(|seg| seg.is_empty()) {
            return Err(KernameError(s.to_string()));
        }
        Ok(Kername {
            segments: segments.into(),
        })
    }
}

/// Sorts. `Prop` is impredicative; `Type(i) : Type(i+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Prop,
    Type(u32),
}

impl Sort {
    /// Sort of this sort.
    pub fn succ(self) -> Sort {
        match self {
            Sort::Prop => Sort::Type(0),
            Sort::Type(l) => Sort::Type(l + 1),
        }
    }

    /// Cumulativity: `Prop <= Type(i)` and `Type(i) <= Type(j)` for `i <= j`.
    pub fn leq(self, other: Sort) -> bool {
        match (self, other) {
            (Sort::Prop, _) => true,
            (Sort::Type(_), Sort::Prop) => false,
            (Sort::Type(i), Sort::Type(j)) => i <= j,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Sort(Sort),
    Rel(usize),
    Lambda {
        name: Name,
        ty: Box<Term>,
        body: Box<Term>,
    },
    Product {
        name: Name,
        dom: Box<Term>,
        cod: Box<Term>,
    },
    LetIn {
        name: Name,
        value: Box<Term>,
        ty: Box<Term>,
        body: Box<Term>,
    },
    App(Box<Term>, Box<Term>),
    Const(Kername),
    Ind(Kername),
    Construct(Kername, usize),
    /// `motive` abstracts over the indices and the scrutinee. Each branch body
    /// is applied to the constructor's non-parameter arguments.
    Case {
        ind: Kername,
        discr: Box<Term>,
        motive: Box<Term>,
        branches: Vec<Branch>,
    },
    /// Bodies see the definitions as `Rel 0 .. Rel (n-1)`. The term denotes
    /// the first definition; `struct_index` is its recursive argument.
    Fix {
        defs: Vec<FixDef>,
        struct_index: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Branch {
    /// Number of constructor arguments the branch binds.
    pub arity: usize,
    pub body: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixDef {
    pub name: Name,
    pub ty: Term,
    pub body: Term,
}

impl Term {
    pub fn prop() -> Term {
        Term::Sort(Sort::Prop)
    }

    pub fn type_(level: u32) -> Term {
        Term::Sort(Sort::Type(level))
    }

    pub fn rel(i: usize) -> Term {
        Term::Rel(i)
    }

    pub fn lam(name: impl Into<Name>, ty: Term, body: Term) -> Term {
        Term::Lambda {
            name: name.into(),
            ty: Box::new(ty),
            body: Box::new(body),
        }
    }

    pub fn pi(name: impl Into<Name>, dom: Term, cod: Term) -> Term {
        Term::Product {
            name: name.into(),
            dom: Box::new(dom),
            cod: Box::new(cod),
        }
    }

    /// Non-dependent product; `cod` is given in the outer context.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::pi(ANON, dom, lift(&cod, 1, 0))
    }

    pub fn let_in(name: impl Into<Name>, value: Term, ty: Term, body: Term) -> Term {
        Term::LetIn {
            name: name.into(),
            value: Box::new(value),
            ty: Box::new(ty),
            body: Box::new(body),
        }
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn konst(name: &Kername) -> Term {
        Term::Const(name.clone())
    }

    pub fn ind(name: &Kername) -> Term {
        Term::Ind(name.clone())
    }

    pub fn ctor(name: &Kername, k: usize) -> Term {
        Term::Construct(name.clone(), k)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Sort(_) | Term::Rel(_) | Term::Const(_) | Term::Ind(_) | Term::Construct(..) => 1,
            Term::Lambda { ty, body, .. } => 1 + ty.size() + body.size(),
            Term::Product { dom, cod, .. } => 1 + dom.size() + cod.size(),
            Term::LetIn {
                value, ty, body, ..
            } => 1 + value.size() + ty.size() + body.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Case {
                discr,
                motive,
                branches,
                ..
            } => {
                1 + discr.size()
                    + motive.size()
                    + branches.iter().map(|b| b.body.size()).sum::<usize>()
            }
            Term::Fix { defs, .. } => {
                1 + defs
                    .iter()
                    .map(|d| d.ty.size() + d.body.size())
                    .sum::<usize>()
            }
        }
    }
}

/// Rebuild `t`, replacing each variable `Rel i` seen under `depth` binders by
/// `f(i, depth)`.
fn map_rels(t: &Term, depth: usize, f: &impl Fn(usize, usize) -> Term) -> Term {
    match t {
        Term::Rel(i) => f(*i, depth),
        Term::Sort(_) | Term::Const(_) | Term::Ind(_) | Term::Construct(..) => t.clone(),
        Term::Lambda { name, ty, body } => Term::Lambda {
            name: name.clone(),
            ty: Box::new(map_rels(ty, depth, f)),
            body: Box::new(map_rels(body, depth + 1, f)),
        },
        Term::Product { name, dom, cod } => Term::Product {
            name: name.clone(),
            dom: Box::new(map_rels(dom, depth, f)),
            cod: Box::new(map_rels(cod, depth + 1, f)),
        },
        Term::LetIn {
            name,
            value,
            ty,
            body,
        } => Term::LetIn {
            name: name.clone(),
            value: Box::new(map_rels(value, depth, f)),
            ty: Box::new(map_rels(ty, depth, f)),
            body: Box::new(map_rels(body, depth + 1, f)),
        },
        Term::App(g, a) => Term::App(
            Box::new(map_rels(g, depth, f)),
            Box::new(map_rels(a, depth, f)),
        ),
        Term::Case {
            ind,
            discr,
            motive,
            branches,
        } => Term::Case {
            ind: ind.clone(),
            discr: Box::new(map_rels(discr, depth, f)),
            motive: Box::new(map_rels(motive, depth, f)),
            branches: branches
                .iter()
                .map(|b| Branch {
                    arity: b.arity,
                    body: map_rels(&b.body, depth, f),
                })
                .collect(),
        },
        Term::Fix { defs, struct_index } => {
            let n = defs.len();
            Term::Fix {
                defs: defs
                    .iter()
                    .map(|d| FixDef {
                        name: d.name.clone(),
                        ty: map_rels(&d.ty, depth, f),
                        body: map_rels(&d.body, depth + n, f),
                    })
                    .collect(),
                struct_index: *struct_index,
            }
        }
    }
}

/// Add `amount` to every free variable with index `>= cutoff`.
pub fn lift(t: &Term, amount: usize, cutoff: usize) -> Term {
    if amount == 0 {
        return t.clone();
    }
    map_rels(t, cutoff, &|i, depth| {
        if i >= depth {
            Term::Rel(i + amount)
        } else {
            Term::Rel(i)
        }
    })
}

/// Replace `Rel index` by `value` and close the gap left by the removed
/// binder. `value` lives in the context outside the `index` inner binders
/// and is lifted over them.
pub fn subst(t: &Term, index: usize, value: &Term) -> Term {
    map_rels(t, index, &|i, depth| match i.cmp(&depth) {
        std::cmp::Ordering::Less => Term::Rel(i),
        std::cmp::Ordering::Equal => lift(value, depth, 0),
        std::cmp::Ordering::Greater => Term::Rel(i - 1),
    })
}

/// Simultaneous substitution: `Rel (k + i)` becomes `values[i]` (lifted by
/// `k`), variables above the block move down by `values.len()`.
pub fn subst_many(t: &Term, values: &[Term], k: usize) -> Term {
    let n = values.len();
    if n == 0 {
        return t.clone();
    }
    map_rels(t, k, &|i, depth| {
        if i < depth {
            Term::Rel(i)
        } else if i - depth < n {
            lift(&values[i - depth], depth, 0)
        } else {
            Term::Rel(i - n)
        }
    })
}

/// Instantiate the outermost `values.len()` binders of a telescope with
/// `values` given outermost-first.
pub fn instantiate(t: &Term, values_outermost_first: &[Term], k: usize) -> Term {
    let rev: Vec<Term> = values_outermost_first.iter().rev().cloned().collect();
    subst_many(t, &rev, k)
}

/// Split an application spine into its head and arguments.
pub fn decompose_app(t: &Term) -> (&Term, Vec<&Term>) {
    let mut args = Vec::new();
    let mut head = t;
    while let Term::App(f, a) = head {
        args.push(a.as_ref());
        head = f;
    }
    args.reverse();
    (head, args)
}

/// Owned variant of [`decompose_app`].
pub fn decompose_app_owned(t: Term) -> (Term, Vec<Term>) {
    let mut args = Vec::new();
    let mut head = t;
    while let Term::App(f, a) = head {
        args.push(*a);
        head = *f;
    }
    args.reverse();
    (head, args)
}

pub fn mk_app(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
    args.into_iter().fold(head, Term::app)
}

/// Does `Rel index` occur free in `t`?
pub fn occurs(t: &Term, index: usize) -> bool {
    fn go(t: &Term, k: usize) -> bool {
        match t {
            Term::Rel(i) => *i == k,
            Term::Sort(_) | Term::Const(_) | Term::Ind(_) | Term::Construct(..) => false,
            Term::Lambda { ty, body, .. } => go(ty, k) || go(body, k + 1),
            Term::Product { dom, cod, .. } => go(dom, k) || go(cod, k + 1),
            Term::LetIn {
                value, ty, body, ..
            } => go(value, k) || go(ty, k) || go(body, k + 1),
            Term::App(f, a) => go(f, k) || go(a, k),
            Term::Case {
                discr,
                motive,
                branches,
                ..
            } => go(discr, k) || go(motive, k) || branches.iter().any(|b| go(&b.body, k)),
            Term::Fix { defs, .. } => {
                let n = defs.len();
                defs.iter().any(|d| go(&d.ty, k) || go(&d.body, k + n))
            }
        }
    }
    go(t, index)
}

/// True when every free variable of `t` is below `n`.
pub fn closed_under(t: &Term, n: usize) -> bool {
    fn go(t: &Term, n: usize) -> bool {
        match t {
            Term::Rel(i) => *i < n,
            Term::Sort(_) | Term::Const(_) | Term::Ind(_) | Term::Construct(..) => true,
            Term::Lambda { ty, body, .. } => go(ty, n) && go(body, n + 1),
            Term::Product { dom, cod, .. } => go(dom, n) && go(cod, n + 1),
            Term::LetIn {
                value, ty, body, ..
            } => go(value, n) && go(ty, n) && go(body, n + 1),
            Term::App(f, a) => go(f, n) && go(a, n),
            Term::Case {
                discr,
                motive,
                branches,
                ..
            } => go(discr, n) && go(motive, n) && branches.iter().all(|b| go(&b.body, n)),
            Term::Fix { defs, .. } => {
                let k = defs.len();
                defs.iter().all(|d| go(&d.ty, n) && go(&d.body, n + k))
            }
        }
    }
    go(t, n)
}

/// Equality up to binder names.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Sort(x), Term::Sort(y)) => x == y,
        (Term::Rel(x), Term::Rel(y)) => x == y,
        (Term::Const(x), Term::Const(y)) | (Term::Ind(x), Term::Ind(y)) => x == y,
        (Term::Construct(x, i), Term::Construct(y, j)) => x == y && i == j,
        (
            Term::Lambda {
                ty: t1, body: b1, ..
            },
            Term::Lambda {
                ty: t2, body: b2, ..
            },
        ) => alpha_eq(t1, t2) && alpha_eq(b1, b2),
        (
            Term::Product {
                dom: d1, cod: c1, ..
            },
            Term::Product {
                dom: d2, cod: c2, ..
            },
        ) => alpha_eq(d1, d2) && alpha_eq(c1, c2),
        (
            Term::LetIn {
                value: v1,
                ty: t1,
                body: b1,
                ..
            },
            Term::LetIn {
                value: v2,
                ty: t2,
                body: b2,
                ..
            },
        ) => alpha_eq(v1, v2) && alpha_eq(t1, t2) && alpha_eq(b1, b2),
        (Term::App(f1, a1), Term::App(f2, a2)) => alpha_eq(f1, f2) && alpha_eq(a1, a2),
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
            i1 == i2
                && alpha_eq(d1, d2)
                && alpha_eq(m1, m2)
                && bs1.len() == bs2.len()
                && bs1
                    .iter()
                    .zip(bs2)
                    .all(|(x, y)| x.arity == y.arity && alpha_eq(&x.body, &y.body))
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
            s1 == s2
                && ds1.len() == ds2.len()
                && ds1
                    .iter()
                    .zip(ds2)
                    .all(|(x, y)| alpha_eq(&x.ty, &y.ty) && alpha_eq(&x.body, &y.body))
        }
        _ => false,
    }
}

/// Peel leading lambdas: binders outermost-first and the remaining body.
pub fn decompose_lambdas(t: &Term) -> (Vec<(Name, Term)>, &Term) {
    let mut binders = Vec::new();
    let mut cur = t;
    while let Term::Lambda { name, ty, body } = cur {
        binders.push((name.clone(), (**ty).clone()));
        cur = body;
    }
    (binders, cur)
}

/// Peel leading products.
pub fn decompose_products(t: &Term) -> (Vec<(Name, Term)>, &Term) {
    let mut binders = Vec::new();
    let mut cur = t;
    while let Term::Product { name, dom, cod } = cur {
        binders.push((name.clone(), (**dom).clone()));
        cur = cod;
    }
    (binders, cur)
}

pub fn mk_lambdas(binders: &[(Name, Term)], body: Term) -> Term {
    binders
        .iter()
        .rev()
        .fold(body, |acc, (n, ty)| Term::lam(n.clone(), ty.clone(), acc))
}

pub fn mk_products(binders: &[(Name, Term)], body: Term) -> Term {
    binders
        .iter()
        .rev()
        .fold(body, |acc, (n, ty)| Term::pi(n.clone(), ty.clone(), acc))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantDecl {
    pub name: Kername,
    pub ty: Term,
    /// `None` for axioms.
    pub body: Option<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtorDecl {
    pub name: String,
    /// Argument telescope, in the context of the parameters.
    pub args: Vec<(Name, Term)>,
    /// Indices of the result type, in the context of parameters and arguments.
    pub indices: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductiveDecl {
    pub name: Kername,
    pub params: Vec<(Name, Term)>,
    /// Type of the family once parameters are applied: `forall indices, sort`.
    pub arity: Term,
    pub ctors: Vec<CtorDecl>,
}

impl InductiveDecl {
    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    /// `forall params, arity`
    pub fn full_type(&self) -> Term {
        mk_products(&self.params, self.arity.clone())
    }

    /// `forall params args, I params indices`
    pub fn ctor_type(&self, k: usize) -> Term {
        let c = &self.ctors[k];
        let np = self.params.len();
        let na = c.args.len();
        let head = mk_app(
            Term::Ind(self.name.clone()),
            (0..np).map(|i| Term::Rel(na + np - 1 - i)),
        );
        let concl = mk_app(head, c.indices.iter().cloned());
        mk_products(&self.params, mk_products(&c.args, concl))
    }

    /// Index telescope and sort of the arity (syntactically).
    pub fn arity_telescope(&self) -> (Vec<(Name, Term)>, Option<Sort>) {
        let (tele, concl) = decompose_products(&self.arity);
        let sort = match concl {
            Term::Sort(s) => Some(*s),
            _ => None,
        };
        (tele, sort)
    }

    pub fn ctor_index(&self, short: &str) -> Option<usize> {
        self.ctors.iter().position(|c| c.name == short)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Constant(ConstantDecl),
    Inductive(InductiveDecl),
}

impl Decl {
    pub fn name(&self) -> &Kername {
        match self {
            Decl::Constant(c) => &c.name,
            Decl::Inductive(i) => &i.name,
        }
    }
}

/// Ordered declarations; later ones may refer to earlier ones.
#[derive(Clone, Debug, Default)]
pub struct GlobalEnv {
    decls: Vec<Decl>,
    index: HashMap<Kername, usize>,
}

impl PartialEq for GlobalEnv {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("duplicate declaration `{0}`")]
pub struct DuplicateDecl(pub Kername);

impl GlobalEnv {
    pub fn new() -> GlobalEnv {
        GlobalEnv::default()
    }

    pub fn from_decls(decls: Vec<Decl>) -> Result<GlobalEnv, DuplicateDecl> {
        let mut env = GlobalEnv::new();
        for d in decls {
            env.push(d)?;
        }
        Ok(env)
    }

    pub fn push(&mut self, decl: Decl) -> Result<(), DuplicateDecl> {
        let name = decl.name().clone();
        if self.index.contains_key(&name) {
            return Err(DuplicateDecl(name));
        }
        self.index.insert(name, self.decls.len());
        self.decls.push(decl);
        Ok(())
    }

    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn lookup(&self, name: &Kername) -> Option<&Decl> {
        self.index.get(name).map(|&i| &self.decls[i])
    }

    pub fn position(&self, name: &Kername) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn constant(&self, name: &Kername) -> Option<&ConstantDecl> {
        match self.lookup(name) {
            Some(Decl::Constant(c)) => Some(c),
            _ => None,
        }
    }

    pub fn inductive(&self, name: &Kername) -> Option<&InductiveDecl> {
        match self.lookup(name) {
            Some(Decl::Inductive(i)) => Some(i),
            _ => None,
        }
    }

    /// Replace the body of an existing constant.
    pub fn set_body(&mut self, name: &Kername, body: Term) -> bool {
        match self.index.get(name) {
            Some(&i) => match &mut self.decls[i] {
                Decl::Constant(c) => {
                    c.body = Some(body);
                    true
                }
                Decl::Inductive(_) => false,
            },
            None => false,
        }
    }

    /// Environment restricted to the declarations before `name`.
    pub fn prefix_before(&self, name: &Kername) -> GlobalEnv {
        let end = self.position(name).unwrap_or(self.decls.len());
        GlobalEnv::from_decls(self.decls[..end].to_vec()).expect("prefix of a valid env")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Term {
        Term::Const(s.parse().unwrap())
    }

    #[test]
    fn lift_respects_cutoff() {
        let t = Term::app(Term::rel(0), Term::rel(2));
        assert_eq!(lift(&t, 3, 1), Term::app(Term::rel(0), Term::rel(5)));
    }

    #[test]
    fn subst_under_binder() {
        let nat = Term::Ind("Top.nat".parse().unwrap());
        let t = Term::lam("x", nat.clone(), Term::rel(1));
        assert_eq!(subst(&t, 0, &c("Top.c")), Term::lam("x", nat, c("Top.c")));
        assert_eq!(subst(&Term::rel(1), 0, &c("Top.c")), Term::rel(0));
    }

    #[test]
    fn subst_lifts_value_under_binders() {
        // (fun y => Rel 1)[0 := Rel 3] = fun y => Rel 4
        let t = Term::lam("y", Term::prop(), Term::rel(1));
        assert_eq!(
            subst(&t, 0, &Term::rel(3)),
            Term::lam("y", Term::prop(), Term::rel(4))
        );
    }

    #[test]
    fn decompose_and_rebuild() {
        let t = mk_app(c("A.f"), vec![Term::rel(0), c("A.x"), Term::rel(2)]);
        let (h, args) = decompose_app(&t);
        assert_eq!(h, &c("A.f"));
        assert_eq!(args.len(), 3);
        assert_eq!(mk_app(h.clone(), args.into_iter().cloned()), t);
    }

    #[test]
    fn kername_parse_display() {
        let k: Kername = "Coq.Init.Nat.add".parse().unwrap();
        assert_eq!(k.short(), "add");
        assert_eq!(k.to_string(), "Coq.Init.Nat.add");
        assert!("a..b".parse::<Kername>().is_err());
    }

    #[test]
    fn ctor_type_shape() {
        let list: Kername = "Top.list".parse().unwrap();
        let ind = InductiveDecl {
            name: list.clone(),
            params: vec![("A".into(), Term::type_(0))],
            arity: Term::type_(0),
            ctors: vec![
                CtorDecl {
                    name: "nil".into(),
                    args: vec![],
                    indices: vec![],
                },
                CtorDecl {
                    name: "cons".into(),
                    args: vec![
                        ("x".into(), Term::rel(0)),
                        ("xs".into(), Term::app(Term::ind(&list), Term::rel(1))),
                    ],
                    indices: vec![],
                },
            ],
        };
        let expected = Term::pi(
            "A",
            Term::type_(0),
            Term::pi(
                "x",
                Term::rel(0),
                Term::pi(
                    "xs",
                    Term::app(Term::ind(&list), Term::rel(1)),
                    Term::app(Term::ind(&list), Term::rel(2)),
                ),
            ),
        );
        assert_eq!(ind.ctor_type(1), expected);
    }
}
