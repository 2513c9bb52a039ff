//! Type-directed generation of closed programs over the prelude, printed as
//! surface syntax.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ty {
    Bool,
    Nat,
    ListNat,
    SigNat,
    OptNat,
}

pub const ALL_TYS: [Ty; 5] = [Ty::Bool, Ty::Nat, Ty::ListNat, Ty::SigNat, Ty::OptNat];

/// The predicate every generated `sig nat` value carries.
const PRED: &str = "(fun (m : nat) => le O m)";

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Bool => f.write_str("bool"),
            Ty::Nat => f.write_str("nat"),
            Ty::ListNat => f.write_str("list nat"),
            Ty::SigNat => write!(f, "sig nat {PRED}"),
            Ty::OptNat => f.write_str("option nat"),
        }
    }
}

/// Generated syntax. Binders carry their names; children follow the order
/// of the printed arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    True,
    False,
    Negb,
    Andb,
    Eqb,
    Leb,
    Zero,
    Succ,
    Add,
    Mul,
    Pred,
    Length,
    SumNat,
    Proj1,
    /// `safe_head` on a list built with `cons`, with its non-emptiness proof.
    SafeHead,
    Foo,
    Nil,
    Cons,
    Append,
    Rev,
    Map(String),
    Repeat,
    Square,
    Exist,
    NoneN,
    SomeN,
    OptionMap(String),
    Head,
    Var(String),
    If,
    MatchNat(String),
    MatchOpt(String),
    MatchList(String, String),
    Let(String),
    Beta(String, Ty),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub kind: Kind,
    pub ty: Ty,
    pub kids: Vec<Node>,
}

impl Node {
    pub fn leaf(kind: Kind, ty: Ty) -> Node {
        Node {
            kind,
            ty,
            kids: vec![],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.kids.iter().map(Node::size).sum::<usize>()
    }

    /// Variables bound by this node, per child.
    fn binds(&self, child: usize) -> Vec<&str> {
        match (&self.kind, child) {
            (Kind::Map(x), 0) | (Kind::OptionMap(x), 0) => vec![x],
            (Kind::MatchNat(x), 2) | (Kind::MatchOpt(x), 2) | (Kind::Let(x), 1) => vec![x],
            (Kind::Beta(x, _), 0) => vec![x],
            (Kind::MatchList(x, xs), 2) => vec![x, xs],
            _ => vec![],
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        let mut out = vec![];
        self.collect_free(&mut vec![], &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut Vec<String>) {
        if let Kind::Var(x) = &self.kind {
            if !bound.contains(&x.as_str()) && !out.contains(x) {
                out.push(x.clone());
            }
        }
        for (i, k) in self.kids.iter().enumerate() {
            let b = self.binds(i);
            let n = b.len();
            bound.extend(b);
            k.collect_free(bound, out);
            bound.truncate(bound.len() - n);
        }
    }

    /// Surface syntax.
    pub fn source(&self) -> String {
        let k = |i: usize| self.kids[i].source();
        match &self.kind {
            Kind::True => "true".into(),
            Kind::False => "false".into(),
            Kind::Negb => format!("(negb {})", k(0)),
            Kind::Andb => format!("(andb {} {})", k(0), k(1)),
            Kind::Eqb => format!("(eqb {} {})", k(0), k(1)),
            Kind::Leb => format!("(leb {} {})", k(0), k(1)),
            Kind::Zero => "O".into(),
            Kind::Succ => format!("(S {})", k(0)),
            Kind::Add => format!("(add {} {})", k(0), k(1)),
            Kind::Mul => format!("(mul {} {})", k(0), k(1)),
            Kind::Pred => format!("(pred {})", k(0)),
            Kind::Length => format!("(length nat {})", k(0)),
            Kind::SumNat => format!("(sum_nat {})", k(0)),
            Kind::Proj1 => format!("(proj1_sig nat {PRED} {})", k(0)),
            Kind::SafeHead => {
                let (h, t) = (k(0), k(1));
                format!(
                    "(safe_head nat (exist (list nat) (fun (l : list nat) => lt O (length nat l)) \
                     (cons nat {h} {t}) (lt_O_S (length nat {t}))))"
                )
            }
            Kind::Foo => format!("(foo {} {} {})", k(0), k(1), k(2)),
            Kind::Nil => "(nil nat)".into(),
            Kind::Cons => format!("(cons nat {} {})", k(0), k(1)),
            Kind::Append => format!("(app nat {} {})", k(0), k(1)),
            Kind::Rev => format!("(rev nat {})", k(0)),
            Kind::Map(x) => format!("(map nat nat (fun ({x} : nat) => {}) {})", k(0), k(1)),
            Kind::Repeat => format!("(repeat nat {} {})", k(0), k(1)),
            Kind::Square => format!("(square {})", k(0)),
            Kind::Exist => {
                let n = k(0);
                format!("(exist nat {PRED} {n} (le_0_n {n}))")
            }
            Kind::NoneN => "(None nat)".into(),
            Kind::SomeN => format!("(Some nat {})", k(0)),
            Kind::OptionMap(x) => {
                format!("(option_map nat nat (fun ({x} : nat) => {}) {})", k(0), k(1))
            }
            Kind::Head => format!("(head nat {})", k(0)),
            Kind::Var(x) => x.clone(),
            Kind::If => format!(
                "(match {} return fun (b : bool) => {} with | true => {} | false => {} end)",
                k(0),
                self.ty,
                k(1),
                k(2)
            ),
            Kind::MatchNat(x) => format!(
                "(match {} return fun (n : nat) => {} with | O => {} | S {x} => {} end)",
                k(0),
                self.ty,
                k(1),
                k(2)
            ),
            Kind::MatchOpt(x) => format!(
                "(match {} return fun (o : option nat) => {} with | None => {} | Some {x} => {} end)",
                k(0),
                self.ty,
                k(1),
                k(2)
            ),
            Kind::MatchList(x, xs) => format!(
                "(match {} return fun (l : list nat) => {} with | nil => {} | cons {x} {xs} => {} end)",
                k(0),
                self.ty,
                k(1),
                k(2)
            ),
            Kind::Let(x) => format!("(let {x} : {} := {} in {})", self.kids[0].ty, k(0), k(1)),
            Kind::Beta(x, t) => format!("((fun ({x} : {t}) => {}) {})", k(0), k(1)),
        }
    }
}

/// Smallest closed value of each type.
pub fn default_of(ty: Ty) -> Node {
    match ty {
        Ty::Bool => Node::leaf(Kind::False, ty),
        Ty::Nat => Node::leaf(Kind::Zero, ty),
        Ty::ListNat => Node::leaf(Kind::Nil, ty),
        Ty::OptNat => Node::leaf(Kind::NoneN, ty),
        Ty::SigNat => Node {
            kind: Kind::Exist,
            ty,
            kids: vec![default_of(Ty::Nat)],
        },
    }
}

pub struct Generator<'r, R: Rng> {
    rng: &'r mut R,
    scope: Vec<(String, Ty)>,
    next_var: usize,
}

impl<'r, R: Rng> Generator<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        Generator {
            rng,
            scope: vec![],
            next_var: 0,
        }
    }

    fn fresh(&mut self) -> String {
        self.next_var += 1;
        format!("v{}", self.next_var)
    }

    fn node(&mut self, kind: Kind, ty: Ty, kids: Vec<Node>) -> Node {
        Node { kind, ty, kids }
    }

    fn small_nat(&mut self) -> Node {
        let n = self.rng.gen_range(0..4);
        (0..n).fold(Node::leaf(Kind::Zero, Ty::Nat), |acc, _| Node {
            kind: Kind::Succ,
            ty: Ty::Nat,
            kids: vec![acc],
        })
    }

    fn leaf(&mut self, ty: Ty) -> Node {
        let vars: Vec<String> = self
            .scope
            .iter()
            .filter(|(_, t)| *t == ty)
            .map(|(x, _)| x.clone())
            .collect();
        if !vars.is_empty() && self.rng.gen_bool(0.5) {
            return Node::leaf(Kind::Var(vars.choose(self.rng).unwrap().clone()), ty);
        }
        match ty {
            Ty::Bool => {
                let k = if self.rng.gen_bool(0.5) {
                    Kind::True
                } else {
                    Kind::False
                };
                Node::leaf(k, ty)
            }
            Ty::Nat => self.small_nat(),
            Ty::ListNat => {
                if self.rng.gen_bool(0.4) {
                    Node::leaf(Kind::Nil, ty)
                } else {
                    let h = self.small_nat();
                    self.node(Kind::Cons, ty, vec![h, Node::leaf(Kind::Nil, ty)])
                }
            }
            Ty::OptNat => {
                if self.rng.gen_bool(0.4) {
                    Node::leaf(Kind::NoneN, ty)
                } else {
                    let n = self.small_nat();
                    self.node(Kind::SomeN, ty, vec![n])
                }
            }
            Ty::SigNat => {
                let n = self.small_nat();
                self.node(Kind::Exist, ty, vec![n])
            }
        }
    }

    fn bind<T>(&mut self, x: &str, ty: Ty, f: impl FnOnce(&mut Self) -> T) -> T {
        self.scope.push((x.to_string(), ty));
        let r = f(self);
        self.scope.pop();
        r
    }

    /// A program of type `ty` whose nesting is bounded by `depth`.
    pub fn gen(&mut self, ty: Ty, depth: usize) -> Node {
        if depth == 0 {
            return self.leaf(ty);
        }
        let d = depth - 1;
        // Generic forms valid at every type.
        match self.rng.gen_range(0..12) {
            0 => {
                let c = self.gen(Ty::Bool, d);
                let (t, e) = (self.gen(ty, d), self.gen(ty, d));
                return self.node(Kind::If, ty, vec![c, t, e]);
            }
            1 => {
                let x = self.fresh();
                let n = self.gen(Ty::Nat, d);
                let z = self.gen(ty, d);
                let s = self.bind(&x, Ty::Nat, |g| g.gen(ty, d));
                return self.node(Kind::MatchNat(x), ty, vec![n, z, s]);
            }
            2 => {
                let x = self.fresh();
                let o = self.gen(Ty::OptNat, d);
                let z = self.gen(ty, d);
                let s = self.bind(&x, Ty::Nat, |g| g.gen(ty, d));
                return self.node(Kind::MatchOpt(x), ty, vec![o, z, s]);
            }
            3 => {
                let (x, xs) = (self.fresh(), self.fresh());
                let l = self.gen(Ty::ListNat, d);
                let z = self.gen(ty, d);
                let c = self.bind(&x, Ty::Nat, |g| g.bind(&xs, Ty::ListNat, |g| g.gen(ty, d)));
                return self.node(Kind::MatchList(x, xs), ty, vec![l, z, c]);
            }
            4 => {
                let x = self.fresh();
                let vt = *ALL_TYS.choose(self.rng).unwrap();
                let v = self.gen(vt, d);
                let b = self.bind(&x, vt, |g| g.gen(ty, d));
                return self.node(Kind::Let(x), ty, vec![v, b]);
            }
            5 => {
                let x = self.fresh();
                let at = *ALL_TYS.choose(self.rng).unwrap();
                let b = self.bind(&x, at, |g| g.gen(ty, d));
                let a = self.gen(at, d);
                return self.node(Kind::Beta(x, at), ty, vec![b, a]);
            }
            _ => {}
        }
        match ty {
            Ty::Bool => match self.rng.gen_range(0..5) {
                0 => self.leaf(ty),
                1 => {
                    let b = self.gen(Ty::Bool, d);
                    self.node(Kind::Negb, ty, vec![b])
                }
                2 => {
                    let (a, b) = (self.gen(Ty::Bool, d), self.gen(Ty::Bool, d));
                    self.node(Kind::Andb, ty, vec![a, b])
                }
                3 => {
                    let (a, b) = (self.gen(Ty::Nat, d), self.gen(Ty::Nat, d));
                    self.node(Kind::Eqb, ty, vec![a, b])
                }
                _ => {
                    let (a, b) = (self.gen(Ty::Nat, d), self.gen(Ty::Nat, d));
                    self.node(Kind::Leb, ty, vec![a, b])
                }
            },
            Ty::Nat => match self.rng.gen_range(0..11) {
                0 => self.leaf(ty),
                1 => {
                    let n = self.gen(Ty::Nat, d);
                    self.node(Kind::Succ, ty, vec![n])
                }
                2 => {
                    let (a, b) = (self.gen(Ty::Nat, d), self.gen(Ty::Nat, d));
                    self.node(Kind::Add, ty, vec![a, b])
                }
                3 => {
                    // Keep products small.
                    let (a, b) = (self.small_nat(), self.gen(Ty::Nat, d.min(1)));
                    self.node(Kind::Mul, ty, vec![a, b])
                }
                4 => {
                    let n = self.gen(Ty::Nat, d);
                    self.node(Kind::Pred, ty, vec![n])
                }
                5 => {
                    let l = self.gen(Ty::ListNat, d);
                    self.node(Kind::Length, ty, vec![l])
                }
                6 => {
                    let l = self.gen(Ty::ListNat, d);
                    self.node(Kind::SumNat, ty, vec![l])
                }
                7 => {
                    let s = self.gen(Ty::SigNat, d);
                    self.node(Kind::Proj1, ty, vec![s])
                }
                8 | 9 => {
                    let (h, t) = (self.gen(Ty::Nat, d), self.gen(Ty::ListNat, d));
                    self.node(Kind::SafeHead, ty, vec![h, t])
                }
                _ => {
                    let kids = vec![
                        self.gen(Ty::Nat, d),
                        self.gen(Ty::Nat, d),
                        self.gen(Ty::Nat, d),
                    ];
                    self.node(Kind::Foo, ty, kids)
                }
            },
            Ty::ListNat => match self.rng.gen_range(0..7) {
                0 => {
                    let (h, t) = (self.gen(Ty::Nat, d), self.gen(Ty::ListNat, d));
                    self.node(Kind::Cons, ty, vec![h, t])
                }
                1 => {
                    let (a, b) = (self.gen(Ty::ListNat, d), self.gen(Ty::ListNat, d));
                    self.node(Kind::Append, ty, vec![a, b])
                }
                2 => {
                    let l = self.gen(Ty::ListNat, d);
                    self.node(Kind::Rev, ty, vec![l])
                }
                3 => {
                    let x = self.fresh();
                    let f = self.bind(&x, Ty::Nat, |g| g.gen(Ty::Nat, d));
                    let l = self.gen(Ty::ListNat, d);
                    self.node(Kind::Map(x), ty, vec![f, l])
                }
                4 => {
                    let (a, n) = (self.gen(Ty::Nat, d), self.small_nat());
                    self.node(Kind::Repeat, ty, vec![a, n])
                }
                5 => {
                    let l = self.gen(Ty::ListNat, d);
                    self.node(Kind::Square, ty, vec![l])
                }
                _ => self.leaf(ty),
            },
            Ty::SigNat => {
                let n = self.gen(Ty::Nat, d);
                self.node(Kind::Exist, ty, vec![n])
            }
            Ty::OptNat => match self.rng.gen_range(0..4) {
                0 => {
                    let n = self.gen(Ty::Nat, d);
                    self.node(Kind::SomeN, ty, vec![n])
                }
                1 => {
                    let x = self.fresh();
                    let f = self.bind(&x, Ty::Nat, |g| g.gen(Ty::Nat, d));
                    let o = self.gen(Ty::OptNat, d);
                    self.node(Kind::OptionMap(x), ty, vec![f, o])
                }
                2 => {
                    let l = self.gen(Ty::ListNat, d);
                    self.node(Kind::Head, ty, vec![l])
                }
                _ => self.leaf(ty),
            },
        }
    }
}

/// Candidate replacements for the subterm at each position, smallest first:
/// the type's default value, then same-typed descendants whose free
/// variables are still bound at that position.
pub fn shrink_candidates(root: &Node) -> Vec<Node> {
    let mut out = vec![];
    let mut path = vec![];
    candidates_at(root, root, &mut path, &mut out);
    out
}

fn candidates_at(root: &Node, node: &Node, path: &mut Vec<usize>, out: &mut Vec<Node>) {
    let free = node.free_vars();
    let mut reps = vec![default_of(node.ty)];
    let mut descendants = vec![];
    collect_descendants(node, &mut descendants);
    for d in descendants {
        if d.ty == node.ty && d.free_vars().iter().all(|v| free.contains(v)) {
            reps.push(d.clone());
        }
    }
    for r in reps {
        if r.size() < node.size() {
            out.push(replace_at(root, path, r));
        }
    }
    for i in 0..node.kids.len() {
        path.push(i);
        candidates_at(root, &node.kids[i], path, out);
        path.pop();
    }
}

fn collect_descendants<'a>(n: &'a Node, out: &mut Vec<&'a Node>) {
    for k in &n.kids {
        out.push(k);
        collect_descendants(k, out);
    }
}

fn replace_at(root: &Node, path: &[usize], with: Node) -> Node {
    match path.split_first() {
        None => with,
        Some((&i, rest)) => {
            let mut n = root.clone();
            n.kids[i] = replace_at(&root.kids[i], rest, with);
            n
        }
    }
}

/// Greedily replace subterms while `still_fails` holds.
pub fn shrink(mut n: Node, mut still_fails: impl FnMut(&Node) -> bool) -> Node {
    'outer: loop {
        for c in shrink_candidates(&n) {
            if still_fails(&c) {
                n = c;
                continue 'outer;
            }
        }
        return n;
    }
}
