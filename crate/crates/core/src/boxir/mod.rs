//! λ□: the untyped target calculus of erasure, and its evaluator.

mod display;
mod eval;
mod sexp;

use crate::ast::{Kername, Name};

pub use display::{display_term, display_term_in};
pub use eval::{box_value_eq, eval_box, show_value, BoxEvaluator, BoxValue, EvalError, VEnv};
pub use sexp::{
    parse_env, parse_env_annotated, parse_term, parse_type, write_env, write_env_annotated,
    write_term, write_type, SexpError,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxFixDef {
    pub name: Name,
    pub body: BoxTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoxTerm {
    Box,
    Rel(usize),
    Lambda {
        name: Name,
        body: Box<BoxTerm>,
    },
    LetIn {
        name: Name,
        value: Box<BoxTerm>,
        body: Box<BoxTerm>,
    },
    App(Box<BoxTerm>, Box<BoxTerm>),
    Const(Kername),
    Construct(Kername, usize),
    /// Each branch records how many constructor arguments its body expects.
    Case {
        ind: Kername,
        discr: Box<BoxTerm>,
        branches: Vec<(usize, BoxTerm)>,
    },
    Fix {
        defs: Vec<BoxFixDef>,
        struct_index: usize,
    },
    /// A match on an inductive without constructors.
    EmptyMatch {
        ind: Kername,
        discr: Box<BoxTerm>,
    },
}

impl BoxTerm {
    pub fn app(f: BoxTerm, a: BoxTerm) -> BoxTerm {
        BoxTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lam(name: impl Into<Name>, body: BoxTerm) -> BoxTerm {
        BoxTerm::Lambda {
            name: name.into(),
            body: Box::new(body),
        }
    }

    pub fn mk_app(head: BoxTerm, args: impl IntoIterator<Item = BoxTerm>) -> BoxTerm {
        args.into_iter().fold(head, BoxTerm::app)
    }

    pub fn decompose_app(&self) -> (&BoxTerm, Vec<&BoxTerm>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let BoxTerm::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Direct subterms, in the order annotation trees mirror.
    pub fn children(&self) -> Vec<&BoxTerm> {
        match self {
            BoxTerm::Box | BoxTerm::Rel(_) | BoxTerm::Const(_) | BoxTerm::Construct(..) => vec![],
            BoxTerm::Lambda { body, .. } => vec![body],
            BoxTerm::LetIn { value, body, .. } => vec![value, body],
            BoxTerm::App(f, a) => vec![f, a],
            BoxTerm::Case {
                discr, branches, ..
            } => std::iter::once(&**discr)
                .chain(branches.iter().map(|(_, b)| b))
                .collect(),
            BoxTerm::Fix { defs, .. } => defs.iter().map(|d| &d.body).collect(),
            BoxTerm::EmptyMatch { discr, .. } => vec![discr],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Global names the term refers to.
    pub fn globals(&self, out: &mut Vec<Kername>) {
        match self {
            BoxTerm::Const(k) | BoxTerm::Construct(k, _) => out.push(k.clone()),
            BoxTerm::Case { ind, .. } | BoxTerm::EmptyMatch { ind, .. } => out.push(ind.clone()),
            _ => {}
        }
        for c in self.children() {
            c.globals(out);
        }
    }

    /// Does `Rel index` occur free?
    pub fn occurs(&self, index: usize) -> bool {
        match self {
            BoxTerm::Rel(i) => *i == index,
            BoxTerm::Box | BoxTerm::Const(_) | BoxTerm::Construct(..) => false,
            BoxTerm::Lambda { body, .. } => body.occurs(index + 1),
            BoxTerm::LetIn { value, body, .. } => value.occurs(index) || body.occurs(index + 1),
            BoxTerm::App(f, a) => f.occurs(index) || a.occurs(index),
            BoxTerm::Case {
                discr, branches, ..
            } => discr.occurs(index) || branches.iter().any(|(_, b)| b.occurs(index)),
            BoxTerm::Fix { defs, .. } => {
                let n = defs.len();
                defs.iter().any(|d| d.body.occurs(index + n))
            }
            BoxTerm::EmptyMatch { discr, .. } => discr.occurs(index),
        }
    }

    /// Shift free variables `>= cutoff` by `amount` (which may be negative
    /// when the caller knows the removed variables do not occur).
    pub fn shift(&self, amount: isize, cutoff: usize) -> BoxTerm {
        match self {
            BoxTerm::Rel(i) if *i >= cutoff => BoxTerm::Rel((*i as isize + amount) as usize),
            BoxTerm::Rel(_) | BoxTerm::Box | BoxTerm::Const(_) | BoxTerm::Construct(..) => {
                self.clone()
            }
            BoxTerm::Lambda { name, body } => BoxTerm::Lambda {
                name: name.clone(),
                body: Box::new(body.shift(amount, cutoff + 1)),
            },
            BoxTerm::LetIn { name, value, body } => BoxTerm::LetIn {
                name: name.clone(),
                value: Box::new(value.shift(amount, cutoff)),
                body: Box::new(body.shift(amount, cutoff + 1)),
            },
            BoxTerm::App(f, a) => BoxTerm::app(f.shift(amount, cutoff), a.shift(amount, cutoff)),
            BoxTerm::Case {
                ind,
                discr,
                branches,
            } => BoxTerm::Case {
                ind: ind.clone(),
                discr: Box::new(discr.shift(amount, cutoff)),
                branches: branches
                    .iter()
                    .map(|(n, b)| (*n, b.shift(amount, cutoff)))
                    .collect(),
            },
            BoxTerm::Fix { defs, struct_index } => {
                let n = defs.len();
                BoxTerm::Fix {
                    defs: defs
                        .iter()
                        .map(|d| BoxFixDef {
                            name: d.name.clone(),
                            body: d.body.shift(amount, cutoff + n),
                        })
                        .collect(),
                    struct_index: *struct_index,
                }
            }
            BoxTerm::EmptyMatch { ind, discr } => BoxTerm::EmptyMatch {
                ind: ind.clone(),
                discr: Box::new(discr.shift(amount, cutoff)),
            },
        }
    }
}

#[cfg(test)]
mod tests;
