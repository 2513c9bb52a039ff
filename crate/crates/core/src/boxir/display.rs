//! Human-readable λ□: constants print fully qualified, constructors by their
//! short name and boxes as `∎`.

use super::BoxTerm;
use crate::ast::{Kername, ANON};
use crate::erasure::ErasedEnv;

pub fn display_term(env: &ErasedEnv, t: &BoxTerm) -> String {
    display_term_in(env, &[], t)
}

/// Print `t` under binders named `names` (innermost last).
pub fn display_term_in(env: &ErasedEnv, names: &[String], t: &BoxTerm) -> String {
    let mut names = names.to_vec();
    Disp { env }.term(&mut names, t, false)
}

struct Disp<'a> {
    env: &'a ErasedEnv,
}

impl Disp<'_> {
    fn ctor(&self, ind: &Kername, k: usize) -> String {
        self.env
            .inductive(ind)
            .and_then(|i| i.ctors.get(k))
            .map(|c| c.name.clone())
            .unwrap_or_else(|| format!("{}#{k}", ind.short()))
    }

    fn fresh(names: &[String], base: &str, used: bool) -> String {
        if base == ANON && !used {
            return ANON.to_string();
        }
        let base = if base == ANON || base.is_empty() {
            "x"
        } else {
            base
        };
        if !names.iter().any(|n| n == base) {
            return base.to_string();
        }
        (0..)
            .map(|i| format!("{base}{i}"))
            .find(|c| !names.contains(c))
            .expect("infinite supply")
    }

    fn term(&self, names: &mut Vec<String>, t: &BoxTerm, atom: bool) -> String {
        let wrap = |s: String| if atom { format!("({s})") } else { s };
        match t {
            BoxTerm::Box => "∎".into(),
            BoxTerm::Rel(i) => names
                .len()
                .checked_sub(i + 1)
                .map(|j| names[j].clone())
                .unwrap_or_else(|| format!("#{i}")),
            BoxTerm::Const(k) => k.to_string(),
            BoxTerm::Construct(ind, k) => self.ctor(ind, *k),
            BoxTerm::App(..) => {
                let (h, args) = t.decompose_app();
                let mut s = self.term(names, h, true);
                for a in args {
                    s.push(' ');
                    s.push_str(&self.term(names, a, true));
                }
                wrap(s)
            }
            BoxTerm::Lambda { .. } => {
                let depth = names.len();
                let mut s = String::from("fun");
                let mut cur = t;
                while let BoxTerm::Lambda { name, body } = cur {
                    let n = Self::fresh(names, name, body.occurs(0));
                    s.push(' ');
                    s.push_str(&n);
                    names.push(n);
                    cur = body;
                }
                let b = self.term(names, cur, false);
                names.truncate(depth);
                wrap(format!("{s} => {b}"))
            }
            BoxTerm::LetIn { name, value, body } => {
                let v = self.term(names, value, false);
                let n = Self::fresh(names, name, true);
                names.push(n.clone());
                let b = self.term(names, body, false);
                names.pop();
                wrap(format!("let {n} := {v} in {b}"))
            }
            BoxTerm::Case {
                ind,
                discr,
                branches,
            } => {
                let mut s = format!("match {} with", self.term(names, discr, false));
                for (k, (arity, body)) in branches.iter().enumerate() {
                    s.push_str(" | ");
                    s.push_str(&self.ctor(ind, k));
                    let depth = names.len();
                    let mut cur = body;
                    let mut bound = 0;
                    while bound < *arity {
                        match cur {
                            BoxTerm::Lambda { name, body } => {
                                let n = Self::fresh(names, name, body.occurs(0));
                                s.push(' ');
                                s.push_str(&n);
                                names.push(n);
                                cur = body;
                                bound += 1;
                            }
                            _ => break,
                        }
                    }
                    if bound < *arity {
                        // Unexpanded branch: print it as a function.
                        names.truncate(depth);
                        cur = body;
                    }
                    s.push_str(" => ");
                    s.push_str(&self.term(names, cur, false));
                    names.truncate(depth);
                }
                s.push_str(" end");
                s
            }
            BoxTerm::Fix { defs, .. } => {
                let d = &defs[0];
                let n = Self::fresh(names, &d.name, true);
                names.push(n.clone());
                let b = self.term(names, &d.body, false);
                names.pop();
                wrap(format!("fix {n} := {b}"))
            }
            BoxTerm::EmptyMatch { discr, .. } => {
                format!("match {} with end", self.term(names, discr, false))
            }
        }
    }
}
