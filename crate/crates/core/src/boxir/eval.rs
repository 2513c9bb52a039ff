//! Weak call-by-value evaluation of λ□ with environment closures.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use super::{BoxFixDef, BoxTerm};
use crate::ast::{Kername, Name};
use crate::erasure::ErasedEnv;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("out of fuel (budget {0})")]
    OutOfFuel(u64),
    #[error("reached an absurd match on `{0}`")]
    AbsurdReached(Kername),
    #[error("evaluation stuck: {0}")]
    Stuck(String),
}

pub type EvalResult<T> = Result<T, EvalError>;

pub enum BoxValue<'a> {
    BoxVal,
    ConstructVal {
        ind: Kername,
        ctor: usize,
        args: Vec<Rc<BoxValue<'a>>>,
    },
    ClosureVal {
        env: VEnv<'a>,
        name: &'a Name,
        body: &'a BoxTerm,
    },
    FixClosureVal {
        env: VEnv<'a>,
        def: &'a BoxFixDef,
        struct_index: usize,
        args: Vec<Rc<BoxValue<'a>>>,
    },
}

impl fmt::Debug for BoxValue<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoxValue::BoxVal => write!(f, "□"),
            BoxValue::ConstructVal { ind, ctor, args } => {
                if args.is_empty() {
                    write!(f, "{}#{ctor}", ind.short())
                } else {
                    write!(f, "({}#{ctor}", ind.short())?;
                    for a in args {
                        write!(f, " {a:?}")?;
                    }
                    write!(f, ")")
                }
            }
            BoxValue::ClosureVal { name, .. } => write!(f, "<fun {name}>"),
            BoxValue::FixClosureVal { def, args, .. } => {
                write!(f, "<fix {} / {} args>", def.name, args.len())
            }
        }
    }
}

/// Render a value with constructor names taken from `env`.
pub fn show_value(env: &ErasedEnv, v: &BoxValue) -> String {
    match v {
        BoxValue::ConstructVal { ind, ctor, args } => {
            let name = env
                .inductive(ind)
                .and_then(|i| i.ctors.get(*ctor))
                .map(|c| c.name.clone())
                .unwrap_or_else(|| format!("{}#{ctor}", ind.short()));
            if args.is_empty() {
                name
            } else {
                let args: Vec<String> = args.iter().map(|a| show_value(env, a)).collect();
                format!("({name} {})", args.join(" "))
            }
        }
        other => format!("{other:?}"),
    }
}

/// Constructor spines compare structurally; closures only by identity.
pub fn box_value_eq(a: &BoxValue, b: &BoxValue) -> bool {
    match (a, b) {
        (BoxValue::BoxVal, BoxValue::BoxVal) => true,
        (
            BoxValue::ConstructVal {
                ind: i1,
                ctor: c1,
                args: a1,
            },
            BoxValue::ConstructVal {
                ind: i2,
                ctor: c2,
                args: a2,
            },
        ) => {
            i1 == i2
                && c1 == c2
                && a1.len() == a2.len()
                && a1.iter().zip(a2).all(|(x, y)| box_value_eq(x, y))
        }
        _ => std::ptr::eq(a, b),
    }
}

struct VNode<'a> {
    value: Rc<BoxValue<'a>>,
    next: VEnv<'a>,
}

/// Persistent evaluation environment; the head is `Rel 0`.
#[derive(Clone, Default)]
pub struct VEnv<'a>(Option<Rc<VNode<'a>>>);

impl<'a> VEnv<'a> {
    pub fn push(&self, value: Rc<BoxValue<'a>>) -> VEnv<'a> {
        VEnv(Some(Rc::new(VNode {
            value,
            next: self.clone(),
        })))
    }

    pub fn get(&self, mut i: usize) -> Option<Rc<BoxValue<'a>>> {
        let mut cur = self;
        while let Some(n) = &cur.0 {
            if i == 0 {
                return Some(n.value.clone());
            }
            i -= 1;
            cur = &n.next;
        }
        None
    }
}

pub struct BoxEvaluator<'e> {
    env: &'e ErasedEnv,
    budget: u64,
    remaining: Cell<u64>,
    globals: RefCell<HashMap<Kername, Rc<BoxValue<'e>>>>,
}

impl<'e> BoxEvaluator<'e> {
    pub fn new(env: &'e ErasedEnv, fuel: u64) -> BoxEvaluator<'e> {
        BoxEvaluator {
            env,
            budget: fuel,
            remaining: Cell::new(fuel),
            globals: RefCell::new(HashMap::new()),
        }
    }

    fn tick(&self) -> EvalResult<()> {
        let r = self.remaining.get();
        if r == 0 {
            return Err(EvalError::OutOfFuel(self.budget));
        }
        self.remaining.set(r - 1);
        Ok(())
    }

    pub fn global(&self, k: &Kername) -> EvalResult<Rc<BoxValue<'e>>> {
        if let Some(v) = self.globals.borrow().get(k) {
            return Ok(v.clone());
        }
        let c = self
            .env
            .constant(k)
            .ok_or_else(|| EvalError::Stuck(format!("unknown constant {k}")))?;
        let body = c
            .body
            .as_ref()
            .ok_or_else(|| EvalError::Stuck(format!("axiom {k} has no body")))?;
        let v = self.eval(&VEnv::default(), body)?;
        self.globals.borrow_mut().insert(k.clone(), v.clone());
        Ok(v)
    }

    pub fn eval(&self, env: &VEnv<'e>, t: &'e BoxTerm) -> EvalResult<Rc<BoxValue<'e>>> {
        self.tick()?;
        match t {
            BoxTerm::Box => Ok(Rc::new(BoxValue::BoxVal)),
            BoxTerm::Rel(i) => env
                .get(*i)
                .ok_or_else(|| EvalError::Stuck(format!("unbound Rel {i}"))),
            BoxTerm::Lambda { name, body } => Ok(Rc::new(BoxValue::ClosureVal {
                env: env.clone(),
                name,
                body,
            })),
            BoxTerm::LetIn { value, body, .. } => {
                let v = self.eval(env, value)?;
                self.eval(&env.push(v), body)
            }
            BoxTerm::App(f, a) => {
                let fv = self.eval(env, f)?;
                let av = self.eval(env, a)?;
                self.apply(fv, av)
            }
            BoxTerm::Const(k) => self.global(k),
            BoxTerm::Construct(ind, ctor) => Ok(Rc::new(BoxValue::ConstructVal {
                ind: ind.clone(),
                ctor: *ctor,
                args: vec![],
            })),
            BoxTerm::Case {
                ind,
                discr,
                branches,
            } => {
                let d = self.eval(env, discr)?;
                match &*d {
                    BoxValue::ConstructVal {
                        ind: di,
                        ctor,
                        args,
                    } if di == ind => {
                        let npars = self.env.inductive(ind).map_or(0, |i| i.npars);
                        let (arity, body) = branches.get(*ctor).ok_or_else(|| {
                            EvalError::Stuck(format!("no branch {ctor} in match on {ind}"))
                        })?;
                        if args.len() != npars + arity {
                            return Err(EvalError::Stuck(format!(
                                "constructor {ctor} of {ind} has {} arguments, branch expects {}",
                                args.len(),
                                npars + arity
                            )));
                        }
                        let mut v = self.eval(env, body)?;
                        for a in &args[npars..] {
                            v = self.apply(v, a.clone())?;
                        }
                        Ok(v)
                    }
                    BoxValue::BoxVal if branches.len() == 1 => {
                        let (arity, body) = &branches[0];
                        let mut v = self.eval(env, body)?;
                        for _ in 0..*arity {
                            v = self.apply(v, Rc::new(BoxValue::BoxVal))?;
                        }
                        Ok(v)
                    }
                    other => Err(EvalError::Stuck(format!(
                        "match on {ind} scrutinises {other:?}"
                    ))),
                }
            }
            BoxTerm::Fix { defs, struct_index } => {
                if defs.len() != 1 {
                    return Err(EvalError::Stuck(
                        "mutual fixpoints are not supported".into(),
                    ));
                }
                Ok(Rc::new(BoxValue::FixClosureVal {
                    env: env.clone(),
                    def: &defs[0],
                    struct_index: *struct_index,
                    args: vec![],
                }))
            }
            BoxTerm::EmptyMatch { ind, discr } => {
                self.eval(env, discr)?;
                Err(EvalError::AbsurdReached(ind.clone()))
            }
        }
    }

    pub fn apply(&self, f: Rc<BoxValue<'e>>, a: Rc<BoxValue<'e>>) -> EvalResult<Rc<BoxValue<'e>>> {
        self.tick()?;
        match &*f {
            BoxValue::BoxVal => Ok(f),
            BoxValue::ConstructVal { ind, ctor, args } => {
                let mut args = args.clone();
                args.push(a);
                Ok(Rc::new(BoxValue::ConstructVal {
                    ind: ind.clone(),
                    ctor: *ctor,
                    args,
                }))
            }
            BoxValue::ClosureVal { env, body, .. } => self.eval(&env.push(a), body),
            BoxValue::FixClosureVal {
                env,
                def,
                struct_index,
                args,
            } => {
                let mut args = args.clone();
                args.push(a);
                if args.len() <= *struct_index {
                    return Ok(Rc::new(BoxValue::FixClosureVal {
                        env: env.clone(),
                        def,
                        struct_index: *struct_index,
                        args,
                    }));
                }
                match &*args[*struct_index] {
                    BoxValue::ConstructVal { .. } | BoxValue::BoxVal => {}
                    other => {
                        return Err(EvalError::Stuck(format!(
                            "fixpoint {} applied to non-constructor {other:?}",
                            def.name
                        )))
                    }
                }
                let me = Rc::new(BoxValue::FixClosureVal {
                    env: env.clone(),
                    def,
                    struct_index: *struct_index,
                    args: vec![],
                });
                let mut v = self.eval(&env.push(me), &def.body)?;
                for a in args {
                    v = self.apply(v, a)?;
                }
                Ok(v)
            }
        }
    }
}

/// Evaluate a closed term against `env`.
pub fn eval_box<'e>(env: &'e ErasedEnv, t: &'e BoxTerm, fuel: u64) -> EvalResult<Rc<BoxValue<'e>>> {
    BoxEvaluator::new(env, fuel).eval(&VEnv::default(), t)
}
