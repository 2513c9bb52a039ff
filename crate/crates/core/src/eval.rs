//! Call-by-value evaluation of closed core terms.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::ast::{FixDef, GlobalEnv, Kername, Term};
use crate::check::{CheckError, CheckResult};

#[derive(Clone)]
pub enum CoreValue<'a> {
    /// Constructor applied to (possibly not yet all) arguments, parameters
    /// included.
    Construct {
        ind: Kername,
        k: usize,
        args: Vec<Rc<CoreValue<'a>>>,
    },
    Closure {
        env: Env<'a>,
        body: &'a Term,
    },
    Fix {
        env: Env<'a>,
        def: &'a FixDef,
        struct_index: usize,
        args: Vec<Rc<CoreValue<'a>>>,
    },
    /// An inductive type applied to arguments.
    Ind {
        ind: Kername,
        args: Vec<Rc<CoreValue<'a>>>,
    },
    /// Sorts and products; opaque at run time.
    Type,
}

impl fmt::Debug for CoreValue<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreValue::Construct { ind, k, args } => {
                write!(f, "{ind}#{k}")?;
                if !args.is_empty() {
                    f.debug_list().entries(args.iter()).finish()?;
                }
                Ok(())
            }
            CoreValue::Closure { .. } => f.write_str("<fun>"),
            CoreValue::Fix { .. } => f.write_str("<fix>"),
            CoreValue::Ind { ind, args } => write!(f, "{ind}{args:?}"),
            CoreValue::Type => f.write_str("<type>"),
        }
    }
}

/// Persistent evaluation environment; the head is `Rel 0`.
#[derive(Clone, Default)]
pub struct Env<'a>(Option<Rc<EnvNode<'a>>>);

struct EnvNode<'a> {
    value: Rc<CoreValue<'a>>,
    next: Env<'a>,
}

impl<'a> Env<'a> {
    pub fn push(&self, value: Rc<CoreValue<'a>>) -> Env<'a> {
        Env(Some(Rc::new(EnvNode {
            value,
            next: self.clone(),
        })))
    }

    pub fn get(&self, mut i: usize) -> Option<Rc<CoreValue<'a>>> {
        let mut cur = &self.0;
        while let Some(node) = cur {
            if i == 0 {
                return Some(node.value.clone());
            }
            i -= 1;
            cur = &node.next.0;
        }
        None
    }
}

pub struct CoreEvaluator<'e> {
    env: &'e GlobalEnv,
    budget: u64,
    remaining: Cell<u64>,
    globals: RefCell<HashMap<Kername, Rc<CoreValue<'e>>>>,
}

impl<'e> CoreEvaluator<'e> {
    pub fn new(env: &'e GlobalEnv, fuel: u64) -> CoreEvaluator<'e> {
        CoreEvaluator {
            env,
            budget: fuel,
            remaining: Cell::new(fuel),
            globals: RefCell::new(HashMap::new()),
        }
    }

    fn tick(&self) -> CheckResult<()> {
        let r = self.remaining.get();
        if r == 0 {
            return Err(CheckError::OutOfFuel(self.budget));
        }
        self.remaining.set(r - 1);
        Ok(())
    }

    pub fn eval(&self, env: &Env<'e>, t: &'e Term) -> CheckResult<Rc<CoreValue<'e>>> {
        self.tick()?;
        match t {
            Term::Rel(i) => env
                .get(*i)
                .ok_or_else(|| CheckError::Stuck(format!("unbound Rel {i}"))),
            Term::Sort(_) | Term::Product { .. } => Ok(Rc::new(CoreValue::Type)),
            Term::Ind(i) => Ok(Rc::new(CoreValue::Ind {
                ind: i.clone(),
                args: vec![],
            })),
            Term::Lambda { body, .. } => Ok(Rc::new(CoreValue::Closure {
                env: env.clone(),
                body,
            })),
            Term::LetIn { value, body, .. } => {
                let v = self.eval(env, value)?;
                self.eval(&env.push(v), body)
            }
            Term::App(f, a) => {
                let fv = self.eval(env, f)?;
                let av = self.eval(env, a)?;
                self.apply(fv, av)
            }
            Term::Const(c) => self.global(c),
            Term::Construct(i, k) => Ok(Rc::new(CoreValue::Construct {
                ind: i.clone(),
                k: *k,
                args: vec![],
            })),
            Term::Case {
                ind,
                discr,
                branches,
                ..
            } => {
                let d = self.eval(env, discr)?;
                match &*d {
                    CoreValue::Construct { ind: i, k, args } if i == ind => {
                        let np = self
                            .env
                            .inductive(ind)
                            .ok_or_else(|| CheckError::Stuck(format!("unknown inductive {ind}")))?
                            .param_count();
                        let br = branches.get(*k).ok_or_else(|| {
                            CheckError::Stuck(format!("missing branch {k} for {ind}"))
                        })?;
                        let mut f = self.eval(env, &br.body)?;
                        for a in args.iter().skip(np) {
                            f = self.apply(f, a.clone())?;
                        }
                        Ok(f)
                    }
                    other => Err(CheckError::Stuck(format!(
                        "match on {ind} scrutinises {other:?}"
                    ))),
                }
            }
            Term::Fix { defs, struct_index } => {
                if defs.len() != 1 {
                    return Err(CheckError::Stuck("mutual fixpoint".into()));
                }
                Ok(Rc::new(CoreValue::Fix {
                    env: env.clone(),
                    def: &defs[0],
                    struct_index: *struct_index,
                    args: vec![],
                }))
            }
        }
    }

    fn global(&self, c: &Kername) -> CheckResult<Rc<CoreValue<'e>>> {
        if let Some(v) = self.globals.borrow().get(c) {
            return Ok(v.clone());
        }
        let decl = self
            .env
            .constant(c)
            .ok_or_else(|| CheckError::Stuck(format!("unknown constant {c}")))?;
        let body = decl
            .body
            .as_ref()
            .ok_or_else(|| CheckError::Stuck(format!("axiom {c} has no body")))?;
        let v = self.eval(&Env::default(), body)?;
        self.globals.borrow_mut().insert(c.clone(), v.clone());
        Ok(v)
    }

    pub fn apply(
        &self,
        f: Rc<CoreValue<'e>>,
        a: Rc<CoreValue<'e>>,
    ) -> CheckResult<Rc<CoreValue<'e>>> {
        self.tick()?;
        match &*f {
            CoreValue::Closure { env, body } => self.eval(&env.push(a), body),
            CoreValue::Construct { ind, k, args } => {
                let mut args = args.clone();
                args.push(a);
                Ok(Rc::new(CoreValue::Construct {
                    ind: ind.clone(),
                    k: *k,
                    args,
                }))
            }
            CoreValue::Ind { ind, args } => {
                let mut args = args.clone();
                args.push(a);
                Ok(Rc::new(CoreValue::Ind {
                    ind: ind.clone(),
                    args,
                }))
            }
            CoreValue::Fix {
                env,
                def,
                struct_index,
                args,
            } => {
                let mut args = args.clone();
                args.push(a);
                if args.len() <= *struct_index {
                    return Ok(Rc::new(CoreValue::Fix {
                        env: env.clone(),
                        def,
                        struct_index: *struct_index,
                        args,
                    }));
                }
                if !matches!(&*args[*struct_index], CoreValue::Construct { .. }) {
                    return Err(CheckError::Stuck(
                        "recursive argument is not a constructor".into(),
                    ));
                }
                let this = Rc::new(CoreValue::Fix {
                    env: env.clone(),
                    def,
                    struct_index: *struct_index,
                    args: vec![],
                });
                let mut g = self.eval(&env.push(this), &def.body)?;
                for v in args {
                    g = self.apply(g, v)?;
                }
                Ok(g)
            }
            CoreValue::Type => Err(CheckError::Stuck("applying a type".into())),
        }
    }
}

/// Evaluate a closed term.
pub fn eval_core<'e>(env: &'e GlobalEnv, t: &'e Term, fuel: u64) -> CheckResult<Rc<CoreValue<'e>>> {
    CoreEvaluator::new(env, fuel).eval(&Env::default(), t)
}
