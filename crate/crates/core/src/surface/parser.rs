//! Recursive-descent parser producing named surface syntax.

use super::lexer::{is_keyword, sort_level, Tok, Token};
use super::ParseError;
use crate::ast::Sort;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub struct SBinder {
    pub name: String,
    pub ty: Option<STerm>,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub enum StructArg {
    Name(String),
    Index(usize),
}

#[derive(Clone, Debug)]
pub struct SFix {
    pub name: String,
    pub binders: Vec<SBinder>,
    pub struct_arg: Option<StructArg>,
    pub ret: Box<STerm>,
    pub body: Box<STerm>,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct SBranch {
    pub ctor: String,
    /// `None` when the pattern lists no variables at all.
    pub vars: Option<Vec<SBinder>>,
    pub body: STerm,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub enum STerm {
    Var(String, Pos),
    Sort(Sort, Pos),
    Fun(Vec<SBinder>, Box<STerm>, Pos),
    Forall(Vec<SBinder>, Box<STerm>, Pos),
    Arrow(Box<STerm>, Box<STerm>, Pos),
    App(Box<STerm>, Vec<STerm>, Pos),
    Let {
        name: String,
        ty: Option<Box<STerm>>,
        value: Box<STerm>,
        body: Box<STerm>,
        pos: Pos,
    },
    LetFix(SFix, Box<STerm>, Pos),
    Fix(SFix),
    Match {
        discr: Box<STerm>,
        ret: Option<Box<STerm>>,
        branches: Vec<SBranch>,
        pos: Pos,
    },
}

impl STerm {
    pub fn pos(&self) -> Pos {
        match self {
            STerm::Var(_, p)
            | STerm::Sort(_, p)
            | STerm::Fun(_, _, p)
            | STerm::Forall(_, _, p)
            | STerm::Arrow(_, _, p)
            | STerm::App(_, _, p)
            | STerm::Let { pos: p, .. }
            | STerm::LetFix(_, _, p)
            | STerm::Match { pos: p, .. } => *p,
            STerm::Fix(f) => f.pos,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SCtor {
    pub name: String,
    pub binders: Vec<SBinder>,
    pub ty: STerm,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub enum SDecl {
    Module(Vec<String>),
    Def {
        name: String,
        binders: Vec<SBinder>,
        ty: Option<STerm>,
        body: STerm,
        pos: Pos,
    },
    Axiom {
        name: String,
        binders: Vec<SBinder>,
        ty: STerm,
        pos: Pos,
    },
    Fixpoint(SFix),
    Inductive {
        name: String,
        params: Vec<SBinder>,
        arity: STerm,
        ctors: Vec<SCtor>,
        pos: Pos,
    },
}

pub struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Parser {
        Parser { toks, i: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let j = (self.i + k).min(self.toks.len() - 1);
        &self.toks[j].tok
    }

    fn pos(&self) -> Pos {
        let t = &self.toks[self.i];
        Pos {
            line: t.line,
            col: t.col,
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let p = self.pos();
        Err(ParseError::SyntaxError {
            line: p.line,
            col: p.col,
            message: message.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn expect_kw(&mut self, s: &str) -> Result<(), ParseError> {
        if self.is_kw(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    /// A binder-position name: an identifier that is not a keyword, or `_`.
    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) && !s.contains('.') => {
                self.bump();
                Ok(s)
            }
            _ => self.error(format!("expected a name, found {}", self.describe())),
        }
    }

    fn at_name(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if !is_keyword(s) && !s.contains('.'))
    }

    pub fn program(&mut self) -> Result<Vec<SDecl>, ParseError> {
        let mut decls = Vec::new();
        while *self.peek() != Tok::Eof {
            decls.push(self.decl()?);
        }
        Ok(decls)
    }

    fn decl(&mut self) -> Result<SDecl, ParseError> {
        let pos = self.pos();
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.error(format!("expected a declaration, found {}", self.describe())),
        };
        match kw.as_str() {
            "module" => {
                self.bump();
                match self.bump() {
                    Tok::Ident(s) if !is_keyword(&s) => {
                        Ok(SDecl::Module(s.split('.').map(str::to_string).collect()))
                    }
                    _ => self.error("expected a module path"),
                }
            }
            "def" => {
                self.bump();
                let name = self.name()?;
                let binders = self.binders()?;
                let ty = if self.is_sym(":") {
                    self.bump();
                    Some(self.term()?)
                } else {
                    None
                };
                self.expect_sym(":=")?;
                let body = self.term()?;
                Ok(SDecl::Def {
                    name,
                    binders,
                    ty,
                    body,
                    pos,
                })
            }
            "axiom" => {
                self.bump();
                let name = self.name()?;
                let binders = self.binders()?;
                self.expect_sym(":")?;
                let ty = self.term()?;
                Ok(SDecl::Axiom {
                    name,
                    binders,
                    ty,
                    pos,
                })
            }
            "fixpoint" => {
                self.bump();
                Ok(SDecl::Fixpoint(self.fix_def(pos)?))
            }
            "inductive" => {
                self.bump();
                let name = self.name()?;
                let params = self.binders()?;
                self.expect_sym(":")?;
                let arity = self.term()?;
                self.expect_sym(":=")?;
                let mut ctors = Vec::new();
                if self.is_sym("|") {
                    self.bump();
                }
                if self.at_name() {
                    ctors.push(self.ctor()?);
                    while self.is_sym("|") {
                        self.bump();
                        ctors.push(self.ctor()?);
                    }
                }
                Ok(SDecl::Inductive {
                    name,
                    params,
                    arity,
                    ctors,
                    pos,
                })
            }
            _ => self.error(format!("expected a declaration, found {}", self.describe())),
        }
    }

    fn ctor(&mut self) -> Result<SCtor, ParseError> {
        let pos = self.pos();
        let name = self.name()?;
        let binders = self.binders()?;
        self.expect_sym(":")?;
        let ty = self.term()?;
        Ok(SCtor {
            name,
            binders,
            ty,
            pos,
        })
    }

    /// `name binders [{struct x}] : T := body`
    fn fix_def(&mut self, pos: Pos) -> Result<SFix, ParseError> {
        let name = self.name()?;
        let binders = self.binders()?;
        let struct_arg = self.struct_annot()?;
        self.expect_sym(":")?;
        let ret = self.term()?;
        let struct_arg = match struct_arg {
            Some(s) => Some(s),
            None => self.struct_annot()?,
        };
        self.expect_sym(":=")?;
        let body = self.term()?;
        Ok(SFix {
            name,
            binders,
            struct_arg,
            ret: Box::new(ret),
            body: Box::new(body),
            pos,
        })
    }

    fn struct_annot(&mut self) -> Result<Option<StructArg>, ParseError> {
        if !self.is_sym("{") {
            return Ok(None);
        }
        self.bump();
        self.expect_kw("struct")?;
        let arg = match self.bump() {
            Tok::Ident(s) if !is_keyword(&s) => StructArg::Name(s),
            Tok::Num(n) => StructArg::Index(n as usize),
            _ => return self.error("expected a binder name or index after `struct`"),
        };
        self.expect_sym("}")?;
        Ok(Some(arg))
    }

    /// Zero or more `(x y : T)` groups or bare names.
    fn binders(&mut self) -> Result<Vec<SBinder>, ParseError> {
        let mut out = Vec::new();
        loop {
            if self.is_sym("(") && self.group_ahead() {
                self.bump();
                let mut names = Vec::new();
                while self.at_name() {
                    names.push((self.pos(), self.name()?));
                }
                self.expect_sym(":")?;
                let ty = self.term()?;
                self.expect_sym(")")?;
                for (pos, name) in names {
                    out.push(SBinder {
                        name,
                        ty: Some(ty.clone()),
                        pos,
                    });
                }
            } else if self.at_name() {
                let pos = self.pos();
                let name = self.name()?;
                out.push(SBinder {
                    name,
                    ty: None,
                    pos,
                });
            } else {
                return Ok(out);
            }
        }
    }

    /// After `(`: one or more names then `:`.
    fn group_ahead(&self) -> bool {
        let mut k = 1;
        let mut any = false;
        while let Tok::Ident(s) = self.peek_at(k) {
            if is_keyword(s) || s.contains('.') {
                return false;
            }
            any = true;
            k += 1;
        }
        any && matches!(self.peek_at(k), Tok::Sym(":"))
    }

    /// Binders for `fun`/`forall`: either parenthesised groups or one bare
    /// group `x y : T`.
    fn quant_binders(&mut self, stop: &str) -> Result<Vec<SBinder>, ParseError> {
        let mut binders = self.binders()?;
        if self.is_sym(":") {
            // `forall x y : T, body`: the bare names parsed so far share T.
            if binders.iter().any(|b| b.ty.is_some()) || binders.is_empty() {
                return self.error("unexpected `:` in binder list");
            }
            self.bump();
            let ty = self.term()?;
            for b in &mut binders {
                b.ty = Some(ty.clone());
            }
        }
        if binders.is_empty() {
            return self.error(format!("expected binders before `{stop}`"));
        }
        Ok(binders)
    }

    pub fn term(&mut self) -> Result<STerm, ParseError> {
        let pos = self.pos();
        if self.is_kw("fun") {
            self.bump();
            let bs = self.quant_binders("=>")?;
            self.expect_sym("=>")?;
            let body = self.term()?;
            return Ok(STerm::Fun(bs, Box::new(body), pos));
        }
        if self.is_kw("forall") {
            self.bump();
            let bs = self.quant_binders(",")?;
            self.expect_sym(",")?;
            let body = self.term()?;
            return Ok(STerm::Forall(bs, Box::new(body), pos));
        }
        if self.is_kw("let") {
            self.bump();
            if self.is_kw("fix") {
                self.bump();
                let f = self.fix_def(pos)?;
                self.expect_kw("in")?;
                let body = self.term()?;
                return Ok(STerm::LetFix(f, Box::new(body), pos));
            }
            let name = self.name()?;
            let binders = self.binders()?;
            let ty = if self.is_sym(":") {
                self.bump();
                Some(self.term()?)
            } else {
                None
            };
            self.expect_sym(":=")?;
            let value = self.term()?;
            self.expect_kw("in")?;
            let body = self.term()?;
            let (value, ty) = if binders.is_empty() {
                (value, ty)
            } else {
                let ty = ty.map(|t| STerm::Forall(binders.clone(), Box::new(t), pos));
                (STerm::Fun(binders, Box::new(value), pos), ty)
            };
            return Ok(STerm::Let {
                name,
                ty: ty.map(Box::new),
                value: Box::new(value),
                body: Box::new(body),
                pos,
            });
        }
        if self.is_kw("fix") {
            self.bump();
            return Ok(STerm::Fix(self.fix_def(pos)?));
        }
        let lhs = self.app()?;
        if self.is_sym("->") {
            self.bump();
            let rhs = self.term()?;
            return Ok(STerm::Arrow(Box::new(lhs), Box::new(rhs), pos));
        }
        Ok(lhs)
    }

    fn at_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => {
                !is_keyword(s) || s == "match" || s == "Prop" || sort_level(s).is_some()
            }
            Tok::Sym("(") => true,
            _ => false,
        }
    }

    fn app(&mut self) -> Result<STerm, ParseError> {
        let pos = self.pos();
        if !self.at_atom() {
            return self.error(format!("expected a term, found {}", self.describe()));
        }
        let head = self.atom()?;
        let mut args = Vec::new();
        while self.at_atom() {
            args.push(self.atom()?);
        }
        if args.is_empty() {
            Ok(head)
        } else {
            Ok(STerm::App(Box::new(head), args, pos))
        }
    }

    fn atom(&mut self) -> Result<STerm, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Sym("(") => {
                self.bump();
                let t = self.term()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            Tok::Ident(s) if s == "Prop" => {
                self.bump();
                Ok(STerm::Sort(Sort::Prop, pos))
            }
            Tok::Ident(s) if sort_level(&s).is_some() => {
                self.bump();
                Ok(STerm::Sort(Sort::Type(sort_level(&s).unwrap()), pos))
            }
            Tok::Ident(s) if s == "match" => {
                self.bump();
                self.match_rest(pos)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(STerm::Var(s, pos))
            }
            _ => self.error(format!("expected a term, found {}", self.describe())),
        }
    }

    fn match_rest(&mut self, pos: Pos) -> Result<STerm, ParseError> {
        let discr = self.term()?;
        let ret = if self.is_kw("return") {
            self.bump();
            Some(Box::new(self.term()?))
        } else {
            None
        };
        self.expect_kw("with")?;
        let mut branches = Vec::new();
        if self.is_sym("|") {
            self.bump();
        }
        if !self.is_kw("end") {
            branches.push(self.branch()?);
            while self.is_sym("|") {
                self.bump();
                branches.push(self.branch()?);
            }
        }
        self.expect_kw("end")?;
        Ok(STerm::Match {
            discr: Box::new(discr),
            ret,
            branches,
            pos,
        })
    }

    fn branch(&mut self) -> Result<SBranch, ParseError> {
        let pos = self.pos();
        let ctor = match self.bump() {
            Tok::Ident(s) if !is_keyword(&s) => s,
            _ => return self.error("expected a constructor pattern"),
        };
        let vars = self.binders()?;
        self.expect_sym("=>")?;
        let body = self.term()?;
        Ok(SBranch {
            ctor,
            vars: if vars.is_empty() { None } else { Some(vars) },
            body,
            pos,
        })
    }
}
