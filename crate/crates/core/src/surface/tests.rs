use super::*;
use crate::ast::{alpha_eq, Decl, Kername, Term};

fn kn(s: &str) -> Kername {
    s.parse().unwrap()
}

const NAT: &str = "inductive nat : Type := O : nat | S : nat -> nat";

#[test]
fn parses_identity() {
    let env =
        parse_str("def id : forall (A : Type), A -> A := fun (A : Type) (x : A) => x").unwrap();
    let c = env.constant(&kn("Top.id")).unwrap();
    assert_eq!(
        c.ty,
        Term::pi(
            "A",
            Term::type_(0),
            Term::pi("_", Term::rel(0), Term::rel(1))
        )
    );
    assert_eq!(
        c.body,
        Some(Term::lam(
            "A",
            Term::type_(0),
            Term::lam("x", Term::rel(0), Term::rel(0))
        ))
    );
}

#[test]
fn parses_nat() {
    let env = parse_str(NAT).unwrap();
    let d = env.inductive(&kn("Top.nat")).unwrap();
    assert_eq!(d.param_count(), 0);
    assert_eq!(d.ctors.len(), 2);
    assert_eq!(d.ctors[0].name, "O");
    assert!(d.ctors[0].args.is_empty());
    assert_eq!(d.ctors[1].args.len(), 1);
    assert_eq!(d.ctors[1].args[0].1, Term::Ind(kn("Top.nat")));
}

#[test]
fn unbound_name() {
    let err = parse_str("def bad := undefined_name").unwrap_err();
    assert!(matches!(err, ParseError::UnboundName { ref name, .. } if name == "undefined_name"));
}

#[test]
fn duplicate_name() {
    let err = parse_str(&format!("{NAT}\ndef O : nat := O\ndef O : nat := S O")).unwrap_err();
    // `O` the definition shadows nothing in `Top`: the constructor already owns `Top.O`.
    assert!(matches!(err, ParseError::DuplicateName(ref k) if k == &kn("Top.O")));
}

#[test]
fn syntax_error_has_position() {
    let err = parse_str("def x : Type :=\n  fun (A : Type) => ").unwrap_err();
    match err {
        ParseError::SyntaxError { line, .. } => assert_eq!(line, 2),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn prints_lambda_and_prop() {
    let env = parse_str(NAT).unwrap();
    let t = Term::lam("x", Term::Ind(kn("Top.nat")), Term::rel(0));
    assert_eq!(print_core(&env, &t), "fun (x : nat) => x");
    assert_eq!(print_core(&env, &Term::prop()), "Prop");
}

#[test]
fn modules_qualify_names() {
    let env = parse_str(&format!(
        "module Coq.Init.Datatypes\n{NAT}\nmodule Coq.Init.Nat\ndef two : nat := S (S O)"
    ))
    .unwrap();
    assert!(env.constant(&kn("Coq.Init.Nat.two")).is_some());
    assert!(env.inductive(&kn("Coq.Init.Datatypes.nat")).is_some());
}

#[test]
fn match_with_inferred_motive_and_fixpoint() {
    let src = format!(
        "{NAT}
fixpoint add (n m : nat) : nat :=
  match n with
  | O => m
  | S p => S (add p m)
  end"
    );
    let env = parse_str(&src).unwrap();
    let add = env.constant(&kn("Top.add")).unwrap();
    assert!(matches!(
        add.body,
        Some(Term::Fix {
            struct_index: 0,
            ..
        })
    ));
}

#[test]
fn program_round_trip() {
    let src = format!(
        "{NAT}
inductive list (A : Type) : Type := nil : list A | cons : A -> list A -> list A
fixpoint app (A : Type) (l m : list A) {{struct l}} : list A :=
  match l with
  | nil => m
  | cons a l1 => cons A a (app A l1 m)
  end
def twice (f : nat -> nat) (x : nat) : nat := let y : nat := f x in f y"
    );
    let env = parse_str(&src).unwrap();
    let printed = print_program(&env);
    let env2 = parse_str(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
    assert_eq!(env.len(), env2.len());
    for (a, b) in env.decls().iter().zip(env2.decls()) {
        match (a, b) {
            (Decl::Constant(x), Decl::Constant(y)) => {
                assert!(alpha_eq(&x.ty, &y.ty));
                assert!(alpha_eq(x.body.as_ref().unwrap(), y.body.as_ref().unwrap()));
            }
            (Decl::Inductive(x), Decl::Inductive(y)) => assert_eq!(x.ctors.len(), y.ctors.len()),
            _ => panic!("decl kinds differ"),
        }
    }
}
