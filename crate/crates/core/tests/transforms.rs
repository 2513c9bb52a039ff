mod common;

use boxtract_core::ast::{alpha_eq, Branch, Term};
use boxtract_core::dearg::{analyze_usage, is_expanded};
use boxtract_core::erasure::{erase_env, ErasedDecl};
use boxtract_core::eval::eval_core;
use boxtract_core::surface::{parse_programs, SourceFile};
use boxtract_core::transforms::{
    certify, compose_transforms, eta_expand, expand_branches, inline, ExpansionTable, Pass,
    TransformError,
};
use common::*;

fn with_prelude(src: &str) -> boxtract_core::ast::GlobalEnv {
    parse_programs(&[fixture("prelude.src"), SourceFile::new("test.src", src)])
        .unwrap_or_else(|e| panic!("{e}"))
}

fn body(env: &boxtract_core::ast::GlobalEnv, name: &str) -> Term {
    env.constant(&kn(name)).unwrap().body.clone().unwrap()
}

#[test]
fn eta_expands_partial_application_under_let() {
    let env = with_prelude(
        "module T\n\
         def t : nat := let f := fun (n : nat) => add n in f O O\n\
         def expected : nat := let f := fun (n : nat) (m : nat) => add n m in f O O\n\
         def full : nat := add (S O) (S (S O))\n",
    );
    let r = eta_expand(&env, &ExpansionTable::full(&env)).unwrap();
    let t = body(&r.new_env, "T.t");
    assert!(alpha_eq(&t, &body(&env, "T.expected")), "{t:?}");
    assert!(!r.changed.contains(&kn("T.full")));
    let r = certify(&env, r).unwrap();
    assert!(r.all_certified());
}

#[test]
fn eta_expands_constructor_with_specialised_type() {
    let env = with_prelude(
        "module T\n\
         def t : list nat -> list nat := cons nat O\n\
         def expected : list nat -> list nat := fun (tl : list nat) => cons nat O tl\n",
    );
    let r = eta_expand(&env, &ExpansionTable::full(&env)).unwrap();
    assert!(alpha_eq(
        &body(&r.new_env, "T.t"),
        &body(&env, "T.expected")
    ));
    assert!(certify(&env, r).unwrap().all_certified());
}

#[test]
fn eta_with_too_short_type_fails() {
    let env = with_prelude("module T\ndef t : nat -> nat := add O\n");
    let mut table = ExpansionTable::default();
    table.const_entries.insert(
        kn("Coq.Init.Nat.add"),
        (3, env.constant(&kn("Coq.Init.Nat.add")).unwrap().ty.clone()),
    );
    assert_eq!(
        eta_expand(&env, &table).unwrap_err(),
        TransformError::TypeSpecializationFailed(kn("Coq.Init.Nat.add"))
    );
}

/// `match xs with nil => nil nat | cons => cons nat end` with an unexpanded
/// second branch.
fn unexpanded_match_env() -> boxtract_core::ast::GlobalEnv {
    let mut env = with_prelude(
        "module T\n\
         def t (xs : list nat) : list nat := match xs with | nil => nil nat | cons y ys => cons nat y ys end\n\
         def expected (xs : list nat) : list nat := match xs with | nil => nil nat | cons x xs => cons nat x xs end\n",
    );
    let Term::Lambda { name, ty, body } = body(&env, "T.t") else {
        panic!()
    };
    let Term::Case {
        ind,
        discr,
        motive,
        mut branches,
    } = *body
    else {
        panic!()
    };
    let list = kn("Coq.Init.Datatypes.list");
    branches[1] = Branch {
        arity: 2,
        body: Term::app(
            Term::ctor(&list, 1),
            Term::ind(&kn("Coq.Init.Datatypes.nat")),
        ),
    };
    let t = Term::lam(
        name,
        *ty,
        Term::Case {
            ind,
            discr,
            motive,
            branches,
        },
    );
    env.set_body(&kn("T.t"), t);
    env
}

#[test]
fn branches_get_typed_lambdas() {
    let env = unexpanded_match_env();
    let r = expand_branches(&env).unwrap();
    let t = body(&r.new_env, "T.t");
    assert!(alpha_eq(&t, &body(&env, "T.expected")), "{t:?}");
    assert_eq!(r.changed, vec![kn("T.t")]);
    let Term::Lambda { body: b, .. } = &t else {
        panic!()
    };
    let Term::Case { branches, .. } = &**b else {
        panic!()
    };
    let Term::Lambda { ty, .. } = &branches[1].body else {
        panic!()
    };
    assert_eq!(**ty, Term::ind(&kn("Coq.Init.Datatypes.nat")));
    let r = certify(&env, r).unwrap();
    assert!(r.all_certified());
    // Idempotent.
    let again = expand_branches(&r.new_env).unwrap();
    assert!(again.changed.is_empty());
}

#[test]
fn bool_rect_inlines_to_a_match() {
    let env = with_prelude(
        "module T\n\
         def t (b : bool) : nat := bool_rect nat O (S O) b\n",
    );
    let r = inline(&env, |k| k == &kn("Coq.Init.Datatypes.bool_rect")).unwrap();
    let t = body(&r.new_env, "T.t");
    let Term::Lambda { body: b, .. } = &t else {
        panic!()
    };
    assert!(matches!(&**b, Term::Case { .. }), "{t:?}");
    assert!(r
        .new_env
        .constant(&kn("Coq.Init.Datatypes.bool_rect"))
        .is_some());
    assert!(certify(&env, r).unwrap().all_certified());
    let none = inline(&env, |_| false).unwrap();
    assert!(none.changed.is_empty());
    assert_eq!(none.new_env, env);
}

#[test]
fn inlining_an_axiom_fails() {
    let env = with_prelude("module T\naxiom z : nat\ndef t : nat := z\n");
    assert_eq!(
        inline(&env, |k| k == &kn("T.z")).unwrap_err(),
        TransformError::NoBody(kn("T.z"))
    );
    let tr = compose_transforms(vec![Pass::Inline([kn("T.z")].into()).into_transform()]);
    assert_eq!(tr(&env).unwrap_err(), TransformError::NoBody(kn("T.z")));
}

#[test]
fn branch_swap_fails_certification() {
    let env = with_prelude(
        "module T\ndef t (b : bool) : nat := match b with | true => O | false => S O end\n",
    );
    let mut r = expand_branches(&env).unwrap();
    let Term::Lambda { name, ty, body: b } = body(&env, "T.t") else {
        panic!()
    };
    let Term::Case {
        ind,
        discr,
        motive,
        mut branches,
    } = *b
    else {
        panic!()
    };
    branches.swap(0, 1);
    let swapped = Term::lam(
        name,
        *ty,
        Term::Case {
            ind,
            discr,
            motive,
            branches,
        },
    );
    r.new_env.set_body(&kn("T.t"), swapped.clone());
    r.changed.push(kn("T.t"));
    r.certificates.push(boxtract_core::transforms::Certificate {
        name: kn("T.t"),
        original: body(&env, "T.t"),
        new: swapped,
        convertible: None,
    });
    assert_eq!(
        certify(&env, r).unwrap_err(),
        TransformError::CertificationFailed(kn("T.t"))
    );
}

#[test]
fn composed_passes_preserve_results_and_expand_for_dearging() {
    let env = load(&["lists.src", "foo.src"]);
    let roots: Vec<_> = env.decls().iter().map(|d| d.name().clone()).collect();
    let er = erase_env(&env, &roots).unwrap();
    let (im, cm) = analyze_usage(&er);
    let table = ExpansionTable::from_masks(&env, &im, &cm);
    let tr = compose_transforms(vec![
        Pass::Eta(table).into_transform(),
        Pass::Branches.into_transform(),
    ]);
    let r = tr(&env).unwrap();
    assert!(r.all_certified());
    boxtract_core::check::check_env(&r.new_env).unwrap();
    let er2 = erase_env(&r.new_env, &roots).unwrap();
    let (im2, cm2) = analyze_usage(&er2);
    for d in er2.decls() {
        if let ErasedDecl::Constant(c) = d {
            if let Some(b) = &c.body {
                assert!(is_expanded(&im2, &cm2, b), "{}", c.name);
            }
        }
    }
    let t = Term::app(
        Term::konst(&kn("Examples.Lists.sum_nat")),
        nat_list(&[4, 5]),
    );
    let before = eval_core(&env, &t, 1_000_000).unwrap();
    let after = eval_core(&r.new_env, &t, 1_000_000).unwrap();
    assert_eq!(format!("{before:?}"), format!("{after:?}"));
}

#[test]
fn empty_composition_is_identity() {
    let env = load(&[]);
    let r = compose_transforms(vec![])(&env).unwrap();
    assert!(r.changed.is_empty());
    assert_eq!(r.new_env, env);
}
