mod common;

use boxtract_core::ast::Term;
use boxtract_core::boxir::{box_value_eq, display_term, eval_box, BoxTerm};
use boxtract_core::check::Ctx;
use boxtract_core::dearg::{
    analyze_usage, dearg, dearg_env, dearg_mib, dearg_value, is_expanded, run_dearg, valid_masks,
    AnalysisOptions,
};
use boxtract_core::erasure::{erase_env, erase_term, BoxType};
use common::*;

fn tvar(i: usize) -> BoxType {
    BoxType::TVar(i)
}

#[test]
fn foo_mask_and_body() {
    let env = load(&["foo.src"]);
    let er = erase_env(&env, &[kn("Examples.Foo.foo_use")]).unwrap();
    let (im, cm) = analyze_usage(&er);
    assert_eq!(
        cm.get(&kn("Examples.Foo.foo")).unwrap(),
        &vec![false, true, true]
    );
    assert!(valid_masks(&er, &im, &cm));
    let out = dearg_env(&im, &cm, &er).unwrap();
    let foo = out.constant(&kn("Examples.Foo.foo")).unwrap();
    assert_eq!(display_term(&out, foo.body.as_ref().unwrap()), "fun n => n");
    assert_eq!(foo.ty, arr(nat(), nat()));
    let usage = out.constant(&kn("Examples.Foo.foo_use")).unwrap();
    assert_eq!(
        display_term(&out, usage.body.as_ref().unwrap()),
        "Examples.Foo.foo (S O)"
    );
    let v = eval_box(&out, usage.body.as_ref().unwrap(), 10_000).unwrap();
    assert_eq!(box_numeral(&v), Some(1));
}

#[test]
fn exist_drops_proof_and_sig_chain() {
    let env = load(&[]);
    let er = erase_env(&env, &[kn("Coq.Init.Specif.proj1_sig")]).unwrap();
    let sig = kn("Coq.Init.Specif.sig");
    let (im, _) = analyze_usage(&er);
    let mm = im.get(&sig).unwrap();
    assert_eq!(mm.ctor_masks, vec![vec![false, true]]);
    assert_eq!(mm.param_mask, vec![false, true]);

    let sig_t = |args: Vec<BoxType>| {
        args.into_iter()
            .fold(BoxType::TInd(sig.clone()), BoxType::app)
    };
    let before = er.inductive(&sig).unwrap();
    assert_eq!(
        before.ctor_type(0).unwrap(),
        arr(
            tvar(0),
            arr(BoxType::TBox, sig_t(vec![tvar(0), BoxType::TBox]))
        )
    );
    // Constructor argument removed, parameters untouched.
    let mut only_args = im.clone();
    only_args.0.get_mut(&sig).unwrap().param_mask = vec![false, false];
    assert_eq!(
        dearg_mib(&only_args, before).ctor_type(0).unwrap(),
        arr(tvar(0), sig_t(vec![tvar(0), BoxType::TBox]))
    );
    let after = dearg_mib(&im, before);
    assert_eq!(
        after.ctor_type(0).unwrap(),
        arr(tvar(0), sig_t(vec![tvar(0)]))
    );
    assert_eq!(after.npars, 0);
    assert_eq!(after.type_vars.len(), 1);
}

#[test]
fn all_logical_constant_keeps_one_argument() {
    let env = load(&[]);
    let er = erase_env(&env, &[kn("Coq.Init.Logic.False_rect")]).unwrap();
    let (_, cm) = analyze_usage(&er);
    assert_eq!(
        cm.get(&kn("Coq.Init.Logic.False_rect")).unwrap(),
        &vec![false, true]
    );
    let (_, cm) =
        boxtract_core::dearg::analyze_usage_with(&er, AnalysisOptions { keep_one: false });
    assert_eq!(
        cm.get(&kn("Coq.Init.Logic.False_rect")).unwrap(),
        &vec![true, true]
    );
}

#[test]
fn square_after_dearging() {
    let env = load(&["lists.src"]);
    let er = erase_env(&env, &[kn("Examples.Lists.square")]).unwrap();
    let out = run_dearg(&er, None, 1, AnalysisOptions::default())
        .unwrap()
        .env;
    let sq = out.constant(&kn("Examples.Lists.square")).unwrap();
    assert_eq!(
        display_term(&out, sq.body.as_ref().unwrap()),
        "fun xs => Coq.Lists.List.map (fun x => Coq.Init.Nat.mul x x) xs"
    );
    let map = out.constant(&kn("Coq.Lists.List.map")).unwrap();
    assert_eq!(map.type_vars, vec!["A".to_string(), "B".to_string()]);
    assert_eq!(
        map.ty,
        arr(
            arr(tvar(0), tvar(1)),
            arr(list_of(tvar(0)), list_of(tvar(1)))
        )
    );
}

#[test]
fn list_rect_signature_after_dearging() {
    let env = load(&[]);
    let er = erase_env(&env, &[kn("Coq.Lists.List.list_rect")]).unwrap();
    let out = run_dearg(&er, None, 1, AnalysisOptions::default())
        .unwrap()
        .env;
    let c = out.constant(&kn("Coq.Lists.List.list_rect")).unwrap();
    assert_eq!(c.type_vars, vec!["A".to_string(), "P".to_string()]);
    let step = arr(tvar(0), arr(list_of(tvar(0)), arr(tvar(1), tvar(1))));
    assert_eq!(
        c.ty,
        arr(tvar(1), arr(step, arr(list_of(tvar(0)), tvar(1))))
    );
}

#[test]
fn fixpoint_parameters_are_removed_from_recursive_calls() {
    let env = load(&[]);
    let er = erase_env(&env, &[kn("Coq.Lists.List.rev")]).unwrap();
    let (_, cm) = analyze_usage(&er);
    assert_eq!(
        cm.get(&kn("Coq.Lists.List.app")).unwrap(),
        &vec![true, false, false]
    );
    let out = run_dearg(&er, None, 1, AnalysisOptions::default())
        .unwrap()
        .env;
    let app = out.constant(&kn("Coq.Lists.List.app")).unwrap();
    let body = app.body.as_ref().unwrap();
    assert_eq!(
        display_term(&out, body),
        "fix app := fun l m => match l with | nil => m | cons a l1 => cons a (app l1 m) end"
    );
    assert!(matches!(
        body,
        BoxTerm::Fix {
            struct_index: 0,
            ..
        }
    ));
}

#[test]
fn dearg_preserves_results() {
    let env = load(&["lists.src", "foo.src"]);
    let cases = [
        (
            "Examples.Lists.sum_nat",
            Term::app(
                Term::konst(&kn("Examples.Lists.sum_nat")),
                nat_list(&[1, 2, 3]),
            ),
        ),
        (
            "Examples.Lists.square",
            Term::app(Term::konst(&kn("Examples.Lists.square")), nat_list(&[2, 3])),
        ),
        (
            "Coq.Lists.List.rev",
            Term::app(
                Term::app(
                    Term::konst(&kn("Coq.Lists.List.rev")),
                    Term::ind(&kn("Coq.Init.Datatypes.nat")),
                ),
                nat_list(&[1, 2, 3]),
            ),
        ),
    ];
    for (root, t) in cases {
        let er = erase_env(&env, &[kn(root)]).unwrap();
        let bt = erase_term(&env, &Ctx::new(), &t).unwrap();
        let (im, cm) = analyze_usage(&er);
        assert!(is_expanded(&im, &cm, &bt), "{root}");
        let post_env = dearg_env(&im, &cm, &er).unwrap();
        let post_t = dearg(&im, &cm, &bt).unwrap();
        let pre = eval_box(&er, &bt, 1_000_000).unwrap();
        let post = eval_box(&post_env, &post_t, 1_000_000).unwrap();
        assert!(box_value_eq(&dearg_value(&im, &pre), &post), "{root}");
    }
}

#[test]
fn dearg_is_idempotent() {
    let env = load(&["lists.src", "foo.src", "aliases.src"]);
    let roots: Vec<_> = env.decls().iter().map(|d| d.name().clone()).collect();
    let er = erase_env(&env, &roots).unwrap();
    let once = run_dearg(&er, None, 1, AnalysisOptions::default())
        .unwrap()
        .env;
    let twice = run_dearg(&once, None, 1, AnalysisOptions::default()).unwrap();
    assert_eq!(once, twice.env);
    for m in twice.rounds[0].1 .0.values() {
        assert!(m.iter().all(|b| !b));
    }
}
