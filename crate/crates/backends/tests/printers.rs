mod common;

use boxtract_backends::*;
use boxtract_core::boxir::parse_env;
use boxtract_core::erasure::{Annot, AnnotatedEnv};
use common::*;

fn bare(target: Target) -> BackendConfig {
    let mut cfg = config(target);
    cfg.prelude.clear();
    cfg
}

const KEYWORDS: &str = "module T
def type (x : nat) : nat := (fun (x : nat) => S x) (S x)
def Pick (b : bool) : nat := match b with | true => O | false => S O end
";

#[test]
fn sanitized_names_per_target() {
    let none = RemapTable::default();
    let ml = extract_src(KEYWORDS, &["T.type", "T.Pick"], &bare(Target::Ml), &none).text;
    assert!(ml.contains("type nat = O | S of (nat)"), "{ml}");
    assert!(
        ml.contains("let type_ (x : nat) =\n  (fun (x2 : nat) -> S (x2)) (S (x))"),
        "{ml}"
    );
    assert!(ml.contains("let pick (b : bool)"), "{ml}");

    let elm = extract_src(KEYWORDS, &["T.type", "T.Pick"], &bare(Target::Elm), &none).text;
    assert!(elm.contains("type Nat\n  = O\n  | S Nat"), "{elm}");
    assert!(elm.contains("type_ : Nat -> Nat"), "{elm}");

    let rs = extract_src(KEYWORDS, &["T.type", "T.Pick"], &bare(Target::Rust), &none).text;
    assert!(rs.contains("pub enum nat<'a>"), "{rs}");
    assert!(rs.contains("fn type_(&'a self, x: &'a nat<'a>)"), "{rs}");
}

#[test]
fn renaming_is_exposed() {
    let env = parse_env(
        "(inductive Coq.Init.Datatypes.nat (npars 0) (prop false) (tvars) (ctor O) (ctor S (arg n (ind Coq.Init.Datatypes.nat))))",
    )
    .unwrap();
    let k = kn("Coq.Init.Datatypes.nat");
    assert_eq!(sanitize_names(&env, Target::Ml).ty(&k), "nat");
    assert_eq!(sanitize_names(&env, Target::Elm).ty(&k), "Nat");
    assert_eq!(sanitize_names(&env, Target::Rust).ty(&k), "nat");
    assert_eq!(sanitize_names(&env, Target::Ml).ctor(&k, 1), "S");
}

#[test]
fn remap_table_json_round_trip() {
    let text = std::fs::read_to_string(fixture_path("counter.remap.json")).unwrap();
    let t = RemapTable::from_json(&text).unwrap();
    assert_eq!(t.constant(&kn("Examples.Counter.Zadd")), Some("addInt"));
    let sig = t.inductive(&kn("Coq.Init.Specif.sig")).unwrap();
    assert_eq!(sig.name, "sig_");
    assert_eq!(sig.ctors, vec!["exist_".to_string()]);
    assert_eq!(RemapTable::from_json(&t.to_json()).unwrap(), t);
    assert!(t.hides(&kn("Coq.Init.Datatypes.prod")));
    assert!(!t.hides(&kn("Examples.Counter.counter")));
}

#[test]
fn remapped_declarations_are_not_printed() {
    let mut remap = RemapTable::default();
    remap.inductives.insert(
        "Coq.Init.Datatypes.nat".into(),
        IndRemap {
            name: "int".into(),
            ctors: vec!["0".into(), "succ".into()],
        },
    );
    let ml = extract_src(KEYWORDS, &["T.Pick"], &bare(Target::Ml), &remap).text;
    assert!(!ml.contains("type nat"), "{ml}");
    assert!(ml.contains("0"), "{ml}");
}

#[test]
fn single_field_record_is_an_alias() {
    let none = RemapTable::default();
    let roots = ["Examples.Record.get_x", "Examples.Record.mk_a"];
    let ml = extract(&["record.src"], &roots, &bare(Target::Ml), &none).text;
    assert!(ml.contains("type a = nat"), "{ml}");
    assert!(ml.contains("let get_x (n : a) =\n  n"), "{ml}");
    assert!(ml.contains("let mk_a (k : nat) =\n  S (k)"), "{ml}");
}

#[test]
fn sig_without_remap_is_an_alias() {
    let none = RemapTable::default();
    let ml = extract(
        &[],
        &["Coq.Init.Specif.proj1_sig"],
        &bare(Target::Ml),
        &none,
    )
    .text;
    assert!(ml.contains("type 'a sig_ = 'a"), "{ml}");
}

fn count(hay: &str, needle: &str) -> usize {
    hay.matches(needle).count()
}

#[test]
fn every_empty_match_prints_a_failure() {
    let none = RemapTable::default();
    let src = "module T\ndef absurd (h : False) : nat := False_rect nat h\n";
    let ml = extract_src(src, &["T.absurd"], &bare(Target::Ml), &none).text;
    assert_eq!(count(&ml, "failwith \"Absurd case!\""), 1, "{ml}");
    let elm = extract_src(src, &["T.absurd"], &bare(Target::Elm), &none).text;
    assert_eq!(count(&elm, "false_rec : () -> a"), 1, "{elm}");
    // One call in the header, one for the empty match.
    assert_eq!(count(&elm, "false_rec ()"), 2, "{elm}");
    let rs = extract_src(src, &["T.absurd"], &bare(Target::Rust), &none).text;
    assert_eq!(count(&rs, "panic!(\"Absurd case!\")"), 1, "{rs}");
}

#[test]
fn no_empty_match_no_header() {
    let none = RemapTable::default();
    let elm = extract(
        &["lists.src"],
        &["Examples.Lists.sum_nat"],
        &bare(Target::Elm),
        &none,
    )
    .text;
    assert!(!elm.contains("false_rec"), "{elm}");
}

#[test]
fn multi_argument_recursion_is_rejected_by_ml() {
    let none = RemapTable::default();
    let src = "module T\ndef twice (n : nat) : nat := add n n\n";
    let err = try_extract_src(src, &["T.twice"], &bare(Target::Ml), &none).unwrap_err();
    assert_eq!(err, BackendError::UnsupportedRecursion("add".into(), 2));
    assert!(try_extract_src(src, &["T.twice"], &bare(Target::Elm), &none).is_ok());
}

#[test]
fn missing_parameter_type_is_reported() {
    let env = parse_env(
        "(inductive Coq.Init.Datatypes.nat (npars 0) (prop false) (tvars) (ctor O) (ctor S (arg n (ind Coq.Init.Datatypes.nat))))
         (constant T.id (tvars) (arr (ind Coq.Init.Datatypes.nat) (ind Coq.Init.Datatypes.nat)) (lambda x (app (lambda y (rel 0)) (rel 0))))",
    )
    .unwrap();
    let err = print(
        &env,
        &AnnotatedEnv::default(),
        &bare(Target::Ml),
        &RemapTable::default(),
    )
    .unwrap_err();
    assert!(matches!(err, BackendError::MissingAnnotation(_)), "{err}");
}

#[test]
fn partial_constructor_is_reported() {
    let env = parse_env(
        "(inductive Coq.Init.Datatypes.nat (npars 0) (prop false) (tvars) (ctor O) (ctor S (arg n (ind Coq.Init.Datatypes.nat))))
         (constant T.succ (tvars) (arr (ind Coq.Init.Datatypes.nat) (ind Coq.Init.Datatypes.nat)) (construct Coq.Init.Datatypes.nat 1))",
    )
    .unwrap();
    let mut ann = AnnotatedEnv::default();
    ann.bodies.insert(kn("T.succ"), Annot::leaf(None));
    let err = print(&env, &ann, &bare(Target::Ml), &RemapTable::default()).unwrap_err();
    assert_eq!(err, BackendError::NotFullyApplied("S".into()));
}

#[test]
fn printing_is_deterministic() {
    let none = RemapTable::default();
    let cases: [(&[&str], &[&str]); 4] = [
        (
            &["lists.src"],
            &["Examples.Lists.sum_nat", "Examples.Lists.square"],
        ),
        (
            &["safe_head.src"],
            &["Examples.SafeHead.head_of_repeat_plus_one"],
        ),
        (&["record.src"], &["Examples.Record.get_x"]),
        (&["ack.src"], &["Examples.Ack.ack"]),
    ];
    for t in [Target::Elm, Target::Rust] {
        for (files, roots) in cases {
            let a = extract(files, roots, &config(t), &none);
            let b = extract(files, roots, &config(t), &none);
            assert_eq!(a, b);
        }
    }
}

#[test]
fn cameligo_prelude_is_the_default() {
    let cfg = config(Target::Ml);
    assert!(cfg
        .prelude
        .contains("[@inline] let addInt (i : int) (j : int) = i + j"));
    let none = RemapTable::default();
    let ml = extract(&["record.src"], &["Examples.Record.get_x"], &cfg, &none).text;
    assert!(ml.starts_with("[@inline] let addInt"));
}
