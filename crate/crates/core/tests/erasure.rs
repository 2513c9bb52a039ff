use boxtract_core::ast::{mk_app, GlobalEnv, Kername, Term};
use boxtract_core::boxir::{
    box_value_eq, display_term, eval_box, parse_env, write_env, BoxTerm, BoxValue,
};
use boxtract_core::check::{Checker, Ctx};
use boxtract_core::erasure::{
    erase_env, erase_env_annotated, erase_term, erase_term_annotated, erase_type, erase_type_app,
    BoxType, ECtx, ErasedDecl,
};
use boxtract_core::eval::{eval_core, CoreValue};
use boxtract_core::surface::{parse_programs, SourceFile};

fn fixture(name: &str) -> SourceFile {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    SourceFile::read(path.as_ref()).unwrap()
}

fn load(files: &[&str]) -> GlobalEnv {
    let mut srcs = vec![fixture("prelude.src")];
    srcs.extend(files.iter().map(|f| fixture(f)));
    parse_programs(&srcs).unwrap_or_else(|e| panic!("{e}"))
}

fn kn(s: &str) -> Kername {
    s.parse().unwrap()
}

fn nat() -> BoxType {
    BoxType::TInd(kn("Coq.Init.Datatypes.nat"))
}

fn list_of(t: BoxType) -> BoxType {
    BoxType::app(BoxType::TInd(kn("Coq.Init.Datatypes.list")), t)
}

fn sig() -> BoxType {
    BoxType::TInd(kn("Coq.Init.Specif.sig"))
}

fn arr(a: BoxType, b: BoxType) -> BoxType {
    BoxType::arr(a, b)
}

fn numeral(n: usize) -> Term {
    let nat = kn("Coq.Init.Datatypes.nat");
    (0..n).fold(Term::ctor(&nat, 0), |acc, _| {
        Term::app(Term::ctor(&nat, 1), acc)
    })
}

fn nat_list(xs: &[usize]) -> Term {
    let list = kn("Coq.Init.Datatypes.list");
    let natt = Term::ind(&kn("Coq.Init.Datatypes.nat"));
    xs.iter()
        .rev()
        .fold(Term::app(Term::ctor(&list, 0), natt.clone()), |acc, &x| {
            mk_app(Term::ctor(&list, 1), [natt.clone(), numeral(x), acc])
        })
}

fn box_numeral(v: &BoxValue) -> Option<usize> {
    match v {
        BoxValue::ConstructVal { ctor: 0, args, .. } if args.is_empty() => Some(0),
        BoxValue::ConstructVal { ctor: 1, args, .. } if args.len() == 1 => {
            box_numeral(&args[0]).map(|n| n + 1)
        }
        _ => None,
    }
}

fn core_numeral(v: &CoreValue) -> Option<usize> {
    match v {
        CoreValue::Construct { k: 0, args, .. } if args.is_empty() => Some(0),
        CoreValue::Construct { k: 1, args, .. } if args.len() == 1 => {
            core_numeral(&args[0]).map(|n| n + 1)
        }
        _ => None,
    }
}

#[test]
fn erase_simple_types() {
    let env = load(&[]);
    let natt = Term::ind(&kn("Coq.Init.Datatypes.nat"));
    let (vs, t) = erase_type(
        &env,
        &Ctx::new(),
        &ECtx::new(),
        &Term::arrow(natt.clone(), natt),
        Some(0),
    )
    .unwrap();
    assert!(vs.is_empty());
    assert_eq!(t, arr(nat(), nat()));

    let id_ty = Term::pi("A", Term::type_(0), Term::arrow(Term::rel(0), Term::rel(0)));
    let (vs, t) = erase_type(&env, &Ctx::new(), &ECtx::new(), &id_ty, Some(0)).unwrap();
    assert_eq!(vs, vec!["A".to_string()]);
    assert_eq!(
        t,
        arr(BoxType::TBox, arr(BoxType::TVar(0), BoxType::TVar(0)))
    );
}

#[test]
fn erase_type_app_rules() {
    let env = load(&[]);
    let ck = Checker::new(&env);
    let natt = Term::ind(&kn("Coq.Init.Datatypes.nat"));
    let eq = BoxType::TInd(kn("Coq.Init.Logic.eq"));
    let t = erase_type_app(
        &ck,
        &Ctx::new(),
        &ECtx::new(),
        &[natt.clone(), numeral(0), numeral(0)],
        eq.clone(),
    )
    .unwrap();
    assert_eq!(
        t,
        BoxType::app(
            BoxType::app(BoxType::app(eq, nat()), BoxType::TAny),
            BoxType::TAny
        )
    );

    // sig nat (fun n => lt O n)
    let pred = Term::lam(
        "n",
        natt.clone(),
        mk_app(
            Term::konst(&kn("Coq.Init.Peano.lt")),
            [numeral(0), Term::rel(0)],
        ),
    );
    let t = erase_type_app(
        &ck,
        &Ctx::new(),
        &ECtx::new(),
        &[natt.clone(), pred.clone()],
        sig(),
    )
    .unwrap();
    assert_eq!(t, BoxType::app(BoxType::app(sig(), nat()), BoxType::TBox));
    let full = mk_app(Term::ind(&kn("Coq.Init.Specif.sig")), [natt, pred]);
    let (_, t2) = erase_type(&env, &Ctx::new(), &ECtx::new(), &full, None).unwrap();
    assert_eq!(t2, t);

    let l = erase_type(
        &env,
        &Ctx::new(),
        &ECtx::new(),
        &Term::app(
            Term::ind(&kn("Coq.Init.Datatypes.list")),
            Term::ind(&kn("Coq.Init.Datatypes.nat")),
        ),
        None,
    )
    .unwrap()
    .1;
    assert_eq!(l, list_of(nat()));
}

#[test]
fn type_aliases() {
    let env = load(&["aliases.src"]);
    let roots: Vec<Kername> = ["Arrow", "vec", "T", "L"]
        .iter()
        .map(|n| kn(&format!("Examples.Aliases.{n}")))
        .collect();
    let er = erase_env(&env, &roots).unwrap();
    let alias = |n: &str| {
        er.alias(&kn(&format!("Examples.Aliases.{n}")))
            .unwrap()
            .clone()
    };
    let a = alias("Arrow");
    assert_eq!(a.type_vars, vec!["A", "B"]);
    assert_eq!(a.ty, arr(BoxType::TVar(0), BoxType::TVar(1)));
    let v = alias("vec");
    assert_eq!(v.type_vars, vec!["A", "n"]);
    assert_eq!(
        v.ty,
        BoxType::app(
            BoxType::app(sig(), list_of(BoxType::TVar(0))),
            BoxType::TBox
        )
    );
    let t = alias("T");
    assert!(t.type_vars.is_empty());
    assert_eq!(t.ty, nat());
    let l = alias("L");
    assert_eq!(l.type_vars, vec!["a"]);
    assert_eq!(l.ty, list_of(BoxType::TVar(0)));
}

#[test]
fn arrow_root_gives_single_alias() {
    let env = load(&["aliases.src"]);
    let er = erase_env(&env, &[kn("Examples.Aliases.Arrow")]).unwrap();
    assert_eq!(er.len(), 1);
    assert!(matches!(er.decls()[0], ErasedDecl::TypeAlias(_)));
    assert!(erase_env(&env, &[]).unwrap().is_empty());
}

#[test]
fn sum_nat_reachability() {
    let env = load(&["lists.src"]);
    let er = erase_env(&env, &[kn("Examples.Lists.sum_nat")]).unwrap();
    let mut names: Vec<String> = er.decls().iter().map(|d| d.name().to_string()).collect();
    names.sort();
    assert_eq!(
        names,
        vec![
            "Coq.Init.Datatypes.list",
            "Coq.Init.Datatypes.nat",
            "Coq.Init.Nat.add",
            "Coq.Lists.List.fold_right",
            "Examples.Lists.sum_nat",
        ]
    );
}

#[test]
fn erased_bodies_display() {
    let env = load(&["lists.src"]);
    let roots = [kn("Examples.Lists.sum_nat"), kn("Examples.Lists.square")];
    let er = erase_env(&env, &roots).unwrap();
    let body = |k: &Kername| display_term(&er, er.constant(k).unwrap().body.as_ref().unwrap());
    assert_eq!(
        body(&roots[0]),
        "fun xs => Coq.Lists.List.fold_right ∎ ∎ Coq.Init.Nat.add O xs"
    );
    assert_eq!(
        body(&roots[1]),
        "fun xs => Coq.Lists.List.map ∎ ∎ (fun x => Coq.Init.Nat.mul x x) xs"
    );
}

#[test]
fn list_rect_signature_before_adjustment() {
    let env = load(&[]);
    let er = erase_env(&env, &[kn("Coq.Lists.List.list_rect")]).unwrap();
    let c = er.constant(&kn("Coq.Lists.List.list_rect")).unwrap();
    assert_eq!(c.type_vars, vec!["A", "P"]);
    let (v0, v1) = (BoxType::TVar(0), BoxType::TVar(1));
    let step = arr(
        v0.clone(),
        arr(list_of(v0.clone()), arr(v1.clone(), v1.clone())),
    );
    assert_eq!(
        c.ty,
        arr(
            BoxType::TBox,
            arr(
                BoxType::TBox,
                arr(v1.clone(), arr(step, arr(list_of(v0), v1)))
            )
        )
    );
}

#[test]
fn proofs_erase_to_box() {
    let env = load(&[]);
    let natt = Term::ind(&kn("Coq.Init.Datatypes.nat"));
    let refl = mk_app(Term::ctor(&kn("Coq.Init.Logic.eq"), 0), [natt, numeral(0)]);
    assert_eq!(erase_term(&env, &Ctx::new(), &refl).unwrap(), BoxTerm::Box);
}

#[test]
fn erasure_preserves_sum_nat_result() {
    let env = load(&["lists.src"]);
    let k = kn("Examples.Lists.sum_nat");
    let t = Term::app(Term::konst(&k), nat_list(&[1, 2]));
    let core = eval_core(&env, &t, 1_000_000).unwrap();
    assert_eq!(core_numeral(&core), Some(3));
    let er = erase_env(&env, &[k]).unwrap();
    let bt = erase_term(&env, &Ctx::new(), &t).unwrap();
    let v = eval_box(&er, &bt, 1_000_000).unwrap();
    assert_eq!(box_numeral(&v), Some(3));
}

#[test]
fn annotations_mirror_terms() {
    let env = load(&[]);
    let natt = Term::ind(&kn("Coq.Init.Datatypes.nat"));
    let (t, a) = erase_term_annotated(&env, &Term::lam("x", natt.clone(), Term::rel(0))).unwrap();
    assert!(a.shape_matches(&t));
    assert_eq!(a.ty, Some(arr(nat(), nat())));

    // exist nat P 1 proof: the head annotation is exist's erased type.
    let p = Term::lam(
        "n",
        natt.clone(),
        mk_app(
            Term::konst(&kn("Coq.Init.Peano.lt")),
            [numeral(0), Term::rel(0)],
        ),
    );
    let proof = Term::app(Term::konst(&kn("Coq.Init.Peano.lt_O_S")), numeral(0));
    let ex = mk_app(
        Term::ctor(&kn("Coq.Init.Specif.sig"), 0),
        [natt, p, numeral(1), proof],
    );
    let (t, a) = erase_term_annotated(&env, &ex).unwrap();
    assert!(a.shape_matches(&t));
    let er = erase_env(&env, &[kn("Coq.Init.Specif.sig")]).unwrap();
    assert_eq!(display_term(&er, &t), "exist ∎ ∎ (nat#1 nat#0) ∎");
    let mut head = &a;
    while !head.children.is_empty() {
        head = &head.children[0];
    }
    assert_eq!(
        head.ty,
        Some(arr(
            BoxType::TBox,
            arr(
                BoxType::TBox,
                arr(
                    BoxType::TAny,
                    arr(
                        BoxType::TBox,
                        BoxType::app(BoxType::app(sig(), BoxType::TAny), BoxType::TBox)
                    )
                )
            )
        ))
    );
    // The fully applied node carries the instantiated type.
    assert_eq!(
        a.ty,
        Some(BoxType::app(BoxType::app(sig(), nat()), BoxType::TBox))
    );
}

#[test]
fn annotated_env_matches_plain_env() {
    let env = load(&["lists.src", "aliases.src"]);
    let roots = [kn("Examples.Lists.square"), kn("Examples.Aliases.vec_head")];
    let plain = erase_env(&env, &roots).unwrap();
    let (annotated, trace) = erase_env_annotated(&env, &roots).unwrap();
    assert_eq!(plain, annotated);
    let ann = boxtract_core::erasure::annotate(&annotated, trace).unwrap();
    assert!(ann.get(&kn("Examples.Lists.square")).is_some());
}

#[test]
fn erased_env_sexp_round_trip() {
    let env = load(&["lists.src", "aliases.src"]);
    let roots: Vec<Kername> = env.decls().iter().map(|d| d.name().clone()).collect();
    let er = erase_env(&env, &roots).unwrap();
    let text = write_env(&er);
    assert_eq!(parse_env(&text).unwrap(), er);
}

#[test]
fn box_applied_is_box() {
    let t = BoxTerm::app(
        BoxTerm::Box,
        BoxTerm::Construct(kn("Coq.Init.Datatypes.nat"), 0),
    );
    let env = Default::default();
    let v = eval_box(&env, &t, 100).unwrap();
    assert!(box_value_eq(&v, &BoxValue::BoxVal));
}
