#![allow(dead_code)]

use boxtract_core::ast::{mk_app, GlobalEnv, Kername, Term};
use boxtract_core::boxir::BoxValue;
use boxtract_core::erasure::BoxType;
use boxtract_core::surface::{parse_programs, SourceFile};

pub fn fixture(name: &str) -> SourceFile {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    SourceFile::read(path.as_ref()).unwrap()
}

pub fn load(files: &[&str]) -> GlobalEnv {
    let mut srcs = vec![fixture("prelude.src")];
    srcs.extend(files.iter().map(|f| fixture(f)));
    parse_programs(&srcs).unwrap_or_else(|e| panic!("{e}"))
}

pub fn kn(s: &str) -> Kername {
    s.parse().unwrap()
}

pub fn nat() -> BoxType {
    BoxType::TInd(kn("Coq.Init.Datatypes.nat"))
}

pub fn list_of(t: BoxType) -> BoxType {
    BoxType::app(BoxType::TInd(kn("Coq.Init.Datatypes.list")), t)
}

pub fn arr(a: BoxType, b: BoxType) -> BoxType {
    BoxType::arr(a, b)
}

pub fn numeral(n: usize) -> Term {
    let nat = kn("Coq.Init.Datatypes.nat");
    (0..n).fold(Term::ctor(&nat, 0), |acc, _| {
        Term::app(Term::ctor(&nat, 1), acc)
    })
}

pub fn nat_list(xs: &[usize]) -> Term {
    let list = kn("Coq.Init.Datatypes.list");
    let natt = Term::ind(&kn("Coq.Init.Datatypes.nat"));
    xs.iter()
        .rev()
        .fold(Term::app(Term::ctor(&list, 0), natt.clone()), |acc, &x| {
            mk_app(Term::ctor(&list, 1), [natt.clone(), numeral(x), acc])
        })
}

pub fn box_numeral(v: &BoxValue) -> Option<usize> {
    match v {
        BoxValue::ConstructVal { ctor: 0, args, .. } if args.is_empty() => Some(0),
        BoxValue::ConstructVal { ctor: 1, args, .. } if args.len() == 1 => {
            box_numeral(&args[0]).map(|n| n + 1)
        }
        _ => None,
    }
}

pub fn core_numeral(v: &boxtract_core::eval::CoreValue) -> Option<usize> {
    use boxtract_core::eval::CoreValue;
    match v {
        CoreValue::Construct { k: 0, args, .. } if args.is_empty() => Some(0),
        CoreValue::Construct { k: 1, args, .. } if args.len() == 1 => {
            core_numeral(&args[0]).map(|n| n + 1)
        }
        _ => None,
    }
}
