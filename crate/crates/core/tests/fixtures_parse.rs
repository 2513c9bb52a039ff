use boxtract_core::surface::parse_str;

#[test]
fn prelude_parses() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/prelude.src"
    ))
    .unwrap();
    let env = parse_str(&text).unwrap_or_else(|e| panic!("{e}"));
    assert!(env.len() > 30);
}

#[test]
fn prelude_round_trips() {
    use boxtract_core::ast::{alpha_eq, Decl};
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/prelude.src"
    ))
    .unwrap();
    let env = parse_str(&text).unwrap();
    let printed = boxtract_core::surface::print_program(&env);
    let env2 = parse_str(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
    for (a, b) in env.decls().iter().zip(env2.decls()) {
        assert_eq!(a.name(), b.name());
        match (a, b) {
            (Decl::Constant(x), Decl::Constant(y)) => {
                assert!(alpha_eq(&x.ty, &y.ty), "{}", x.name);
                match (&x.body, &y.body) {
                    (Some(p), Some(q)) => assert!(alpha_eq(p, q), "{}", x.name),
                    (None, None) => {}
                    _ => panic!("{}", x.name),
                }
            }
            (Decl::Inductive(x), Decl::Inductive(y)) => {
                assert!(alpha_eq(&x.arity, &y.arity));
                for (c, d) in x.ctors.iter().zip(&y.ctors) {
                    assert_eq!(c.args.len(), d.args.len());
                }
            }
            _ => panic!("kind mismatch"),
        }
    }
}
