use boxtract_cli::difftest::{base_env, program_source};
use boxtract_cli::gen::{shrink, shrink_candidates, Generator, Kind, Node, ALL_TYS};
use boxtract_core::surface::{extend_program, SourceFile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn programs(seed: u64, n: usize) -> Vec<Node> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| Generator::new(&mut rng).gen(ALL_TYS[i % ALL_TYS.len()], 4))
        .collect()
}

fn checks(base: &boxtract_core::ast::GlobalEnv, n: &Node) -> Result<(), String> {
    extend_program(
        base.clone(),
        &[SourceFile::new("gen.src", program_source(n))],
    )
    .map(|_| ())
    .map_err(|e| format!("{e}\n{}", n.source()))
}

fn contains_kind(n: &Node, k: &Kind) -> bool {
    &n.kind == k || n.kids.iter().any(|c| contains_kind(c, k))
}

fn in_thread<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(64 << 20)
        .spawn(f)
        .unwrap()
        .join()
        .unwrap()
}

#[test]
fn same_seed_same_programs() {
    assert_eq!(programs(11, 30), programs(11, 30));
    assert_ne!(programs(11, 30), programs(12, 30));
}

#[test]
fn generated_programs_type_check() {
    in_thread(|| {
        let base = base_env();
        for n in programs(5, 100) {
            checks(&base, &n).unwrap();
        }
    });
}

#[test]
fn shrink_candidates_are_smaller_and_type_check() {
    in_thread(|| {
        let base = base_env();
        for n in programs(9, 15) {
            for c in shrink_candidates(&n) {
                assert!(c.size() < n.size());
                assert_eq!(c.ty, n.ty);
                checks(&base, &c).unwrap();
            }
        }
    });
}

#[test]
fn shrinking_reaches_a_minimal_witness() {
    let n = programs(2, 40)
        .into_iter()
        .find(|n| {
            n.ty == boxtract_cli::gen::Ty::Nat && contains_kind(n, &Kind::Succ) && n.size() > 4
        })
        .expect("a nat program with a successor");
    let small = shrink(n.clone(), |c| contains_kind(c, &Kind::Succ));
    assert!(contains_kind(&small, &Kind::Succ));
    assert_eq!(small.source(), "(S O)");
}
