use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn boxtract(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxtract"))
        .args(args)
        .output()
        .expect("run boxtract")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn check_prints_the_input_declarations() {
    let o = boxtract(&["check", &path("foo.src")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("def foo"), "{out}");
    assert!(!out.contains("def negb"), "{out}");
}

#[test]
fn erase_prints_lambda_box() {
    let o = boxtract(&["erase", &path("lists.src"), "--root=sum_nat", "--emit=ir"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("(constant Examples.Lists.sum_nat"));
}

#[test]
fn optimize_emits_masks() {
    let o = boxtract(&["optimize", &path("foo.src"), "--emit=masks"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("Examples.Foo.foo"), "{}", stdout(&o));
}

#[test]
fn exit_code_for_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.src", "module M\n\ndef x : nat := (\n");
    let o = boxtract(&["check", &f]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn exit_code_for_type_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.src", "module M\n\ndef x : nat := true\n");
    let o = boxtract(&["check", &f]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn exit_code_for_bad_ir() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.ir", "(constant");
    let o = boxtract(&["extract", &f, "--target=elm"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn exit_code_for_transform_errors() {
    let o = boxtract(&[
        "transform",
        &path("counter.src"),
        "--passes=inline",
        "--inline=Zadd",
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn exit_code_for_unknown_roots() {
    let o = boxtract(&["erase", &path("lists.src"), "--root=nonexistent"]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn exit_code_for_dearg_errors() {
    let dir = tempfile::tempdir().unwrap();
    let nat = "(ind Coq.Init.Datatypes.nat)";
    let ir = format!(
        "(inductive Coq.Init.Datatypes.nat (npars 0) (prop false) (tvars) (ctor O) (ctor S (arg _ {nat})))\n\
         (constant T.foo (tvars) (arr {nat} (arr {nat} {nat})) (lambda n (lambda m (rel 1))))\n\
         (constant T.use (tvars) (arr {nat} {nat}) (app (const T.foo) (construct Coq.Init.Datatypes.nat 0)))\n"
    );
    let f = write(dir.path(), "partial.ir", &ir);
    let o = boxtract(&["optimize", &f]);
    assert_eq!(code(&o), 5, "{}", stderr(&o));
}

#[test]
fn exit_code_for_backend_errors() {
    // CameLIGO has no recursive functions of several arguments.
    let o = boxtract(&[
        "extract",
        &path("lists.src"),
        "--root=Coq.Init.Nat.add",
        "--target=ml",
    ]);
    assert_eq!(code(&o), 6, "{}", stderr(&o));
}

#[test]
fn exit_code_for_io_and_config_errors() {
    let o = boxtract(&["check", "/nonexistent/input.src"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let o = boxtract(&["extract", &path("foo.src")]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let dir = tempfile::tempdir().unwrap();
    let remap = write(dir.path(), "remap.json", "{ not json");
    let o = boxtract(&[
        "extract",
        &path("foo.src"),
        "--target=elm",
        "--remap",
        &remap,
    ]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
}

#[test]
fn extraction_is_deterministic() {
    for target in ["ml", "elm", "rust"] {
        let args = ["extract", &path("record.src"), "--target", target];
        let a = boxtract(&args);
        let b = boxtract(&args);
        assert_eq!(code(&a), 0, "{target}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{target}");
    }
}

#[test]
fn extraction_resumes_from_an_ir_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for target in ["elm", "rust"] {
        let o = boxtract(&["optimize", &path("safe_head.src"), "--emit=ir", "-o", out]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let ir = dir.path().join("safe_head.ir");
        assert!(ir.exists());
        let staged = boxtract(&["extract", ir.to_str().unwrap(), "--target", target]);
        assert_eq!(code(&staged), 0, "{}", stderr(&staged));
        let direct = boxtract(&["extract", &path("safe_head.src"), "--target", target]);
        assert_eq!(stdout(&staged), stdout(&direct), "{target}");
    }
}

#[test]
fn out_dir_gets_one_file_per_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = boxtract(&[
        "extract",
        &path("foo.src"),
        "--target=elm",
        "--emit=core,ir,masks,types,code",
        "-o",
        out,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for ext in ["core.src", "ir", "masks", "types", "elm"] {
        assert!(dir.path().join(format!("foo.{ext}")).exists(), "{ext}");
    }
}

#[test]
fn counter_entrypoint_wraps_the_contract() {
    let o = boxtract(&[
        "extract",
        &path("counter.src"),
        "--root=counter",
        "--target=cameligo",
        "--ml-prefix",
        "--remap",
        &path("counter.remap.json"),
        "--backend-prelude",
        &path("counter.prelude.mligo"),
        "--entrypoint=counter",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(
        out.contains("let coq_counter (msg : coq_msg) (st : storage)"),
        "{out}"
    );
    assert!(out.contains("let main"), "{out}");
    assert!(out.contains("failwith"), "{out}");
}

#[test]
fn difftest_with_no_programs_reports_nothing() {
    let o = boxtract(&["difftest", "--count=0"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(
        stdout(&o).starts_with("0 programs, 0 skipped"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn difftest_passes_on_a_small_run() {
    let o = boxtract(&["difftest", "--count=20", "--seed=3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failures"));
}

#[test]
fn difftest_catches_the_keep_one_fault_and_shrinks_it() {
    let o = boxtract(&["difftest", "--count=60", "--inject-fault=skip-keep-one"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("False_rect"), "{out}");
    let program = out
        .lines()
        .find(|l| l.trim_start().starts_with("program:"))
        .unwrap();
    let minimized = out
        .lines()
        .find(|l| l.trim_start().starts_with("minimized:"))
        .unwrap();
    assert!(minimized.len() <= program.len(), "{out}");
}

#[test]
fn difftest_rejects_unknown_faults() {
    let o = boxtract(&["difftest", "--count=1", "--inject-fault=nope"]);
    assert_eq!(code(&o), 1);
}
