#![allow(dead_code)]

use boxtract_backends::{print, BackendConfig, Printed, RemapTable, Target};
use boxtract_core::ast::Kername;
use boxtract_core::dearg::{run_dearg, AnalysisOptions};
use boxtract_core::erasure::{annotate, erase_env_annotated};
use boxtract_core::surface::{parse_programs, SourceFile};

pub fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn kn(s: &str) -> Kername {
    s.parse().unwrap()
}

/// Erase `roots` of the prelude plus `files`, dearg, and print.
pub fn extract(files: &[&str], roots: &[&str], cfg: &BackendConfig, remap: &RemapTable) -> Printed {
    let mut srcs = vec![SourceFile::read(fixture_path("prelude.src").as_ref()).unwrap()];
    for f in files {
        srcs.push(SourceFile::read(fixture_path(f).as_ref()).unwrap());
    }
    let env = parse_programs(&srcs).unwrap_or_else(|e| panic!("{e}"));
    let roots: Vec<Kername> = roots.iter().map(|r| kn(r)).collect();
    let (er, trace) = erase_env_annotated(&env, &roots).unwrap();
    let ann = annotate(&er, trace).unwrap();
    let out = run_dearg(&er, Some(&ann), 1, AnalysisOptions::default()).unwrap();
    print(&out.env, out.annots.as_ref().unwrap(), cfg, remap).unwrap_or_else(|e| panic!("{e}"))
}

pub fn config(target: Target) -> BackendConfig {
    BackendConfig::new(target)
}

/// Like [`extract`], with one extra in-memory module.
pub fn extract_src(src: &str, roots: &[&str], cfg: &BackendConfig, remap: &RemapTable) -> Printed {
    try_extract_src(src, roots, cfg, remap).unwrap_or_else(|e| panic!("{e}"))
}

pub fn try_extract_src(
    src: &str,
    roots: &[&str],
    cfg: &BackendConfig,
    remap: &RemapTable,
) -> Result<Printed, boxtract_backends::BackendError> {
    let srcs = vec![
        SourceFile::read(fixture_path("prelude.src").as_ref()).unwrap(),
        SourceFile::new("test.src", src),
    ];
    let env = parse_programs(&srcs).unwrap_or_else(|e| panic!("{e}"));
    let roots: Vec<Kername> = roots.iter().map(|r| kn(r)).collect();
    let (er, trace) = erase_env_annotated(&env, &roots).unwrap();
    let ann = annotate(&er, trace).unwrap();
    let out = run_dearg(&er, Some(&ann), 1, AnalysisOptions::default()).unwrap();
    print(&out.env, out.annots.as_ref().unwrap(), cfg, remap)
}
