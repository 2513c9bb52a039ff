//! Compile generated Rust with an external toolchain.

use std::process::Command;

/// Environment variable that enables compile checks of generated Rust.
pub const COMPILE_ENV: &str = "BOXTRACT_RUST_COMPILE";

pub fn compile_check_enabled() -> bool {
    std::env::var(COMPILE_ENV).is_ok_and(|v| v != "0" && !v.is_empty())
}

/// Build `code` as a binary crate depending on `bumpalo`; `Err` carries the
/// compiler output.
pub fn compile_rust(code: &str) -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let src = dir.path().join("src");
    std::fs::create_dir_all(&src).map_err(|e| e.to_string())?;
    std::fs::write(
        dir.path().join("Cargo.toml"),
        "[package]\nname = \"extracted\"\nversion = \"0.1.0\"\nedition = \"2021\"\n\n\
         [dependencies]\nbumpalo = \"3\"\n\n[workspace]\n",
    )
    .map_err(|e| e.to_string())?;
    std::fs::write(src.join("main.rs"), format!("{code}\nfn main() {{}}\n"))
        .map_err(|e| e.to_string())?;
    let out = Command::new(std::env::var("CARGO").unwrap_or_else(|_| "cargo".into()))
        .arg("build")
        .arg("--quiet")
        .current_dir(dir.path())
        .output()
        .map_err(|e| format!("cannot run cargo: {e}"))?;
    if out.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&out.stderr).into_owned())
    }
}
