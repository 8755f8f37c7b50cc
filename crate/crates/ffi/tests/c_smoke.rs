use std::path::{Path, PathBuf};
use std::process::Command;

/// The directory holding the built shared library: target/<profile>.
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_header_and_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = lib_dir();
    if !lib.join("libdatatours_ffi.so").exists() {
        eprintln!("shared library not built, skipping");
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&lib)
        .arg("-ldatatours_ffi")
        .status();
    let Ok(status) = status else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(status.success());
    let dataset = manifest.join("../core/tests/fixtures/srilanka.json");
    let out = Command::new(&exe).arg(dataset).env("LD_LIBRARY_PATH", &lib).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
