use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = r#"
[lattice]
dim = 1
cutoff = 1

[potential]
preset = "constant"
scale = 0.5

[observable]
preset = "cos-mode"
k = [1]

[run]
particles = [2, 3]
"#;

fn mfbose(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.toml");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_mfbose"))
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = mfbose(dir.path(), CONFIG, &["verify"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(dir.path().join("out/verify.csv").exists());
    assert!(dir.path().join("out/manifest.json").exists());

    let bad = mfbose(dir.path(), &CONFIG.replace("cutoff = 1", "cutoff = 0"), &["ed"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("lattice.cutoff"));

    let fault = mfbose(dir.path(), CONFIG, &["--inject-fault", "q", "verify"]);
    assert_eq!(fault.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&fault.stderr).contains("excitation identity"));

    let negative = mfbose(dir.path(), CONFIG, &["--tol", "-1", "ed"]);
    assert_eq!(negative.status.code(), Some(2));
}

#[test]
fn oversized_basis_is_a_solver_error() {
    let dir = tempfile::tempdir().unwrap();
    let big = format!("{CONFIG}\n[solver]\nbasis_limit = 5\n");
    let out = mfbose(dir.path(), &big, &["ed"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("basis_limit"));
}
