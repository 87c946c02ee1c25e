//! The `cubical` binary on the bundled fixture documents: reports and exit codes.

use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cubical")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn every_bundled_document_validates() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let (code, out) = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{}: {out}", path.display());
        seen += 1;
    }
    assert!(seen >= 8);
}

#[test]
fn counting_commands() {
    assert_eq!(run(&["homcount", "2", "2"]), (0, "16\n".into()));
    let (code, out) = run(&["check-ii", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("levels: 3,4,5,6\n"), "{out}");
    let (code, out) = run(&["homcount", "1", "2", "--csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 2 * 3);
}

#[test]
fn emitted_cube_reparses() {
    let (code, text) = run(&["emit-cube", "2"]);
    assert_eq!(code, 0);
    let path = std::env::temp_dir().join(format!("cubical-emit-{}.cset", std::process::id()));
    std::fs::write(&path, &text).unwrap();
    let (code, out) = run(&["validate", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("sizes [4, 9, 16]"));
}

#[test]
fn broken_and_malformed_documents() {
    let good = std::fs::read_to_string(fixture("boundary.cset")).unwrap();
    let dir = std::env::temp_dir();
    let broken = dir.join(format!("cubical-broken-{}.cset", std::process::id()));
    std::fs::write(&broken, good.replacen("action 0->1 [0]: v0 -> v0", "action 0->1 [0]: v0 -> v1", 1)).unwrap();
    let (code, out) = run(&["validate", broken.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("composable pair"), "{out}");
    let malformed = dir.join(format!("cubical-malformed-{}.cset", std::process::id()));
    std::fs::write(&malformed, good.replacen("level 1: v0 v1", "level 1: v0 v1\naction 0->1 [0]: w9 -> v0", 1))
        .unwrap();
    let (code, out) = run(&["validate", malformed.to_str().unwrap()]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("line 6: unknown identifier `w9`"), "{out}");
    std::fs::remove_file(broken).ok();
    std::fs::remove_file(malformed).ok();
    assert_eq!(run(&["validate", "/nonexistent.cset"]).0, 2);
}

#[test]
fn kan_checks() {
    let (code, out) = run(&["kan", &fixture("interval.cset")]);
    assert_eq!(code, 1);
    assert!(out.contains("counterexample: 0 2 0:"), "{out}");
    assert_eq!(run(&["kan", &fixture("boundary.cset")]).0, 0);
    assert_eq!(run(&["kan", &fixture("maps.cset"), "--map", "bang"]).0, 0);
    assert_eq!(run(&["prop-main", &fixture("interval.cset")]).0, 0);
    let (code, out) = run(&["fill", &fixture("interval.cset"), "--box", "0 2 0: [1] [1] [x1]"]);
    assert_eq!((code, out.contains("0 fillers")), (1, true), "{out}");
    let (code, out) = run(&["fill", &fixture("square.cset"), "--box", "0 1 0: [0,0]"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn structures() {
    let nerve = fixture("nerve.cset");
    assert_eq!(run(&["uniform", &nerve, &fixture("nerve.shifted.fill")]).0, 0);
    assert_eq!(run(&["normal", &nerve, &fixture("nerve.shifted.fill")]).0, 1);
    assert_eq!(run(&["normal", &nerve, &fixture("nerve.normal.fill")]).0, 0);
    assert_eq!(run(&["normal", &fixture("boundary.cset"), &fixture("boundary.fill")]).0, 0);
    assert_eq!(run(&["connection", &nerve, &fixture("nerve.normal.fill")]).0, 0);
    let (code, out) = run(&["transport", &fixture("maps.cset"), "--map", "id_I", "--path", "[x1]", "--start", "[0]"]);
    assert_eq!(code, 0);
    assert!(out.contains("end: [1]"), "{out}");
}

#[test]
fn j_eliminator_reports() {
    let args = ["j-elim", &fixture("nerve.cset"), &fixture("nerve.normal.fill")];
    let (code, out) = run(&args);
    assert_eq!(code, 0, "{out}");
    let mut flipped = args.to_vec();
    flipped.push("--flip");
    let (code, out) = run(&flipped);
    assert_eq!(code, 1);
    assert!(out.contains("π ∘ j = 1: pass"), "{out}");
    assert!(out.contains("j ∘ r = b: fail"), "{out}");
}

#[test]
fn free_fillers_and_factorization() {
    let boundary = fixture("boundary.cset");
    let (code, out) = run(&["free", &boundary, "--budget", "3"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("stage 3: sizes [30, 170, 518]"), "{out}");
    let (code, out) = run(&["free", &boundary, "--budget", "3", "--normal"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["free", &boundary, "--budget", "2", "--csv"]);
    assert_eq!(code, 3);
    assert!(out.starts_with("stage,level,size\n0,0,2\n"), "{out}");
    let (code, out) = run(&["free", &fixture("maps.cset"), "--map", "bang", "--budget", "1", "--emit-maps"]);
    assert_eq!(code, 3);
    assert!(out.contains("csetmap R1:"), "{out}");
    assert_eq!(run(&["graph-factor", &fixture("maps.cset"), "--map", "bang"]).0, 0);
    assert_eq!(run(&["graph-factor", &fixture("nerve.cset")]).0, 0);
    assert_eq!(run(&["graph-factor", &fixture("maps.cset"), "--map", "ends"]).0, 1);
}

#[test]
fn comparisons() {
    assert_eq!(run(&["check-shift", &fixture("circle.cset")]).0, 0);
    assert_eq!(run(&["check-shift", &fixture("square.cset")]).0, 0);
    assert_eq!(run(&["check-adjoint", &fixture("boundary.cset")]).0, 0);
}

#[test]
fn reports_are_deterministic() {
    let args = ["free", &fixture("boundary.cset"), "--budget", "2"];
    assert_eq!(run(&args), run(&args));
    let args = ["j-elim", &fixture("nerve.cset"), &fixture("nerve.normal.fill"), "--flip"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["free", &fixture("boundary.cset")]).0, 2);
}
