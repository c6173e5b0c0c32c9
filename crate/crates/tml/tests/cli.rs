use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const T1: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/theory1.mlg");
const SPLIT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_components.mlg");

fn tml(args: &[&str]) -> Output {
    tml_in(args, None, &[])
}

fn tml_in(args: &[&str], dir: Option<&Path>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tml"));
    cmd.args(args).env_remove("TML_FUEL");
    if let Some(d) = dir {
        cmd.current_dir(d);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn canon_prints_the_numeral() {
    let o = tml(&["canon", T1, "(rec ((n) Nat) z ((x y) (s y)) (s (s z)))"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("numeral: (s (s z))"), "{out}");
    assert!(out.contains("proof: "));
}

#[test]
fn realize_prints_a_dense_path() {
    let o = tml(&["realize", T1, "(J ((x y z) G) ((x) 'b) 'a 'a 'e)"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("realizer: dense path"), "{out}");
    assert!(out.contains("target: 'b"), "{out}");
}

#[test]
fn check_reports_a_mismatch() {
    let o = tml(&["check", T1, "(refl 'a)", "--type", "(Id G 'a 'b)"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("mismatch"), "{err}");
    assert!(!err.contains("panicked"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&tml(&["check", T1, "(refl 'a)"])), 0);
    assert_eq!(code(&tml(&["normalize", T1, "(app (lam (x G) x) 'a)"])), 0);
    assert_eq!(code(&tml(&["eval", T1, "'f"])), 0);
    assert_eq!(code(&tml(&["word", T1, "f . g . g^"])), 0);
    assert_eq!(code(&tml(&["pi0", SPLIT])), 0);
    assert_eq!(code(&tml(&["check", T1, "(app 'a 'b)"])), 1);
    assert_eq!(code(&tml(&["check", T1, "(s"])), 2);
    assert_eq!(code(&tml(&["check", "/nonexistent/theory.mlg", "z"])), 2);
    assert_eq!(code(&tml(&["frobnicate", T1])), 2);
    assert_eq!(code(&tml(&["check"])), 2);
    assert_eq!(code(&tml(&["word", T1, "f . . g"])), 2);
    assert_eq!(code(&tml(&["word", T1, "f . f"])), 1);
}

#[test]
fn normalize_and_eval_print_results() {
    assert_eq!(stdout(&tml(&["normalize", T1, "(app (lam (x G) x) 'a)"])).trim(), "'a");
    assert_eq!(stdout(&tml(&["eval", T1, "'f"])).trim(), "f");
    assert_eq!(stdout(&tml(&["word", T1, "f . g . g^"])).trim(), "f : a -> b");
}

#[test]
fn json_output_is_valid_and_stable() {
    let runs: &[&[&str]] = &[
        &["--json", "retract", T1, "--fuel", "20", "--seed", "3"],
        &["--json", "retract", T1, "--fuel", "10", "--equivalence"],
        &["--json", "pi0", SPLIT, "--samples", "10"],
        &["--json", "canon", T1, "(s z)"],
        &["--json", "check", T1, "(refl 'a)"],
        &["--json", "realize", T1, "'c"],
        &["--json", "check", T1, "(refl 'a)", "--type", "(Id G 'a 'b)"],
    ];
    for args in runs {
        let (a, b) = (tml(args), tml(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), code(&b));
        let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert!(v.is_object());
    }
}

#[test]
fn fuel_flag_wins_over_the_environment() {
    let deep = "(rec ((n) Nat) z ((x y) (s (s y))) (s (s (s (s (s z))))))";
    let starved = tml_in(&["normalize", T1, deep], None, &[("TML_FUEL", "1")]);
    assert_eq!(code(&starved), 1);
    let flagged = tml_in(&["normalize", T1, deep, "--fuel", "100000"], None, &[("TML_FUEL", "1")]);
    assert_eq!(code(&flagged), 0);
    assert_eq!(code(&tml_in(&["normalize", T1, deep], None, &[("TML_FUEL", "x")])), 2);
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).map(|p| (p.clone(), fs::read(&p).unwrap())).collect()
}

#[test]
fn commands_are_read_only() {
    let dir = std::env::temp_dir().join(format!("tml-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    fs::copy(T1, dir.join("t.mlg")).unwrap();
    fs::write(dir.join("term.tml"), "(J ((x y z) G) ((x) 'b) 'a 'a 'e)").unwrap();
    let before = snapshot(&dir);
    let runs: &[&[&str]] = &[
        &["check", "t.mlg", "@term.tml"],
        &["normalize", "t.mlg", "@term.tml"],
        &["eval", "t.mlg", "@term.tml"],
        &["realize", "t.mlg", "@term.tml"],
        &["canon", "t.mlg", "(s z)"],
        &["pi0", "t.mlg", "--samples", "5"],
        &["retract", "t.mlg", "--fuel", "5"],
        &["--json", "retract", "t.mlg", "--fuel", "5", "--equivalence"],
        &["word", "t.mlg", "f . f^"],
    ];
    for args in runs {
        assert_eq!(code(&tml_in(args, Some(&dir), &[])), 0, "{args:?}");
    }
    assert_eq!(stdout(&tml_in(&["eval", "t.mlg", "@term.tml"], Some(&dir), &[])).trim(), "b");
    assert_eq!(snapshot(&dir), before);
    fs::remove_dir_all(&dir).unwrap();
}
