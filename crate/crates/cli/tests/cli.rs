use std::path::Path;
use std::process::{Command, Output};

fn eal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compile_then_extract_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let term = dir.path().join("odd.eal");
    let out = eal(&["compile", "--regex", "0*1(0|10*1)*", "-o", path(&term)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let learned = dir.path().join("odd.json");
    let out = eal(&["check", path(&term), "--type", "Str -o !Bool"]);
    assert_eq!(out.status.code(), Some(0));

    let promoted = dir.path().join("odd1.eal");
    let out = eal(&["promote", path(&term)]);
    assert!(out.status.success());
    std::fs::write(&promoted, out.stdout).unwrap();

    let out = eal(&["extract", path(&promoted), "--method", "lstar", "-o", path(&learned)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&learned).unwrap()).unwrap();
    assert_eq!(json["states"].as_array().unwrap().len(), 2);

    let out = eal(&["verify", "--dfa", path(&learned), path(&promoted), "--max-len", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn cast_has_its_type() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cast.eal");
    let out = eal(&["encode", "--cast"]);
    assert!(out.status.success());
    std::fs::write(&file, out.stdout).unwrap();
    let out = eal(&["--mode", "mueal", "check", path(&file), "--type", "Nat -o !StrS -o Str"]);
    assert_eq!(out.status.code(), Some(0));
    // fold and unfold are rejected outside the fixpoint mode
    assert_eq!(eal(&["check", path(&file)]).status.code(), Some(1));
}

#[test]
fn cast_prefix() {
    let out = eal(&["cast", "--n", "2", "--word", "0110"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("01"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.eal");
    std::fs::write(&file, "-- two nots\n(\\b:Bool. b) ((\\b:Bool. /\\a. \\x:a. \\y:a. b [a] y x) (/\\a. \\x:a. \\y:a. x))\n")
        .unwrap();
    assert_eq!(eal(&["norm", path(&file)]).status.code(), Some(0));
    assert_eq!(eal(&["--fuel", "0", "norm", path(&file)]).status.code(), Some(3));

    std::fs::write(&file, "\\!x:Bool. x").unwrap();
    assert_eq!(eal(&["check", path(&file)]).status.code(), Some(1));
    std::fs::write(&file, "\\x:Bool. (").unwrap();
    assert_eq!(eal(&["check", path(&file)]).status.code(), Some(1));
}

#[test]
fn verify_reports_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let term = dir.path().join("c11.eal");
    assert!(eal(&["compile", "--regex", "(0|1)*11(0|1)*", "-o", path(&term)]).status.success());
    let dfa = dir.path().join("all.json");
    std::fs::write(&dfa, r#"{"alphabet":["0","1"],"states":["q0"],"start":"q0","accept":["q0"],"delta":{"q0":{"0":"q0","1":"q0"}}}"#)
        .unwrap();
    let out = eal(&["verify", "--dfa", path(&dfa), path(&term), "--max-len", "4"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn truncate_output_is_a_term() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.eal");
    let out = eal(&["encode", "--string", "01"]);
    std::fs::write(&file, out.stdout).unwrap();
    let out = eal(&["truncate", path(&file)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains('!'), "{text}");
    let again = dir.path().join("t.eal");
    std::fs::write(&again, &text).unwrap();
    assert_eq!(eal(&["check", path(&again)]).status.code(), Some(0));
}
