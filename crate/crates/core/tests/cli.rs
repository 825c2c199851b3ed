use std::process::Command;

fn minset(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_minset")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.fix", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn binary_reports_and_exit_codes() {
    let (code, out) = minset(&["displace", &fixture("ex1")]);
    assert_eq!(code, 0);
    let r = minset::report::Report::from_text(&out).unwrap();
    assert_eq!(r.get("value"), Some("3"));

    let (code, out) = minset(&["run", &fixture("ex1"), "--format", "csv"]);
    assert_eq!(code, 0);
    let r = minset::report::Report::from_csv(&out).unwrap();
    assert_eq!(r.title, "min-simplex");
    assert!(r.get("midpoint").unwrap().starts_with("2.6180339887"));

    let (code, out) = minset(&["fold", &fixture("ex1"), "--turn", "[a, b']", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph"));

    assert_eq!(minset(&["validate", "/does/not/exist.fix"]).0, 2);
    assert_eq!(minset(&["displace"]).0, 2);
    assert_eq!(minset(&["oracle", &fixture("ex4"), "--budget", "5"]).0, 3);
    assert_eq!(minset(&["--help"]).0, 0);
}
