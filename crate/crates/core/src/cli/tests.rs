use super::*;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.fix", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Outcome {
    let cli = Cli::try_parse_from(std::iter::once("minset").chain(args.iter().copied())).unwrap();
    execute(&cli)
}

fn temp(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("minset-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn displace_ex1() {
    let o = run(&["displace", &fixture("ex1")]);
    assert_eq!(o.code, EXIT_OK);
    let r = o.report.unwrap();
    assert_eq!(r.get("value"), Some("3"));
    assert_eq!(r.get("witness"), Some("a"));
    assert_eq!(r.footer_value("fixture"), Some("EX1"));
}

#[test]
fn min_simplex_ex1() {
    let o = run(&["min-simplex", &fixture("ex1")]);
    assert_eq!(o.code, EXIT_OK);
    let mid: f64 = o.report.unwrap().get("midpoint").unwrap().parse().unwrap();
    assert!((mid - 2.618_033_988_7).abs() < 1e-9);
}

#[test]
fn run_uses_the_task_command() {
    let o = run(&["run", &fixture("ex2")]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.report.unwrap().title, "displace");
}

#[test]
fn expect_mismatch_is_a_violation() {
    let text = std::fs::read_to_string(fixture("ex1")).unwrap().replace("command = min-simplex", "command = displace\nexpect = 4");
    let p = temp("expect.fix", &text);
    assert_eq!(run(&["run", p.to_str().unwrap()]).code, EXIT_VIOLATION);
    let p = temp("expect-ok.fix", &text.replace("expect = 4", "expect = 3"));
    assert_eq!(run(&["run", p.to_str().unwrap()]).code, EXIT_OK);
}

#[test]
fn input_errors_exit_2() {
    let bad = "[graph]\nvertex v\nvertex w\nedge a = v -> w : 1\nedge b = w -> v : 1\n\n[map]\na = a\nb = b\n";
    let p = temp("bivalent.fix", bad);
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_INPUT, "{:?}", o.message);
    assert!(o.message.is_some());
    assert_eq!(run(&["validate", "/nonexistent.fix"]).code, EXIT_INPUT);
    assert_eq!(run(&["displace", &fixture("ex1"), "--tol", "2"]).code, EXIT_INPUT);
    assert_eq!(run(&["fold", &fixture("ex1")]).code, EXIT_INPUT);
    assert_eq!(main_with(["minset", "frobnicate"]), EXIT_INPUT);
}

#[test]
fn fold_then_unfold() {
    let emit = std::env::temp_dir().join(format!("minset-cli-{}-fold.fix", std::process::id()));
    let o = run(&["fold", &fixture("ex1"), "--turn", "[a, b]", "--amount", "1/3", "--emit", emit.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.report.unwrap().rows.len(), 3);
    let y = crate::fixture::parse(&std::fs::read_to_string(&emit).unwrap()).unwrap();
    assert_eq!(y.point.graph.n_edges(), 3);
    assert!(y.point.map.images.iter().any(|p| p.edges.is_empty()));
    let o = run(&["unfold", &fixture("ex1"), "--turn", "[a, b]", "--amount", "1/3"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.report.unwrap().rows.iter().all(|r| r[3] == "true"));
}

#[test]
fn unfold_forest_respects_svol() {
    let o = run(&["unfold", &fixture("ex5"), "--forest", "ex"]);
    assert_eq!(o.code, EXIT_OK, "{:?}", o.message);
    let r = o.report.unwrap();
    let svol: u64 = r.footer_value("svol").unwrap().parse().unwrap();
    assert!(svol <= 18);
}

#[test]
fn oracle_and_bounds_agree_on_ex1() {
    assert_eq!(run(&["oracle", &fixture("ex1"), "--lmax", "6"]).code, EXIT_OK);
    assert_eq!(run(&["bounds", &fixture("ex1")]).code, EXIT_OK);
    assert_eq!(run(&["oracle", &fixture("ex4"), "--lmax", "10", "--budget", "10"]).code, EXIT_BUDGET);
}

#[test]
fn critical_turns_and_train_track() {
    let o = run(&["critical-turns", &fixture("ex3")]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.report.unwrap().footer_value("simplex critical"), Some("5"));
    let o = run(&["traintrack-check", &fixture("ex4")]);
    assert_eq!(o.report.unwrap().get("train track"), Some("yes"));
}

#[test]
fn explore_ex1_and_budget() {
    let o = run(&["explore", &fixture("ex1")]);
    assert_eq!(o.code, EXIT_OK);
    let r = o.report.unwrap();
    assert_eq!(r.footer_value("in"), Some("3"));
    assert!(r.dot.unwrap().starts_with("digraph"));
    assert_eq!(run(&["explore", &fixture("ex1"), "--budget", "2"]).code, EXIT_BUDGET);
    assert_eq!(run(&["explore", &fixture("ex2")]).code, EXIT_INPUT);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let a = run(&["min-simplex", &fixture("ex5")]).report.unwrap();
    let b = run(&["min-simplex", &fixture("ex5")]).report.unwrap();
    assert_eq!(a, b);
    let mut plain = a.clone();
    plain.dot = None;
    assert_eq!(Report::from_text(&a.render(Format::Text).unwrap()).unwrap(), plain);
    assert_eq!(Report::from_csv(&a.render(Format::Csv).unwrap()).unwrap(), plain);
    assert!(a.render(Format::Dot).unwrap().starts_with("graph"));
}
