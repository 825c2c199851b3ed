use super::*;
use crate::displacement::{default_tol, lambda_point, lambda_simplex};
use crate::graph::q;
use crate::map::tests::{ex1, ex3_point};
use crate::moves::tests::{ex2_point, ex4_point};

pub(crate) fn load(name: &str) -> Fixture {
    let path = format!("{}/fixtures/{name}.fix", env!("CARGO_MANIFEST_DIR"));
    parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn fixtures_match_builders() {
    assert_eq!(load("ex1").point, ex1());
    assert_eq!(load("ex2").point, ex2_point(1));
    assert_eq!(load("ex3").point, ex3_point());
    assert_eq!(load("ex4").point, ex4_point());
    assert_eq!(load("ex1").task["command"], "min-simplex");
}

#[test]
fn round_trip() {
    for name in ["ex1", "ex2", "ex3", "ex4", "ex5"] {
        let f = load(name);
        let text = to_fixture_string(&f.point, &f.task);
        assert_eq!(parse(&text).unwrap(), f, "{text}");
    }
}

#[test]
fn ex5_is_a_golden_train_track() {
    let x = load("ex5").point;
    assert_eq!(x.graph.nonfree_vertices().len(), 3);
    assert!(crate::legality::is_train_track(&x.map, 64).is_yes());
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let s = lambda_simplex(&x, &default_tol()).unwrap();
    assert!((s.midpoint() - phi).abs() < 1e-9, "{}", s.midpoint());
    assert_eq!(lambda_point(&x).unwrap().value, q(2, 1));
}

#[test]
fn parses_paths_and_elements() {
    let g = ex4_point().graph;
    let p = parse_path(&g, "{c^-1} a' {c c} b").unwrap();
    assert_eq!(p.display(&g), "{c^-1} a' {c^2} b");
    assert!(parse_path(&g, "a {d} b").is_err());
    assert!(parse_path(&g, "{c}").is_err());
    let v = parse_path(&g, "<v> {c^3}").unwrap();
    assert!(v.edges.is_empty());
    assert_eq!(v.display(&g), "<v> {c^3}");
    assert_eq!(parse_path(&g, &v.display(&g)).unwrap(), v);
    assert!(parse_path(&g, "<u> a").is_err());
    assert_eq!(parse_exact("3/6"), Some(q(1, 2)));
    assert_eq!(parse_exact("2"), Some(q(2, 1)));
    assert_eq!(parse_exact("0.5"), None);
    assert_eq!(parse_exact("1/0"), None);
}

#[test]
fn table_groups_and_homs() {
    let text = "[groups]\nK = table e x y z ; e x y z ; x e z y ; y z e x ; z y x e\n\n[graph]\nvertex v = K\nedge a = v -> v : 1\n\n[map]\nhom v = x -> y, y -> x, z -> z\na = {x} a\n";
    let f = parse(text).unwrap();
    let g = &f.point.graph;
    assert_eq!(g.group(0).order(), Some(4));
    assert_eq!(parse(&to_fixture_string(&f.point, &f.task)).unwrap(), f);
    let bad = text.replace("y -> x", "y -> y");
    assert!(matches!(parse(&bad), Err(Error::Structural(_))));
}

#[test]
fn rejections() {
    let ok = std::fs::read_to_string(format!("{}/fixtures/ex1.fix", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let cases = [
        (ok.replace("command = min-simplex", "colour = blue"), 13),
        (ok.replace("[task]", "[tasks]"), 11),
        (ok.replace("edge b = v -> v : 1", "edge b = v -> v : 0.5"), 5),
        (ok.replace("b = b a", "b = b c"), 9),
        (ok.replace("b = b a", "b = b a\nb = a"), 10),
        (ok.replace("vertex v", "vertex v\nvertex v"), 4),
    ];
    for (text, line) in cases {
        match parse(&text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
            other => panic!("{other:?} for {text}"),
        }
    }
    // a bivalent trivial vertex fails validation
    let text = "[graph]\nvertex v\nvertex w\nedge a = v -> w : 1\nedge b = w -> v : 1\n\n[map]\na = a\nb = b\n";
    assert!(matches!(parse(text), Err(Error::Structural(_))));
}

#[test]
fn parses_turns() {
    let x = ex4_point();
    let g = &x.graph;
    for t in ["[a, b]", "[a, {c} b]", "[b, {c^-2} b']", "[{c} a', b]"] {
        let turn = parse_turn(g, t).unwrap();
        assert_eq!(parse_turn(g, &turn.display(g)).unwrap(), turn);
    }
    assert_eq!(parse_turn(g, "[a, {c} b]").unwrap().display(g), "[a, {c} b]");
    assert!(parse_turn(g, "a, b").is_err());
    assert!(parse_turn(g, "[a, z]").is_err());
}
