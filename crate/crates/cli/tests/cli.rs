use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obstruct")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = run(&a);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (v, o.status.code().unwrap())
}

#[test]
fn snf_of_diag_two_three() {
    let o = run(&["snf", &data("diag23.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("D = diag(1, 6)\n"));
    assert!(stderr(&o).is_empty());
    let (v, _) = json(&["snf", &data("diag23.txt")]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "snf");
    assert_eq!(v["diagonal"], serde_json::json!([1, 6]));
}

#[test]
fn empty_matrix_is_fine() {
    let o = run(&["snf", &data("empty.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("D = diag()\n"));
}

#[test]
fn parse_errors_name_the_position() {
    let o = run(&["snf", &data("malformed.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("line 2, column 3"), "{}", stderr(&o));
}

#[test]
fn bad_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("ragged.txt", "2 2\n1 2\n3\n"),
        ("short.txt", "3 1\n1\n2\n"),
        ("graph.graph", "vertices 1\nv\nv w 1\n"),
        ("module.mod", "even\ngenerators 1\n"),
    ];
    for (name, text) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        let p = p.to_string_lossy().into_owned();
        let o = match name.rsplit('.').next() {
            Some("graph") => run(&["graph", "invariant", &p]),
            Some("mod") => run(&["count-liftings", &p]),
            _ => run(&["snf", &p]),
        };
        assert_eq!(o.status.code(), Some(2), "{name}: {}", stderr(&o));
        assert!(stderr(&o).starts_with("error: "), "{name}");
        assert!(stdout(&o).is_empty(), "{name}");
    }
    assert_eq!(run(&["snf", &data("missing.txt")]).status.code(), Some(2));
    assert_eq!(run(&["ext", "z", "--group", &data("z2.txt")]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn ext_over_the_integers() {
    let (v, code) = json(&["ext", "z", "--group", &data("z2.txt"), "--group", &data("z2.txt")]);
    assert_eq!(code, 0);
    assert_eq!(v["hom"], serde_json::json!([2]));
    assert_eq!(v["ext1"], serde_json::json!([2]));
}

#[test]
fn ext_over_the_laurent_ring() {
    let o = run(&["ext", "r", "--module", &data("z2_pair.mod"), "--module", &data("z2_pair.mod")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Ext2 = Z/2"), "{}", stdout(&o));
}

#[test]
fn ext_over_the_sierpinski_poset() {
    for seed in ["0", "5"] {
        let o = run(&[
            "ext",
            "poset",
            "--poset",
            &data("sierpinski.pos"),
            "--module",
            &data("top_z2.rep"),
            "--module",
            &data("bottom_z2.rep"),
            "--seed",
            seed,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).contains("Ext2 = Z/2"), "{}", stdout(&o));
    }
}

#[test]
fn cuntz_krieger_module() {
    let o = run(&["ck", &data("cuntz3.txt")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("K0 module: R/(x - 3)\n"), "{s}");
    assert!(s.contains("liftings: 1"));
}

#[test]
fn shift_equivalence_verdicts() {
    let o = run(&["shifteq", &data("golden.txt"), &data("golden.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("yes"));
    let (v, code) = json(&["shifteq", &data("two.txt"), &data("cuntz3.txt")]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "no");
}

#[test]
fn graph_invariant_of_o3() {
    let o = run(&["graph", "invariant", &data("o3.graph")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("XK0 = Z/2"), "{s}");
    assert!(s.contains("zero"), "{s}");
}

#[test]
fn condition_k_failure_exits_three() {
    let o = run(&["graph", "invariant", &data("loop1.graph")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("Condition (K)"), "{}", stderr(&o));
}

#[test]
fn graph_comparisons() {
    let o = run(&["graph", "compare", &data("o2a.graph"), &data("o2b.graph")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("yes"));
    let (v, code) = json(&["graph", "compare", &data("o2a.graph"), &data("o3.graph")]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "no");
    let o = run(&["graph", "unit-compare", &data("sierpinski.graph"), &data("sierpinski_relabelled.graph")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("yes"));
}

#[test]
fn exhausted_search_exits_four() {
    let (v, code) = json(&["graph", "unit-compare", &data("units_a.graph"), &data("units_b.graph")]);
    assert_eq!(code, 4);
    assert_eq!(v["verdict"], "unknown");
    let o = run(&["graph", "compare", &data("units_a.graph"), &data("units_b.graph")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn count_liftings() {
    for (f, n) in [("z2_pair.mod", "4"), ("cuntz3.mod", "1")] {
        let o = run(&["count-liftings", &data(f)]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), format!("liftings: {n}\n"));
    }
}

#[test]
fn json_output_is_deterministic() {
    let args = ["graph", "invariant", &data("sierpinski.graph"), "--seed", "11", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "graph-invariant");
}
