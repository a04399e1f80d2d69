use std::fs;

use toric_faces_cli::{run, Outcome};

fn tf(args: &str) -> Outcome {
    run(std::iter::once("toric-faces").chain(args.split_whitespace()))
}

fn temp_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("toric-faces-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn u23_has_five_flats() {
    let o = tf("matroid flats corpus:u23.wt");
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("5 flats\n"));
    assert_eq!(o.stdout.lines().count(), 6);
}

#[test]
fn flat_strategies_agree() {
    for file in ["b2.wt", "u23.wt", "coll.wt"] {
        let a = tf(&format!("matroid flats corpus:{file} --json"));
        let b = tf(&format!("matroid flats corpus:{file} --json --strategy subsets"));
        assert_eq!(a, b);
    }
}

#[test]
fn g6_reconstruction_with_galois() {
    let o = tf("gkm reconstruct corpus:g6.gkm --verify-galois");
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("faces: 16\n"));
    assert!(o.stdout.contains("galois: pass"));
}

#[test]
fn glued_poset_is_not_gkm_coherent() {
    let o = tf("poset check corpus:glued.poset --gkm-coherent");
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("locally geometric: yes (rank 2)"));
    assert!(o.stdout.contains("gkm-coherent: fail: at `top`"));
    assert_eq!(tf("poset check corpus:glued.poset").code, 0);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        "",
        "frobnicate",
        "matroid",
        "matroid flats",
        "gkm faces corpus:s2.gkm --cap x",
        "gkm reconstruct corpus:s2.gkm --mode geodesic",
        "gkm faces corpus:s2.gkm --rule nope",
        "matroid flats corpus:u23.wt --strategy greedy",
        "matroid flats corpus:nothing.wt",
        "matroid flats corpus:u23.wt --json --dot",
        "--jobs 0 matroid flats corpus:u23.wt",
    ] {
        let o = tf(args);
        assert_eq!(o.code, 2, "`{args}`: {o:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    assert!(tf("frobnicate").stderr.contains("Usage"));
}

#[test]
fn help_and_version_exit_0() {
    let o = tf("--help");
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("matroid"));
    assert_eq!(tf("--version").code, 0);
}

#[test]
fn parse_errors_carry_locations() {
    let path = temp_file("zero.wt", "ambient_rank: 2\nw1 = (1,0)\nw2 = (0,0)\n");
    let o = tf(&format!("matroid flats {path}"));
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 3"), "{}", o.stderr);
    assert!(o.stderr.contains("zero weight forbidden"));
}

#[test]
fn invalid_graphs_name_the_axiom() {
    let path = temp_file(
        "bad.gkm",
        "ambient_rank: 2\nsigned\nvertex a\nvertex b\nvertex c\nedge ab a b weight (1,0)\nedge ac a c weight (2,0)\nedge bc b c weight (0,1)\n",
    );
    let o = tf(&format!("gkm faces {path}"));
    assert_eq!(o.code, 2, "{o:?}");
    assert!(o.stderr.contains("pairwise independence"), "{}", o.stderr);
    let o = tf(&format!("gkm validate {path}"));
    assert_eq!(o.code, 1, "{o:?}");
    assert!(o.stdout.contains("invalid"));
}

#[test]
fn check_failures_exit_1() {
    assert_eq!(tf("gkm faces corpus:g6.gkm --cap 10").code, 1);
    assert_eq!(tf("gkm connection corpus:g6.gkm --rule canonical").code, 1);
    assert_eq!(tf("poset compactify corpus:glued.poset").code, 1);
}

#[test]
fn config_file_supplies_defaults() {
    let cfg = temp_file("cfg.json", r#"{"mode": "totally-geodesic", "cap": 100}"#);
    let o = tf(&format!("--config {cfg} gkm reconstruct corpus:square.gkm"));
    assert_eq!(o.code, 0, "{o:?}");
    assert!(o.stdout.starts_with("mode: totally-geodesic\n"));
    assert_eq!(tf(&format!("--config {cfg} gkm faces corpus:g6.gkm")).code, 1);
    assert_eq!(
        tf(&format!("--config {cfg} gkm faces corpus:g6.gkm --cap 1000")).code,
        0
    );
    let bad = temp_file("bad.json", r#"{"modes": "faces"}"#);
    assert_eq!(tf(&format!("--config {bad} gkm faces corpus:s2.gkm")).code, 2);
}

#[test]
fn poset_constructions() {
    let b1 = temp_file("b1.poset", "element 0 rank 0\nelement 1 rank 1\ncover 0 < 1\n");
    let o = tf(&format!("poset compactify {b1}"));
    assert_eq!(o.code, 0, "{o:?}");
    let c = temp_file("c.poset", &o.stdout);
    let check = tf(&format!("poset check {c}"));
    assert!(
        check.stdout.contains("locally geometric: yes (rank 1)"),
        "{}",
        check.stdout
    );
    let o = tf(&format!("poset projectivize {b1} --json"));
    assert!(o.stdout.contains("\"elements\""));
    let o = tf(&format!("poset glue {b1} {b1}"));
    assert_eq!(o.code, 0, "{o:?}");
}

#[test]
fn homology_of_glued_poset() {
    let o = tf("poset homology corpus:glued.poset");
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("upper links: pass"));
}

#[test]
fn wedge_report() {
    let o = tf("matroid wedge corpus:u23.wt");
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("mobius: 2\n"));
    assert!(o.stdout.contains("h-vector: (1,1,1)"));
}

#[test]
fn dot_outputs() {
    assert!(tf("gkm validate corpus:cp2.gkm --dot").stdout.starts_with("graph "));
    assert!(tf("gkm reconstruct corpus:cp2.gkm --dot")
        .stdout
        .starts_with("digraph "));
    assert!(tf("matroid check corpus:b2.wt --dot").stdout.starts_with("digraph "));
}

#[test]
fn jobs_do_not_change_output() {
    let a = tf("--jobs 1 gkm tg-faces corpus:g6.gkm --json");
    let b = tf("--jobs 4 gkm tg-faces corpus:g6.gkm --json");
    assert_eq!(a, b);
}
