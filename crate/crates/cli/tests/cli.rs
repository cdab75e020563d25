use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use perv_core::constructible::PolyConstructibleSet;
use perv_core::torus::{member_torsion, TorsionPoint, TorusFormula};
use perv_core::trace::stratify;

fn perv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn data(name: &str) -> String {
    here(&format!("data/{name}")).to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    fs::read_to_string(here(&format!("golden/{name}"))).unwrap()
}

#[test]
fn length_of_trivial_system() {
    let out = perv(&["length", &data("trivial.rep")]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("length Rj_*(L[1]): 6\n"), "{text}");
    assert!(text.contains("length L: 2\n"), "{text}");
    assert!(text.contains("h1 per puncture: 2 2\n"), "{text}");
    assert!(text.contains("traces: (2, 2, 2)\n"), "{text}");
}

#[test]
fn length_of_unipotent_system() {
    let text = stdout(&perv(&["length", &data("unipotent_a.rep")]));
    assert!(text.contains("length Rj_*(L[1]): 6\n"), "{text}");
    assert!(text.contains("length L: 2\n"), "{text}");
    assert!(text.contains("not semisimple"), "{text}");
}

#[test]
fn length_of_irreducible_system() {
    let text = stdout(&perv(&["length", &data("irreducible_336.rep")]));
    assert!(text.contains("length Rj_*(L[1]): 1\n"), "{text}");
    assert!(text.contains("length j_!*(L[1]): 1\n"), "{text}");
    assert!(text.contains("traces: (3, 3, 6)\n"), "{text}");
}

#[test]
fn malformed_representation_reports_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.rep");
    fs::write(
        &path,
        "# perv representation v1\n{\"punctures\":1,\"rank\":2,\"sl2\":true,\"matrices\":[[[\"1\",\"x\"],[\"0\",\"1\"]]]}\n",
    )
    .unwrap();
    let out = perv(&["length", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("matrices[0][0][1]"), "{}", stderr(&out));

    fs::write(&path, "{\"punctures\": 1,\n \"rank\": 2,\n").unwrap();
    let out = perv(&["length", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = perv(&["length", "/definitely/not/here.rep"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stratify_matches_golden_files() {
    for k in 1..=7 {
        let out = perv(&["stratify", "-k", &k.to_string()]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), golden(&format!("ge{k}.txt")), "k={k}");
    }
}

#[test]
fn stratify_output_parses_back() {
    for k in 1..=7 {
        let text = stdout(&perv(&["stratify", "-k", &k.to_string()]));
        let set = PolyConstructibleSet::from_text(&text).unwrap();
        assert_eq!(set, stratify(k), "k={k}");
    }
    assert!(golden("ge6.txt").contains("atom x - 2\n  atom y - 2\n  atom z - 2\n"));
    assert!(golden("ge7.txt").ends_with("false\n"));
    assert!(golden("ge1.txt").ends_with("true\n"));
}

#[test]
fn stratify_all_writes_every_level_deterministically() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = perv(&["stratify", "--all", "-o", dir.path().to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    for k in 1..=7 {
        for name in [format!("ge{k}.txt"), format!("eq{k}.txt")] {
            let left = fs::read(a.path().join(&name)).unwrap();
            let right = fs::read(b.path().join(&name)).unwrap();
            assert_eq!(left, right, "{name}");
            assert_eq!(String::from_utf8(left).unwrap(), golden(&name), "{name}");
        }
    }
}

#[test]
fn stratify_requires_k_or_all() {
    let out = perv(&["stratify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tori_intersect_gives_two_points() {
    let out = perv(&["tori", "intersect", &data("t1t2.json"), &data("t1_over_t2.json")]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), golden("intersect_two_points.json"));
    let f = TorusFormula::from_file_str(&stdout(&out)).unwrap();
    let grid = TorsionPoint::all_of_order_dividing(2, 12);
    let inside: Vec<String> = grid
        .iter()
        .filter(|p| member_torsion(&f, p).unwrap())
        .map(|p| p.to_string())
        .collect();
    assert_eq!(inside, ["(0, 0)", "(1/2, 1/2)"]);
}

#[test]
fn tori_member() {
    let out = perv(&["tori", "member", &data("t1.json"), "1/3,0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "false\n");
    let out = perv(&["tori", "member", &data("t1t2.json"), "1/2,1/2"]);
    assert_eq!(stdout(&out), "true\n");
    let out = perv(&["tori", "member", &data("t1.json"), "0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("ambient ranks differ"), "{}", stderr(&out));
}

#[test]
fn tori_jump_locus() {
    let out = perv(&["tori", "jump-locus", "-n", "2", "-k", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("jump_locus_n2_k3.json"));
}

#[test]
fn tori_rank_mismatch_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rank3.json");
    fs::write(&path, r#"{ "equations": [[1, 0, 0]], "rhs": ["0"] }"#).unwrap();
    let out = perv(&["tori", "intersect", &data("t1.json"), path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tori_divisor_guard_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    fs::write(&a, r#"{ "equations": [[200, 0]], "rhs": ["0"] }"#).unwrap();
    fs::write(&b, r#"{ "equations": [[0, 200]], "rhs": ["0"] }"#).unwrap();
    let out = perv(&["tori", "intersect", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("limit"), "{}", stderr(&out));
}

#[test]
fn rep_from_traces_round_trips_through_length() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.rep");
    let out = perv(&["rep-from-traces", "2", "5/2", "5/2", "-o", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&perv(&["length", path.to_str().unwrap()]));
    assert!(text.contains("traces: (2, 5/2, 5/2)\n"), "{text}");
    assert!(text.contains("length Rj_*(L[1]): 4\n"), "{text}");
}

#[test]
fn verify_paper_passes() {
    let out = perv(&["verify-paper"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    let summaries: Vec<&str> = text.lines().filter(|l| l.contains("criterion")).collect();
    assert_eq!(summaries.len(), 7, "{text}");
    assert!(summaries.iter().all(|l| l.starts_with("PASS")), "{text}");
}
