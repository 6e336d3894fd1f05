use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const P3: &str = "3 2\n0 1\n1 2\n";
const C4: &str = "4 4\n0 1\n1 2\n2 3\n3 0\n";
const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const M_K3: &str = r#"{"kind":"graphic","graph":{"n":3,"edges":[[0,1],[1,2],[0,2]]}}"#;
const M_K4: &str = r#"{"kind":"graphic","graph":{"n":4,"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}}"#;
/// K4 on {0,1,2,3} with vertex 4 adjacent to 0.
const K4_PENDANT: &str = "5 7\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n0 4\n";

fn septree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_septree")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn width_examples() {
    let dir = TempDir::new().unwrap();
    for (name, text, key, expected) in
        [("p3.txt", P3, "treewidth", 1), ("k4.txt", K4, "treewidth", 3), ("mk3.json", M_K3, "matroid_treewidth", 2)]
    {
        let out = septree(&["width", s(&write(&dir, name, text))]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json_of(&out)[key], expected, "{name}");
    }
}

#[test]
fn width_over_the_cap_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let edges: String = (0..19).map(|v| format!("{v} {}\n", v + 1)).collect();
    let path = write(&dir, "p20.txt", &format!("20 19\n{edges}"));
    assert_eq!(septree(&["width", s(&path)]).status.code(), Some(2));
}

#[test]
fn lean_refinement_of_c4_reverifies() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "c4.txt", C4);
    let out_path = dir.path().join("c4.json");
    let out = septree(&["refine", s(&graph), "--mode", "lean", "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_of(&out)["width"], 2);
    for property in ["valid", "linked", "lean"] {
        let check = septree(&["verify", s(&graph), s(&out_path), "--property", property]);
        assert_eq!(check.status.code(), Some(0), "{property}");
        assert_eq!(json_of(&check)["pass"], true);
    }
}

#[test]
fn optimal_input_is_unchanged() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "p3.txt", P3);
    let start = write(&dir, "start.json", r#"{"bags":[[0,1],[1,2]],"edges":[[0,1]]}"#);
    let out = septree(&["refine", s(&graph), "--mode", "combined", "--start", s(&start)]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["summary"]["iterations"], 0);
    assert_eq!(doc["summary"]["width"], 1);
    assert_eq!(doc["decomposition"]["bags"].as_array().unwrap().len(), 2);
}

#[test]
fn linked_matroid_refinement_of_k4() {
    let dir = TempDir::new().unwrap();
    let matroid = write(&dir, "mk4.json", M_K4);
    let out_path = dir.path().join("out.json");
    let out = septree(&["refine", s(&matroid), "--mode", "linked", "--family", "matroid-fk", "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["width"], 3);
    let check = septree(&["verify", s(&matroid), s(&out_path), "--property", "linked"]);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn every_family_and_mode_reverifies() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "g.txt", K4_PENDANT);
    for family in ["fk", "pk", "tk", "ftheta"] {
        for mode in ["linked", "lean", "combined"] {
            let out_path = dir.path().join(format!("{family}-{mode}.json"));
            let out = septree(&["refine", s(&graph), "--mode", mode, "--family", family, "--out", s(&out_path)]);
            assert_eq!(out.status.code(), Some(0), "{family} {mode}: {}", String::from_utf8_lossy(&out.stderr));
            for property in ["valid", "linked"] {
                let check = septree(&["verify", s(&graph), s(&out_path), "--property", property]);
                assert_eq!(check.status.code(), Some(0), "{family} {mode} {property}");
            }
        }
    }
}

#[test]
fn refinement_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "g.txt", K4_PENDANT);
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("run{i}.json"));
            let out = septree(&["refine", s(&graph), "--mode", "combined", "--trace", "--out", s(&path)]);
            assert_eq!(out.status.code(), Some(0));
            fs::read(path).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn planted_violations_fail_with_a_witness() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "g.txt", K4_PENDANT);
    let single = write(&dir, "single.json", r#"{"bags":[[0,1,2,3,4]],"edges":[]}"#);
    let out = septree(&["verify", s(&graph), s(&single), "--property", "lean"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["witness"].is_object());

    let missing_edge = write(&dir, "missing.json", r#"{"bags":[[0,1,2,3],[4]],"edges":[[0,1]]}"#);
    let out = septree(&["verify", s(&graph), s(&missing_edge), "--property", "valid"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["witness"].is_string());
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "c4.txt", C4);
    let malformed = write(&dir, "bad.json", "{bad");
    assert_eq!(septree(&["verify", s(&graph), s(&malformed), "--property", "lean"]).status.code(), Some(2));
    let bad_graph = write(&dir, "bad.txt", "3 5\n0 1\n");
    assert_eq!(septree(&["width", s(&bad_graph)]).status.code(), Some(2));
    assert_eq!(septree(&["refine", s(&graph), "--mode", "lean", "--family", "matroid-fk"]).status.code(), Some(2));
    // The single bag of C4 has size 4, outside F_3.
    assert_eq!(septree(&["refine", s(&graph), "--mode", "lean", "--k", "3"]).status.code(), Some(2));
    assert_eq!(septree(&["corpus", "--max-n", "9"]).status.code(), Some(2));
}
