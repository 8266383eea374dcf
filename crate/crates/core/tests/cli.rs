//! Integration tests driving the installed binary.

use std::process::{Command, Output};

fn hamcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamcoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn info_reports_dimension_and_boxes() {
    let out = hamcoh(&["info", "--family", "h", "-n", "2", "-p", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dim N:            10"));
    assert!(text.contains("1024"));
    assert!(text.contains("108"));

    let out = hamcoh(&[
        "info", "--family", "h2", "-n", "2", "-p", "5", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim"], 23);
    assert_eq!(v["total_chain_dim"], "8388608");
}

#[test]
fn verify_passes_for_h23() {
    let out = hamcoh(&["verify", "--family", "h", "-n", "2", "-p", "3", "--check-props"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS jacobi"));
    assert!(text.contains("PASS boundary d.d = 0"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn table_text_matches_published_rows() {
    let out = hamcoh(&[
        "table", "--family", "h", "-n", "2", "-p", "3", "--props", "all",
        "--merged-rows", "--ascii",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    // spot rows of the symmetric-grading table for h(2)_3
    let row0: Vec<&str> = text
        .lines()
        .find(|l| l.trim_start().starts_with("0 "))
        .unwrap()
        .split_whitespace()
        .collect();
    assert_eq!(row0, ["0", ".", "1", "3", "2", "2", "2", "3", "1", ".", "1"]);
    let row3: Vec<&str> = text
        .lines()
        .find(|l| l.trim_start().starts_with("+-3"))
        .unwrap()
        .split_whitespace()
        .collect();
    assert_eq!(row3, ["+-3", "1", "1", "1", "2", "2", "2", "1", "1", "1"]);
}

#[test]
fn table_json_and_csv_agree() {
    let json_out = hamcoh(&[
        "table", "--family", "h", "-n", "2", "-p", "3", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    let entries = v["entries"].as_array().unwrap();
    let h30 = entries
        .iter()
        .find(|e| e["g"] == 0 && e["k"] == 3)
        .unwrap();
    assert_eq!(h30["dim_h"], 3);

    let csv_out = hamcoh(&[
        "table", "--family", "h", "-n", "2", "-p", "3", "--format", "csv",
    ]);
    let csv = stdout(&csv_out);
    assert!(csv.starts_with("g,k,dim_c,rank_in,rank_out,dim_h"));
    // one line per non-empty box (108 with k >= 1, one k = 0 box, header)
    assert_eq!(csv.lines().count(), 110);
}

#[test]
fn box_and_cocycles_for_first_cohomology() {
    let out = hamcoh(&[
        "box", "--family", "h", "-n", "2", "-p", "3", "-k", "1", "-g", "-3",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim_h"], 1);

    let out = hamcoh(&[
        "cocycles", "--family", "h", "-n", "2", "-p", "3", "-k", "1", "-g", "-3",
        "--ascii",
    ]);
    assert_eq!(stdout(&out).trim(), "(x1^(3))");
}

#[test]
fn export_matrix_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d2g0.txt");
    let out = hamcoh(&[
        "export-matrix", "--family", "h", "-n", "2", "-p", "3", "-k", "2", "-g", "0",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(header, ["2", "7", "4", "3"]); // rows cols nnz modulus
}

#[test]
fn exit_codes() {
    // odd n is a config error
    let out = hamcoh(&["info", "--family", "h", "-n", "3", "-p", "3"]);
    assert_eq!(out.status.code(), Some(2));
    // p = 2 is a config error
    let out = hamcoh(&["info", "--family", "h", "-n", "2", "-p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // po pruning without the opt-in flag is a config error
    let out = hamcoh(&["table", "--family", "po", "-n", "2", "-p", "3", "--props", "all"]);
    assert_eq!(out.status.code(), Some(2));
    // a too-small memory budget aborts with the resource code
    let out = hamcoh(&[
        "box", "--family", "h2", "-n", "2", "-p", "5", "-k", "8", "-g", "0",
        "--memory-budget-mb", "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn journal_resume_skips_computed_boxes() {
    let dir = tempfile::tempdir().unwrap();
    let journal = dir.path().join("journal.jsonl");
    let args = [
        "table", "--family", "h", "-n", "2", "-p", "3", "--props", "all",
        "--journal", journal.to_str().unwrap(), "--format", "csv",
    ];
    let first = stdout(&hamcoh(&args));
    let lines = std::fs::read_to_string(&journal).unwrap().lines().count();
    assert_eq!(lines, 14); // 13 pruned boxes + the k = 0 box
    let second = stdout(&hamcoh(&args));
    assert_eq!(first, second);
    let lines = std::fs::read_to_string(&journal).unwrap().lines().count();
    assert_eq!(lines, 14);
}
