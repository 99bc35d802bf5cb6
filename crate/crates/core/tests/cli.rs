//! End-to-end tests of the `rkt` binary: exit codes, report formats,
//! determinism, and the documented subcommand surface.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rkt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rkt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout is JSON")
}

fn write_instance(dir: &Path, name: &str, values: &[&str]) -> String {
    let doc = serde_json::json!({ "values": values });
    let path = dir.join(name);
    std::fs::write(&path, doc.to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn formats_count_prints_bare_number() {
    let out = rkt(&["formats", "--n", "6", "--count"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "6\n");

    let out = rkt(&["formats", "--n", "8", "--count"]);
    assert_eq!(stdout(&out), "22\n");
}

#[test]
fn formats_listing_contains_constructions() {
    let out = rkt(&["formats", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let rows = doc["formats"]["formats"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let rounds: Vec<&str> = rows.iter().map(|r| r["rounds"].as_str().unwrap()).collect();
    assert!(rounds.contains(&"2,2,1"));
    assert!(rounds.contains(&"1,1,1,1,1"));
    let balanced = rows.iter().find(|r| r["rounds"] == "2,2,1").unwrap();
    assert_eq!(balanced["aliveCounts"], "6,4,2");
}

#[test]
fn formats_guard_exits_three_without_force() {
    let out = rkt(&["formats", "--n", "17", "--count"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("--force"));

    let out = rkt(&["formats", "--n", "17", "--count", "--force"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn repro_prints_the_golden_fractions() {
    let out = rkt(&["repro", "--case", "n4-nonmonotone"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("31600/60903"));
    assert!(text.contains("7744/14925"));

    let out = rkt(&["repro"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["repro"]["pass"], true);
    assert_eq!(doc["repro"]["cases"].as_array().unwrap().len(), 2);

    let out = rkt(&["repro", "--case", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_rejects_infeasible_format_naming_the_round() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "i6.json", &["6", "4", "3", "1", "1", "1"]);
    let out = rkt(&["analyze", "--instance", &inst, "--format", "3,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("round 2"), "stderr: {}", stderr(&out));
}

#[test]
fn analyze_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "i.json", &["2", "1", "1"]);
    let a = rkt(&["analyze", "--instance", &inst, "--format", "1,1", "--reach"]);
    let b = rkt(&["analyze", "--instance", &inst, "--format", "1,1", "--reach"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let m1 = rkt(&["analyze", "--instance", &inst, "--mc", "--trials", "20000", "--seed", "5"]);
    let m2 = rkt(&["analyze", "--instance", &inst, "--mc", "--trials", "20000", "--seed", "5"]);
    assert_eq!(m1.status.code(), Some(0));
    assert_eq!(m1.stdout, m2.stdout);
}

#[test]
fn analyze_exact_and_mc_agree() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "i.json", &["2", "1", "1"]);
    let exact = json(&rkt(&["analyze", "--instance", &inst, "--format", "1,1"]));
    let mc = json(&rkt(&[
        "analyze", "--instance", &inst, "--format", "1,1", "--mode", "mc", "--trials", "40000",
        "--seed", "21",
    ]));
    let exact_rows = exact["results"]["perPlayer"].as_array().unwrap();
    let mc_rows = mc["results"]["perPlayer"].as_array().unwrap();
    assert_eq!(exact_rows.len(), mc_rows.len());
    for (e, m) in exact_rows.iter().zip(mc_rows) {
        let target: f64 = e["approx"].as_str().unwrap().parse().unwrap();
        let est: f64 = m["approx"].as_str().unwrap().parse().unwrap();
        let se: f64 = m["stdError"].as_str().unwrap().parse().unwrap();
        assert!(
            (est - target).abs() <= 4.0 * se,
            "estimate {est} vs exact {target} (se {se})"
        );
    }
    assert_eq!(mc["mc"]["trials"], 40000);
    assert_eq!(mc["metadata"]["engine"], "montecarlo");
}

#[test]
fn analyze_reach_rows_start_at_one() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "i.json", &["2", "1", "1"]);
    let doc = json(&rkt(&["analyze", "--instance", &inst, "--format", "1,1", "--reach"]));
    let reach = doc["results"]["reach"].as_array().unwrap();
    // 3 players x stages 1..=3
    assert_eq!(reach.len(), 9);
    for row in reach {
        if row["round"] == 1 {
            assert_eq!(row["exact"], "1/1");
        }
    }
    let p1_win = reach
        .iter()
        .find(|r| r["index"] == 1 && r["round"] == 3)
        .unwrap();
    assert_eq!(p1_win["exact"], "14/27");
}

#[test]
fn report_exact_strings_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "i.json", &["1/100", "2", "1", "1"]);
    let doc = json(&rkt(&["analyze", "--instance", &inst, "--format", "2,1"]));
    let rows = doc["results"]["perPlayer"].as_array().unwrap();

    // Recompute through the library and compare exact strings per input slot.
    let values = rkt::values::PlayerValues::parse_instance(
        &std::fs::read_to_string(dir.path().join("i.json")).unwrap(),
    )
    .unwrap();
    let format = rkt::format::Format::new(4, vec![2, 1]).unwrap();
    let canonical = rkt::exact::win_probabilities(&values, &format).unwrap();
    let original = values.to_original_order(&canonical);
    for (idx, row) in rows.iter().enumerate() {
        let reparsed = rkt::rational::parse_rational(row["exact"].as_str().unwrap()).unwrap();
        assert_eq!(reparsed, original[idx], "player {}", idx + 1);
    }
    // The strong player sits at input slot 2 here.
    assert_eq!(rows[1]["exact"], "31600/60903");
}

#[test]
fn guard_exceeded_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let thirteen: Vec<String> = (0..13).map(|_| "1".to_string()).collect();
    let refs: Vec<&str> = thirteen.iter().map(String::as_str).collect();
    let inst = write_instance(dir.path(), "i13.json", &refs);
    let out = rkt(&["analyze", "--instance", &inst]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("--mc"));
}

#[test]
fn montecarlo_has_no_size_guard() {
    let dir = tempfile::tempdir().unwrap();
    let twenty: Vec<String> = (0..20).map(|_| "1".to_string()).collect();
    let refs: Vec<&str> = twenty.iter().map(String::as_str).collect();
    let inst = write_instance(dir.path(), "i20.json", &refs);
    let out = rkt(&["analyze", "--instance", &inst, "--mc", "--trials", "2000", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn optimize_maps_player_indices_to_input_order() {
    let dir = tempfile::tempdir().unwrap();
    // The strong player is at input slot 2.
    let inst = write_instance(dir.path(), "i.json", &["1", "2", "1", "1"]);
    let doc = json(&rkt(&["optimize", "--instance", &inst, "--player", "2"]));
    assert_eq!(doc["search"]["player"], 2);
    assert_eq!(doc["search"]["argmax"][0], "2,1");
    assert_eq!(doc["search"]["argmin"][0], "1,1,1");
    let table = doc["search"]["table"].as_array().unwrap();
    let best = table.iter().find(|r| r["format"] == "2,1").unwrap();
    assert_eq!(best["exact"], "4/9");

    let out = rkt(&["optimize", "--instance", &inst, "--player", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites_pass_and_report() {
    let out = rkt(&["verify", "--suite", "weakest", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["verify"]["pass"], true);
    let suites = doc["verify"]["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["suite"], "weakest");
    assert_eq!(suites[0]["p"], "1/3");

    let out = rkt(&["verify", "--suite", "strongest", "--n-max", "4", "--p", "3/4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["verify"]["suites"][0]["p"], "3/4");
}

#[test]
fn bad_instances_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = rkt(&["analyze", "--instance", "/nonexistent/i.json"]);
    assert_eq!(out.status.code(), Some(2));

    let inst = write_instance(dir.path(), "bad.json", &["2", "zebra"]);
    let out = rkt(&["analyze", "--instance", &inst]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("zebra"));

    let inst = write_instance(dir.path(), "neg.json", &["2", "-1"]);
    let out = rkt(&["bounds", "--instance", &inst]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_and_table_outputs_render() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "i.json", &["2", "1", "1"]);
    let out = rkt(&["analyze", "--instance", &inst, "--format", "1,1", "--out", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("player,quantity,exact,approx\n"));
    assert!(text.contains("1,win,14/27,0.518519"));

    let out = rkt(&["bounds", "--instance", &inst, "--format", "1,1", "--out", "table"]);
    let text = stdout(&out);
    assert!(text.contains("surrogateLower"));
    assert!(out.status.code() == Some(0));
}

#[test]
fn help_and_bad_flags() {
    let out = rkt(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("analyze"));

    let out = rkt(&["analyze", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}
