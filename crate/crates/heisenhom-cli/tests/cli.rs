//! End-to-end tests against the compiled binary: exact outputs for the
//! documented invocations, exit statuses, schema round-trips, determinism.

use std::process::{Command, Output};

use heisenhom::{heisenberg_algebra, FieldChar};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heisenhom"))
        .env_remove("HEISENHOM_CAP")
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

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn betti_formula_matches_expansion() {
    let out = run(&["betti", "--n", "1", "--char", "2", "--method", "formula"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 2 2 1\n");
}

#[test]
fn betti_all_prints_three_rows_and_agrees() {
    let out = run(&["betti", "--n", "3", "--char", "2", "--method", "all"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "rank:    1 6 14 15 15 14 6 1\n\
         morse:   1 6 14 15 15 14 6 1\n\
         formula: 1 6 14 15 15 14 6 1\n\
         AGREE\n"
    );
}

#[test]
fn non_prime_characteristic_is_a_usage_error() {
    let out = run(&["betti", "--n", "2", "--char", "4"]);
    assert_eq!(code(&out), 2);
    let msg = stderr(&out);
    assert!(msg.contains('4') && msg.contains("prime"), "got: {msg}");
}

#[test]
fn rank_route_works_over_any_prime() {
    let out = run(&["betti", "--n", "3", "--char", "1009"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 6 14 14 14 14 6 1\n");

    let out = run(&["betti", "--n", "3", "--char", "3", "--method", "rank"]);
    assert_eq!(stdout(&out), "1 6 14 14 14 14 6 1\n");
}

#[test]
fn gf2_methods_reject_odd_characteristics() {
    for method in ["morse", "formula", "all"] {
        let out = run(&["betti", "--n", "2", "--char", "3", "--method", method]);
        assert_eq!(code(&out), 2, "method {method}");
        assert!(stderr(&out).contains("--char 2"), "method {method}");
    }
}

#[test]
fn csv_with_method_all_is_rejected() {
    let out = run(&["betti", "--n", "2", "--method", "all", "--format", "csv"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn betti_json_schema() {
    let out = run(&["betti", "--n", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["n"], 2);
    assert_eq!(doc["characteristic"], 2);
    assert_eq!(doc["method"], "rank");
    assert_eq!(doc["betti"], serde_json::json!([1, 4, 5, 5, 4, 1]));
}

#[test]
fn verify_passes_at_small_n() {
    let out = run(&["verify", "--n", "2", "--char", "2"]);
    assert_eq!(code(&out), 0);
    let report = stdout(&out);
    assert!(report.contains("d_squared"));
    assert!(report.contains("result: PASS"));
    assert!(!report.contains("FAIL ("), "got: {report}");
    assert!(!report.contains("SKIPPED"), "got: {report}");
}

#[test]
fn verify_passes_in_the_degenerate_case() {
    let out = run(&["verify", "--n", "0", "--char", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("result: PASS"));
}

#[test]
fn verify_above_caps_skips_and_still_passes() {
    let out = run(&["verify", "--n", "14", "--char", "2"]);
    assert_eq!(code(&out), 0);
    let report = stdout(&out);
    assert!(report.contains("SKIPPED(cap)"), "got: {report}");
    assert!(report.contains("exact_divisibility"), "got: {report}");
    assert!(report.contains("result: PASS"), "got: {report}");
}

#[test]
fn verify_respects_the_morse_cap_flag() {
    let out = run(&["verify", "--n", "4", "--char", "2", "--morse-cap", "3"]);
    assert_eq!(code(&out), 0);
    let report = stdout(&out);
    assert!(report.contains("morse_differential_zero    SKIPPED(cap)"));
    assert!(report.contains("d_squared                  PASS"));
}

#[test]
fn verify_json_report() {
    let out = run(&["verify", "--n", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"], "PASS");
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    assert!(checks.iter().all(|c| c["status"] == "PASS"));
}

#[test]
fn matching_lists_the_single_edge_at_n1() {
    let out = run(&["matching", "--n", "1", "--edges"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "x1^y1 -> z\n");
}

#[test]
fn matching_lists_critical_cells_in_canonical_notation() {
    let out = run(&["matching", "--n", "1", "--critical"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "deg 0: 1 | deg 1: x1, y1 | deg 2: z^x1, z^y1 | deg 3: z^x1^y1\n"
    );

    let out = run(&["matching", "--n", "0", "--critical"]);
    assert_eq!(stdout(&out), "deg 0: 1 | deg 1: z\n");
}

#[test]
fn matching_without_flags_lists_both() {
    let out = run(&["matching", "--n", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "x1^y1 -> z\ndeg 0: 1 | deg 1: x1, y1 | deg 2: z^x1, z^y1 | deg 3: z^x1^y1\n"
    );
}

#[test]
fn export_complex_n1_has_the_single_boundary_entry() {
    let out = run(&["export", "complex", "--n", "1", "--char", "2"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let dims: Vec<u64> = doc["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["dimension"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [1, 3, 3, 1]);
    let boundaries = doc["boundaries"].as_array().unwrap();
    assert_eq!(boundaries.len(), 3);
    assert_eq!(boundaries[0]["entries"], serde_json::json!([]));
    assert_eq!(boundaries[1]["degree"], 2);
    assert_eq!(boundaries[1]["entries"], serde_json::json!([[0, 2, 1]]));
    assert_eq!(boundaries[2]["entries"], serde_json::json!([]));
}

#[test]
fn export_betti_csv_rows() {
    let out = run(&["export", "betti", "--n", "2", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "i,b_i\n0,1\n1,4\n2,5\n3,5\n4,4\n5,1\n");
}

#[test]
fn export_betti_degenerate_case() {
    let out = run(&["export", "betti", "--n", "0"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["betti"], serde_json::json!([1, 1]));
}

#[test]
fn export_matching_schema() {
    let out = run(&["export", "matching", "--n", "1"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let edges = doc["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 1);
    assert_eq!(edges[0]["source"], "x1^y1");
    assert_eq!(edges[0]["target"], "z");
    assert_eq!(doc["critical"].as_array().unwrap().len(), 4);
}

#[test]
fn exported_complex_round_trips_bit_exactly() {
    for n in 0..=3usize {
        for p in [2u64, 5] {
            let out = run(&[
                "export",
                "complex",
                "--n",
                &n.to_string(),
                "--char",
                &p.to_string(),
            ]);
            assert_eq!(code(&out), 0);
            let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
            let h = heisenberg_algebra(n).unwrap();
            let fc = FieldChar::new(p).unwrap();
            let boundaries = doc["boundaries"].as_array().unwrap();
            assert_eq!(boundaries.len(), h.dim());
            for b in boundaries {
                let degree = b["degree"].as_u64().unwrap() as usize;
                let expected = h.boundary_matrix(degree, fc);
                assert_eq!(b["rows"].as_u64().unwrap() as usize, expected.rows);
                assert_eq!(b["cols"].as_u64().unwrap() as usize, expected.cols);
                let entries: Vec<(u32, u32, u64)> =
                    serde_json::from_value(b["entries"].clone()).unwrap();
                assert_eq!(entries, expected.entries, "n={n} p={p} degree={degree}");
            }
        }
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    for args in [
        vec!["export", "complex", "--n", "2", "--char", "3"],
        vec!["verify", "--n", "2", "--format", "json"],
        vec!["betti", "--n", "3", "--method", "all"],
        vec!["export", "matching", "--n", "2"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
        assert_eq!(code(&first), code(&second));
    }
}

#[test]
fn output_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("betti.txt");
    let out = run(&[
        "betti",
        "--n",
        "1",
        "--method",
        "formula",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "1 2 2 1\n");
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("no-such-dir").join("x.json");
    let out = run(&["betti", "--n", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
}

#[test]
fn dimension_above_the_cap_is_status_3() {
    let out = run(&["betti", "--n", "20"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("cap"));

    // the env variable raises the cap; the formula route then answers
    let out = Command::new(env!("CARGO_BIN_EXE_heisenhom"))
        .env("HEISENHOM_CAP", "63")
        .args(["betti", "--n", "20", "--method", "formula"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("1 40 779 "));

    // --cap beats the environment
    let out = Command::new(env!("CARGO_BIN_EXE_heisenhom"))
        .env("HEISENHOM_CAP", "63")
        .args(["betti", "--n", "20", "--method", "formula", "--cap", "29"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn garbage_in_the_cap_variable_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_heisenhom"))
        .env("HEISENHOM_CAP", "not-a-number")
        .args(["betti", "--n", "1"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}
