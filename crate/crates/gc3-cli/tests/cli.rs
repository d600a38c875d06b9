use std::path::PathBuf;
use std::process::{Command, Output};

use gc3_cli::report::{Check, Format, Status, TableRow, VerificationReport};
use serde_json::Value;

fn gc3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gc3")).args(args).output().expect("binary runs")
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("gc3-cli-{}-{name}", std::process::id()))
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn complex_suite_passes() {
    let out = gc3(&["verify", "complex", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["suite"], "complex");
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["dim-6-6", "boundary-x", "homology", "pairings-x", "bracket-y3-d3", "maurer-cartan", "lambda-cocycles"]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn corrupted_cycle_fails_the_boundary_check() {
    let path = temp("x.txt");
    let text = gc3::data::X_CYCLE.replacen("1 * G266", "2 * G266", 1);
    assert_ne!(text, gc3::data::X_CYCLE);
    std::fs::write(&path, text).unwrap();
    let out = gc3(&["verify", "complex", "--x-file", path.to_str().unwrap(), "--format", "csv"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("complex,boundary-x,fail,")), "{text}");
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    assert_eq!(gc3(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(gc3(&["verify", "complex", "--x-file", "/nonexistent/x.txt"]).status.code(), Some(2));
    assert_eq!(gc3(&["verify", "complex", "--samples", "lots"]).status.code(), Some(2));
    assert_eq!(gc3(&["table4", "--format", "xml"]).status.code(), Some(2));
    let bad = temp("bad.txt");
    std::fs::write(&bad, "not a chain\n").unwrap();
    assert_eq!(gc3(&["verify", "complex", "--x-file", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_file(&bad).unwrap();
}

#[test]
fn table_replays_from_cache() {
    // two table graphs and one graph with zero numerator
    let graphs = temp("graphs.txt");
    std::fs::write(&graphs, "G234: 112|46|56|456|6|6|\nG199: 445|446|556|456|||\n456|455|445|666|||\n").unwrap();
    let cache = temp("cache.jsonl");
    let _ = std::fs::remove_file(&cache);
    let args = ["table4", "--graphs", graphs.to_str().unwrap(), "--cache", cache.to_str().unwrap(), "--samples", "5000", "--seed", "3", "--jobs", "1", "--format", "json"];
    let first = gc3(&args);
    let second = gc3(&args);
    std::fs::remove_file(&graphs).unwrap();
    std::fs::remove_file(&cache).unwrap();
    // the table check fails on a partial list
    assert_eq!(first.status.code(), Some(1));
    let (a, b) = (json(&first), json(&second));
    let rows_a = a["rows"].as_array().unwrap();
    let rows_b = b["rows"].as_array().unwrap();
    assert_eq!(rows_a.len(), 2);
    for (x, y) in rows_a.iter().zip(rows_b) {
        assert_eq!(x["value"], y["value"]);
        assert_eq!(x["std_error"], y["std_error"]);
        assert_eq!(x["new_samples"], 5000);
        assert_eq!(y["new_samples"], 0);
    }
    assert!(rows_a.iter().all(|r| r["samples"] == 5000));
    let census = a["checks"].as_array().unwrap().iter().find(|c| c["id"] == "numerator-census").unwrap();
    assert!(census["observed"].as_str().unwrap().starts_with("2 non-zero of 3"));
}

#[test]
fn small_values_get_ten_times_the_samples() {
    let graphs = temp("small.txt");
    let row = gc3::data::table4().into_iter().find(|r| r.name == "G239").unwrap();
    std::fs::write(&graphs, format!("G239: {}\n", row.edges)).unwrap();
    let out = gc3(&["table4", "--graphs", graphs.to_str().unwrap(), "--samples", "1000", "--format", "json"]);
    std::fs::remove_file(&graphs).unwrap();
    let v = json(&out);
    assert_eq!(v["rows"][0]["samples"], 10_000);
}

#[test]
fn time_limit_marks_rows_skipped() {
    let graphs = temp("limit.txt");
    std::fs::write(&graphs, "G199: 445|446|556|456|||\n").unwrap();
    let out = gc3(&["table4", "--graphs", graphs.to_str().unwrap(), "--samples", "1000", "--time-limit", "0", "--format", "json"]);
    std::fs::remove_file(&graphs).unwrap();
    let v = json(&out);
    assert_eq!(v["rows"][0]["status"], "skipped");
    assert!(v["rows"][0]["value"].is_null());
}

fn sample_report() -> VerificationReport {
    VerificationReport {
        suite: "demo".into(),
        checks: vec![
            Check::exact("a", true, 1, 1),
            Check { id: "b".into(), status: Status::Fail, expected: "x, y".into(), observed: "say \"z\"".into(), tolerance: "3 sigma".into() },
            Check::skipped("c", 0, "later"),
        ],
        rows: vec![TableRow {
            name: "G1".into(),
            edges: "111|".into(),
            expected: -14.20264,
            value: -14.215012345678901,
            std_error: 0.0301234,
            method: "monte-carlo".into(),
            samples: 10,
            new_samples: 10,
            status: Status::Pass,
        }],
        wall_time_seconds: 1.5,
    }
}

#[test]
fn formats_carry_the_same_numbers() {
    let r = sample_report();
    assert!(!r.passed());
    let j: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
    let table = r.render(Format::Table);
    let csv = r.render(Format::Csv);
    for key in ["expected", "value", "std_error"] {
        let n = j["rows"][0][key].as_f64().unwrap().to_string();
        assert!(table.contains(&n), "{key} {n}");
        assert!(csv.contains(&n), "{key} {n}");
    }
    assert!(csv.contains("demo,b,fail,\"x, y\",\"say \"\"z\"\"\",3 sigma"));
    assert_eq!(j["checks"][2]["status"], "skipped");
}
