//! End-to-end tests of the command-line surface: flag and config-file
//! resolution, report schemas, word syntax, and failure diagnostics.

use std::io::Write;
use std::process::Command;

use serde_json::Value;

fn nilprog(args: &[&str]) -> (Value, bool) {
    let output = Command::new(env!("CARGO_BIN_EXE_nilprog"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(output.stdout).unwrap();
    let value = if output.status.success() {
        serde_json::from_str(&stdout).unwrap_or(Value::Null)
    } else {
        Value::Null
    };
    (value, output.status.success())
}

fn nilprog_raw(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nilprog"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn words_json_schema() {
    let (report, ok) = nilprog(&["words", "--d", "2", "--k", "2", "--format", "json"]);
    assert!(ok);
    assert_eq!(report["count"], 19);
    assert_eq!(report["config"]["command"], "words");
    assert_eq!(report["config"]["k"], 2);
    assert_eq!(report["config"]["equivalence"], "coordinate-canonical");
    let words = report["words"].as_array().unwrap();
    assert_eq!(words.len(), 19);
    assert_eq!(words[0], "e");
    assert_eq!(words[1], "*1");
}

#[test]
fn words_count_only_uses_closed_form() {
    let (report, ok) = nilprog(&[
        "words",
        "--d",
        "4",
        "--k",
        "3",
        "--count-only",
        "true",
        "--equivalence",
        "raw",
        "--format",
        "json",
    ]);
    assert!(ok);
    assert_eq!(report["count"], 1107697);
    assert!(report.get("words").is_none());

    // canonical classes factor over the two coordinate blocks: 69^2
    let (report, ok) = nilprog(&[
        "words",
        "--d",
        "4",
        "--k",
        "3",
        "--count-only",
        "true",
        "--format",
        "json",
    ]);
    assert!(ok);
    assert_eq!(report["count"], 4761);
}

#[test]
fn words_respects_convention_flags() {
    let (report, _) = nilprog(&[
        "words",
        "--d",
        "4",
        "--k",
        "1",
        "--equivalence",
        "raw",
        "--format",
        "json",
    ]);
    assert_eq!(report["count"], 65);
    let (report, _) = nilprog(&[
        "words",
        "--d",
        "4",
        "--k",
        "1",
        "--equivalence",
        "coordinate-canonical",
        "--format",
        "json",
    ]);
    assert_eq!(report["count"], 25);
    let (report, _) = nilprog(&[
        "words",
        "--d",
        "2",
        "--k",
        "1",
        "--include-empty",
        "false",
        "--format",
        "json",
    ]);
    assert_eq!(report["count"], 4);
}

#[test]
fn eval_matches_pinned_element_schema() {
    let (report, ok) = nilprog(&[
        "eval", "--d", "2", "--k", "1", "--word", "*1*2", "--format", "json",
    ]);
    assert!(ok);
    assert_eq!(
        report["element"],
        serde_json::json!({"coords": [{"shift": 1, "offset": [0, 1]}]})
    );
    // S then R gives the other order
    let (report, _) = nilprog(&[
        "eval", "--d", "2", "--k", "1", "--word", "*2*1", "--format", "json",
    ]);
    assert_eq!(
        report["element"],
        serde_json::json!({"coords": [{"shift": 1, "offset": [1, 1]}]})
    );
    // empty word
    let (report, _) = nilprog(&[
        "eval", "--d", "2", "--k", "1", "--word", "e", "--format", "json",
    ]);
    assert_eq!(
        report["element"],
        serde_json::json!({"coords": [{"shift": 0, "offset": []}]})
    );
}

#[test]
fn eval_rejects_nonconforming_words() {
    let out = nilprog_raw(&["eval", "--d", "2", "--k", "1", "--word", "*1*1"]);
    assert!(!out.status.success());
    let out = nilprog_raw(&["eval", "--d", "2", "--k", "1", "--word", "*3"]);
    assert!(!out.status.success());
    let out = nilprog_raw(&["eval", "--d", "2", "--k", "1", "--word", "x"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("cannot parse word"));
}

#[test]
fn class_reports_label_discrepancy() {
    let (report, ok) = nilprog(&["class", "--k", "2", "--d", "2", "--format", "json"]);
    assert!(ok);
    assert_eq!(report["class"], 3);
    assert_eq!(report["label_mismatch"], true);
    assert!(report["note"].as_str().unwrap().contains("2-step"));
    let witness = &report["witness"];
    assert_eq!(witness["letters"].as_array().unwrap().len(), 3);
    assert_eq!(
        witness["element"],
        serde_json::json!({"coords": [{"shift": 0, "offset": [2]}]})
    );
}

#[test]
fn nilprog_check_reports_both_counts() {
    let (report, ok) = nilprog(&["nilprog-check", "--k", "1", "--d", "4", "--format", "json"]);
    assert!(ok);
    let p = &report["progression"];
    assert_eq!(p["word_count"], 25);
    assert_eq!(p["word_count_raw"], 65);
    assert_eq!(p["word_count_canonical"], 25);
    assert_eq!(p["nondegenerate"], true);
    assert_eq!(p["elements"].as_array().unwrap().len(), 25);
}

#[test]
fn certify_ap_examples() {
    let (report, ok) = nilprog(&[
        "certify",
        "--baseline",
        "ap",
        "--range",
        "9",
        "--k",
        "3",
        "--r",
        "2",
        "--format",
        "json",
    ]);
    assert!(ok);
    assert_eq!(report["outcome"], "partition_regular");
    assert_eq!(report["edges"], 16);
    assert!(report.get("coloring").is_none());

    let (report, ok) = nilprog(&[
        "certify",
        "--baseline",
        "ap",
        "--range",
        "8",
        "--k",
        "3",
        "--r",
        "2",
        "--format",
        "json",
    ]);
    assert!(ok);
    assert_eq!(report["outcome"], "counterexample");
    let coloring = report["coloring"].as_array().unwrap();
    assert_eq!(coloring.len(), 8);
}

#[test]
fn certify_ap_set_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    std::fs::write(&path, "[1,2,4,8]").unwrap();
    let (report, ok) = nilprog(&[
        "certify",
        "--baseline",
        "ap",
        "--set",
        path.to_str().unwrap(),
        "--k",
        "3",
        "--r",
        "2",
        "--format",
        "json",
    ]);
    assert!(ok);
    // no 3-term progression at all: the all-one-class coloring avoids
    assert_eq!(report["edges"], 0);
    assert_eq!(report["outcome"], "counterexample");
}

#[test]
fn certify_nilprog_roundtrip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let check = nilprog_raw(&["nilprog-check", "--k", "1", "--d", "2", "--format", "json"]);
    assert!(check.status.success());
    let report: Value = serde_json::from_slice(&check.stdout).unwrap();
    let elements = report["progression"]["elements"].clone();
    let set_path = dir.path().join("v.json");
    serde_json::to_writer(std::fs::File::create(&set_path).unwrap(), &elements).unwrap();

    let (report, ok) = nilprog(&[
        "certify",
        "--baseline",
        "nilprog",
        "--set",
        set_path.to_str().unwrap(),
        "--k",
        "1",
        "--d",
        "2",
        "--r",
        "1",
        "--format",
        "json",
    ]);
    assert!(ok);
    // one class must contain the single 5-element pattern
    assert_eq!(report["outcome"], "partition_regular");
    assert_eq!(report["edges"], 1);
    assert_eq!(report["scope"]["pools"]["gen_pool_size"], 5);

    // with r=2 a two-coloring splits the only edge
    let (report, ok) = nilprog(&[
        "certify",
        "--baseline",
        "nilprog",
        "--set",
        set_path.to_str().unwrap(),
        "--k",
        "1",
        "--d",
        "2",
        "--r",
        "2",
        "--format",
        "json",
    ]);
    assert!(ok);
    assert_eq!(report["outcome"], "counterexample");
}

#[test]
fn search_witness_reports() {
    let (report, ok) = nilprog(&[
        "search-witness",
        "--baseline",
        "ap",
        "--k",
        "3",
        "--r",
        "2",
        "--size-limit",
        "6",
        "--range",
        "10",
        "--format",
        "json",
    ]);
    assert!(ok);
    assert_eq!(report["exhausted"], true);
    assert_eq!(report["candidates_checked"], 848);
    assert!(report.get("found").is_none());

    let (report, ok) = nilprog(&[
        "search-witness",
        "--baseline",
        "ap",
        "--k",
        "3",
        "--r",
        "2",
        "--size-limit",
        "9",
        "--range",
        "9",
        "--check-absence",
        "false",
        "--format",
        "json",
    ]);
    assert!(ok);
    assert_eq!(report["exhausted"], false);
    let items = report["found"]["integers"]["items"].as_array().unwrap();
    let values: Vec<i64> = items.iter().map(|v| v.as_i64().unwrap()).collect();
    assert_eq!(values, (1..=9).collect::<Vec<i64>>());
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "command = \"words\"").unwrap();
    writeln!(file, "k = 2").unwrap();
    writeln!(file, "d = 2").unwrap();
    writeln!(file, "format = \"json\"").unwrap();
    drop(file);

    let (report, ok) = nilprog(&["--config", path.to_str().unwrap()]);
    assert!(ok);
    assert_eq!(report["count"], 19);

    // a flag overrides the file value
    let (report, ok) = nilprog(&["words", "--config", path.to_str().unwrap(), "--k", "1"]);
    assert!(ok);
    assert_eq!(report["count"], 5);
    assert_eq!(report["config"]["k"], 1);
}

#[test]
fn config_rejects_unknown_and_invalid_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "command = \"words\"\nk = 2\nd = 2\nbogus = 1\n").unwrap();
    let out = nilprog_raw(&["--config", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("unknown config key `bogus`"),
        "stderr: {stderr}"
    );

    let path = dir.path().join("wrong_type.toml");
    std::fs::write(&path, "command = \"words\"\nk = \"two\"\nd = 2\n").unwrap();
    let out = nilprog_raw(&["--config", path.to_str().unwrap()]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("`k`"), "stderr: {stderr}");
}

#[test]
fn missing_required_key_is_named() {
    let out = nilprog_raw(&["words", "--d", "2"]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("missing required key `k`"),
        "stderr: {stderr}"
    );
}

#[test]
fn invalid_parameters_are_rejected() {
    let out = nilprog_raw(&[
        "certify",
        "--baseline",
        "ap",
        "--range",
        "9",
        "--k",
        "2",
        "--r",
        "2",
    ]);
    assert!(!out.status.success());
    let out = nilprog_raw(&[
        "certify",
        "--baseline",
        "ap",
        "--range",
        "9",
        "--k",
        "3",
        "--r",
        "0",
    ]);
    assert!(!out.status.success());
    let out = nilprog_raw(&["class", "--k", "0", "--d", "2"]);
    assert!(!out.status.success());
    let out = nilprog_raw(&["words", "--d", "2", "--k", "2", "--workers", "0"]);
    assert!(!out.status.success());
}

#[test]
fn text_format_is_default_and_human_readable() {
    let out = nilprog_raw(&[
        "certify",
        "--baseline",
        "ap",
        "--range",
        "9",
        "--k",
        "3",
        "--r",
        "2",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("outcome: partition_regular"));
    assert!(serde_json::from_str::<Value>(&stdout).is_err());
}

#[test]
fn json_reports_parse_and_embed_config() {
    for args in [
        vec!["words", "--d", "3", "--k", "1"],
        vec!["class", "--k", "1", "--d", "2"],
        vec!["eval", "--d", "2", "--k", "2", "--word", "*1*2*2"],
        vec!["nilprog-check", "--k", "1", "--d", "3"],
        vec![
            "certify",
            "--baseline",
            "ap",
            "--range",
            "5",
            "--k",
            "3",
            "--r",
            "2",
        ],
    ] {
        let mut with_json = args.clone();
        with_json.extend(["--format", "json"]);
        let (report, ok) = nilprog(&with_json);
        assert!(ok, "{args:?}");
        assert_eq!(report["config"]["format"], "json");
        assert!(report["config"]["command"].is_string());
    }
}
