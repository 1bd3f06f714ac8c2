use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn sheetlint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sheetlint"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_text_lists_blocks() {
    let o = sheetlint(&["analyze", path(&fixture("running-example.json"))]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    for block in [
        "Block Department1!B4:F8",
        "Block Total!B4:E8",
        "Block Investment!B3:B5",
        "Block Investment!B9:E11",
    ] {
        assert!(text.contains(block), "{block}");
    }
}

#[test]
fn analyze_json_is_machine_readable() {
    let o = sheetlint(&["analyze", path(&fixture("running-example.json")), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let inv = v["sheets"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["name"] == "Investment")
        .unwrap();
    let blocks: Vec<&str> = inv["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["range"].as_str().unwrap())
        .collect();
    assert_eq!(blocks, ["B3:B5", "B9:E11"]);
}

#[test]
fn analyze_constants_only_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.json");
    fs::write(
        &f,
        r#"{"schema_version":1,"sheets":[{"name":"S","cells":[{"addr":"A1","type":"numeric","value":1}]}]}"#,
    )
    .unwrap();
    let o = sheetlint(&["analyze", path(&f), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sheets"][0]["blocks"].as_array().unwrap().len(), 0);
    assert_eq!(v["sheets"][0]["formula_groups"].as_array().unwrap().len(), 0);
}

#[test]
fn analyze_reports_load_errors_with_the_cell() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    fs::write(
        &f,
        r#"{"schema_version":1,"sheets":[{"name":"S","cells":[{"addr":"C7","type":"formula","formula":"SUM(A1"}]}]}"#,
    )
    .unwrap();
    let o = sheetlint(&["analyze", path(&f)]);
    assert!(!o.status.success());
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("C7"), "{}", stderr(&o));
}

#[test]
fn smells_group_long_chain() {
    let o = sheetlint(&[
        "smells",
        path(&fixture("running-example.json")),
        "--detectors",
        "group-long-chain",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v["smells"][0]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["metric_value"], 7.0);
    assert_eq!(reports[0]["risk"], "high");
    assert_eq!(reports[0]["subject"]["range"], "E9:E11");
}

#[test]
fn smells_missing_header_lists_d3() {
    let o = sheetlint(&[
        "smells",
        path(&fixture("missing-header.json")),
        "--detectors",
        "missing-header",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("missing-header (1)"), "{text}");
    assert!(text.contains("vacant: D3"), "{text}");
}

#[test]
fn smells_unknown_detector_is_a_usage_error() {
    let o = sheetlint(&[
        "smells",
        path(&fixture("running-example.json")),
        "--detectors",
        "nonsense",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("group-long-chain") && err.contains("missing-header"),
        "{err}"
    );
}

#[test]
fn smells_fail_on_gates() {
    let f = fixture("running-example.json");
    let o = sheetlint(&[
        "smells",
        path(&f),
        "--detectors",
        "group-long-chain",
        "--fail-on",
        "high",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = sheetlint(&["smells", path(&f), "--detectors", "missing-header", "--fail-on", "high"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn smells_thresholds_file() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    fs::write(&t, r#"{"long_chain": {"low": 4, "high": 8}}"#).unwrap();
    let f = fixture("running-example.json");
    let o = sheetlint(&[
        "smells",
        path(&f),
        "--detectors",
        "group-long-chain",
        "--thresholds",
        path(&t),
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["smells"][0]["reports"].as_array().unwrap().is_empty());

    fs::write(&t, r#"{"long_chain": {"low": 9, "high": 2}}"#).unwrap();
    let o = sheetlint(&["smells", path(&f), "--thresholds", path(&t)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn preprocess_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    fs::copy(fixture("running-example.json"), corpus.join("a.json")).unwrap();
    fs::write(corpus.join("b.xlsx"), b"junk").unwrap();
    fs::write(corpus.join("c.json"), r#"{"schema_version":1,"sheets":[]}"#).unwrap();
    let out = dir.path().join("report.json");
    let o = sheetlint(&["preprocess", path(&corpus), "--filter", "complete", "--out", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["accepted"], serde_json::json!(["a.json"]));
    assert_eq!(v["excluded_unreadable"], 1);
    assert_eq!(v["excluded_no_formulas"], 1);

    let o = sheetlint(&["preprocess", path(&corpus), "--filter", "has-formulas"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["excluded_unreadable"], 0);
    assert_eq!(v["excluded_no_formulas"], 1);
}

#[test]
fn preprocess_missing_directory_fails() {
    let o = sheetlint(&["preprocess", "/nonexistent/corpus"]);
    assert!(!o.status.success());
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn evaluate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = sheetlint(&["evaluate", path(&fixture("")), "--out", path(&out), "--threads", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("summary.json").is_file());
    assert!(out.join("group-long-chain.csv").is_file());
    assert!(out.join("quartiles/baseline-pattern-finder_column.csv").is_file());
    let csv = fs::read_to_string(out.join("group-long-chain.csv")).unwrap();
    assert!(csv.starts_with("kind,file,worksheet,subject,metric_value\n"));
    assert!(csv.contains("group-long-chain,running-example.json,Investment,E9:E11,7\n"));
}

#[test]
fn evaluate_timeout_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    let mut cells = Vec::new();
    for r in 1..=120 {
        cells.push(format!(r#"{{"addr":"A{r}","type":"numeric","value":1}}"#));
        for c in 2..=60u32 {
            let (p, h) = (sheetlint::grid::column_name(c - 1), sheetlint::grid::column_name(c));
            cells.push(format!(r#"{{"addr":"{h}{r}","type":"formula","formula":"{p}{r}*2"}}"#));
        }
    }
    fs::write(
        corpus.join("slow.json"),
        format!(
            r#"{{"schema_version":1,"sheets":[{{"name":"S","cells":[{}]}}]}}"#,
            cells.join(",")
        ),
    )
    .unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"timeout_secs": 0.001}"#).unwrap();
    let out = dir.path().join("out");
    let o = sheetlint(&["evaluate", path(&corpus), "--config", path(&cfg), "--out", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(v["timed_out"], serde_json::json!(["slow.json"]));
}

#[test]
fn evaluate_bad_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"timeout_secs": -1}"#).unwrap();
    let o = sheetlint(&[
        "evaluate",
        path(&fixture("")),
        "--config",
        path(&cfg),
        "--out",
        path(dir.path()),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("timeout_secs"));
}
