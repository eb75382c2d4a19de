use std::process::{Command, Output};

fn ellr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellr"))
        .args(args)
        .env_remove("ELLR_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn check_at_fixed_parameters_passes_with_json_report() {
    let out = ellr(&[
        "check",
        "--p",
        "0.31",
        "--q-half",
        "0.6855654600401044",
        "--seed",
        "7",
        "--format",
        "json",
        "--no-timestamp",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema_version"], "ellr-report/1");
    assert!(doc.get("timestamp").is_none());
    assert_eq!(doc["summary"]["fail"], 0);
    assert_eq!(doc["config_echo"]["p"], serde_json::json!([0.31, 0.0]));
    let reports = doc["reports"].as_array().unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn off_critical_magic_exits_one() {
    let out = ellr(&["check", "--checks", "magic", "--alpha-beta-offset", "0.1", "--points", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("summary: 0 pass, 5 fail"), "{text}");
}

#[test]
fn critical_magic_exits_zero() {
    let out = ellr(&["check", "--checks", "magic,a_equals_n", "--points", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn invalid_nome_exits_two() {
    let out = ellr(&["check", "--p", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("|p| must be < 1"));
}

#[test]
fn malformed_flags_exit_two() {
    for args in [
        &["check", "--p", "0.3+k"][..],
        &["check", "--checks", "nope"],
        &["check", "--p-range", "0.1"],
        &["check", "--format", "xml"],
        &["eval", "Q", "--z", "1"],
    ] {
        let out = ellr(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn rerun_is_byte_identical_without_timestamp() {
    let args = ["check", "--checks", "dybe_r,twist", "--points", "6", "--format", "json", "--no-timestamp"];
    let a = ellr(&args);
    let b = ellr(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timestamp_is_present_by_default() {
    let out = ellr(&["check", "--checks", "twist", "--points", "2", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["timestamp"].as_str().unwrap().ends_with('Z'));
}

#[test]
fn report_is_written_to_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = ellr(&[
        "check",
        "--checks",
        "n_forms",
        "--points",
        "3",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("3 pass, 0 fail"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["summary"]["pass"], 3);
}

#[test]
fn config_file_and_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# small run\nchecks = theta_inversion\npoints = 4\nformat = json\ntimestamp = false\n").unwrap();

    let out = ellr(&["check", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["summary"]["pass"], 4);

    let via_env = Command::new(env!("CARGO_BIN_EXE_ellr"))
        .args(["check", "--points", "2"])
        .env("ELLR_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(via_env.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&via_env.stdout).unwrap();
    assert_eq!(doc["summary"]["pass"], 2, "flags override the file");
}

#[test]
fn bad_config_line_is_diagnosed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "points = 3\ntolerance = small\n").unwrap();
    let out = ellr(&["check", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("bad.cfg:2: tolerance"), "{err}");

    let out = ellr(&["check", "--config", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read config"));
}

fn parse_entries(text: &str) -> Vec<(usize, usize, f64, f64)> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn eval_r_dumps_sixteen_entries() {
    let out = ellr(&["eval", "R", "--z", "0.6+0.2i", "--s", "0.37+0.11i"]);
    assert_eq!(out.status.code(), Some(0));
    let entries = parse_entries(&stdout(&out));
    assert_eq!(entries.len(), 16);
    let rho = (1.3517393971096406, 1.187455906413671);
    let (_, _, re, im) = entries[0];
    assert!((re - rho.0).abs() < 1e-13 && (im - rho.1).abs() < 1e-13);
    let (_, _, re, im) = entries[1];
    assert_eq!((re, im), (0.0, 0.0));
}

#[test]
fn eval_scalars_and_singular_point() {
    let out = ellr(&["eval", "theta", "--z", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out).lines().last().unwrap().to_string();
    let vals: Vec<f64> = line.split_whitespace().map(|v| v.parse().unwrap()).collect();
    assert!(vals[0].abs() < 1e-9 && vals[1].abs() < 1e-9);

    let out = ellr(&["eval", "rho", "--z", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("singular point"));
}

#[test]
fn eval_json_and_missing_arguments() {
    let out = ellr(&["eval", "G", "--s", "0.2-0.1i", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["object"], "G");
    assert_eq!(doc["entries"].as_array().unwrap().len(), 2);

    let out = ellr(&["eval", "Rtilde", "--s", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("requires --z"));
}

#[test]
fn list_checks_prints_every_name() {
    let out = ellr(&["check", "--list-checks"]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<_> = stdout(&out).lines().map(String::from).collect();
    assert!(names.contains(&"trace_exchange".to_string()));
    assert_eq!(names.len(), 27);
}
