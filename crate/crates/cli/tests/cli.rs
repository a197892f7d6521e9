use std::process::{Command, Output};

fn gkcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkcs"))
        .args(args)
        .env_remove("GKCS_EVAL_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_passes_for_the_free_box() {
    let o = gkcs(&["validate", "--nu", "0", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for id in 1..=10 {
        assert!(text.contains(&format!("{id:>2} pass")), "criterion {id} missing:\n{text}");
    }
}

#[test]
fn spectrum_csv_has_one_row_per_level() {
    let o = gkcs(&["spectrum", "--nu", "0.5", "--beta", "0.7", "--levels", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,energy,excitation,rho");
    assert_eq!(lines.len(), 6);
    let e0: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    // E_0 = s (nu+1)^2 - beta^2 / (nu+1)^2 with s = 1
    assert!((e0 - (2.25 - 0.49 / 2.25)).abs() < 1e-14, "{e0}");
}

#[test]
fn stats_scan_columns_and_vacuum_row() {
    let o = gkcs(&["stats-scan", "--x", "0:1:0.25", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rows.headers().unwrap().iter().collect::<Vec<_>>(),
        ["x", "mean_n", "mandel_q", "fano", "g2", "metric_w"]
    );
    let records: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 5);
    let first: Vec<f64> = records[0].iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[1], 0.0);
    // g2 at the vacuum is a/(a+1) with a = 2 nu + 3
    assert!((first[4] - 0.75).abs() < 1e-12);
}

#[test]
fn geometry_scan_columns() {
    let o = gkcs(&["geometry-scan", "--x", "0:2:1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("x,metric_w,tangent_norm,projection"));
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        assert!((v[1] - (v[2] - v[3])).abs() < 1e-12, "{line}");
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["stats-scan", "--nu", "1.3", "--beta", "0.4", "--x", "0:3:0.05", "--format", "csv"];
    let a = gkcs(&args);
    let b = gkcs(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cs_json_parses_and_carries_full_precision() {
    let o = gkcs(&["cs", "--nu", "0.3", "--z-re", "0.5", "--z-im", "0.2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let x = v["x"].as_f64().unwrap();
    assert_eq!(x, 0.5f64 * 0.5 + 0.2 * 0.2);
    let probs: f64 = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["probability"].as_f64().unwrap())
        .sum();
    assert!((probs - 1.0).abs() < 1e-12, "{probs}");
}

#[test]
fn quantize_json_is_square() {
    let o = gkcs(&["quantize", "--symbol", "z", "--nmax", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["entries"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.as_array().unwrap().len() == 5));
}

#[test]
fn bad_flags_and_parameters_exit_2() {
    assert_eq!(gkcs(&["spectrum", "--bogus"]).status.code(), Some(2));
    assert_eq!(gkcs(&["spectrum", "--nu=-3"]).status.code(), Some(2));
    assert_eq!(gkcs(&["cs", "--tol", "2"]).status.code(), Some(2));
    assert_eq!(gkcs(&["stats-scan", "--x", "1:0:0.1"]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_gkcs"))
        .args(["quantize", "--symbol", "radial-power", "--nu", "0.5", "--nmax", "4"])
        .env("GKCS_EVAL_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn svg_output_is_a_document() {
    let o = gkcs(&["spectrum", "--levels", "4", "--format", "svg"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("<svg"));
    assert!(text.trim_end().ends_with("</svg>"));
    assert_eq!(text.matches("<rect x=").count(), 4);
}
