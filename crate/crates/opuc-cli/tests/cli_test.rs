//! End-to-end checks of the `opuc` binary: golden CSV output, byte
//! stability, the JSON contracts of `verify` and `chain`, and the exit-code
//! mapping (0 success, 1 verification failure, 2 configuration error).

use std::process::{Command, Output};

fn opuc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opuc"))
        .args(args)
        .env_remove("OPUC_QUADN")
        .output()
        .expect("binary runs")
}

fn opuc_with_quadn(args: &[&str], quadn: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opuc"))
        .args(args)
        .env("OPUC_QUADN", quadn)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn zeros_csv_matches_reference_values() {
    let out = opuc(&["zeros", "--preset", "christoffel-1", "--n", "5"]);
    assert_eq!(code(&out), 0);
    let want = "re,im\n\
                -0.670332,0.000000\n\
                -0.375695,-0.570175\n\
                -0.375695,0.570175\n\
                0.294195,-0.668367\n\
                0.294195,0.668367\n";
    assert_eq!(stdout_str(&out), want);
}

#[test]
fn zeros_output_is_byte_stable() {
    let args = ["zeros", "--preset", "rational-example", "--n", "6"];
    let first = opuc(&args);
    let second = opuc(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);

    let t_first = opuc(&["table", "1"]);
    let t_second = opuc(&["table", "1"]);
    assert_eq!(code(&t_first), 0);
    assert_eq!(t_first.stdout, t_second.stdout);
}

#[test]
fn quasi_alias_collapses_all_zeros_to_origin() {
    let out = opuc(&[
        "zeros",
        "--preset",
        "christoffel-i",
        "--n",
        "4",
        "--quasi",
        "constant-seq:(n/(n+1))i",
    ]);
    assert_eq!(code(&out), 0);
    let body = stdout_str(&out);
    let rows: Vec<&str> = body.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert_eq!(row, "0.000000,0.000000");
    }
}

#[test]
fn shifted_a_rule_matches_reference_zero() {
    let out = opuc(&[
        "zeros",
        "--preset",
        "christoffel-1",
        "--n",
        "5",
        "--a",
        "table1a",
    ]);
    assert_eq!(code(&out), 0);
    let body = stdout_str(&out);
    assert!(body.contains("0.204197,0.629154"), "got: {body}");
}

#[test]
fn boundary_combination_keeps_unit_root() {
    let out = opuc(&["zeros", "--popuc-lc", "--n", "7", "--gamma", "0.2"]);
    assert_eq!(code(&out), 0);
    let body = stdout_str(&out);
    assert!(body.lines().any(|l| l == "1.000000,0.000000"), "got: {body}");
    assert_eq!(body.lines().count(), 8);
}

#[test]
fn zeros_json_format_lists_pairs() {
    let out = opuc(&["zeros", "--preset", "lebesgue", "--n", "4", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("json");
    let zeros = v["zeros"].as_array().expect("zeros array");
    assert_eq!(zeros.len(), 4);
    for z in zeros {
        assert_eq!(z.as_array().expect("pair").len(), 2);
    }
}

#[test]
fn inline_spec_json_is_accepted() {
    let out = opuc(&[
        "zeros",
        "--spec",
        r#"{"variant":"bernstein-szego","a":[0.5,0.0]}"#,
        "--n",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout_str(&out).contains("0.500000,0.000000"));
}

#[test]
fn config_errors_exit_two() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["zeros", "--preset", "no-such-measure", "--n", "4"],
        vec!["zeros", "--preset", "lebesgue", "--n", "65"],
        vec!["zeros", "--popuc-lc", "--n", "1", "--gamma", "0.5"],
        vec!["zeros", "--popuc-lc", "--n", "5"],
        vec!["zeros", "--n", "4"],
        vec!["zeros", "--preset", "lebesgue", "--n", "4", "--a", "0.1,0.2i"],
        vec!["zeros", "--preset", "lebesgue", "--n", "4", "--a", "mystery"],
        vec!["zeros", "--spec", r#"{"variant":"nope"}"#, "--n", "3"],
        vec!["verify", "--suite", "bogus", "--preset", "lebesgue"],
        vec!["verify", "--suite", "subrepro", "--preset", "christoffel-i"],
        vec!["table", "4"],
        vec!["plot-data", "--figure", "9"],
        vec!["chain", "--preset", "lebesgue", "--n", "6"],
    ];
    for args in cases {
        let out = opuc(&args);
        assert_eq!(code(&out), 2, "args {args:?} stdout: {}", stdout_str(&out));
        assert!(!out.stderr.is_empty(), "args {args:?} should explain the error");
    }
}

#[test]
fn quadrature_override_is_validated() {
    let ok = opuc_with_quadn(&["zeros", "--preset", "christoffel-1", "--n", "5"], "256");
    assert_eq!(code(&ok), 0);
    // A larger grid must not change the rounded output.
    let default = opuc(&["zeros", "--preset", "christoffel-1", "--n", "5"]);
    assert_eq!(ok.stdout, default.stdout);

    let bad = opuc_with_quadn(&["zeros", "--preset", "lebesgue", "--n", "3"], "abc");
    assert_eq!(code(&bad), 2);
    let not_pow2 = opuc_with_quadn(&["zeros", "--preset", "lebesgue", "--n", "3"], "100");
    assert_eq!(code(&not_pow2), 2);
}

#[test]
fn verify_m2_passes_for_matched_companion() {
    let out = opuc(&[
        "verify", "--suite", "m2", "--preset", "lebesgue", "--a", "constant:0.4",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("json");
    assert_eq!(v["offdiag_pass"], true);
    assert_eq!(v["integral_pass"], true);
    assert_eq!(v["cd2_pass"], true);
}

#[test]
fn verify_m2_fails_for_mismatched_companion() {
    let out = opuc(&[
        "verify", "--suite", "m2", "--preset", "lebesgue", "--a", "constant:0.4",
        "--tilde", "lebesgue-norm",
    ]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("json");
    assert_eq!(v["offdiag_pass"], false);
}

#[test]
fn verify_report_suites_pass_on_presets() {
    let suites: [(&str, &str, &str); 5] = [
        ("norms", "christoffel-1", "6"),
        ("lubinsky", "rational-example", "4"),
        ("diaggap", "christoffel-i", "6"),
        ("cdformula", "christoffel-1", "6"),
        ("subrepro", "lebesgue-norm", "4"),
    ];
    for (suite, preset, n) in suites {
        let out = opuc(&["verify", "--suite", suite, "--preset", preset, "--n", n]);
        assert_eq!(
            code(&out),
            0,
            "suite {suite} on {preset}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("json");
        let reports = v.as_array().expect("report array");
        assert!(!reports.is_empty());
        for rep in reports {
            assert_eq!(rep["pass"], true, "suite {suite}: {rep}");
        }
    }
}

#[test]
fn verify_chain_reports_identity_and_consistency() {
    let out = opuc(&[
        "verify", "--suite", "chain", "--preset", "rational-example", "--n", "6",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("json");
    assert_eq!(v["degenerate"], false);
    let reports = v["reports"].as_array().expect("reports");
    assert_eq!(reports.len(), 7);
    assert!(reports
        .iter()
        .any(|r| r["context"] == "ttrr-consistency" && r["pass"] == true));
}

#[test]
fn chain_json_has_contract_fields() {
    let out = opuc(&["chain", "--preset", "christoffel-1", "--n", "6"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("json");
    for key in ["t", "c", "g", "tau", "degenerate"] {
        assert!(v.get(key).is_some(), "missing field {key}");
    }
    let tau = v["tau"].as_array().expect("tau pair");
    assert_eq!(tau.len(), 2);
    assert_eq!(v["degenerate"], false);
    assert!(v["c"].as_array().expect("c").len() >= 2);
}

#[test]
fn table_layouts_match_expected_shape() {
    let t1 = opuc(&["table", "1"]);
    assert_eq!(code(&t1), 0);
    let body = stdout_str(&t1);
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "phi5,phi6,tphi5[a=1/(n+1)-i],tphi6[a=-1.16],tphi5[a=n/(n+1)]"
    );
    assert_eq!(body.lines().count(), 7);
    assert!(body.contains("0.204197+0.629154i"));

    let t2 = opuc(&["table", "2"]);
    assert_eq!(code(&t2), 0);
    let body2 = stdout_str(&t2);
    assert_eq!(
        body2.lines().next().unwrap(),
        "phi4,phi5,tphi4[a=(5/4)i],tphi5[a=1.1],tphi4[a=(n/(n+1))i]"
    );
    assert_eq!(body2.lines().count(), 6);

    let t3 = opuc(&["table", "3"]);
    assert_eq!(code(&t3), 0);
    let body3 = stdout_str(&t3);
    assert_eq!(body3.lines().count(), 8);
    assert!(body3.contains("1.965948+0.000000i"));
    assert!(body3.contains("9.099986+0.000000i"));
}

#[test]
fn plot_data_tags_point_sets_by_series() {
    let out = opuc(&["plot-data", "--figure", "3"]);
    assert_eq!(code(&out), 0);
    let body = stdout_str(&out);
    assert_eq!(body.lines().next().unwrap(), "series,re,im");
    let count = |tag: &str| body.lines().filter(|l| l.starts_with(tag)).count();
    assert_eq!(count("lc[n=6;gamma=0.9],"), 6);
    assert_eq!(count("popuc[n=6],"), 6);
    assert_eq!(count("rsum[n=6],"), 6);
    assert_eq!(body.lines().count(), 19);

    let fig1 = opuc(&["plot-data", "--figure", "1"]);
    assert_eq!(code(&fig1), 0);
    let body1 = stdout_str(&fig1);
    // Five series: two base polynomials and three quasi companions.
    assert_eq!(body1.lines().filter(|l| l.starts_with("phi5,")).count(), 5);
    assert_eq!(body1.lines().filter(|l| l.starts_with("phi6,")).count(), 6);
    assert_eq!(body1.lines().count(), 1 + 5 + 6 + 5 + 6 + 5);
}

#[test]
fn output_file_receives_the_same_bytes() {
    let dir = std::env::temp_dir().join("opuc-cli-test");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("zeros.csv");
    let path_str = path.to_str().expect("utf8 path");
    let piped = opuc(&["zeros", "--preset", "christoffel-1", "--n", "5"]);
    let filed = opuc(&[
        "zeros", "--preset", "christoffel-1", "--n", "5", "--out", path_str,
    ]);
    assert_eq!(code(&filed), 0);
    assert!(filed.stdout.is_empty());
    let written = std::fs::read(&path).expect("written file");
    assert_eq!(written, piped.stdout);
}
