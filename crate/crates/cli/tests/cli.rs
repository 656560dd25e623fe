use std::path::PathBuf;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_daugavet"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("daugavet-cli-{tag}-{}", std::process::id()));
    if dir.exists() {
        std::fs::remove_dir_all(&dir).unwrap();
    }
    dir
}

#[test]
fn signs_pattern_witness() {
    let (code, stdout, _) = run(&["signs", "--witness", "+-+", "--j-min", "1"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "witness column j = 3 realizes +-+");
}

#[test]
fn signs_table_prints_rows() {
    let (code, stdout, _) = run(&["signs", "--rows", "2", "--cols", "4"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("1 | + - + -"));
    assert!(stdout.contains("2 | + + - -"));
}

#[test]
fn signs_double_norming() {
    let (code, stdout, _) = run(&["signs", "--x", r#"{"1":"1"}"#, "--m", "10"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("> 10"), "{stdout}");
    assert!(stdout.contains("f_n(x) = 1, ||x||_1 = 1"), "{stdout}");
}

#[test]
fn signs_rejects_bad_pattern() {
    let (code, _, stderr) = run(&["signs", "--witness", "+x"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("pattern"), "{stderr}");
}

#[test]
fn defect_zero_on_norming_span() {
    let (code, stdout, _) = run(&[
        "defect",
        "--y-star",
        r#"{"combo":{"1":"1"},"correction":{}}"#,
        "--x",
        r#"{"1":"1"}"#,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("defect = 0"), "{stdout}");
}

#[test]
fn defect_counterexample_exits_one() {
    let (code, stdout, _) = run(&[
        "defect",
        "--y-star",
        r#"{"combo":{},"correction":{"1":"-1"}}"#,
        "--x",
        r#"{"1":"1"}"#,
        "--json",
    ]);
    assert_eq!(code, 1);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["defect"], "1");
    assert_eq!(report["opnorm_id_plus"], "1");
}

#[test]
fn defect_rejects_malformed_json() {
    let (code, _, stderr) = run(&["defect", "--y-star", r#"{"combo":"#, "--x", r#"{"1":"1"}"#]);
    assert_eq!(code, 2);
    assert!(stderr.contains("y*"), "{stderr}");
}

#[test]
fn certify_slice_reaches_two() {
    let (code, stdout, _) = run(&[
        "certify-slice",
        "--x",
        r#"{"1":"1"}"#,
        "--y-star",
        r#"{"combo":{"1":"1"},"correction":{}}"#,
        "--json",
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["value"], "2");
    assert_eq!(report["exact"], true);
}

#[test]
fn certify_slice_rejects_non_unit_point() {
    let (code, _, stderr) = run(&[
        "certify-slice",
        "--x",
        r#"{"1":"1/2"}"#,
        "--y-star",
        r#"{"combo":{"1":"1"},"correction":{}}"#,
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unit"), "{stderr}");
}

#[test]
fn certify_weakstar_reaches_two() {
    let (code, stdout, _) = run(&[
        "certify-weakstar",
        "--x-star",
        r#"{"combo":{"2":"1"},"correction":{}}"#,
        "--x",
        r#"{"1":"-1"}"#,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("||x* + f_n|| = 2"), "{stdout}");
}

#[test]
fn infsum_obstruction() {
    let (code, stdout, _) = run(&[
        "infsum",
        "--x-part",
        r#"{"combo":{"1":"1/2"},"correction":{}}"#,
        "--b0",
        "1/2",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("defect >= 1"), "{stdout}");
}

#[test]
fn infsum_rejects_zero_scalar() {
    let (code, _, stderr) = run(&[
        "infsum",
        "--x-part",
        r#"{"combo":{"1":"1"},"correction":{}}"#,
        "--b0",
        "0",
    ]);
    assert_eq!(code, 2);
    assert!(!stderr.is_empty());
}

#[test]
fn thickness_distances_all_two() {
    let (code, stdout, _) = run(&[
        "thickness",
        "--net",
        r#"[{"1":"1"},{"2":"-1"}]"#,
        "--json",
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["witness"]["3"], "-1");
    assert_eq!(report["distances"], serde_json::json!(["2", "2"]));
}

#[test]
fn radius_cross_polytope() {
    let (code, stdout, _) = run(&[
        "radius",
        "--d",
        "2",
        "--net",
        r#"[{"1":"1"},{"1":"-1"},{"2":"1"},{"2":"-1"}]"#,
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        "radius = 1 attained at y = 1/2*e1 + 1/2*e2"
    );
}

#[test]
fn radius_dimension_capped() {
    let (code, _, stderr) = run(&["radius", "--d", "5", "--net", r#"[{"1":"1"}]"#]);
    assert_eq!(code, 2);
    assert!(stderr.contains("capped at dimension 4"), "{stderr}");
}

#[test]
fn renorm_norm_parts() {
    let (code, stdout, _) = run(&["renorm", "--norm", "--x", r#"{"1":"1"}"#]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "|||x||| = 2 (operator 1, quotient 1)");
}

#[test]
fn renorm_check_type_defaults_past_bound() {
    let (code, stdout, _) = run(&["renorm", "--check-type", "--x", r#"{"1":"1"}"#]);
    assert_eq!(code, 0);
    assert!(stdout.contains("|||x + y_n||| = 3 at index 2"), "{stdout}");
}

#[test]
fn renorm_scan_and_lemma41() {
    let (code, stdout, _) = run(&["renorm", "--scan", "--samples", "10", "--seed", "5"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("inside [1/3, 2]"), "{stdout}");

    let (code, stdout, _) = run(&["renorm", "--lemma41", "--samples", "4", "--seed", "5"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.matches(": ok").count(), 6, "{stdout}");
}

#[test]
fn renorm_explicit_model() {
    let (code, stdout, _) = run(&[
        "renorm",
        "--norm",
        "--x",
        r#"{"5":"1"}"#,
        "--model",
        r#"{"pairing":"explicit","blocks":[[1,2,3],[7,9]]}"#,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("|||x||| = 1"), "{stdout}");
}

#[test]
fn renorm_requires_an_action() {
    let (code, _, stderr) = run(&["renorm", "--x", r#"{"1":"1"}"#]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--norm"), "{stderr}");
}

#[test]
fn gen_corpus_is_deterministic() {
    let dir_a = temp_dir("corpus-a");
    let dir_b = temp_dir("corpus-b");
    for dir in [&dir_a, &dir_b] {
        let (code, stdout, _) = run(&[
            "gen-corpus",
            "--out",
            dir.to_str().unwrap(),
            "--seed",
            "1",
            "--cases",
            "3",
        ]);
        assert_eq!(code, 0);
        assert!(stdout.contains("wrote 10 files"), "{stdout}");
    }
    for sub in ["vectors/vec-0002.json", "functionals/fn-0000.json", "nets/net-0001.json", "manifest.json"] {
        let a = std::fs::read(dir_a.join(sub)).unwrap();
        let b = std::fs::read(dir_b.join(sub)).unwrap();
        assert_eq!(a, b, "{sub} differs between identical runs");
    }
    std::fs::remove_dir_all(&dir_a).unwrap();
    std::fs::remove_dir_all(&dir_b).unwrap();
}

#[test]
fn gen_corpus_denominator_one_gives_integers() {
    let dir = temp_dir("corpus-int");
    let (code, _, _) = run(&[
        "gen-corpus",
        "--out",
        dir.to_str().unwrap(),
        "--seed",
        "2",
        "--cases",
        "2",
        "--max-denom",
        "1",
    ]);
    assert_eq!(code, 0);
    for i in 0..2 {
        let text = std::fs::read(dir.join(format!("vectors/vec-000{i}.json"))).unwrap();
        let v: std::collections::BTreeMap<String, String> =
            serde_json::from_slice(&text).unwrap();
        for value in v.values() {
            assert!(!value.contains('/'), "non-integer entry {value}");
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn run_suite_defect_passes() {
    let (code, stdout, _) = run(&["run-suite", "--suite", "defect", "--seed", "7", "--cases", "20"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("0 failed"), "{stdout}");
}

#[test]
fn run_suite_json_report_is_deterministic() {
    let args = [
        "run-suite", "--suite", "signs", "--seed", "3", "--cases", "4", "--json",
    ];
    let (code_a, out_a, _) = run(&args);
    let (code_b, out_b, _) = run(&args);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(out_a, out_b);
    let report: serde_json::Value = serde_json::from_str(&out_a).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert_eq!(report["config"]["seed"], 3);
}

#[test]
fn run_suite_writes_report_file() {
    let dir = temp_dir("report");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let (code, _, _) = run(&[
        "run-suite",
        "--suite",
        "thickness",
        "--cases",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(report["suite"], "thickness");
    assert!(report["summary"]["total"].as_u64().unwrap() > 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn run_suite_unknown_name_is_usage_error() {
    let (code, _, stderr) = run(&["run-suite", "--suite", "bogus"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown suite"), "{stderr}");
}

#[test]
fn missing_subcommand_is_usage_error() {
    let (code, _, _) = run(&[]);
    assert_eq!(code, 2);
}
