use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn codensity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codensity"))
        .args(args)
        .env_remove("CODENSITY_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

const X2: &str = r#"{"category":"set","object":{"carrier":["a","b"]}}"#;
const F2_SQUARED: &str = r#"{"category":"vec","params":{"q":2},"object":{"dim":2}}"#;

#[test]
fn two_point_set_has_two_principal_elements() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "x2.json", X2);
    let out = codensity(&["compute", "--category", "set", "--fp-bound", "4", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("|TX| = 2"), "{text}");
    assert_eq!(text.matches("principal at").count(), 2, "{text}");
    assert!(!text.contains(" ms"), "no timing by default");
}

#[test]
fn vector_space_subcategories_change_the_monad() {
    let field_only = codensity(&["compute", "--format", "json", "--subcat", "K", F2_SQUARED]);
    assert_eq!(field_only.status.code(), Some(0), "{}", stderr(&field_only));
    assert_eq!(json(&field_only)["elements"].as_array().unwrap().len(), 8);

    let with_plane = codensity(&[
        "compute", "--format", "json", "--subcat", "K,K2", F2_SQUARED,
    ]);
    assert_eq!(with_plane.status.code(), Some(0), "{}", stderr(&with_plane));
    assert_eq!(json(&with_plane)["elements"].as_array().unwrap().len(), 4);
}

#[test]
fn graph_characterizations_pass() {
    let out = codensity(&[
        "verify",
        "--category",
        "gra",
        "--max-size",
        "3",
        "--suite",
        "characterizations",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("edge predicate equals the limit edges"));
    assert!(text.contains(" 0 FAIL"));
}

#[test]
fn finite_spaces_agree_across_constructions() {
    let out = codensity(&[
        "verify",
        "--category",
        "top0",
        "--max-size",
        "3",
        "--suite",
        "agreement",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains(" 0 FAIL"));
}

#[test]
fn json_report_has_sorted_keys_and_counts() {
    let out = codensity(&[
        "verify",
        "--category",
        "set",
        "--max-size",
        "2",
        "--suite",
        "units",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["counts"]["fail"], 0);
    assert!(v.get("elapsed_ms").is_none());
    let text = stdout(&out);
    let keys: Vec<&str> = [
        "\"category\"",
        "\"checks\"",
        "\"counts\"",
        "\"fp_bound\"",
        "\"max_size\"",
        "\"notices\"",
        "\"suite\"",
    ]
    .into_iter()
    .collect();
    let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn reports_are_byte_identical() {
    let args = [
        "verify",
        "--category",
        "pos",
        "--max-size",
        "3",
        "--suite",
        "all",
    ];
    let first = codensity(&args);
    let second = codensity(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn timing_only_on_request() {
    let out = codensity(&[
        "verify",
        "--category",
        "set",
        "--max-size",
        "1",
        "--suite",
        "units",
        "--timing",
    ]);
    assert!(stdout(&out).contains("elapsed: "));
}

#[test]
fn failures_print_a_command_that_reproduces_them() {
    let out = codensity(&[
        "verify",
        "--category",
        "vec",
        "--q",
        "2",
        "--max-size",
        "2",
        "--subcat",
        "K",
        "--suite",
        "agreement",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let line = text
        .lines()
        .find_map(|l| l.trim_start().strip_prefix("reproduce: codensity "))
        .expect("a reproduce line");
    // rerun through the shell so the quoting is exercised too
    let bin = env!("CARGO_BIN_EXE_codensity");
    let rerun = Command::new("sh")
        .arg("-c")
        .arg(format!("'{bin}' {line}"))
        .output()
        .unwrap();
    assert_eq!(
        rerun.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&rerun.stderr)
    );
    assert!(stdout(&rerun).contains("FAIL"));
}

#[test]
fn parse_errors_report_lines_and_exit_two() {
    let dir = TempDir::new().unwrap();
    let broken = write(
        &dir,
        "broken.json",
        "{\n  \"category\": \"set\",\n  \"object\": {\"carrier\": [\"a\",]}\n}\n",
    );
    let out = codensity(&["compute", &broken]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let unknown = write(
        &dir,
        "unknown.json",
        "{\n  \"category\": \"pos\",\n  \"object\": {\n    \"carrier\": [\"a\"],\n    \"order\": [[\"a\", \"b\"]]\n  }\n}\n",
    );
    let out = codensity(&["compute", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 5"), "{}", stderr(&out));
}

#[test]
fn input_errors_exit_two() {
    let cases: [&[&str]; 5] = [
        &["compute", r#"{"category":"vec","object":{"dim":1}}"#],
        &["compute", "--category", "nope", r#"{"carrier":[]}"#],
        &[
            "compute",
            r#"{"category":"pos","object":{"carrier":["a","b"],"order":[["a","b"],["b","a"]]}}"#,
        ],
        &[
            "compute",
            r#"{"category":"set","object":{"carrier":["a","a"]}}"#,
        ],
        &["compute", "--fp-bound", "0", X2],
    ];
    for args in cases {
        let out = codensity(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
    let missing = codensity(&["compute", "/nonexistent/file.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn budget_from_flag_and_environment() {
    let x4 = r#"{"category":"set","object":{"carrier":["a","b","c","d"]}}"#;
    let out = codensity(&["compute", "--budget", "1000", x4]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("budget"));

    let env = Command::new(env!("CARGO_BIN_EXE_codensity"))
        .args(["compute", x4])
        .env("CODENSITY_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));

    let flag_wins = Command::new(env!("CARGO_BIN_EXE_codensity"))
        .args(["compute", "--budget", "10000000", X2])
        .env("CODENSITY_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
}

#[test]
fn flat_documents_with_category_flag() {
    let graph = r#"{"vertices":["u","v"],"edges":[["u","v"]]}"#;
    let out = codensity(&["compute", "--category", "gra", "--format", "json", graph]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["category"], "gra");

    let action = r#"{"carrier":["x","y"],"action":{"g1":{"x":"y","y":"x"}}}"#;
    let out = codensity(&["compute", "--category", "mset", action]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let mismatch = codensity(&["compute", "--category", "pos", X2]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn exported_instances_round_trip() {
    let dir = TempDir::new().unwrap();
    let jsl = r#"{"category":"jsl","object":{"carrier":["0","1","2"],"bottom":"0","order":[["0","1"],["1","2"]]}}"#;
    let first = dir.path().join("first.json");
    let out = codensity(&[
        "export",
        "monad",
        "--format",
        "json",
        jsl,
        "-o",
        first.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let second = dir.path().join("second.json");
    let out = codensity(&[
        "export",
        "monad",
        "--category",
        "jsl",
        "--format",
        "json",
        first.to_str().unwrap(),
        "-o",
        second.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn dot_output_is_stable() {
    for what in ["coslice", "limit-cone", "monad"] {
        let a = codensity(&["export", what, "--format", "dot", "--fp-bound", "3", X2]);
        let b = codensity(&["export", what, "--format", "dot", "--fp-bound", "3", X2]);
        assert_eq!(a.status.code(), Some(0), "{what}: {}", stderr(&a));
        assert!(
            stdout(&a).starts_with("digraph") || stdout(&a).starts_with("graph"),
            "{what}"
        );
        assert_eq!(a.stdout, b.stdout, "{what}");
    }
}

#[test]
fn monoid_and_signature_files() {
    let dir = TempDir::new().unwrap();
    let monoid = write(
        &dir,
        "z3.json",
        r#"{"elements":["e","g","h"],"table":[["e","g","h"],["g","h","e"],["h","e","g"]]}"#,
    );
    let out = codensity(&[
        "verify",
        "--category",
        "mset",
        "--monoid-file",
        &monoid,
        "--max-size",
        "2",
        "--suite",
        "units",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}{}",
        stdout(&out),
        stderr(&out)
    );

    let signature = write(&dir, "sig.json", r#"[{"name":"R","arity":2}]"#);
    let out = codensity(&[
        "verify",
        "--category",
        "sigma_str",
        "--signature-file",
        &signature,
        "--max-size",
        "1",
        "--suite",
        "agreement",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}{}",
        stdout(&out),
        stderr(&out)
    );
}

#[test]
fn unknown_suite_is_an_input_error() {
    let out = codensity(&["verify", "--category", "set", "--suite", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}
