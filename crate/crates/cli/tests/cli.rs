use std::process::Command;

use raynaud_cli::{run, EXIT_FINDINGS, EXIT_OK, EXIT_USAGE};
use serde_json::{json, Value};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke(args: &[&str], stdin: &str) -> Outcome {
    let mut argv = vec!["raynaud"];
    argv.extend_from_slice(args);
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut input, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json_of(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

// (O(0), 0, 1/2) + (O(0), 1/2, 0), N = 2.
const SEMISTABLE: &str = r#"{
  "splitting": [0, 0],
  "N": 2,
  "flags": [
    {"point": "0", "steps": [
      {"basis": [["1", "0"], ["0", "1"]], "weight": "0"},
      {"basis": [["0", "1"]], "weight": "1/2"}
    ]},
    {"point": "inf", "steps": [
      {"basis": [["1", "0"], ["0", "1"]], "weight": "0"},
      {"basis": [["1", "0"]], "weight": "1/2"}
    ]}
  ]
}"#;

#[test]
fn construct_two_point_example() {
    let o = invoke(&["construct", "--mode", "two-point", "-r", "2", "-d", "1", "-N", "2"], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json_of(&o);
    assert_eq!(v["provenance"]["kind"], "two-point");
    assert_eq!(v["provenance"]["m"], 2);
    let mut summands: Vec<String> = v["provenance"]["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.to_string())
        .collect();
    summands.sort();
    let a = json!({"degree": 1, "weights": {}}).to_string();
    let b = json!({"degree": 0, "weights": {"0": "1/2", "inf": "1/2"}}).to_string();
    let mut expect = vec![a.clone(), a, b.clone(), b];
    expect.sort();
    assert_eq!(summands, expect);
    assert_eq!(v["bundle"]["splitting"], json!([1, 1, 0, 0]));
}

#[test]
fn construct_single_point_reports_off_lattice_weight() {
    let o = invoke(&["construct", "--mode", "single-point", "-r", "3", "-d", "5/2", "-N", "2"], "");
    assert_eq!(o.code, EXIT_OK);
    let v = json_of(&o);
    assert_eq!(v["provenance"]["case"], "carried-weight");
    assert_eq!(v["off_lattice_weights"], json!(["1/3"]));
    assert!(o.stderr.contains("1/3"));
}

#[test]
fn certify_semistable_sample() {
    let o = invoke(&["certify"], SEMISTABLE);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(json_of(&o), json!({"semistable": true, "hom_par_dim": 0}));
}

#[test]
fn certify_unstable_sample_still_exits_zero() {
    let doc = r#"{"splitting": [1, 0], "N": 2, "flags": []}"#;
    let o = invoke(&["certify", "-r", "2", "-d", "1", "-N", "2"], doc);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json_of(&o);
    assert_eq!(v["semistable"], false);
    assert!(v["hom_par_dim"].as_u64().unwrap() >= 1);
}

#[test]
fn certify_reads_input_file_and_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("e.json");
    let output = dir.path().join("cert.json");
    std::fs::write(&input, SEMISTABLE).unwrap();
    let o = invoke(
        &["certify", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()],
        "",
    );
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(output).unwrap()).unwrap();
    assert_eq!(v["semistable"], true);
}

#[test]
fn validation_failures_exit_two() {
    let o = invoke(&["construct", "-r", "2", "-d", "1/3", "-N", "2"], "");
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("(1/2)Z"), "{}", o.stderr);
    assert!(o.stdout.is_empty());

    let o = invoke(&["construct", "-r", "2", "-d", "0.5", "-N", "2"], "");
    assert_eq!(o.code, EXIT_USAGE);

    let o = invoke(&["verify", "-r", "2", "-N", "2"], "");
    assert_eq!(o.code, EXIT_USAGE);

    let o = invoke(&["certify"], "{not json");
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("schema error"), "{}", o.stderr);

    let o = invoke(&["certify", "-r", "3"], SEMISTABLE);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("rank"), "{}", o.stderr);

    let o = invoke(&["certify", "-N", "3"], SEMISTABLE);
    assert_eq!(o.code, EXIT_USAGE);

    let off = SEMISTABLE.replace("\"1/2\"", "\"1/3\"");
    let o = invoke(&["certify"], &off);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("(1/2)Z"), "{}", o.stderr);

    let bad_weight = SEMISTABLE.replacen("\"1/2\"", "\"3/2\"", 1);
    let o = invoke(&["certify"], &bad_weight);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("flags[0].steps[1].weight"), "{}", o.stderr);
}

#[test]
fn negative_degree_is_accepted() {
    let o = invoke(&["construct", "-r", "1", "-d", "-1/2", "-N", "2"], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(json_of(&o)["request"]["d"], "-1/2");
}

#[test]
fn verify_clean_and_dirty() {
    let o = invoke(&["verify", "--mode", "two-point", "-r", "2", "-d", "1", "-N", "2", "--gauge-samples", "2"], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json_of(&o);
    assert_eq!(v["disagreements"], json!([]));
    assert_eq!(v["checked"], v["agreements"]);

    let o = invoke(&["verify", "--mode", "single-point", "-r", "2", "-d", "1/2", "-N", "2"], "");
    assert_eq!(o.code, EXIT_FINDINGS);
    let v = json_of(&o);
    let n = v["disagreements"].as_array().unwrap().len() as u64;
    assert!(n > 0);
    assert_eq!(v["checked"].as_u64().unwrap(), v["agreements"].as_u64().unwrap() + n);
}

#[test]
fn counterexample_search() {
    let o = invoke(&["counterexample", "--mode", "single-point", "-r", "2", "-d", "1/2", "-N", "2"], "");
    assert_eq!(o.code, EXIT_FINDINGS);
    let v = json_of(&o);
    let w = &v["disagreements"][0];
    assert_eq!(w["bundle"]["splitting"], json!([0, 0]));
    assert_eq!(w["hom_par_dim"], 0);
    assert_eq!(w["oracle"], false);

    let o = invoke(&["counterexample", "--mode", "single-point", "-r", "2", "-d", "1", "-N", "2"], "");
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(json_of(&o)["disagreements"], json!([]));
}

#[test]
fn identities_report_lists_eight_families() {
    let o = invoke(&["identities", "-N", "3", "--samples", "40", "--seed", "3"], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json_of(&o);
    assert_eq!(v["identities"].as_object().unwrap().len(), 8);
    assert_eq!(v["seed"], 3);
}

#[test]
fn seed_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_raynaud"))
        .args(["verify", "-r", "1", "-d", "0", "-N", "2", "--window", "1"])
        .env("RAYNAUD_SEED", "41")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 41);
    assert_eq!(v["config"]["seed"], 41);
}

#[test]
fn seeded_reports_are_byte_identical() {
    let args = ["verify", "-r", "2", "-d", "0", "-N", "3", "--window", "1", "--seed", "12"];
    let a = invoke(&args, "");
    let b = invoke(&args, "");
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_exits_zero() {
    let o = invoke(&["--help"], "");
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("certify"));
}
