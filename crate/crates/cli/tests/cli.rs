use std::fs;
use std::path::{Path, PathBuf};

use marginbound::bounds::{bound_cov_alpha2, BoundParams, BoundReport, REPORT_CSV_HEADER};
use marginbound::complexity::{rademacher_mc, LossMatrix};
use marginbound::numfmt::round_sig;
use marginbound_cli::{run, COMPLEXITY_CSV_HEADER, EXIT_CAPABILITY, EXIT_INPUT, EXIT_NOT_APPLICABLE, EXIT_OK};
use marginbound_harness::tightness::{compare_tightness, TightnessConfig};
use marginbound_harness::validate::VALIDITY_CSV_HEADER;
use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("marginbound").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn config(name: &str) -> String {
    root().join("configs").join(name).to_string_lossy().into_owned()
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn check_schema(name: &str, doc: &Value) {
    let path = root().join("schemas").join(format!("{name}.json"));
    let schema: Value = json(&fs::read_to_string(&path).unwrap());
    let v = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

const GOLDEN: &[&str] = &["bound", "--family", "cov-alpha2", "--emp", "0", "--logN", "10", "--m", "1000", "--delta", "0.05"];

#[test]
fn golden_bound_matches_library_and_closed_form() {
    let o = cli(GOLDEN);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o.stdout);
    let got = v["bound_value"].as_f64().unwrap();
    let lib = bound_cov_alpha2(0.0, 10.0, &BoundParams::new(2.0, 1.0, 0.05, 1000).unwrap()).unwrap();
    assert_eq!(got, round_sig(lib.bound_value, 12));
    assert!((got - 4.0 * (10.0 + 20f64.ln()) / 1000.0).abs() < 1e-12);
    assert_eq!(v["family"], "cov-alpha2");
    assert_eq!(v["vacuous"], false);
}

#[test]
fn same_report_twice_is_byte_identical() {
    assert_eq!(cli(GOLDEN).stdout, cli(GOLDEN).stdout);
    let mut csv = GOLDEN.to_vec();
    csv.extend(["--format", "csv"]);
    assert_eq!(cli(&csv).stdout, cli(&csv).stdout);
}

#[test]
fn bound_json_round_trips_and_matches_schema() {
    let o = cli(GOLDEN);
    let r = BoundReport::from_json(&o.stdout).unwrap();
    assert_eq!(r.schema, "marginbound.bound-report.v1");
    assert_eq!(serde_json::to_value(&r).unwrap(), json(&o.stdout));
    check_schema("bound-report.v1", &json(&o.stdout));
}

#[test]
fn csv_headers_are_the_documented_ones() {
    let mut args = GOLDEN.to_vec();
    args.extend(["--format", "csv"]);
    let o = cli(&args);
    let mut lines = o.stdout.lines();
    assert_eq!(lines.next(), Some(REPORT_CSV_HEADER));
    assert_eq!(
        REPORT_CSV_HEADER,
        "family,alpha,rho,delta,m,empirical_term,complexity_term,complexity_method,bound_value,solver,vacuous,clamped"
    );
    assert!(lines.next().unwrap().starts_with("cov-alpha2,2,1,0.05,1000,0,10,,0.0519829290942,"));

    let o = cli(&["complexity", "--measure", "worst-case-rademacher", "--class", r#"{"class":"linear","radius":1,"rho":0.1}"#, "--m", "100", "--format", "csv"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(o.stdout.lines().next(), Some(COMPLEXITY_CSV_HEADER));

    let o = cli(&["validate", &config("coverage-reference.json"), "-s", "trials=3", "--format", "csv"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(o.stdout.lines().next(), Some(VALIDITY_CSV_HEADER));
    assert_eq!(o.stdout.lines().count(), 1 + 2 * 3);
}

#[test]
fn missing_flag_is_an_input_error_naming_the_flag() {
    let o = cli(&["bound", "--family", "cov-alpha2", "--emp", "0", "--m", "1000", "--delta", "0.05"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("--log-n"), "{}", o.stderr);
    assert!(o.stdout.is_empty());

    let o = cli(&["bound", "--family", "rad-smooth", "--emp", "0", "--rmax", "0.1", "--m", "10", "--delta", "0.1"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("--rho"), "{}", o.stderr);

    let o = cli(&["bound", "--family", "nope"]);
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn tau_is_rejected_outside_cov_alpha() {
    let mut args = GOLDEN.to_vec();
    args.extend(["--tau", "0.1"]);
    assert_eq!(cli(&args).code, EXIT_INPUT);
}

#[test]
fn capability_and_applicability_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.csv");
    fs::write(&path, format!("h0,h1\n{}", "0,1\n".repeat(21))).unwrap();
    let p = path.to_str().unwrap();
    let o = cli(&["complexity", "--measure", "rademacher-exact", "--matrix", p]);
    assert_eq!(o.code, EXIT_CAPABILITY, "{}", o.stderr);

    let o = cli(&[
        "bound", "--family", "unbounded", "--emp", "0.1", "--moment", "1", "--log-n", "1e6", "--m", "10", "--delta",
        "0.05", "--rho", "0.1",
    ]);
    assert_eq!(o.code, EXIT_NOT_APPLICABLE, "{}", o.stderr);
    assert!(o.stdout.is_empty());
}

#[test]
fn verify_binomial_holds() {
    let o = cli(&["verify", "binomial", "--m-max", "200"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o.stdout);
    assert_eq!(v["holds"], true);
    assert!(v["min_upper"]["probability"].as_f64().unwrap() > 0.25);
    assert!(v["min_lower"]["probability"].as_f64().unwrap() > 0.25);
    check_schema("verify.v1", &v);

    let o = cli(&["verify", "monotone", "--points", "200", "--seed", "4"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    check_schema("verify.v1", &json(&o.stdout));
}

#[test]
fn complexity_is_a_thin_adapter() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let text = "h0,h1,h2\n0,1,1\n1,0,1\n1,1,0\n0,0,1\n";
    fs::write(&path, text).unwrap();
    let o = cli(&["complexity", "--measure", "rademacher-mc", "--matrix", path.to_str().unwrap(), "--seed", "3", "--n-sigma", "64"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o.stdout);
    check_schema("complexity.v1", &v);
    let m = LossMatrix::read_csv(text.as_bytes(), marginbound::complexity::RangeTag::UnitInterval).unwrap();
    let lib = rademacher_mc(&m, 64, 3).unwrap();
    assert_eq!(v["estimate"]["value"].as_f64().unwrap(), round_sig(lib.value, 12));
    assert_eq!(v["estimate"]["stderr"].as_f64().unwrap(), round_sig(lib.stderr.unwrap(), 12));
}

#[test]
fn compare_is_a_thin_adapter() {
    let path = config("tightness-reference.json");
    let o = cli(&["compare", &path]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o.stdout);
    check_schema("tightness.v1", &v);
    let cfg: TightnessConfig = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let lib = compare_tightness(&cfg).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), lib.rows.len());
    for (r, l) in rows.iter().zip(&lib.rows) {
        assert_eq!(r["new_value"].as_f64().unwrap(), round_sig(l.new_value, 12));
        assert_eq!(r["old_value"].as_f64().unwrap(), round_sig(l.old_value, 12));
        assert_eq!(r["new_smaller"].as_bool().unwrap(), l.new_smaller);
    }
}

#[test]
fn validate_and_train_match_their_schemas() {
    let o = cli(&["validate", &config("coverage-reference.json"), "-s", "trials=4"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stderr.contains("violations"));
    check_schema("validity.v1", &json(&o.stdout));

    let o = cli(&[
        "train", "--distribution", &config("planted-separator.json"), "--m", "60", "--bound-min", "--restarts", "2",
        "--iterations", "30", "--seed", "1",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    check_schema("train.v1", &json(&o.stdout));

    let o = cli(&[
        "train", "--distribution", &config("planted-separator.json"), "--m", "60", "--trainer",
        r#"{"method":"boost-stumps","rounds":3}"#, "--seed", "2",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    check_schema("train.v1", &json(&o.stdout));
}

#[test]
fn output_flag_writes_the_file_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut args = GOLDEN.to_vec();
    let p = path.to_str().unwrap().to_string();
    args.extend(["-o", &p]);
    let o = cli(&args);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), cli(GOLDEN).stdout);
}

#[test]
fn binary_reports_through_stdout_and_exit_status() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_marginbound"))
        .args(GOLDEN)
        .env("MARGINBOUND_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), cli(GOLDEN).stdout);

    let out = std::process::Command::new(env!("CARGO_BIN_EXE_marginbound"))
        .args(["bound", "--family", "cov-alpha2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}
