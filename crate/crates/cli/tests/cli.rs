use std::path::PathBuf;
use std::process::{Command, Output};

use dhl_core::instance::{emit_instance, parse_instance};
use serde_json::Value;

fn dhl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dhl"))
        .args(args)
        .env_remove("DHL_GUARD")
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    path.to_str().unwrap().to_string()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn gen_is_byte_identical_for_a_fixed_seed() {
    let args = ["gen", "--kind", "random", "--dim", "1", "--sets", "5", "--points", "5", "--seed", "7"];
    let a = dhl(&args);
    let b = dhl(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = dhl(&["gen", "--kind", "random", "--dim", "1", "--sets", "5", "--points", "5", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn out_flag_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    let args = ["gen", "--kind", "hypothesis-satisfying", "--seed", "3"];
    let stdout = dhl(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = dhl(&with_out);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn fixtures_round_trip_exactly() {
    for name in ["halman_sharp_d2.json", "satisfying_d2.json", "colorful_d2.json", "matroid_d1.json", "simplex_d2.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(emit_instance(&parse_instance(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn sharp_instance_is_an_expected_violation() {
    let out = dhl(&["verify", &fixture("halman_sharp_d2.json"), "--suite", "halman"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["outcome"]["kind"], "violation");
    assert_eq!(r["result"]["hypothesis"]["holds"], false);
    assert!(r["result"]["outcome"]["certificate"]["members"].as_array().unwrap().len() <= 4);
}

#[test]
fn satisfying_instance_gives_a_witness() {
    let out = dhl(&["verify", &fixture("satisfying_d2.json"), "--suite", "halman"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["result"]["outcome"]["kind"], "witness");
    assert_eq!(r["manifest"]["operation"], "verify:halman");
    assert!(r.get("timing_ms").is_none());
}

#[test]
fn verify_reports_are_deterministic() {
    let args = ["verify", &fixture("colorful_d2.json"), "--suite", "colorful"];
    let a = dhl(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, dhl(&args).stdout);
    let timed = dhl(&["verify", &fixture("colorful_d2.json"), "--suite", "colorful", "--timing"]);
    assert!(report(&timed)["timing_ms"].is_number());
}

#[test]
fn malformed_and_missing_files_exit_2() {
    for path in [fixture("truncated.json"), fixture("no_such_file.json")] {
        let out = dhl(&["verify", &path, "--suite", "halman"]);
        assert_eq!(out.status.code(), Some(2), "{path}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
    }
}

#[test]
fn inapplicable_suite_exits_2() {
    let out = dhl(&["verify", &fixture("satisfying_d2.json"), "--suite", "matroid"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["status"], "input-error");
}

#[test]
fn guard_exits_3_from_flag_and_env() {
    let out = dhl(&["verify", &fixture("satisfying_d2.json"), "--suite", "halman", "--guard", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let env = Command::new(env!("CARGO_BIN_EXE_dhl"))
        .args(["verify", &fixture("satisfying_d2.json"), "--suite", "halman"])
        .env("DHL_GUARD", "2")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(dhl(&["verify", &fixture("satisfying_d2.json"), "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn source_date_epoch_sets_the_timestamp() {
    let out = Command::new(env!("CARGO_BIN_EXE_dhl"))
        .args(["gen", "--kind", "halman-sharp"])
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .unwrap();
    let inst = parse_instance(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(inst.manifest.unwrap().timestamp.as_deref(), Some("1700000000"));
}

#[test]
fn curve_header_and_rows() {
    let out = dhl(&["curve", "--trials", "0"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "trial,d,k,alpha,alpha_decimal,beta_measured,beta_measured_decimal,beta_bound_pass\n"
    );
    let args = ["curve", "--dim", "1", "--sets", "6", "--points", "6", "--trials", "12", "--seed", "4"];
    let a = dhl(&args);
    assert_eq!(a.stdout, dhl(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let trials: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(trials, (0..12).map(|i| i.to_string()).collect::<Vec<_>>());
}

#[test]
fn slab_curve_has_zero_alpha_at_d_plus_one() {
    let out = dhl(&["curve", "--kind", "slab", "--dim", "2", "--slabs", "2", "--k", "3", "--trials", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[3], "0");
        assert_eq!(cols[7], "");
    }
}

#[test]
fn pierce_and_collapse_subcommands() {
    let out = dhl(&["pierce", &fixture("halman_sharp_d2.json")]);
    assert!(out.status.success());
    assert_eq!(report(&out)["size"], 2);
    let out = dhl(&["collapse", &fixture("satisfying_d2.json")]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["valid"], true);
    assert_eq!(r["m"], 3);
}
