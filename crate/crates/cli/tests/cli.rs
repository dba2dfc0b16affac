use std::collections::HashMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn permest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permest")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> HashMap<String, String> {
    let out = permest(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| {
            let (k, v) = l.split_once('=').expect("key=value line");
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn code(args: &[&str]) -> i32 {
    let out = permest(args);
    assert!(!out.stderr.is_empty() || out.status.success());
    out.status.code().unwrap()
}

fn complex(v: &str) -> (f64, f64) {
    let mut it = v.split(' ').map(|t| t.parse::<f64>().unwrap());
    (it.next().unwrap(), it.next().unwrap())
}

#[test]
fn identity_permanent_is_one() {
    let r = ok(&["exact", "--matrix", &fixture("identity4.txt"), "--method", "ryser"]);
    assert_eq!(r["permanent"], "1 0");
    assert_eq!(r["method"], "ryser");
}

#[test]
fn all_ones_permanent_is_factorial() {
    let r = ok(&["exact", "--matrix", &fixture("ones6.txt"), "--method", "glynn"]);
    assert_eq!(r["permanent"], "720 0");
}

#[test]
fn methods_agree_on_random_fixture() {
    let m = fixture("random7.txt");
    let naive = complex(&ok(&["exact", "--matrix", &m, "--method", "naive"])["permanent"]);
    for method in ["ryser", "glynn"] {
        let v = complex(&ok(&["exact", "--matrix", &m, "--method", method])["permanent"]);
        let diff = ((v.0 - naive.0).powi(2) + (v.1 - naive.1).powi(2)).sqrt();
        assert!(diff <= 1e-9 * naive.0.hypot(naive.1).max(1.0), "{method}: {v:?} vs {naive:?}");
    }
}

#[test]
fn derandomized_estimate_is_within_guarantee() {
    let m = fixture("nonneg8.txt");
    let exact = complex(&ok(&["exact", "--matrix", &m])["permanent"]);
    let r = ok(&["estimate", "--matrix", &m, "--epsilon", "0.1", "--mode", "derandomized"]);
    let v = complex(&r["value"]);
    let guarantee: f64 = r["guarantee"].parse().unwrap();
    assert_eq!(r["confidence"], "1");
    assert!((v.0 - exact.0).hypot(v.1 - exact.1) <= guarantee);
}

#[test]
fn multiplicities_expand_the_base() {
    let m = fixture("base4x2.txt");
    let exact = complex(&ok(&["exact", "--matrix", &m, "--mult", "3,1", "--method", "naive"])["permanent"]);
    let r = ok(&["estimate", "--matrix", &m, "--mult", "3,1", "--mode", "exhaustive"]);
    let v = complex(&r["value"]);
    assert!((v.0 - exact.0).abs() <= 1e-12 * exact.0.abs().max(1.0));
    let bound: f64 = ok(&["bound", "--matrix", &m, "--mult", "3,1"])["bound"].parse().unwrap();
    assert!(exact.0.abs() <= bound);
}

#[test]
fn zero_matrix_estimates_zero() {
    let r = ok(&["estimate", "--matrix", &fixture("zeros5.txt"), "--epsilon", "0.1"]);
    assert_eq!(r["value"], "0 0");
    assert_eq!(r["delta"], "0.01");
}

#[test]
fn seeded_random_runs_are_reproducible() {
    let args = ["estimate", "--matrix", &fixture("random7.txt"), "--epsilon", "0.2", "--seed", "42"];
    assert_eq!(permest(&args).stdout, permest(&args).stdout);
    let other = ["estimate", "--matrix", &fixture("random7.txt"), "--epsilon", "0.2", "--seed", "43"];
    assert_ne!(permest(&args).stdout, permest(&other).stdout);
}

#[test]
fn deterministic_commands_are_byte_identical() {
    let m = fixture("nonneg8.txt");
    for args in [
        vec!["exact", "--matrix", &m],
        vec!["estimate", "--matrix", &m, "--epsilon", "0.25", "--mode", "derandomized"],
        vec!["space", "build", "--moduli", "3,2", "--epsilon", "0.25", "--force-construction"],
    ] {
        assert_eq!(permest(&args).stdout, permest(&args).stdout, "{args:?}");
    }
}

#[test]
fn json_carries_the_text_fields() {
    let m = fixture("nonneg8.txt");
    let args = ["estimate", "--matrix", &m, "--epsilon", "0.25", "--mode", "derandomized"];
    let text = ok(&args);
    let mut json_args = vec!["--format", "json"];
    json_args.extend(args);
    let out = permest(&json_args);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let obj = v.as_object().unwrap();
    let mut keys: Vec<_> = obj.keys().cloned().collect();
    let mut text_keys: Vec<_> = text.keys().cloned().collect();
    keys.sort();
    text_keys.sort();
    assert_eq!(keys, text_keys);
    assert_eq!(obj["mode"], "derandomized");
    assert_eq!(obj["value"].as_array().unwrap().len(), 2);
}

#[test]
fn timing_is_opt_in() {
    let m = fixture("identity4.txt");
    assert!(!ok(&["exact", "--matrix", &m]).contains_key("wall_time_s"));
    assert!(ok(&["--timing", "exact", "--matrix", &m]).contains_key("wall_time_s"));
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(code(&["exact", "--matrix", &fixture("bad_row.txt")]), 2);
    assert_eq!(code(&["exact", "--matrix", &fixture("bad_token.txt")]), 2);
    assert_eq!(code(&["exact", "--matrix", "/nonexistent/matrix.txt"]), 2);
    assert_eq!(code(&["exact", "--matrix", &fixture("ones11.txt"), "--method", "naive"]), 3);
    assert_eq!(code(&["estimate", "--matrix", &fixture("random7.txt"), "--epsilon", "0.1", "--mode", "derandomized"]), 4);
    assert_eq!(code(&["estimate", "--matrix", &fixture("random7.txt"), "--epsilon", "2"]), 4);
    assert_eq!(code(&["space", "audit", "--space", "binary n=3"]), 2);
    assert_eq!(code(&["exact"]), 2);
}

#[test]
fn optics_two_photon_interference() {
    let bs = fixture("beamsplitter.txt");
    let p = |out: &str| -> f64 {
        ok(&["optics", "prob", "--unitary", &bs, "--output", out, "--input", "1,1"])["probability"].parse().unwrap()
    };
    assert!((p("2,0") - 0.5).abs() < 1e-12);
    assert!(p("1,1").abs() < 1e-12);
    assert!((p("0,2") - 0.5).abs() < 1e-12);
    let amp = complex(&ok(&["optics", "amp", "--unitary", &bs, "--output", "1,1"])["amplitude"]);
    assert!(amp.0.abs() < 1e-12 && amp.1.abs() < 1e-12);
}

#[test]
fn optics_bound_and_saturation() {
    assert_eq!(ok(&["optics", "bound", "--pattern", "2,0"])["bound"], "0.5");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.txt");
    let r = ok(&["optics", "saturate", "--pattern", "2,1", "--out", path.to_str().unwrap()]);
    let (prob, bound): (f64, f64) = (r["probability"].parse().unwrap(), r["bound"].parse().unwrap());
    assert!((prob - bound).abs() < 1e-12);
    let again = ok(&["optics", "prob", "--unitary", path.to_str().unwrap(), "--output", &r["outcome"]]);
    assert!((again["probability"].parse::<f64>().unwrap() - bound).abs() < 1e-12);
}

#[test]
fn optics_estimates_cover_the_exact_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.txt");
    let r = ok(&["optics", "saturate", "--pattern", "2,1", "--out", path.to_str().unwrap()]);
    let u = path.to_str().unwrap();
    let exact: f64 = ok(&["optics", "prob", "--unitary", u, "--output", &r["outcome"]])["probability"].parse().unwrap();
    let est = ok(&["optics", "prob", "--unitary", u, "--output", &r["outcome"], "--mode", "random", "--epsilon", "0.1", "--seed", "5"]);
    assert_eq!(est["confidence"], "0.99");
    let (p, e): (f64, f64) = (est["probability"].parse().unwrap(), est["error_bound"].parse().unwrap());
    assert!((p - exact).abs() <= e);
}

#[test]
fn exhaustive_space_audits_clean() {
    let r = ok(&["space", "audit", "--space", "binary n=6 m=0 poly=0 eps=0"]);
    assert_eq!(r["measured_bias"], "0");
    assert_eq!(r["result"], "PASS");
}

#[test]
fn built_spaces_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for (i, build) in [
        vec!["space", "build", "--n", "9", "--epsilon", "0.1"],
        vec!["space", "build", "--moduli", "2,3", "--epsilon", "0.5", "--force-construction"],
        vec!["space", "build", "--moduli", "4,4,4", "--exhaustive"],
    ]
    .into_iter()
    .enumerate()
    {
        let path = dir.path().join(format!("space{i}.txt"));
        let mut args = build.clone();
        args.extend(["--out", path.to_str().unwrap()]);
        let built = ok(&args);
        let audit = ok(&["space", "audit", "--space", path.to_str().unwrap()]);
        assert_eq!(audit["descriptor"], built["descriptor"]);
        assert_eq!(audit["result"], "PASS", "{build:?}");
    }
}

#[test]
fn estimate_accepts_a_prebuilt_space() {
    let m = fixture("nonneg8.txt");
    let descriptor = ok(&["space", "build", "--n", "8", "--epsilon", "0.2"])["descriptor"].clone();
    let r = ok(&["estimate", "--matrix", &m, "--mode", "derandomized", "--space", &descriptor]);
    assert_eq!(r["space"], descriptor);
    assert_eq!(r["epsilon"], "0.2");
    let exact = complex(&ok(&["exact", "--matrix", &m])["permanent"]);
    let guarantee: f64 = r["guarantee"].parse().unwrap();
    assert!((complex(&r["value"]).0 - exact.0).abs() <= guarantee);
}
