use std::process::{Command, Output};

use serde_json::Value;
use zg_core::{zeta_eval, Enclosure, Precision, RealBall};

fn zg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zg"))
        .args(args)
        .env_remove("ZG_PREC_BITS")
        .output()
        .expect("zg runs")
}

fn json(args: &[&str]) -> Value {
    let out = zg(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn enclosure(v: &Value) -> Enclosure {
    Enclosure {
        mid_re: v["mid_re"].as_str().unwrap().to_string(),
        mid_im: v["mid_im"].as_str().unwrap().to_string(),
        rad: v["rad"].as_str().unwrap().to_string(),
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn eval_zeta_three() {
    let v = json(&["eval", "zeta", "--s", "3", "--format", "json"]);
    let b = enclosure(&v).to_ball(128).unwrap();
    let zeta3 = zg_core::parse_decimal("1.2020569031595942853997").unwrap();
    assert!(b.re.contains_rational(&zeta3));
    assert_eq!(v["prec_bits"], 64);
}

#[test]
fn eval_theta_zero_contains_zero() {
    let v = json(&["eval", "theta", "--t", "0", "--format", "json"]);
    let b = enclosure(&v).to_ball(64).unwrap();
    assert!(b.contains_zero());
}

#[test]
fn eval_z_near_first_zero() {
    let v = json(&["eval", "Z", "--t", "14.134725", "--prec-bits", "128", "--format", "json"]);
    let b = enclosure(&v).to_ball(128).unwrap();
    assert!(b.re.abs_hi() < 1e-6);
    let lo = json(&["eval", "Z", "--t", "14.1347", "--format", "json"]);
    let hi = json(&["eval", "Z", "--t", "14.1348", "--format", "json"]);
    let (lo, hi) = (enclosure(&lo).to_ball(64).unwrap(), enclosure(&hi).to_ball(64).unwrap());
    assert!(lo.re.is_negative() && hi.re.is_positive());
}

#[test]
fn printed_enclosure_round_trips() {
    for s in ["0.5+10i", "-3.25+7i", "2"] {
        let v = json(&["eval", "zeta", "--s", s, "--prec-bits", "96", "--format", "json"]);
        let printed = enclosure(&v).to_ball(200).unwrap();
        let arg = zg_core::parse_complex(s).unwrap().to_ball(96);
        let prec = Precision::new(96, rug::Float::with_val(64, 1) >> 53).unwrap();
        let direct = zeta_eval(&arg, &prec).unwrap().value;
        assert!(printed.re.contains(&direct.re) && printed.im.contains(&direct.im), "{s}");
    }
}

#[test]
fn text_output_always_shows_radius() {
    let out = zg(&["eval", "loggamma", "--s", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("loggamma(5) = 3.178053830347945"));
    assert!(text.contains("+/-"));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_zg"))
        .args(["eval", "chi", "--s", "0.5", "--format", "json"])
        .env("ZG_PREC_BITS", "100")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["prec_bits"], 100);
    let b = enclosure(&v).to_ball(100).unwrap();
    assert!(b.re.contains(&RealBall::one(100)));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&zg(&["eval", "zeta", "--s", "1+"])), 2);
    assert_eq!(code(&zg(&["eval", "zeta", "--s", "abc"])), 2);
    assert_eq!(code(&zg(&["eval", "zeta", "--s", "1"])), 3);
    assert_eq!(code(&zg(&["eval", "R", "--s", "0.5+10i"])), 3);
    assert_eq!(code(&zg(&["eval", "zeta"])), 2);
    assert_eq!(code(&zg(&["eval", "zeta", "--s", "2", "--prec-bits", "4"])), 2);
    assert_eq!(code(&zg(&["bounds", "show", "bogus"])), 4);
    assert_eq!(code(&zg(&["bounds", "apply", "bogus", "--s", "2"])), 4);
    assert_eq!(code(&zg(&["verify", "--bound", "bogus"])), 4);
    let err = zg(&["eval", "theta", "--t", "2i"]);
    assert_eq!(code(&err), 3);
    assert!(String::from_utf8_lossy(&err.stderr).contains("cut"));
}

#[test]
fn bounds_list_and_show() {
    let v = json(&["bounds", "list", "--format", "json"]);
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.len() >= 19);
    assert!(ids.contains(&"thm5.1-strip"));
    let out = zg(&["bounds", "show", "thm5.1-strip"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("region: 0 <= sigma <= 1"));
    assert!(text.contains("(t/2pi)^{-sigma/2}"));
}

#[test]
fn bounds_apply() {
    let v = json(&["bounds", "apply", "prop4.4", "--s", "0.5+100i", "--format", "json"]);
    assert_eq!(v[0]["in_region"], "true");
    assert_eq!(v[0]["rhs"]["mid_re"], "300");
    let v = json(&["bounds", "apply", "prop4.1", "--s", "0.5+2i", "--format", "json"]);
    assert_eq!(v[0]["in_region"], "false");
    let v = json(&["bounds", "apply", "prop2.2", "--s", "2", "--format", "json"]);
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn verify_writes_reports_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let run = |sub: &str| {
        let out_dir = format!("{d}/{sub}");
        let out = zg(&["verify", "--bound", "prop3.1", "--samples", "30", "--seed", "1", "--out-dir", &out_dir]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS prop3.1-theta-growth"));
        std::fs::read(format!("{out_dir}/prop3.1-theta-growth.json")).unwrap()
    };
    let a = run("a");
    assert_eq!(a, run("b"));
    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["samples"], 30);
    assert_eq!(report["seed"], 1);
    assert!(report.get("timestamp").is_none());
    let csv = std::fs::read_to_string(format!("{d}/a/prop3.1-theta-growth.csv")).unwrap();
    assert!(csv.starts_with("sigma,t,lhs_hi,rhs_lo,margin,prec_bits,status\n"));
    assert_eq!(csv.lines().count(), 31);
}

#[test]
fn verify_timestamp_and_sample_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = zg(&["verify", "--bound", "rs-c0-cap", "--samples", "5", "--out-dir", d, "--timestamp", "--jobs", "1"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&std::fs::read(format!("{d}/rs-c0-cap.json")).unwrap()).unwrap();
    assert!(v["timestamp"].as_u64().is_some());
    assert_eq!(code(&zg(&["verify", "--bound", "rs-c0-cap", "--samples", "0", "--out-dir", d])), 3);
    assert_eq!(code(&zg(&["verify", "--samples", "5"])), 2);
}

#[test]
fn complex_input_is_exact() {
    let s = zg_core::parse_complex("0.1+0.2i").unwrap().to_ball(64);
    assert!(s.re.contains_rational(&rug::Rational::from((1, 10))));
}
