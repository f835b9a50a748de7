mod common;

use std::process::Command;

use common::{certificate, check_passed, data, etalift};

#[test]
fn nf_of_xy() {
    let (code, c, _) = certificate(&["qweyl", "nf", "--p", "3", "--word", "xy"]);
    assert_eq!(code, 0);
    assert_eq!(c["result"]["normal_form"], "ρ·yx + 1");
    assert_eq!(c["result"]["rewritten"], "ρ·yx + 1");
    for s in ["rightmost", "random:9"] {
        let (code, _, _) = certificate(&["qweyl", "nf", "--p", "5", "--word", "xxyyxy", "--strategy", s]);
        assert_eq!(code, 0, "{s}");
    }
}

#[test]
fn certificate_shape() {
    let (_, c, _) = certificate(&["eta-data", "--p", "5"]);
    assert_eq!(c["schema"], "etalift.certificate/1");
    assert_eq!(c["p"], 5);
    assert_eq!(c["command"], serde_json::json!(["eta-data", "--p", "5"]));
    assert!(c.get("timing").is_none());
    let timed = etalift(&["eta-data", "--p", "5"]);
    let t: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(t["timing"]["wall_clock_ms"].is_u64());
}

#[test]
fn text_format() {
    let out = etalift(&["--no-timing", "--format", "text", "gpoly", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("1/1 checks pass"), "{s}");
    assert!(s.contains("pass"));
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 5] = [
        &["eta-data", "--p", "4"],
        &["eta-data"],
        &["no-such-command"],
        &["qweyl", "nf", "--p", "3", "--word", "xz"],
        &["galois", "build", "--ctx", "/nonexistent.json", "--a", "1"],
    ];
    for args in cases {
        let out = etalift(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn failed_check_exits_1() {
    // 1 + η³ is not a unit in Z[ρ]/(7) at p = 3, so the extension is not separable
    let out = etalift(&["--no-timing", "galois", "build", "--ctx", &data("rings/p3_mod7.json"), "--a", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let c: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(c["passed"], false);
    assert!(!check_passed(&c, "completed"));
}

#[test]
fn thread_cap() {
    let run = |threads: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_etalift"));
        cmd.args(["--no-timing", "qweyl", "azumaya", "--p", "2"]);
        if let Some(t) = threads {
            cmd.env("ETALIFT_THREADS", t);
        }
        cmd.output().unwrap()
    };
    let (one, many) = (run(Some("1")), run(None));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    for bad in ["0", "four"] {
        assert_eq!(run(Some(bad)).status.code(), Some(2), "ETALIFT_THREADS={bad}");
    }
}

#[test]
fn seeded_runs_are_byte_stable() {
    for args in [
        &["qweyl", "center", "--p", "3", "--seed", "11"][..],
        &["identities", "--p", "3", "--samples", "5", "--seed", "4"],
        &["qweyl", "nf", "--p", "3", "--word", "xyxyyx", "--strategy", "random:3"],
    ] {
        let (_, _, a) = certificate(args);
        let (_, _, b) = certificate(args);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn ring_eval() {
    let (code, c, _) =
        certificate(&["ring", "eval", "--ctx", &data("rings/p3_mod9.json"), "--expr", "eta^2", "--expr", "rho^3"]);
    assert_eq!(code, 0);
    // η² = −3ρ ≡ 6ρ mod 9
    assert_eq!(c["result"]["values"][0]["value"], "6ρ");
    assert_eq!(c["result"]["values"][1]["value"], "1");
}
