//! The nine acceptance criteria, exercised through the `etalift` binary.
//! Prints one PASS/FAIL line per criterion to stderr, then fails if any criterion failed.

mod common;

use std::io::Write as _;
use std::time::{Duration, Instant};

use common::{certificate, check_passed, data};
use serde_json::Value;

/// Every certificate produced so far, for the determinism replay.
#[derive(Default)]
struct Log {
    runs: Vec<(Vec<String>, Vec<u8>)>,
}

impl Log {
    fn run(&mut self, args: &[&str]) -> Result<Value, String> {
        let (code, cert, raw) = certificate(args);
        self.runs.push((args.iter().map(|s| s.to_string()).collect(), raw));
        if code != 0 || cert["passed"] != true {
            let failed: Vec<&str> = cert["checks"]
                .as_array()
                .into_iter()
                .flatten()
                .filter(|c| c["passed"] != true)
                .filter_map(|c| c["name"].as_str())
                .collect();
            return Err(format!("`etalift {}` exited {code}; failed checks: {failed:?}", args.join(" ")));
        }
        Ok(cert)
    }
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn c1_structural_constants(log: &mut Log) -> Result<String, String> {
    for p in ["2", "3", "5", "7", "11"] {
        let c = log.run(&["eta-data", "--p", p])?;
        for name in ["eta^(p-1) = -p*y", "p = x*eta^(p-1)", "x*y = -1", "x = -1 mod eta"] {
            ensure(check_passed(&c, name), format!("p = {p}: {name}"))?;
        }
    }
    Ok("p = 2, 3, 5, 7, 11".into())
}

fn c2_defining_polynomial(log: &mut Log) -> Result<String, String> {
    for p in ["2", "3", "5", "7"] {
        let c = log.run(&["gpoly", "--p", p])?;
        ensure(c["result"]["identity_checked"] == true, format!("p = {p}: identities not checked"))?;
        if p == "2" {
            ensure(c["result"]["g_display"] == serde_json::json!(["-1"]), "p = 2: g(Z) ≠ −Z")?;
        }
    }
    Ok("p = 2, 3, 5, 7; g(Z) = −Z at p = 2".into())
}

fn c3_identity_suite(log: &mut Log) -> Result<String, String> {
    let mut detail = Vec::new();
    for (p, p2) in [("2", "Z[ρ]/(4)"), ("3", "Z[ρ]/(9)"), ("5", "Z[ρ]/(25)")] {
        let c = log.run(&["identities", "--p", p])?;
        let ids = c["result"]["identities"].as_array().ok_or("no identity list")?;
        ensure(ids.len() == 18, format!("p = {p}: {} identities", ids.len()))?;
        for id in ids {
            let n = &id["identity_index"];
            ensure(
                id["status"] == "pass" && id["symbolic"] == true,
                format!("p = {p}: identity {n} not symbolic pass"),
            )?;
            let rings: Vec<&str> = id["rings"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
            let finite = rings.iter().filter(|r| !r.starts_with("generic")).count();
            ensure(finite >= 3, format!("p = {p}: identity {n} on {finite} finite rings"))?;
            ensure(rings.contains(&p2), format!("p = {p}: identity {n} not tested on {p2}"))?;
        }
        detail.push(format!("p = {p}: 18/18"));
    }
    Ok(detail.join(", "))
}

fn c4_galois_certificates(log: &mut Log) -> Result<String, String> {
    let cases = [
        ("F_2 Artin–Schreier", "rings/p2_fp.json", "1"),
        ("F_3 Artin–Schreier", "rings/p3_fp.json", "1"),
        ("Z[ρ]/(3), p = 2 Kummer", "rings/p2_mod3.json", "1"),
        ("Z[ρ]/(7), p = 3 Kummer", "rings/p3_mod7.json", "2"),
        ("Z[ρ]/(4) mixed", "rings/p2_mod4.json", "1"),
        ("Z[ρ]/(9) mixed", "rings/p3_mod9.json", "1"),
    ];
    for (what, ring, a) in cases {
        let c = log.run(&["galois", "build", "--ctx", &data(ring), "--a", a])?;
        for name in ["factorization", "order_p", "separable", "discriminant_unit", "fixed_ring"] {
            ensure(check_passed(&c, name), format!("{what}: {name}"))?;
        }
    }
    Ok(format!("{} extensions", cases.len()))
}

fn c5_lifting(log: &mut Log) -> Result<String, String> {
    for (from, to) in [("rings/p2_mod4.json", "rings/p2_fp.json"), ("rings/p3_mod9.json", "rings/p3_fp.json")] {
        for a in ["1", "rho"] {
            let c = log.run(&["galois", "lift", "--from", &data(from), "--to", &data(to), "--a", a])?;
            ensure(check_passed(&c, "reduction_matches"), format!("{from} → {to}, a = {a}"))?;
        }
    }
    for a in ["1", "2"] {
        let c = log.run(&[
            "descent",
            "lift",
            "--from",
            &data("rings/p3_mod9.json"),
            "--to",
            &data("rings/p3_mod3.json"),
            "--a",
            a,
        ])?;
        ensure(c["result"]["route"] == "descent", "Z/9 → F_3 did not go through the descent")?;
        ensure(check_passed(&c, "epsilon_reduces"), format!("Z/9 → F_3, a = {a}: reduction"))?;
    }
    Ok("Z[ρ]/(p²) → F_p for p = 2, 3; ρ-free Z/9 → F_3".into())
}

fn c6_descent(log: &mut Log) -> Result<String, String> {
    let c = log.run(&["descent", "build", "--p", "3"])?;
    ensure(check_passed(&c, "symbolic: tau order p-1"), "τ^{p−1} ≠ 1")?;
    ensure(check_passed(&c, "symbolic: tau commutes with sigma"), "στ ≠ τσ")?;
    let specs = c["result"]["specializations"].as_array().ok_or("no specializations")?;
    let at9: Vec<&Value> =
        specs.iter().filter(|s| s["ring"].as_str().is_some_and(|r| r.starts_with("Z[ρ]/(9)"))).collect();
    ensure(!at9.is_empty(), "no Z[ρ]/(9) specialization")?;
    for s in at9 {
        let eps = &s["descent"]["epsilon"];
        ensure(eps["sigma_shift"] == true, "σ(ε) ≢ ε − 1 mod η")?;
        ensure(eps["spans"] == true, "ε does not span")?;
    }
    Ok("p = 3 symbolic; ε at Z[ρ]/(9)".into())
}

fn c7_qweyl(log: &mut Log) -> Result<String, String> {
    for p in ["2", "3", "5"] {
        let c = log.run(&["qweyl", "center", "--p", p])?;
        ensure(check_passed(&c, "generators_central"), format!("p = {p}: x^p, y^p not central"))?;
        ensure(check_passed(&c, "commutation_closed_form"), format!("p = {p}: closed form ≠ rewriting"))?;
    }
    let sym = log.run(&["qweyl", "azumaya", "--p", "2", "--mode", "sym"])?;
    let s = &sym["result"]["symbolic"];
    ensure(check_passed(&sym, "det = unit · locus^k"), "p = 2: det ψ is not unit · locus^k")?;
    let k = s["exponent"].as_u64().ok_or("no exponent")?;
    let literal = s["unsigned_form"] == true;
    for p in ["2", "3"] {
        let c = log.run(&["qweyl", "azumaya", "--p", p])?;
        let pts = c["result"]["points"].as_array().map_or(0, Vec::len);
        ensure(pts == 49, format!("p = {p}: {pts} points"))?;
        ensure(c["result"]["locus_matches"] == true, format!("p = {p}: locus mismatch"))?;
        let f = log.run(&["qweyl", "dcp", "--p", p, "--samples", "50"])?;
        let cases = f["result"]["cases"].as_array().ok_or("no dcp cases")?;
        let plain = cases.iter().filter(|c| !c["ring"].as_str().unwrap_or("").contains("eps")).count();
        ensure(plain >= 50, format!("p = {p}: {plain} crossed products over F_p"))?;
        ensure(cases.iter().any(|c| c["c"] == "0" && c["b"] == "0"), format!("p = {p}: [0, 0] missing"))?;
    }
    Ok(format!(
        "p = 2: det ψ = {} · ({})^{k}; literal unit·(1 + 4st)^k form holds: {literal} (sign (−1)^(p+1) at p = 2)",
        s["unit"].as_str().unwrap_or("?"),
        s["locus"].as_str().unwrap_or("?"),
    ))
}

fn c8_brauer_lift(log: &mut Log) -> Result<String, String> {
    for ring in ["rings/p2_mod4.json", "rings/p3_mod9.json"] {
        for (c, b) in [("0", "0"), ("1", "1")] {
            let cert = log.run(&[
                "qweyl",
                "lift",
                "--ctx",
                &data(ring),
                "--ideal",
                &data("ideals/eta.json"),
                "--c",
                c,
                "--b",
                b,
            ])?;
            ensure(check_passed(&cert, "lift is Azumaya"), format!("{ring} [{c}, {b}]: lift not Azumaya"))?;
            ensure(check_passed(&cert, "reduces to [c'', b'']"), format!("{ring} [{c}, {b}]: bad reduction"))?;
        }
    }
    Ok("Z[ρ]/(4) → F_2, Z[ρ]/(9) → F_3".into())
}

fn c9_determinism(log: &mut Log) -> Result<String, String> {
    let runs = std::mem::take(&mut log.runs);
    for (args, first) in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (_, _, again) = certificate(&args);
        ensure(&again == first, format!("`etalift {}` differs between runs", args.join(" ")))?;
    }
    let text =
        || common::etalift(&["--no-timing", "--format", "text", "qweyl", "dcp", "--p", "3", "--seed", "7"]).stdout;
    ensure(text() == text(), "text output differs between runs")?;
    Ok(format!("{} certificates replayed byte for byte", runs.len()))
}

#[test]
fn acceptance() {
    type Criterion = fn(&mut Log) -> Result<String, String>;
    let criteria: [(&str, Criterion, u64); 9] = [
        ("structural constants", c1_structural_constants, 1),
        ("defining polynomial identity", c2_defining_polynomial, 5),
        ("identity suite", c3_identity_suite, 60),
        ("Galois certificates", c4_galois_certificates, 30),
        ("lifting", c5_lifting, 60),
        ("descent", c6_descent, 120),
        ("q-Weyl algebra", c7_qweyl, 300),
        ("Brauer lift", c8_brauer_lift, 60),
        ("determinism", c9_determinism, 600),
    ];
    let mut log = Log::default();
    let mut failures = 0;
    for (i, (name, f, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = f(&mut log);
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > Duration::from_secs(budget) => Err(format!("{d}; over the {budget} s budget")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(e) => ("FAIL", e.as_str()),
        };
        let line =
            format!("criterion {} [{tag}] {name}: {detail} ({:.2} s, budget {budget} s)\n", i + 1, took.as_secs_f64());
        // straight to the stream, past libtest's capture, so the summary shows in every run
        let _ = std::io::stderr().write_all(line.as_bytes());
        failures += outcome.is_err() as usize;
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
