use std::path::Path;
use std::sync::Arc;

use etalift::certificate::Certificate;
use etalift::descent::{build_generic_descent, default_specializations, lift_without_rho};
use etalift::galois::{build_extension, build_gen_as_poly, lift_extension};
use etalift::identities::{appendix_identity_suite, Status, SuiteConfig};
use etalift::qweyl::{
    azumaya_det, brauer_lift_demo, dcp_sweep, rewrite_word, verify_center, QWeyl, QWeylElem, Strategy,
};
use etalift::ring::descriptor::{load_ring, IdealDesc, RingDesc};
use etalift::ring::expr::parse_elem;
use etalift::{compute_eta_data, BaseRing, CycInt, Error, Prime, Result, RingCtx, RingElem, RingHom};
use serde::Deserialize;

use crate::{Cmd, DescentCmd, GaloisCmd, Mode, QweylCmd, RingCmd};

pub fn run(cmd: &Cmd, argv: Vec<String>) -> Result<Certificate> {
    match cmd {
        Cmd::EtaData { p } => eta_data(argv, *p),
        Cmd::Ring(RingCmd::Eval { ctx, p, exprs }) => ring_eval(argv, ctx.as_deref(), *p, exprs),
        Cmd::Identities { p, samples, seed, ctx, only, no_symbolic } => {
            let cfg = SuiteConfig {
                samples: *samples,
                seed: *seed,
                extra: ctx.as_deref().map(load_ring).transpose()?,
                symbolic: !no_symbolic,
                only: only.clone(),
                ..SuiteConfig::default()
            };
            identities(argv, *p, &cfg)
        }
        Cmd::Gpoly { p } => gpoly(argv, *p),
        Cmd::Galois(GaloisCmd::Build { ctx, a }) => galois_build(argv, ctx, a),
        Cmd::Galois(GaloisCmd::Lift { from, to, a }) => galois_lift(argv, from, to, a),
        Cmd::Descent(DescentCmd::Build { p, symbolic, specialize }) => {
            descent_build(argv, *p, *symbolic, specialize.as_deref())
        }
        Cmd::Descent(DescentCmd::Lift { p, from, to, a }) => descent_lift(argv, *p, from, to, a),
        Cmd::Qweyl(QweylCmd::Nf { p, word, strategy }) => qweyl_nf(argv, *p, word, strategy),
        Cmd::Qweyl(QweylCmd::Center { p, samples, seed }) => {
            let r = verify_center(prime(*p)?, *samples, *seed)?;
            let mut c = Certificate::new(argv, Some(*p), Some(*seed), &r)?;
            c.check("generators_central", r.generators_central)
                .check("random_central", r.random_central)
                .check("basis_independent", r.basis_independent)
                .check("commutation_closed_form", r.commutation_closed_form);
            Ok(c)
        }
        Cmd::Qweyl(QweylCmd::Azumaya { p, mode, points, q }) => qweyl_azumaya(argv, *p, *mode, points.as_deref(), *q),
        Cmd::Qweyl(QweylCmd::Lift { ctx, ideal, c, b }) => qweyl_lift(argv, ctx, ideal, c, b),
        Cmd::Qweyl(QweylCmd::Dcp { p, samples, seed }) => {
            let r = dcp_sweep(prime(*p)?, *samples, *seed)?;
            let mut c = Certificate::new(argv, Some(*p), Some(*seed), &r)?;
            for case in &r.cases {
                c.check_with(format!("[{}, {}] over {}", case.c, case.b, case.ring), case.passed(), None);
            }
            Ok(c)
        }
    }
}

fn prime(p: u32) -> Result<Prime> {
    Prime::new(p)
}

fn eta_data(argv: Vec<String>, p: u32) -> Result<Certificate> {
    let pr = prime(p)?;
    let d = compute_eta_data(pr)?;
    let minus = |x: &CycInt| &CycInt::from_int(pr, -1) * x;
    let eta_pm1 = d.eta.pow(p as u64 - 1);
    let p_c = CycInt::from_int(pr, p);
    let mut c = Certificate::new(argv, Some(p), None, &d)?;
    c.check("eta^(p-1) = -p*y", eta_pm1 == minus(&(&p_c * &d.y)))
        .check("p = x*eta^(p-1)", p_c == &d.x_unit * &eta_pm1)
        .check("x*y = -1", &d.x_unit * &d.y == CycInt::from_int(pr, -1) && d.x_inv_is_neg_y)
        .check("x = -1 mod eta", d.x_unit.mod_eta() == p - 1);
    Ok(c)
}

fn ring_from(ctx: Option<&Path>, p: Option<u32>) -> Result<Arc<RingCtx>> {
    match (ctx, p) {
        (Some(path), _) => {
            let r = load_ring(path)?;
            if let Some(p) = p {
                if r.prime().get() != p {
                    return Err(Error::Argument(format!("--p {p} disagrees with the descriptor (p = {})", r.prime())));
                }
            }
            Ok(r)
        }
        (None, Some(p)) => Ok(RingCtx::coefficients(BaseRing::integers(prime(p)?))),
        (None, None) => Err(Error::Argument("give --ctx or --p".into())),
    }
}

#[derive(serde::Serialize)]
struct Evaluated {
    ring: String,
    values: Vec<EvalEntry>,
}

#[derive(serde::Serialize)]
struct EvalEntry {
    expr: String,
    value: String,
}

fn ring_eval(argv: Vec<String>, ctx: Option<&Path>, p: Option<u32>, exprs: &[String]) -> Result<Certificate> {
    let r = ring_from(ctx, p)?;
    let values = exprs
        .iter()
        .map(|e| Ok(EvalEntry { expr: e.clone(), value: parse_elem(&r, e)?.to_string() }))
        .collect::<Result<Vec<_>>>()?;
    let mut c = Certificate::new(argv, Some(r.prime().get()), None, &Evaluated { ring: r.describe(), values })?;
    c.check("parsed", true);
    Ok(c)
}

fn identities(argv: Vec<String>, p: u32, cfg: &SuiteConfig) -> Result<Certificate> {
    let r = appendix_identity_suite(prime(p)?, cfg)?;
    let mut c = Certificate::new(argv, Some(p), Some(cfg.seed), &r)?;
    for id in &r.identities {
        let detail = id.counterexample.as_ref().map(|x| format!("{}: {} ≠ {}", x.ring, x.lhs, x.rhs));
        c.check_with(format!("identity {}", id.identity_index), id.status != Status::Fail, detail);
    }
    Ok(c)
}

fn gpoly(argv: Vec<String>, p: u32) -> Result<Certificate> {
    let g = build_gen_as_poly(prime(p)?)?;
    let r = g.report();
    let mut c = Certificate::new(argv, Some(p), None, &r)?;
    c.check("defining identity, (1+zη)^p expansion, g ≡ −Z mod η", r.identity_checked);
    Ok(c)
}

fn galois_build(argv: Vec<String>, ctx: &Path, a: &str) -> Result<Certificate> {
    let r = load_ring(ctx)?;
    let a = parse_elem(&r, a)?;
    let ext = build_extension(&r, &a)?;
    let g = &ext.certificate;
    let mut c = Certificate::new(argv, Some(r.prime().get()), None, g)?;
    c.check("separable", g.separable)
        .check("order_p", g.order_p)
        .check("sigma_powers", g.sigma_powers)
        .check("factorization", g.factorization)
        .check_with("fixed_ring", g.fixed_ring, Some(g.fixed_ring_method.clone()))
        .check("discriminant_unit", g.discriminant_unit)
        .check("discriminant_closed_form", g.discriminant_closed_form)
        .check("sharp_theta", g.sharp_theta);
    Ok(c)
}

fn galois_lift(argv: Vec<String>, from: &Path, to: &Path, a: &str) -> Result<Certificate> {
    let (src, tgt) = (load_ring(from)?, load_ring(to)?);
    let a = parse_elem(&tgt, a)?;
    let h = RingHom::canonical(&src, &tgt)?;
    let target = build_extension(&tgt, &a)?;
    let (_, r) = lift_extension(&h, &target)?;
    let mut c = Certificate::new(argv, Some(src.prime().get()), None, &r)?;
    c.check_with("lifted extension is Galois", r.lifted.passed(), Some(format!("a' = {}", r.lifted_a)))
        .check("target extension is Galois", r.target.passed())
        .check("reduction_map", r.reduction_map)
        .check("sigma_equivariant", r.sigma_equivariant)
        .check("reduction_matches", r.reduction_matches);
    Ok(c)
}

#[derive(Deserialize)]
struct SpecDesc {
    ctx: RingDesc,
    values: Vec<String>,
}

fn descent_build(argv: Vec<String>, p: u32, symbolic: Option<bool>, specialize: Option<&Path>) -> Result<Certificate> {
    let pr = prime(p)?;
    let specs = match specialize {
        None => default_specializations(pr)?,
        Some(path) => {
            let s = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let descs: Vec<SpecDesc> = serde_json::from_str(&s)?;
            descs
                .iter()
                .map(|d| {
                    let r = d.ctx.build()?;
                    let vals = d.values.iter().map(|v| parse_elem(&r, v)).collect::<Result<Vec<RingElem>>>()?;
                    Ok((r, vals))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let (_, r) = build_generic_descent(pr, symbolic.unwrap_or(p <= 3), &specs)?;
    let mut c = Certificate::new(argv, Some(p), None, &r)?;
    if let Some(s) = &r.symbolic {
        c.check("symbolic: tau order p-1", s.tau_order)
            .check("symbolic: tau commutes with sigma", s.commutes_with_sigma)
            .check("symbolic: Kummer relation", s.kummer)
            .check("symbolic: descent", s.passed());
    }
    c.check("norm mod eta", r.norm_mod_eta_is_trace);
    for s in &r.specializations {
        c.check(format!("specialization {} at ({})", s.ring, s.values.join(", ")), s.passed());
    }
    Ok(c)
}

fn descent_lift(argv: Vec<String>, p: Option<u32>, from: &Path, to: &Path, a: &str) -> Result<Certificate> {
    let src = ring_from(Some(from), p)?;
    let tgt = ring_from(Some(to), p)?;
    let a = parse_elem(&tgt, a)?;
    let r = lift_without_rho(&src, &tgt, &a)?;
    let mut c = Certificate::new(argv, Some(src.prime().get()), None, &r)?;
    if let Some(d) = &r.degenerate {
        c.check("plain lift (p = 2)", d.passed());
    }
    if let Some(d) = &r.descent {
        c.check("normal basis", d.normal_basis.passed())
            .check_with("generator in normal form", d.pipeline.normal_form, Some(format!("route {}", d.pipeline.route)))
            .check("descent extension", d.descent.passed())
            .check("reduction_map", d.reduction_map)
            .check("tau_equivariant", d.tau_equivariant)
            .check("sigma_equivariant", d.sigma_equivariant)
            .check("epsilon_reduces", d.epsilon_reduces);
    }
    Ok(c)
}

#[derive(serde::Serialize)]
struct NormalForm {
    word: String,
    normal_form: String,
    strategy: Strategy,
    rewritten: String,
}

fn qweyl_nf(argv: Vec<String>, p: u32, word: &str, strategy: &str) -> Result<Certificate> {
    let alg = QWeyl::free(prime(p)?);
    let strategy: Strategy = strategy.parse()?;
    let nf = QWeylElem::from_word(&alg, word)?;
    let rw = rewrite_word(&alg, word, strategy)?;
    let r = NormalForm { word: word.into(), normal_form: nf.to_string(), strategy, rewritten: rw.to_string() };
    let mut c = Certificate::new(argv, Some(p), None, &r)?;
    c.check("multiplication agrees with rewriting", nf == rw);
    Ok(c)
}

fn qweyl_azumaya(argv: Vec<String>, p: u32, mode: Mode, points: Option<&Path>, q: u64) -> Result<Certificate> {
    let pts: Option<Vec<(String, String)>> = match points {
        None => None,
        Some(path) => {
            let s = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            Some(serde_json::from_str(&s)?)
        }
    };
    let r = azumaya_det(prime(p)?, mode == Mode::Sym, q, pts.as_deref())?;
    let mut c = Certificate::new(argv, Some(p), None, &r)?;
    if let Some(s) = &r.symbolic {
        let k = s.exponent.map_or("none".into(), |k| k.to_string());
        c.check_with(
            "det = unit · locus^k",
            s.unit.is_some() && s.exponent.is_some_and(|k| k >= 1),
            Some(format!("locus {}, k = {k}", s.locus)),
        )
        .check("det is a unit mod p", s.unit_mod_p);
    }
    let bad = r.points.iter().filter(|x| !x.agrees()).count();
    c.check_with(
        "psi invertible exactly off the locus",
        r.locus_matches,
        Some(format!("{} points, {} disagreements", r.points.len(), bad)),
    );
    if let Some(n) = &r.nilpotence {
        c.check_with(
            "1 + ηxy generates a nilpotent ideal on the locus",
            n.passed(),
            Some(format!(
                "(s, t) = ({}, {}), dim {}, J^k = 0 from k = {}",
                n.s,
                n.t,
                n.ideal_dim,
                n.nilpotency_index.map_or("none".into(), |k| k.to_string())
            )),
        );
    }
    Ok(c)
}

fn qweyl_lift(argv: Vec<String>, ctx: &Path, ideal: &Path, c: &str, b: &str) -> Result<Certificate> {
    let rd = RingDesc::load(ctx)?;
    let src = rd.build()?;
    let tgt = IdealDesc::load(ideal)?.quotient_of(&rd)?.build()?;
    let h = RingHom::canonical(&src, &tgt)?;
    let r = brauer_lift_demo(&h, &parse_elem(&tgt, c)?, &parse_elem(&tgt, b)?)?;
    let mut cert = Certificate::new(argv, Some(src.prime().get()), None, &r)?;
    cert.check("η ∈ I", r.eta_in_ideal)
        .check("p ∈ I", r.p_in_ideal)
        .check("η nilpotent in R", r.eta_nilpotent)
        .check("1 + bcη^p unit", r.locus_unit)
        .check_with("lift is Azumaya", r.lift_azumaya, Some(format!("c = {}, b = {}", r.c_lift, r.b_lift)))
        .check("reduces to [c'', b'']", r.reduces)
        .check("[c'', b''] is Azumaya", r.target_azumaya);
    Ok(cert)
}
