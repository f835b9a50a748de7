use super::*;
use crate::cyclotomic::Prime;
use crate::ring::{BaseRing, RingCtx};

fn pr(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

#[test]
fn adjoin_rho_fixed_ring() {
    for (q, m) in [(3u32, 4i64), (3, 9), (5, 2)] {
        let ctx = RingCtx::coefficients(BaseRing::modulo(pr(q), m).unwrap());
        let (_, rep) = adjoin_rho(&ctx, false).unwrap();
        assert!(rep.fixed_ring && rep.rho_order_p, "{rep:?}");
        assert_eq!(rep.tau_order, Some(q - 1));
    }
    for q in [3u32, 5, 7] {
        let ctx = RingCtx::polynomial_ring(BaseRing::integers(pr(q)), &["x"]).unwrap();
        let (_, rep) = adjoin_rho(&ctx, false).unwrap();
        assert!(rep.fixed_ring, "{rep:?}");
    }
    let f3 = RingCtx::coefficients(BaseRing::modulo(pr(3), 3).unwrap());
    let (t, rep) = adjoin_rho(&f3, true).unwrap();
    assert_eq!(t.choice.s, 1);
    assert!(rep.fixed_ring && !rep.rho_order_p);
}

#[test]
fn norm_recursion() {
    for q in [3u32, 5] {
        let p = pr(q);
        let ctx = RingCtx::polynomial_ring(BaseRing::integers(p), &["x0", "x1"]).unwrap();
        let t = TauEquippedRing::new(&ctx).unwrap();
        let z = &ctx.var("x0").unwrap() + &(&ctx.var("x1").unwrap() * &ctx.rho());
        let rep = norm_report(&t, &z).unwrap();
        assert!(rep.recursion && rep.kummer_form, "{rep:?}");
    }
}

#[test]
fn generic_descent_p3() {
    let p = pr(3);
    let specs = default_specializations(p).unwrap();
    let (_, rep) = build_generic_descent(p, true, &specs).unwrap();
    let sym = rep.symbolic.as_ref().unwrap();
    assert!(sym.tau_order && sym.commutes_with_sigma && sym.kummer, "{sym:#?}");
    assert!(rep.passed(), "{rep:#?}");
    for s in &rep.specializations {
        assert_eq!(s.descent.epsilon.spans, Some(true));
        assert_eq!(s.descent.epsilon.sigma_shift, Some(true));
    }
}

#[test]
fn generic_descent_p2_is_trivial() {
    let p = pr(2);
    let specs = default_specializations(p).unwrap();
    let (_, rep) = build_generic_descent(p, true, &specs).unwrap();
    assert!(rep.passed(), "{rep:#?}");
}

#[test]
fn generic_descent_p5_specializations() {
    let p = pr(5);
    let specs = default_specializations(p).unwrap();
    let (_, rep) = build_generic_descent(p, false, &specs).unwrap();
    assert!(rep.passed(), "{rep:#?}");
}

fn spec_p3() -> DescentExt {
    let p = pr(3);
    let specs = default_specializations(p).unwrap();
    let (t, vals) = &specs[0];
    specialize(None, t, vals).unwrap().0
}

#[test]
fn pipeline_on_constructed_pair() {
    let d = spec_p3();
    let set = Setting { ring: &d.ring, ext: d.ext(), sigma: &d.galois.sigma, tau: &d.tau };
    assert!(set.is_normal_form(d.theta(), &d.z).unwrap());
    let (_, _, rep) = improve(&set, d.theta()).unwrap();
    assert!(rep.normal_form, "{rep:#?}");
    assert_eq!(rep.route, "pipeline", "{rep:#?}");
    assert!(rep.steps.iter().all(|s| s.holds), "{rep:#?}");
}

#[test]
fn pipeline_repairs_a_shifted_generator() {
    let d = spec_p3();
    let set = Setting { ring: &d.ring, ext: d.ext(), sigma: &d.galois.sigma, tau: &d.tau };
    let ops = crate::eta_calculus::EtaOps::new(d.ext());
    for y in [d.ext().int(3), d.ext().rho().scale_int(3), d.ext().int(1)] {
        let shifted = ops.ominus(d.theta(), &y).unwrap();
        let (_, _, rep) = improve(&set, &shifted).unwrap();
        assert!(rep.normal_form && rep.route == "pipeline", "{rep:#?}");
        assert!(rep.steps.iter().all(|s| s.holds), "{rep:#?}");
    }
}

#[test]
fn eigenvectors_of_delta_tau() {
    let d = spec_p3();
    let rep = eigen_check(&d.tau, d.ring.choice.s, 6, 7).unwrap();
    assert!(rep.passed(), "{rep:?}");
}

#[test]
fn rho_free_lift_z9_to_f3() {
    let p = pr(3);
    let src = RingCtx::coefficients(BaseRing::modulo(p, 9).unwrap());
    let tgt = RingCtx::coefficients(BaseRing::modulo(p, 3).unwrap());
    for a in [tgt.one(), tgt.int(2)] {
        let rep = lift_without_rho(&src, &tgt, &a).unwrap();
        assert_eq!(rep.route, "descent");
        // η^{p−1} = 0 in Z[ρ]/(3): z cannot be read off exactly and the search finishes
        assert_eq!(rep.descent.as_ref().unwrap().pipeline.route, "search");
        assert!(rep.passed(), "{rep:#?}");
    }
}

#[test]
fn rho_free_lift_p2_degenerates() {
    let p = pr(2);
    let src = RingCtx::coefficients(BaseRing::modulo(p, 4).unwrap());
    let tgt = RingCtx::coefficients(BaseRing::modulo(p, 2).unwrap());
    let rep = lift_without_rho(&src, &tgt, &tgt.one()).unwrap();
    assert_eq!(rep.route, "degenerate");
    assert!(rep.passed(), "{rep:#?}");
}
