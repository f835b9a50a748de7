use super::*;
use crate::ring::RingHom;

fn pr(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

fn generic_base(p: Prime) -> Arc<RingCtx> {
    let free = RingCtx::polynomial_ring(BaseRing::integers(p), &["u"]).unwrap();
    let u = free.var("u").unwrap();
    let d = &free.one() + &(&u * &free.eta_pow(p.get()));
    RingBuilder::from_ctx(&free).inverse(&d, None).unwrap().build().unwrap()
}

#[test]
fn gpoly_small_primes() {
    assert_eq!(build_gen_as_poly(pr(2)).unwrap().g_coeffs, vec![CycInt::from_int(pr(2), -1)]);
    let p = pr(3);
    let g = build_gen_as_poly(p).unwrap();
    let x = &CycInt::one(p) + &CycInt::rho(p);
    assert_eq!(g.g_coeffs, vec![x.clone(), &x * &CycInt::eta(p)]);
    for q in [5, 7] {
        build_gen_as_poly(pr(q)).unwrap();
    }
}

#[test]
fn classical_artin_schreier() {
    for q in [2u32, 3, 5] {
        let base = RingCtx::coefficients(BaseRing::residue_field(pr(q)));
        let ext = build_extension(&base, &base.one()).unwrap();
        assert!(ext.certificate.passed(), "{:?}", ext.certificate);
        // σ(θ) = θ + 1 in characteristic p
        assert_eq!(ext.sigma.apply(&ext.theta).unwrap(), &ext.theta + &ext.ext.one());
    }
}

#[test]
fn generic_extension() {
    for q in [2u32, 3] {
        let p = pr(q);
        let base = generic_base(p);
        let u = base.var("u").unwrap();
        let ext = build_extension(&base, &u).unwrap();
        let c = &ext.certificate;
        assert!(c.passed(), "{c:?}");
        if q == 3 {
            assert!(!c.discriminant_first_power_form);
        }
    }
}

#[test]
fn non_separable_parameter_is_rejected() {
    let p = pr(3);
    let base = RingCtx::polynomial_ring(BaseRing::integers(p), &["u"]).unwrap();
    let u = base.var("u").unwrap();
    assert!(!is_separable_param(&u).unwrap().separable);
    assert!(matches!(build_extension(&base, &u), Err(Error::UnitRequired(_))));
}

#[test]
fn kummer_and_mixed_characteristic() {
    for (q, m) in [(2u32, 3i64), (3, 7), (2, 4), (3, 9)] {
        let p = pr(q);
        let base = RingCtx::coefficients(BaseRing::modulo(p, m).unwrap());
        let a = base
            .elements()
            .unwrap()
            .into_iter()
            .find(|a| !a.is_zero() && is_separable_param(a).unwrap().separable)
            .unwrap();
        let ext = build_extension(&base, &a).unwrap();
        assert!(ext.certificate.passed(), "p={q} m={m}: {:?}", ext.certificate);
    }
}

#[test]
fn fixed_ring_by_enumeration_p2() {
    let p = pr(2);
    let base = RingCtx::coefficients(BaseRing::modulo(p, 4).unwrap());
    let ext = build_extension(&base, &base.int(1)).unwrap();
    let fixed = ext.ext.elements().unwrap().into_iter().filter(|x| ext.sigma.apply(x).unwrap() == *x).count();
    assert_eq!(fixed, 4);
    assert!(ext.certificate.fixed_ring);
}

#[test]
fn shifting_theta() {
    for (q, m) in [(3u32, 3i64), (3, 9), (2, 4)] {
        let p = pr(q);
        let base = RingCtx::coefficients(BaseRing::modulo(p, m).unwrap());
        let ext = build_extension(&base, &base.int(1)).unwrap();
        let zero = shift_theta(&ext, &base.zero()).unwrap();
        assert_eq!(zero.new_a, ext.a);
        let sh = shift_theta(&ext, &base.one()).unwrap();
        assert!(sh.commutes_with_sigma && sh.round_trip);
        assert!(sh.shifted.certificate.passed());
    }
    // generic p = 2: a' = a ⊕_p (z² − z)
    let p = pr(2);
    let free = RingCtx::polynomial_ring(BaseRing::integers(p), &["u", "z"]).unwrap();
    let u = free.var("u").unwrap();
    let z = free.var("z").unwrap();
    let e4 = free.eta_pow(2);
    let d1 = &free.one() + &(&u * &e4);
    let d2 = &free.one() + &(&z * &free.eta());
    let base = RingBuilder::from_ctx(&free).inverse(&d1, None).unwrap().inverse(&d2, None).unwrap().build();
    // two declared inverses share one localization
    let base = base.unwrap();
    let ext = build_extension(&base, &base.var("u").unwrap()).unwrap();
    let zb = base.var("z").unwrap();
    let sh = shift_theta(&ext, &zb).unwrap();
    let ops = EtaOps::new(&base);
    assert_eq!(sh.new_a, ops.oplus_p(&ext.a, &(&zb.pow(2) - &zb)));
    assert!(sh.commutes_with_sigma && sh.round_trip);
}

#[test]
fn normal_basis_recovers_generator() {
    for (q, m) in [(3u32, 3i64), (3, 7), (2, 2)] {
        let p = pr(q);
        let base = RingCtx::coefficients(BaseRing::modulo(p, m).unwrap());
        let a = base
            .elements()
            .unwrap()
            .into_iter()
            .find(|a| !a.is_zero() && is_separable_param(a).unwrap().separable)
            .unwrap();
        let ext = build_extension(&base, &a).unwrap();
        let mut found = false;
        for z in ext.ext.elements().unwrap() {
            let Ok(res) = normal_basis_to_theta(&base, &ext.sigma, &z) else { continue };
            if res.normal_basis != Some(true) {
                continue;
            }
            assert!(res.passed(), "{res:?}");
            found = true;
            break;
        }
        assert!(found, "no normal basis element for p={q}, m={m}");
    }
}

#[test]
fn coefficient_sequence() {
    for q in [2u32, 3, 5, 7] {
        let p = pr(q);
        let r = normal_basis_coefficients(p);
        assert!(r[0].is_one());
        assert!(r[1].is_zero());
        for i in 0..q as usize {
            assert_eq!(r[i], &(&CycInt::rho(p) * &r[(i + 1) % q as usize]) + &CycInt::one(p));
        }
    }
}

#[test]
fn lifting_mod_p_squared() {
    for q in [2u32, 3] {
        let p = pr(q);
        let hi = RingCtx::coefficients(BaseRing::modulo(p, (q * q) as i64).unwrap());
        let lo = RingCtx::coefficients(BaseRing::residue_field(p));
        let h = RingHom::canonical(&hi, &lo).unwrap();
        let target = build_extension(&lo, &lo.one()).unwrap();
        let (lifted, rep) = lift_extension(&h, &target).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(lifted.certificate.passed());
        // tower: p³ → p²
        let top = RingCtx::coefficients(BaseRing::modulo(p, (q * q * q) as i64).unwrap());
        let h2 = RingHom::canonical(&top, &hi).unwrap();
        let (_, rep2) = lift_extension(&h2, &lifted).unwrap();
        assert!(rep2.passed());
    }
}

#[test]
fn identity_lift_is_trivial() {
    let p = pr(3);
    let r = RingCtx::coefficients(BaseRing::modulo(p, 9).unwrap());
    let ext = build_extension(&r, &r.one()).unwrap();
    let (lifted, rep) = lift_extension(&RingHom::identity(&r), &ext).unwrap();
    assert!(rep.passed());
    assert_eq!(lifted.a, ext.a);
}
