//! Checks against computations that share no code with the library:
//! complex embeddings of Z[ρ], binomial coefficients, and brute force over small rings.

use etalift::galois::build_gen_as_poly;
use etalift::ring::expr::parse_elem;
use etalift::{compute_eta_data, BaseRing, CycInt, Prime, RingCtx};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

type C = (f64, f64);

fn embed(a: &CycInt, k: u32) -> C {
    let p = a.prime().get() as f64;
    a.coeffs().iter().enumerate().fold((0.0, 0.0), |(re, im), (i, c)| {
        let c = c.to_f64().unwrap();
        let t = 2.0 * std::f64::consts::PI * (k as f64) * (i as f64) / p;
        (re + c * t.cos(), im + c * t.sin())
    })
}

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn close(a: C, b: C) -> bool {
    let scale = 1.0 + a.0.abs().max(a.1.abs());
    (a.0 - b.0).abs() < 1e-6 * scale && (a.1 - b.1).abs() < 1e-6 * scale
}

fn cyc(p: Prime, v: &[i64]) -> CycInt {
    CycInt::from_coeffs(p, v.iter().map(|&c| BigInt::from(c)).collect()).unwrap()
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Multiplication agrees with every complex embedding ρ ↦ e^{2πik/p}.
    #[test]
    fn products_match_complex_embeddings(
        p in prop_oneof![Just(3u32), Just(5), Just(7), Just(11)],
        a in proptest::collection::vec(-50i64..50, 10),
        b in proptest::collection::vec(-50i64..50, 10),
    ) {
        let pr = Prime::new(p).unwrap();
        let n = pr.rank();
        let (x, y) = (cyc(pr, &a[..n]), cyc(pr, &b[..n]));
        let xy = &x * &y;
        for k in 1..p {
            prop_assert!(close(embed(&xy, k), cmul(embed(&x, k), embed(&y, k))));
        }
    }
}

#[test]
fn norm_of_eta_is_plus_or_minus_p() {
    // Π_{k=1}^{p−1} (ρ^k − 1) = (−1)^{p−1}·Φ_p(1)
    for p in [2u32, 3, 5, 7, 11, 13] {
        let pr = Prime::new(p).unwrap();
        let eta = CycInt::eta(pr);
        let norm = (1..p as u64).fold(CycInt::one(pr), |acc, k| &acc * &eta.galois(k));
        let sign = if p % 2 == 1 { 1 } else { -1 };
        assert_eq!(norm, CycInt::from_int(pr, sign * p as i64), "p = {p}");
    }
}

#[test]
fn eta_data_against_numeric_values() {
    for p in [2u32, 3, 5, 7, 11] {
        let pr = Prime::new(p).unwrap();
        let d = compute_eta_data(pr).unwrap();
        let eta = CycInt::eta(pr);
        let p_int = CycInt::from_int(pr, p);
        assert_eq!(eta.pow(p as u64 - 1), &(-&p_int) * &d.y);
        assert_eq!(&d.x_unit * &eta.pow(p as u64 - 1), p_int);
        assert_eq!(&d.x_unit * &d.y, CycInt::from_int(pr, -1));
        // x is a unit: |N(x)| = 1 numerically
        let n = (1..p).fold((1.0, 0.0), |acc, k| cmul(acc, embed(&d.x_unit, k)));
        assert!(close(n, (1.0, 0.0)) || close(n, (-1.0, 0.0)), "p = {p}: N(x) = {n:?}");
    }
    // p = 3 by hand: η² = ρ² − 2ρ + 1 = −3ρ, so y = ρ and x = −ρ² = 1 + ρ
    let d3 = compute_eta_data(Prime::new(3).unwrap()).unwrap();
    assert_eq!(d3.y, CycInt::rho(Prime::new(3).unwrap()));
    assert_eq!(d3.x_unit, cyc(Prime::new(3).unwrap(), &[1, 1]));
}

#[test]
fn g_coefficients_are_binomials_over_eta_powers() {
    // g(Z) = Σ_{0<i<p} C(p, i)·η^{i−p}·Z^i, so η^{p−i}·g_i = C(p, i)
    for p in [2u32, 3, 5, 7] {
        let pr = Prime::new(p).unwrap();
        let g = build_gen_as_poly(pr).unwrap();
        assert_eq!(g.g_coeffs.len(), p as usize - 1);
        let eta = CycInt::eta(pr);
        for (i, gi) in (1..p).zip(&g.g_coeffs) {
            assert_eq!(&eta.pow((p - i) as u64) * gi, CycInt::from_int(pr, binom(p, i)), "p = {p}, i = {i}");
        }
    }
    let g2 = build_gen_as_poly(Prime::new(2).unwrap()).unwrap();
    assert_eq!(g2.g_coeffs, vec![CycInt::from_int(Prime::new(2).unwrap(), -1)]);
}

#[test]
fn units_of_small_quotients_by_brute_force() {
    // Z[ρ]/(9), p = 3: 81 elements, a unit iff it is nonzero mod η
    let pr = Prime::new(3).unwrap();
    let ctx = RingCtx::coefficients(BaseRing::modulo(pr, 9).unwrap());
    let elems = ctx.elements().unwrap();
    assert_eq!(elems.len(), 81);
    let mut units = 0;
    for a in &elems {
        let brute = elems.iter().any(|b| (a * b).is_one());
        assert_eq!(a.is_unit().unwrap(), brute, "{a}");
        if brute {
            units += 1;
            assert!((a * &a.inverse("test").unwrap()).is_one());
        }
    }
    // |(Z[ρ]/(9))^×| = 81 − 27
    assert_eq!(units, 54);
}

#[test]
fn residue_field_of_seven_is_f7() {
    // ρ ↦ 2 in F_7 since 2³ = 8 ≡ 1
    let pr = Prime::new(3).unwrap();
    let ctx = RingCtx::coefficients(BaseRing::quotient(pr, Some(7), None, Some(2)).unwrap());
    assert_eq!(ctx.elements().unwrap().len(), 7);
    let r = parse_elem(&ctx, "rho").unwrap();
    assert_eq!(r, ctx.int(2));
    assert_eq!(parse_elem(&ctx, "eta^2 + rho^5").unwrap(), ctx.int(1 + 4));
}
