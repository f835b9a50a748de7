use super::*;
use crate::cyclotomic::Prime;

fn pr(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

#[test]
fn defining_relation_and_display() {
    let alg = QWeyl::free(pr(3));
    let xy = QWeylElem::from_word(&alg, "xy").unwrap();
    assert_eq!(xy.to_string(), "ρ·yx + 1");
    let x2y = QWeylElem::from_word(&alg, "xxy").unwrap();
    let ctx = alg.ctx();
    let want = QWeylElem::term(&alg, 1, 2, &ctx.rho().pow(2))
        .unwrap()
        .add(&QWeylElem::term(&alg, 0, 1, &(&ctx.one() + &ctx.rho())).unwrap())
        .unwrap();
    assert_eq!(x2y, want);
}

#[test]
fn rewriter_agrees_with_multiplication() {
    for p in [2, 3, 5] {
        let alg = QWeyl::free(pr(p));
        for w in ["", "x", "yx", "xyxy", "xxyyx", "xyxyxyxy", "yyxxxyxy"] {
            let m = QWeylElem::from_word(&alg, w).unwrap();
            for s in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(7)] {
                assert_eq!(rewrite_word(&alg, w, s).unwrap(), m, "p={p} word={w} {s:?}");
            }
        }
    }
}

#[test]
fn center_for_small_primes() {
    for p in [2, 3, 5] {
        let r = verify_center(pr(p), 5, 1).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn x2y_at_p2_has_vanishing_linear_term() {
    let alg = QWeyl::free(pr(2));
    let x2y = QWeylElem::from_word(&alg, "xxy").unwrap();
    assert_eq!(x2y, QWeylElem::from_word(&alg, "yxx").unwrap());
}

#[test]
fn symbolic_det_p2() {
    let (_, _, r) = symbolic_det(pr(2)).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn evaluated_sweeps_match_locus() {
    for p in [2, 3] {
        let c = azumaya_det(pr(p), false, 7, None).unwrap();
        assert_eq!(c.points.len(), 49);
        assert!(c.passed(), "{}", serde_json::to_string(&c.nilpotence).unwrap());
        assert!(c.points.iter().any(|r| !r.psi_invertible));
    }
}

#[test]
fn cyclic_specialization() {
    for p in [2, 3] {
        let ctx = RingCtx::coefficients(BaseRing::modulo(pr(p), (p * p) as i64).unwrap());
        let r = specialize_cyclic(&ctx, &ctx.int(1), &ctx.int(1)).unwrap();
        assert!(r.passed(), "{r:?}");
        let fp = RingCtx::coefficients(BaseRing::residue_field(pr(p)));
        let r = specialize_cyclic(&fp, &fp.int(1), &fp.int(1)).unwrap();
        assert!(r.passed() && r.char_p && r.crossed_product.is_some(), "{r:?}");
    }
}

#[test]
fn crossed_products_are_azumaya() {
    for p in [2, 3] {
        let r = dcp_sweep(pr(p), 10, 3).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn brauer_lifts() {
    for p in [2, 3] {
        for r in default_brauer_demos(pr(p)).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }
}
