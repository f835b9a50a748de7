//! Property tests for `xy − ρyx = 1`: the multiplication against the word
//! rewriter, associativity, and centrality of `x^p`, `y^p`.

use std::sync::Arc;

use etalift::qweyl::{rewrite_word, QWeyl, QWeylElem, Strategy as Order};
use etalift::Prime;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn alg(p: u32) -> Arc<QWeyl> {
    QWeyl::free(Prime::new(p).unwrap())
}

fn word() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('x'), Just('y')], 0..=10).prop_map(|v| v.into_iter().collect())
}

fn confluent(p: u32, w: &str, seed: u64) -> Result<(), TestCaseError> {
    let a = alg(p);
    let product = QWeylElem::from_word(&a, w).unwrap();
    for s in [Order::Leftmost, Order::Rightmost, Order::Random(seed)] {
        let nf = rewrite_word(&a, w, s).unwrap();
        prop_assert_eq!(&nf, &product, "p={} word={} strategy={:?}", p, w, s);
    }
    Ok(())
}

fn associative(p: u32, seed: u64) -> Result<(), TestCaseError> {
    let a = alg(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [u, v, w] = [0; 3].map(|_| QWeylElem::random(&a, &mut rng, 4, 3));
    let left = u.mul(&v).unwrap().mul(&w).unwrap();
    let right = u.mul(&v.mul(&w).unwrap()).unwrap();
    prop_assert_eq!(left, right);
    // distributivity on the same sample
    let d1 = u.mul(&v.add(&w).unwrap()).unwrap();
    let d2 = u.mul(&v).unwrap().add(&u.mul(&w).unwrap()).unwrap();
    prop_assert_eq!(d1, d2);
    Ok(())
}

fn central(p: u32, seed: u64) -> Result<(), TestCaseError> {
    let a = alg(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = QWeylElem::random(&a, &mut rng, 2 * p, 4);
    for g in [QWeylElem::x(&a).pow(p).unwrap(), QWeylElem::y(&a).pow(p).unwrap()] {
        prop_assert!(g.commutator(&z).unwrap().is_zero());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rewriting_is_confluent_p2(w in word(), seed: u64) { confluent(2, &w, seed)?; }

    #[test]
    fn rewriting_is_confluent_p3(w in word(), seed: u64) { confluent(3, &w, seed)?; }

    #[test]
    fn rewriting_is_confluent_p5(w in word(), seed: u64) { confluent(5, &w, seed)?; }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplication_is_associative(p in prop_oneof![Just(2u32), Just(3), Just(5)], seed: u64) {
        associative(p, seed)?;
    }

    #[test]
    fn x_p_and_y_p_are_central(p in prop_oneof![Just(2u32), Just(3), Just(5)], seed: u64) {
        central(p, seed)?;
    }
}

#[test]
fn relation_holds_on_words() {
    for p in [2, 3, 5, 7] {
        let a = alg(p);
        let lhs = QWeylElem::from_word(&a, "xy").unwrap();
        let rhs = QWeylElem::from_word(&a, "yx").unwrap().scale(a.q()).add(&QWeylElem::one(&a)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn bounded_model_has_rank_p_squared() {
    // over the center the monomials y^i x^j with i, j < p are a basis
    let p = Prime::new(3).unwrap();
    let a = QWeyl::over_center(p).unwrap();
    assert_eq!(a.side(), 3);
    let xy = QWeylElem::x(&a).pow(3).unwrap().mul(&QWeylElem::y(&a).pow(4).unwrap()).unwrap();
    assert!(xy.terms().keys().all(|&(i, j)| i < 3 && j < 3));
    assert_eq!(xy.coords().unwrap().len(), 9);
}
