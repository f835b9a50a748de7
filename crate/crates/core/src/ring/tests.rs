use super::*;
use crate::cyclotomic::Prime;

#[test]
fn adjoined_inverse_cancels() {
    let p = Prime::new(5).unwrap();
    let free = RingCtx::polynomial_ring(BaseRing::integers(p), &["u"]).unwrap();
    let u = free.var("u").unwrap();
    let f = &free.one() + &(&u * &free.eta_pow(5));
    let r = RingBuilder::from_ctx(&free).inverse(&f, Some("w")).unwrap().build().unwrap();
    let w = r.alias("w").unwrap();
    let f = r.embed(&f).unwrap();
    assert!((&f * &w).is_one());
    assert!((&r.var("u").unwrap() * &r.zero()).is_zero());
    // (w + w) * f = 2
    assert_eq!(&(&w + &w) * &f, r.int(2));
    assert_eq!(w.den_power(), 1);
    assert_eq!((&w * &f.pow(3)).den_power(), 0);
}

#[test]
fn tower_rules_reduce() {
    let p = Prime::new(3).unwrap();
    let free = RingCtx::polynomial_ring(BaseRing::integers(p), &["a", "t"]).unwrap();
    let a = free.var("a").unwrap();
    let t = free.var("t").unwrap();
    // t^3 = a - t
    let rhs = &a - &t;
    let ctx = RingBuilder::from_ctx(&free).rule("t", 3, &rhs).unwrap().build().unwrap();
    let t = ctx.var("t").unwrap();
    let a = ctx.var("a").unwrap();
    assert_eq!(t.pow(3), &a - &t);
    assert_eq!(t.pow(4), &(&a * &t) - &t.pow(2));
    assert!(t.pow(10).degree_in(1) < 3);
    // rules mentioning higher variables are rejected
    let bad = RingBuilder::from_ctx(&free).rule("a", 2, &free.var("t").unwrap());
    assert!(bad.is_err());
}

#[test]
fn eta_division() {
    let p = Prime::new(3).unwrap();
    let ctx = RingCtx::polynomial_ring(BaseRing::integers(p), &["z"]).unwrap();
    let z = ctx.var("z").unwrap();
    let e = ctx.eta();
    assert_eq!((&e * &z).exact_divide_by_eta_power(1).unwrap(), z);
    assert!(z.exact_divide_by_eta_power(1).is_err());
    let pz = z.scale_int(3);
    let x = crate::cyclotomic::compute_eta_data(p).unwrap().x_unit;
    assert_eq!(pz.exact_divide_by_eta_power(2).unwrap(), z.scale(&x));
    let fin = RingCtx::coefficients(BaseRing::modulo(p, 9).unwrap());
    assert!(fin.eta().exact_divide_by_eta_power(1).is_err());
}

#[test]
fn context_mismatch_is_structural() {
    let p = Prime::new(3).unwrap();
    let a = RingCtx::polynomial_ring(BaseRing::integers(p), &["u"]).unwrap();
    let b = RingCtx::polynomial_ring(BaseRing::integers(p), &["u"]).unwrap();
    let r = a.one().checked_add(&b.one());
    assert!(matches!(r, Err(Error::Structural(_))));
    assert!(a.same_presentation(&b));
}

#[test]
fn split_and_restrict() {
    let p = Prime::new(2).unwrap();
    let base = RingCtx::polynomial_ring(BaseRing::integers(p), &["u"]).unwrap();
    let ext = RingBuilder::from_ctx(&base).var("t").build().unwrap();
    let u = ext.var("u").unwrap();
    let t = ext.var("t").unwrap();
    let a = &(&u * &t) + &u.pow(2);
    let parts = a.split_by_var(1);
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[1].restrict_to(&base).unwrap(), base.var("u").unwrap());
    assert!(a.restrict_to(&base).is_err());
}
