//! Sparse multivariate polynomials over `Z[ρ]` (lex order on exponent vectors).

use std::collections::BTreeMap;

use crate::cyclotomic::{CycInt, Prime};

pub type Monomial = Vec<u32>;
pub type Poly = BTreeMap<Monomial, CycInt>;

pub(crate) fn add_term(poly: &mut Poly, m: Monomial, c: CycInt) {
    if c.is_zero() {
        return;
    }
    match poly.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub(crate) fn add_scaled(acc: &mut Poly, a: &Poly, c: &CycInt, shift: Option<&[u32]>) {
    for (m, v) in a {
        let mm = match shift {
            Some(s) => mono_mul(m, s),
            None => m.clone(),
        };
        add_term(acc, mm, v * c);
    }
}

pub(crate) fn add(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    for (m, c) in b {
        add_term(&mut r, m.clone(), c.clone());
    }
    r
}

pub(crate) fn neg(a: &Poly) -> Poly {
    a.iter().map(|(m, c)| (m.clone(), -c)).collect()
}

pub(crate) fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn mul(a: &Poly, b: &Poly) -> Poly {
    let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut r = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            add_term(&mut r, mono_mul(ma, mb), ca * cb);
        }
    }
    r
}

pub(crate) fn scale(a: &Poly, c: &CycInt) -> Poly {
    if c.is_zero() {
        return Poly::new();
    }
    a.iter()
        .filter_map(|(m, v)| {
            let w = v * c;
            (!w.is_zero()).then(|| (m.clone(), w))
        })
        .collect()
}

pub(crate) fn constant(nvars: usize, c: CycInt) -> Poly {
    let mut r = Poly::new();
    add_term(&mut r, vec![0; nvars], c);
    r
}

pub(crate) fn total_degree(a: &Poly) -> u32 {
    a.keys().map(|m| m.iter().sum::<u32>()).max().unwrap_or(0)
}

pub(crate) fn pow(a: &Poly, nvars: usize, p: Prime, mut e: u64) -> Poly {
    let mut base = a.clone();
    let mut acc = constant(nvars, CycInt::one(p));
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}

/// Exact division `a / b` in `Z[ρ][vars]`, `None` if `b` does not divide `a`.
pub(crate) fn exact_div(a: &Poly, b: &Poly) -> Option<Poly> {
    let (lb_m, lb_c) = b.last_key_value()?;
    let mut r = a.clone();
    let mut q = Poly::new();
    while let Some((lm, lc)) = r.last_key_value() {
        if lm.iter().zip(lb_m).any(|(x, y)| x < y) {
            return None;
        }
        let c = lc.exact_div(lb_c)?;
        let qm: Monomial = lm.iter().zip(lb_m).map(|(x, y)| x - y).collect();
        for (m, v) in b {
            add_term(&mut r, mono_mul(m, &qm), -(v * &c));
        }
        add_term(&mut q, qm, c);
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: Prime, n: i64) -> CycInt {
        CycInt::from_int(p, n)
    }

    #[test]
    fn division_roundtrip() {
        let p = Prime::new(3).unwrap();
        let mut a = Poly::new();
        add_term(&mut a, vec![1, 0], c(p, 1));
        add_term(&mut a, vec![0, 0], CycInt::eta(p));
        let mut b = Poly::new();
        add_term(&mut b, vec![0, 2], CycInt::rho(p));
        add_term(&mut b, vec![1, 1], c(p, -3));
        let prod = mul(&a, &b);
        assert_eq!(exact_div(&prod, &b).unwrap(), a);
        assert_eq!(exact_div(&prod, &a).unwrap(), b);
        let shifted = add(&prod, &constant(2, c(p, 1)));
        assert!(exact_div(&shifted, &a).is_none());
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let p = Prime::new(5).unwrap();
        let mut a = Poly::new();
        add_term(&mut a, vec![1], CycInt::eta(p));
        add_term(&mut a, vec![0], c(p, 1));
        let mut r = constant(1, c(p, 1));
        for _ in 0..5 {
            r = mul(&r, &a);
        }
        assert_eq!(pow(&a, 1, p, 5), r);
        assert_eq!(total_degree(&r), 5);
    }
}
