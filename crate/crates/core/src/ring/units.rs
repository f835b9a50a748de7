//! Unit decisions.
//!
//! * finite contexts: linear algebra over `R/qR` (see `finite.rs`);
//! * `Z[ρ][free vars](1/D)`: `a = num/D^k` is a unit iff `num | D^J`, `J = deg num`
//!   (D has content 1, so every prime factor of a unit numerator is a
//!   non-constant factor of D and occurs at most `deg num` times);
//! * with ruled variables over such a ring: the ring is free over the unruled
//!   part, so take the norm (characteristic polynomial of multiplication) and
//!   invert through Cayley–Hamilton.

use std::sync::Arc;

use num_bigint::BigInt;

use super::poly::{self, Monomial, Poly};
use super::{RingCtx, RingElem};
use crate::cyclotomic::CycInt;
use crate::error::{ensure, Error, Result};

impl RingElem {
    pub fn try_invert(&self) -> Result<Option<RingElem>> {
        let ctx = Arc::clone(&self.ctx);
        if self.is_zero() {
            return Ok(if ctx.one().is_zero() { Some(ctx.zero()) } else { None });
        }
        if ctx.is_finite() {
            return ctx.finite_inverse(self);
        }
        ensure!(
            ctx.has_exact_base(),
            Unsupported,
            "unit status undecidable in {}: finite coefficients with free variables",
            ctx.describe()
        );
        if (0..ctx.nvars()).all(|v| !ctx.is_ruled(v)) {
            return Ok(ctx.invert_unruled(self));
        }
        ctx.invert_via_norm(self)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.try_invert()?.is_some())
    }

    /// Inverse or a unit-required error naming `what`.
    pub fn inverse(&self, what: &str) -> Result<RingElem> {
        self.try_invert()?.ok_or_else(|| Error::UnitRequired(format!("{what} = {self} is not a unit")))
    }
}

impl RingCtx {
    fn invert_unruled(self: &Arc<Self>, a: &RingElem) -> Option<RingElem> {
        let p = self.prime();
        let n = self.nvars();
        // a = num / D^k ⇒ a^{-1} = D^k · (D^J / num) / D^J
        let j = poly::total_degree(&a.num);
        let dj = match &self.denom {
            Some(d) => poly::pow(d, n, p, j as u64),
            None => poly::constant(n, CycInt::one(p)),
        };
        let q = poly::exact_div(&dj, &a.num)?;
        let j = if self.denom.is_some() { j } else { 0 };
        let inv = self.normalize(q, j);
        let dk = match &self.denom {
            Some(d) if a.den > 0 => self.normalize(poly::pow(d, n, p, a.den as u64), 0),
            _ => self.one(),
        };
        Some(&inv * &dk)
    }

    /// Basis monomials in the ruled variables.
    fn ruled_basis(&self) -> Vec<Monomial> {
        let mut mons: Vec<Monomial> = vec![vec![0; self.nvars()]];
        for v in 0..self.nvars() {
            if let Some(r) = &self.rules[v] {
                mons = mons
                    .into_iter()
                    .flat_map(|m| {
                        (0..r.exp).map(move |k| {
                            let mut m = m.clone();
                            m[v] = k;
                            m
                        })
                    })
                    .collect();
            }
        }
        mons
    }

    /// Coordinates of `a` in the ruled basis, as elements free of ruled variables.
    fn ruled_coords(self: &Arc<Self>, a: &RingElem, basis: &[Monomial]) -> Vec<RingElem> {
        let ruled: Vec<bool> = (0..self.nvars()).map(|v| self.is_ruled(v)).collect();
        let mut parts = vec![Poly::new(); basis.len()];
        for (m, c) in &a.num {
            let key: Monomial = m.iter().zip(&ruled).map(|(&e, &r)| if r { e } else { 0 }).collect();
            let rest: Monomial = m.iter().zip(&ruled).map(|(&e, &r)| if r { 0 } else { e }).collect();
            let i = basis.iter().position(|b| *b == key).expect("normal form uses basis monomials");
            parts[i].insert(rest, c.clone());
        }
        parts.into_iter().map(|p| self.normalize(p, a.den)).collect()
    }

    fn invert_via_norm(self: &Arc<Self>, a: &RingElem) -> Result<Option<RingElem>> {
        let basis = self.ruled_basis();
        let n = basis.len();
        let mut mat: Vec<Vec<RingElem>> = vec![Vec::with_capacity(n); n];
        for b in &basis {
            let mut num = Poly::new();
            num.insert(b.clone(), CycInt::one(self.prime()));
            let be = self.normalize(num, 0);
            let col = self.ruled_coords(&(a * &be), &basis);
            for (i, c) in col.into_iter().enumerate() {
                mat[i].push(c);
            }
        }
        let cp = self.faddeev_leverrier(&mat)?;
        // cp = [c_0, .., c_{n-1}, 1], Σ c_i a^i = 0
        let c0 = &cp[0];
        let Some(c0_inv) = self.invert_unruled(c0) else { return Ok(None) };
        // a^{-1} = -(a^{n-1} + c_{n-1} a^{n-2} + … + c_1) / c_0
        let mut acc = self.zero();
        for c in cp[1..].iter().rev() {
            acc = &(&acc * a) + c;
        }
        let inv = -(&acc * &c0_inv);
        ensure!((&inv * a).is_one(), Consistency, "Cayley–Hamilton inverse failed");
        Ok(Some(inv))
    }

    /// Characteristic polynomial coefficients `[c_0, …, c_{n-1}, 1]` of `mat`.
    pub(crate) fn faddeev_leverrier(self: &Arc<Self>, mat: &[Vec<RingElem>]) -> Result<Vec<RingElem>> {
        let n = mat.len();
        let mut coeffs = vec![self.zero(); n + 1];
        coeffs[n] = self.one();
        let mut m_k: Vec<Vec<RingElem>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { self.one() } else { self.zero() }).collect()).collect();
        let mut c_prev = self.one();
        for k in 1..=n {
            if k > 1 {
                for (i, row) in m_k.iter_mut().enumerate() {
                    row[i] = &row[i] + &c_prev;
                }
            }
            // M_k ← A·M_k
            let am: Vec<Vec<RingElem>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut s = self.zero();
                            for l in 0..n {
                                s = &s + &(&mat[i][l] * &m_k[l][j]);
                            }
                            s
                        })
                        .collect()
                })
                .collect();
            let mut tr = self.zero();
            for (i, row) in am.iter().enumerate() {
                tr = &tr + &row[i];
            }
            let c = self.div_integer(&tr, -(k as i64))?;
            coeffs[n - k] = c.clone();
            c_prev = c;
            m_k = am;
        }
        Ok(coeffs)
    }

    /// `a / k` for an integer `k` known to divide `a`.
    fn div_integer(self: &Arc<Self>, a: &RingElem, k: i64) -> Result<RingElem> {
        let k = BigInt::from(k);
        let mut out = Poly::new();
        for (m, c) in &a.num {
            let q = c.div_integer(&k).ok_or_else(|| Error::Consistency(format!("{c} not divisible by {k}")))?;
            out.insert(m.clone(), q);
        }
        Ok(self.normalize(out, a.den))
    }
}

#[cfg(test)]
mod tests {
    use crate::cyclotomic::Prime;
    use crate::ring::{BaseRing, RingBuilder, RingCtx};

    #[test]
    fn declared_inverse_and_products() {
        let p = Prime::new(3).unwrap();
        let free = RingCtx::polynomial_ring(BaseRing::integers(p), &["u"]).unwrap();
        let u = free.var("u").unwrap();
        let f = &free.one() + &(&u * &free.eta_pow(3));
        let r = RingBuilder::from_ctx(&free).inverse(&f, Some("w")).unwrap().build().unwrap();
        let f = r.embed(&f).unwrap();
        let w = r.alias("w").unwrap();
        assert!((&f * &w).is_one());
        assert_eq!(f.try_invert().unwrap().unwrap(), w);
        let f2 = &f * &f;
        assert!(f2.is_unit().unwrap());
        assert!(!r.var("u").unwrap().is_unit().unwrap());
        assert!(!r.int(2).is_unit().unwrap());
        assert!(r.rho().is_unit().unwrap());
        assert!(!r.eta().is_unit().unwrap());
    }

    #[test]
    fn ruled_variable_inverse() {
        let p = Prime::new(2).unwrap();
        let free = RingCtx::polynomial_ring(BaseRing::integers(p), &["t"]).unwrap();
        // t^2 = 0 over Z: 1 + 5t has inverse 1 - 5t
        let ctx = RingBuilder::from_ctx(&free).rule("t", 2, &free.zero()).unwrap().build().unwrap();
        let t = ctx.var("t").unwrap();
        let a = &ctx.one() + &t.scale_int(5);
        assert_eq!(a.try_invert().unwrap().unwrap(), &ctx.one() - &t.scale_int(5));
        assert!(!t.is_unit().unwrap());
        let b = &ctx.int(2) + &t;
        assert!(!b.is_unit().unwrap());
    }

    #[test]
    fn finite_base_free_var_is_undecidable() {
        let p = Prime::new(3).unwrap();
        let ctx = RingCtx::polynomial_ring(BaseRing::residue_field(p), &["u"]).unwrap();
        assert!(ctx.var("u").unwrap().is_unit().is_err());
    }
}
