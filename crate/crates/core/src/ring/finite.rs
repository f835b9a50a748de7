//! Finite contexts: coordinates, enumeration, and linear algebra over `R/qR`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::poly::{self, Monomial, Poly};
use super::{RingCtx, RingElem};
use crate::cyclotomic::CycInt;
use crate::error::{ensure, Error, Result};
use crate::lattice::{FqMatrix, ModHnf};

const MAX_ENUMERATION: u64 = 2_000_000;

/// `R/qR` for one prime `q` dividing the characteristic.
#[derive(Clone, Debug)]
pub(crate) struct PrimeSlice {
    pub q: u64,
    hnf: ModHnf,
    /// Coordinates of `Z[ρ]/(I + q)` that survive (diagonal entry `q`).
    free: Vec<usize>,
}

/// The additive structure of a finite context: it is free over the finite
/// coefficient ring with the monomial basis below the rule exponents.
#[derive(Clone, Debug)]
pub struct FiniteData {
    mons: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    rank: usize,
    ranges: Vec<i128>,
    modulus: i128,
    base_rows: Vec<Vec<i128>>,
    pub(crate) slices: Vec<PrimeSlice>,
    size: BigInt,
}

impl FiniteData {
    pub(crate) fn new(ctx: &RingCtx) -> Result<Self> {
        let ideal = ctx.base.ideal().expect("finite base");
        let exps: Vec<u32> = ctx.rules.iter().map(|r| r.as_ref().expect("all ruled").exp).collect();
        let mut mons: Vec<Monomial> = vec![vec![]];
        for &e in &exps {
            mons = mons
                .into_iter()
                .flat_map(|m| {
                    (0..e).map(move |k| {
                        let mut m = m.clone();
                        m.push(k);
                        m
                    })
                })
                .collect();
        }
        mons.sort();
        ensure!(mons.len() <= 4096, Unsupported, "finite ring with {} basis monomials is too large", mons.len());
        let index = mons.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let rank = ctx.prime().rank();
        let ranges: Vec<i128> = (0..rank).map(|j| ideal.diag(j).to_i128().expect("bounded by index")).collect();
        let slices = ideal
            .primes
            .iter()
            .map(|&q| {
                let mut gens = ideal.rows_i128.clone();
                for j in 0..rank {
                    let mut e = vec![0i128; rank];
                    e[j] = q as i128;
                    gens.push(e);
                }
                let hnf = ModHnf::new(gens, rank, q as i128);
                let free = (0..rank).filter(|&j| hnf.diag(j) != 1).collect();
                PrimeSlice { q, hnf, free }
            })
            .collect();
        let size = num_traits::pow(ideal.index.clone(), mons.len());
        Ok(FiniteData {
            mons,
            index,
            rank,
            ranges,
            modulus: ideal.exponent,
            base_rows: ideal.rows_i128.clone(),
            slices,
            size,
        })
    }

    pub fn size(&self) -> &BigInt {
        &self.size
    }

    pub fn characteristic(&self) -> i128 {
        self.modulus
    }

    /// Length of an integer coordinate vector.
    pub fn dim(&self) -> usize {
        self.mons.len() * self.rank
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.mons
    }

    pub fn primes(&self) -> Vec<u64> {
        self.slices.iter().map(|s| s.q).collect()
    }

    /// Relations of the additive group `R ≅ Z^dim / L` (rows of `L` besides `modulus·Z^dim`).
    pub(crate) fn relation_rows(&self, copies: usize) -> Vec<Vec<i128>> {
        let n = self.dim() * copies;
        let mut out = Vec::new();
        for b in 0..self.mons.len() * copies {
            for r in &self.base_rows {
                let mut v = vec![0i128; n];
                v[b * self.rank..(b + 1) * self.rank].copy_from_slice(r);
                out.push(v);
            }
        }
        out
    }
}

impl RingCtx {
    fn fin(&self) -> Result<&FiniteData> {
        self.finite.as_ref().ok_or_else(|| Error::Unsupported(format!("{} is not a finite ring", self.describe())))
    }

    /// Number of elements, for finite contexts.
    pub fn size(&self) -> Option<BigInt> {
        self.finite.as_ref().map(|f| f.size.clone())
    }

    /// Canonical integer coordinates (basis `ρ^j · monomial`).
    pub fn coords(&self, a: &RingElem) -> Result<Vec<i128>> {
        let f = self.fin()?;
        ensure!(a.ctx.same(self), Structural, "element of another ring");
        let mut v = vec![0i128; f.dim()];
        for (m, c) in &a.num {
            let i = f.index[m];
            for (j, x) in c.coeffs().iter().enumerate() {
                v[i * f.rank + j] = x.to_i128().expect("reduced coefficient");
            }
        }
        Ok(v)
    }

    pub fn from_coords(self: &Arc<Self>, v: &[i128]) -> Result<RingElem> {
        let f = self.fin()?;
        ensure!(v.len() == f.dim(), Argument, "coordinate vector has wrong length");
        let p = self.prime();
        let mut num = Poly::new();
        for (i, m) in f.mons.iter().enumerate() {
            let cs: Vec<BigInt> = v[i * f.rank..(i + 1) * f.rank].iter().map(|&x| BigInt::from(x)).collect();
            let c = CycInt::from_coeffs(p, cs)?;
            poly::add_term(&mut num, m.clone(), c);
        }
        Ok(self.normalize(num, 0))
    }

    /// A `Z`-module generating set of `R`: `ρ^j · m` for every basis monomial.
    pub fn additive_generators(self: &Arc<Self>) -> Result<Vec<RingElem>> {
        let f = self.fin()?;
        let p = self.prime();
        let mut out = Vec::with_capacity(f.dim());
        for m in &f.mons {
            for j in 0..f.rank {
                let mut num = Poly::new();
                num.insert(m.clone(), CycInt::rho_pow(p, j as i64));
                out.push(self.normalize(num, 0));
            }
        }
        Ok(out)
    }

    pub fn random_element<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> Result<RingElem> {
        let f = self.fin()?;
        let v: Vec<i128> = (0..f.dim()).map(|k| rng.gen_range(0..f.ranges[k % f.rank])).collect();
        self.from_coords(&v)
    }

    /// All elements, in coordinate order.
    pub fn elements(self: &Arc<Self>) -> Result<Vec<RingElem>> {
        let f = self.fin()?;
        let size = f.size.to_u64().filter(|&s| s <= MAX_ENUMERATION);
        let size = size.ok_or_else(|| Error::Unsupported(format!("refusing to enumerate {} elements", f.size)))?;
        let mut out = Vec::with_capacity(size as usize);
        let mut v = vec![0i128; f.dim()];
        loop {
            out.push(self.from_coords(&v)?);
            let mut k = 0;
            loop {
                if k == v.len() {
                    return Ok(out);
                }
                v[k] += 1;
                if v[k] < f.ranges[k % f.rank] {
                    break;
                }
                v[k] = 0;
                k += 1;
            }
        }
    }

    fn slice_coords(&self, f: &FiniteData, s: &PrimeSlice, a: &RingElem) -> Vec<u64> {
        let mut out = Vec::with_capacity(f.mons.len() * s.free.len());
        let mut blocks = vec![vec![0i128; f.rank]; f.mons.len()];
        for (m, c) in &a.num {
            let i = f.index[m];
            for (j, x) in c.coeffs().iter().enumerate() {
                blocks[i][j] = x.to_i128().expect("reduced coefficient");
            }
        }
        for mut b in blocks {
            s.hnf.reduce(&mut b);
            out.extend(s.free.iter().map(|&j| b[j].rem_euclid(s.q as i128) as u64));
        }
        out
    }

    fn slice_basis(self: &Arc<Self>, f: &FiniteData, s: &PrimeSlice) -> Vec<RingElem> {
        let p = self.prime();
        let mut out = Vec::new();
        for m in &f.mons {
            for &j in &s.free {
                let mut num = Poly::new();
                num.insert(m.clone(), CycInt::rho_pow(p, j as i64));
                out.push(self.normalize(num, 0));
            }
        }
        out
    }

    /// Inverse in a finite ring: solve over each `R/qR`, glue by CRT, then Newton-lift.
    pub(crate) fn finite_inverse(self: &Arc<Self>, a: &RingElem) -> Result<Option<RingElem>> {
        let f = self.fin()?;
        let one = self.one();
        if one.is_zero() {
            return Ok(Some(one));
        }
        let mut glued = self.zero();
        let radical: i128 = f.slices.iter().map(|s| s.q as i128).product();
        for s in &f.slices {
            let basis = self.slice_basis(f, s);
            let n = basis.len();
            let mut m = FqMatrix::zeros(s.q, n, n);
            for (k, b) in basis.iter().enumerate() {
                let col = self.slice_coords(f, s, &(a * b));
                for (r, x) in col.into_iter().enumerate() {
                    m.set(r, k, x);
                }
            }
            let target = self.slice_coords(f, s, &one);
            let Some(x) = m.solve(&target) else { return Ok(None) };
            let mut w = self.zero();
            for (k, b) in basis.iter().enumerate() {
                if x[k] != 0 {
                    w = &w + &b.scale_int(x[k] as i64);
                }
            }
            // CRT idempotent for q among the radical primes
            let q = s.q as i128;
            let other = radical / q;
            let (_, u, _) = crate::lattice::ext_gcd(other, q);
            let e = (other * u).rem_euclid(radical);
            glued = &glued + &w.scale(&CycInt::from_int(self.prime(), e));
        }
        let mut w = glued;
        for _ in 0..256 {
            let err = &one - &(a * &w);
            if err.is_zero() {
                return Ok(Some(w));
            }
            w = &w * &(&one + &err);
        }
        Err(Error::Consistency("Newton lifting of an inverse did not converge".into()))
    }

    /// Whether the square matrix `m` over this finite ring is invertible.
    pub fn matrix_is_invertible(self: &Arc<Self>, m: &[Vec<RingElem>]) -> Result<bool> {
        let f = self.fin()?;
        let n = m.len();
        ensure!(m.iter().all(|r| r.len() == n), Argument, "matrix is not square");
        for s in &f.slices {
            let basis = self.slice_basis(f, s);
            let d = basis.len();
            let mut big = FqMatrix::zeros(s.q, n * d, n * d);
            for j in 0..n {
                for (k, b) in basis.iter().enumerate() {
                    for i in 0..n {
                        let col = self.slice_coords(f, s, &(&m[i][j] * b));
                        for (r, x) in col.into_iter().enumerate() {
                            big.set(i * d + r, j * d + k, x);
                        }
                    }
                }
            }
            if !big.is_invertible() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Order of the additive subgroup of `R^k` generated by the given vectors.
    pub fn zspan_size(&self, gens: &[Vec<RingElem>]) -> Result<BigInt> {
        let f = self.fin()?;
        let k = gens.first().map_or(1, Vec::len);
        let n = f.dim() * k;
        let mut rows = f.relation_rows(k);
        for g in gens {
            ensure!(g.len() == k, Argument, "generator vectors of unequal length");
            let mut v = Vec::with_capacity(n);
            for x in g {
                v.extend(self.coords(x)?);
            }
            rows.push(v);
        }
        let h = ModHnf::new(rows, n, f.modulus);
        let total = num_traits::pow(f.size.clone(), k);
        let idx = h.index();
        ensure!(!idx.is_zero(), Consistency, "degenerate lattice index");
        Ok(total / idx)
    }

    /// Order of the `R`-submodule of `R^k` generated by the given vectors.
    pub fn rspan_size(self: &Arc<Self>, gens: &[Vec<RingElem>]) -> Result<BigInt> {
        let scal = self.additive_generators()?;
        let mut all = Vec::with_capacity(gens.len() * scal.len());
        for g in gens {
            for c in &scal {
                all.push(g.iter().map(|x| x * c).collect());
            }
        }
        self.zspan_size(&all)
    }

    /// Whether the given elements form an `R'`-basis of this ring, where `R'`
    /// is the finite coefficient subring spanned by `sub_gens` (a `Z`-generating set of `R'`).
    /// Checks that `Σ R'·b_i` is everything and that the map `R'^n → R` is injective.
    pub fn is_basis_over(&self, basis: &[RingElem], sub_gens: &[RingElem], sub_size: &BigInt) -> Result<bool> {
        let mut images = Vec::new();
        for b in basis {
            for c in sub_gens {
                images.push(vec![b * c]);
            }
        }
        let span = self.zspan_size(&images)?;
        let total = self.size().expect("finite");
        Ok(span == total && num_traits::pow(sub_size.clone(), basis.len()) == total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Prime;
    use crate::ring::{BaseRing, RingBuilder};

    #[test]
    fn nine_p3_inverse_matches_bruteforce() {
        let p = Prime::new(3).unwrap();
        let ctx = RingCtx::coefficients(BaseRing::modulo(p, 9).unwrap());
        let all = ctx.elements().unwrap();
        assert_eq!(all.len(), 81);
        let a = &ctx.one() + &ctx.eta_pow(3);
        let inv = ctx.finite_inverse(&a).unwrap().unwrap();
        assert!((&a * &inv).is_one());
        let brute: Vec<_> = all.iter().filter(|b| (&a * *b).is_one()).collect();
        assert_eq!(brute.len(), 1);
        assert_eq!(brute[0], &inv);
        assert!(ctx.finite_inverse(&ctx.eta()).unwrap().is_none());
    }

    #[test]
    fn truncated_polynomial_unit() {
        let p = Prime::new(3).unwrap();
        let free = RingCtx::polynomial_ring(BaseRing::residue_field(p), &["u"]).unwrap();
        let ctx = RingBuilder::from_ctx(&free).rule("u", 2, &free.zero()).unwrap().build().unwrap();
        let u = ctx.var("u").unwrap();
        let a = &ctx.one() + &u;
        let inv = ctx.finite_inverse(&a).unwrap().unwrap();
        assert_eq!(inv, &ctx.one() - &u);
        assert_eq!(ctx.size().unwrap(), BigInt::from(9));
    }

    #[test]
    fn mixed_modulus_crt() {
        let p = Prime::new(2).unwrap();
        let ctx = RingCtx::coefficients(BaseRing::modulo(p, 12).unwrap());
        for x in 0..12i64 {
            let a = ctx.int(x);
            let inv = ctx.finite_inverse(&a).unwrap();
            let coprime = num_integer::Integer::gcd(&x, &12) == 1;
            assert_eq!(inv.is_some(), coprime, "x={x}");
            if let Some(i) = inv {
                assert!((&a * &i).is_one());
            }
        }
    }

    #[test]
    fn span_sizes() {
        let p = Prime::new(3).unwrap();
        let ctx = RingCtx::coefficients(BaseRing::modulo(p, 9).unwrap());
        let eta = ctx.eta();
        assert_eq!(ctx.rspan_size(&[vec![eta.clone()]]).unwrap(), BigInt::from(27));
        assert_eq!(ctx.zspan_size(&[vec![ctx.int(3)]]).unwrap(), BigInt::from(3));
    }
}
