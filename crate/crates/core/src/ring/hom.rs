use std::fmt;
use std::sync::Arc;

use super::poly::{self, Poly};
use super::{RingCtx, RingElem};
use crate::error::{ensure, Error, Result};

/// Action on the coefficient ring `Z[ρ]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffMap {
    Identity,
    /// `ρ ↦ ρ^k`.
    Galois(u64),
}

impl CoeffMap {
    fn exponent(self) -> u64 {
        match self {
            CoeffMap::Identity => 1,
            CoeffMap::Galois(k) => k,
        }
    }
}

/// A ring homomorphism determined by the images of the variables and the
/// action on coefficients; validated against every relation at construction.
#[derive(Clone)]
pub struct RingHom {
    source: Arc<RingCtx>,
    target: Arc<RingCtx>,
    images: Vec<RingElem>,
    coeff: CoeffMap,
    d_inv: Option<RingElem>,
}

impl RingHom {
    pub fn new(source: &Arc<RingCtx>, target: &Arc<RingCtx>, images: Vec<RingElem>, coeff: CoeffMap) -> Result<Self> {
        ensure!(
            images.len() == source.nvars(),
            Argument,
            "{} images given for {} variables",
            images.len(),
            source.nvars()
        );
        ensure!(images.iter().all(|x| x.ctx().same(target)), Structural, "image outside the target ring");
        let k = coeff.exponent();
        ensure!(
            source.base().maps_into(target.base(), k),
            Structural,
            "coefficients of {} do not map into {}",
            source.describe(),
            target.describe()
        );
        let mut h = RingHom { source: Arc::clone(source), target: Arc::clone(target), images, coeff, d_inv: None };
        for v in 0..source.nvars() {
            if let Some(rule) = source.rule(v) {
                let lhs = h.images[v].pow(rule.exp as u64);
                let rhs = h.apply_poly(&rule.rhs);
                ensure!(
                    lhs == rhs,
                    Argument,
                    "relation {}^{} is not respected: {} vs {}",
                    source.var_names()[v],
                    rule.exp,
                    lhs,
                    rhs
                );
            }
        }
        if let Some(d) = source.denom() {
            let hd = h.apply_poly(d);
            let inv = hd
                .try_invert()?
                .ok_or_else(|| Error::UnitRequired(format!("image {hd} of the localized element is not a unit")))?;
            h.d_inv = Some(inv);
        }
        Ok(h)
    }

    pub fn identity(ctx: &Arc<RingCtx>) -> Self {
        let images = (0..ctx.nvars()).map(|v| ctx.var_at(v)).collect();
        RingHom::new(ctx, ctx, images, CoeffMap::Identity).expect("identity respects relations")
    }

    /// Variables map to the like-named variables of `target`; coefficients map canonically.
    pub fn canonical(source: &Arc<RingCtx>, target: &Arc<RingCtx>) -> Result<Self> {
        let images = source.var_names().iter().map(|n| target.var(n)).collect::<Result<Vec<_>>>()?;
        RingHom::new(source, target, images, CoeffMap::Identity)
    }

    /// Images given by name; unnamed variables go to the like-named variable of the target.
    pub fn by_names(
        source: &Arc<RingCtx>,
        target: &Arc<RingCtx>,
        named: &[(&str, RingElem)],
        coeff: CoeffMap,
    ) -> Result<Self> {
        for (n, _) in named {
            ensure!(source.var_index(n).is_some(), Argument, "unknown variable {n}");
        }
        let images = source
            .var_names()
            .iter()
            .map(|n| match named.iter().find(|(m, _)| m == n) {
                Some((_, e)) => Ok(e.clone()),
                None => target.var(n),
            })
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(source, target, images, coeff)
    }

    pub fn source(&self) -> &Arc<RingCtx> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RingCtx> {
        &self.target
    }

    pub fn images(&self) -> &[RingElem] {
        &self.images
    }

    pub fn coeff_map(&self) -> CoeffMap {
        self.coeff
    }

    fn apply_poly(&self, num: &Poly) -> RingElem {
        let t = &self.target;
        let k = self.coeff.exponent();
        let n = self.images.len();
        let mut powers: Vec<Vec<RingElem>> = vec![vec![t.one()]; n];
        // numerators grouped by denominator power; normalized once at the end
        let mut acc: std::collections::BTreeMap<u32, Poly> = std::collections::BTreeMap::new();
        for (m, c) in num {
            let c = if k == 1 { c.clone() } else { c.galois(k) };
            let mut term = t.from_cyc(&c);
            if term.is_zero() {
                continue;
            }
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().expect("nonempty") * &self.images[v];
                    powers[v].push(next);
                }
                term = &term * &powers[v][e as usize];
            }
            let slot = acc.entry(term.den).or_default();
            for (m, c) in term.num {
                poly::add_term(slot, m, c);
            }
        }
        let mut out = t.zero();
        for (den, num) in acc {
            out = &out + &t.normalize(num, den);
        }
        out
    }

    pub fn apply(&self, a: &RingElem) -> Result<RingElem> {
        ensure!(
            a.ctx().same(&self.source),
            Structural,
            "element of {} given to a map from {}",
            a.ctx().describe(),
            self.source.describe()
        );
        let mut r = self.apply_poly(a.terms());
        if a.den_power() > 0 {
            let d = self.d_inv.as_ref().expect("localized source");
            r = &r * &d.pow(a.den_power() as u64);
        }
        Ok(r)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &RingHom) -> Result<RingHom> {
        ensure!(self.target.same(&next.source), Structural, "maps are not composable");
        let images = self.images.iter().map(|x| next.apply(x)).collect::<Result<Vec<_>>>()?;
        let coeff = match (self.coeff, next.coeff) {
            (CoeffMap::Identity, c) | (c, CoeffMap::Identity) => c,
            (CoeffMap::Galois(a), CoeffMap::Galois(b)) => {
                let p = self.source.prime().get() as u64;
                let k = (a * b) % p;
                if k == 1 {
                    CoeffMap::Identity
                } else {
                    CoeffMap::Galois(k)
                }
            }
        };
        RingHom::new(&self.source, &next.target, images, coeff)
    }

    /// Agreement on generators and coefficients (for endomorphisms and parallel maps).
    pub fn agrees_with(&self, other: &RingHom) -> bool {
        let p = self.source.prime().get() as u64;
        self.source.same(&other.source)
            && self.target.same(&other.target)
            && self.images == other.images
            && self.coeff.exponent() % p == other.coeff.exponent() % p
    }
}

impl fmt::Debug for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingHom({} → {}, ", self.source.describe(), self.target.describe())?;
        for (n, x) in self.source.var_names().iter().zip(&self.images) {
            write!(f, "{n}↦{x}; ")?;
        }
        write!(f, "{:?})", self.coeff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Prime;
    use crate::ring::{BaseRing, RingBuilder};

    #[test]
    fn localized_to_finite() {
        let p = Prime::new(3).unwrap();
        let free = RingCtx::polynomial_ring(BaseRing::integers(p), &["u"]).unwrap();
        let u = free.var("u").unwrap();
        let f = &free.one() + &(&u * &free.eta_pow(3));
        let r = RingBuilder::from_ctx(&free).inverse(&f, Some("w")).unwrap().build().unwrap();
        let nine = RingCtx::coefficients(BaseRing::modulo(p, 9).unwrap());
        let h = RingHom::new(&r, &nine, vec![nine.one()], CoeffMap::Identity).unwrap();
        let img = h.apply(&r.embed(&f).unwrap()).unwrap();
        assert_eq!(img, &nine.one() + &nine.eta_pow(3));
        let w = h.apply(&r.alias("w").unwrap()).unwrap();
        assert!((&img * &w).is_one());
        // u ↦ 0 mod η: 1 + uη^3 ↦ 1 is fine; a non-unit image is rejected
        let fp = RingCtx::coefficients(BaseRing::residue_field(p));
        assert!(RingHom::new(&r, &fp, vec![fp.int(5)], CoeffMap::Identity).is_ok());
    }

    #[test]
    fn relations_are_checked() {
        let p = Prime::new(2).unwrap();
        let base = BaseRing::modulo(p, 4).unwrap();
        let free = RingCtx::polynomial_ring(base.clone(), &["e"]).unwrap();
        let ctx = RingBuilder::from_ctx(&free).rule("e", 2, &free.zero()).unwrap().build().unwrap();
        let tgt = RingCtx::coefficients(base);
        assert!(RingHom::new(&ctx, &tgt, vec![tgt.int(2)], CoeffMap::Identity).is_ok());
        assert!(RingHom::new(&ctx, &tgt, vec![tgt.int(1)], CoeffMap::Identity).is_err());
    }

    #[test]
    fn galois_coefficients() {
        let p = Prime::new(5).unwrap();
        let ctx = RingCtx::polynomial_ring(BaseRing::integers(p), &["x"]).unwrap();
        let tau = RingHom::new(&ctx, &ctx, vec![ctx.var("x").unwrap()], CoeffMap::Galois(2)).unwrap();
        let mut h = RingHom::identity(&ctx);
        for _ in 0..4 {
            h = h.then(&tau).unwrap();
        }
        let a = &ctx.rho() * &ctx.var("x").unwrap();
        assert_eq!(h.apply(&a).unwrap(), a);
        assert_eq!(tau.apply(&ctx.rho()).unwrap(), ctx.rho().pow(2));
    }
}
