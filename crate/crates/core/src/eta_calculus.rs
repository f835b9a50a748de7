//! The η-adic operations: `x ⊕ y = x + y + xyη`, its η^p analogue `⊕_p`,
//! iterates `s * a` and `r *_p z`, and `pr #_p z` defined by
//! `(1 + zη)^{pr} = 1 + (pr #_p z) η^p`.
//!
//! `#_p` is never computed by dividing inside the target ring: the polynomial
//! `H_{pr}(Z) = ((1 + Zη)^{pr} − 1)/η^p` is formed over `Z[ρ]`, where η is a
//! non-zero-divisor, and then evaluated.

use std::sync::Arc;

use crate::cyclotomic::{binomial, delta_s, CycInt, Prime};
use crate::error::{ensure, Error, Result};
use crate::ring::{CoeffMap, RingCtx, RingElem, RingHom};

/// Coefficients of `H_{pr}(Z) = ((1 + Zη)^{pr} − 1)/η^p`, index `k` ↦ coefficient of `Z^k`.
pub fn sharp_poly(p: Prime, pr: u64) -> Result<Vec<CycInt>> {
    let pp = p.get() as u64;
    ensure!(pr > 0 && pr.is_multiple_of(pp), Argument, "pr = {pr} is not a positive multiple of p = {p}");
    let eta = CycInt::eta(p);
    let eta_p = eta.pow(pp);
    let mut out = vec![CycInt::zero(p)];
    let mut eta_k = CycInt::one(p);
    for k in 1..=pr {
        eta_k = &eta_k * &eta;
        let c = eta_k.scale(&binomial(pr, k));
        let q =
            c.exact_div(&eta_p).ok_or_else(|| Error::Consistency(format!("C({pr},{k})η^{k} not divisible by η^p")))?;
        out.push(q);
    }
    Ok(out)
}

/// Operations bound to one context, with the images of `η` and `η^p` cached.
#[derive(Clone)]
pub struct EtaOps {
    ctx: Arc<RingCtx>,
    eta: RingElem,
    eta_p: RingElem,
    eta_pm1: RingElem,
}

impl EtaOps {
    pub fn new(ctx: &Arc<RingCtx>) -> Self {
        let p = ctx.prime().get();
        EtaOps { ctx: Arc::clone(ctx), eta: ctx.eta(), eta_p: ctx.eta_pow(p), eta_pm1: ctx.eta_pow(p - 1) }
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn prime(&self) -> Prime {
        self.ctx.prime()
    }

    pub fn eta(&self) -> &RingElem {
        &self.eta
    }

    pub fn eta_p(&self) -> &RingElem {
        &self.eta_p
    }

    /// `η^{p−1}`.
    pub fn eta_pm1(&self) -> &RingElem {
        &self.eta_pm1
    }

    pub fn phi(&self, x: &RingElem) -> RingElem {
        &self.ctx.one() + &(x * &self.eta)
    }

    pub fn phi_p(&self, x: &RingElem) -> RingElem {
        &self.ctx.one() + &(x * &self.eta_p)
    }

    fn oplus_with(x: &RingElem, y: &RingElem, e: &RingElem) -> RingElem {
        &(x + y) + &(&(x * y) * e)
    }

    pub fn oplus(&self, x: &RingElem, y: &RingElem) -> RingElem {
        Self::oplus_with(x, y, &self.eta)
    }

    pub fn oplus_p(&self, x: &RingElem, y: &RingElem) -> RingElem {
        Self::oplus_with(x, y, &self.eta_p)
    }

    /// The unique `z` with `x = y ⊕ z`; needs `1 + yη` to be a unit.
    pub fn ominus(&self, x: &RingElem, y: &RingElem) -> Result<RingElem> {
        let inv = self.phi(y).inverse("1 + yη")?;
        Ok(&(x - y) * &inv)
    }

    pub fn ominus_p(&self, x: &RingElem, y: &RingElem) -> Result<RingElem> {
        let inv = self.phi_p(y).inverse("1 + yη^p")?;
        Ok(&(x - y) * &inv)
    }

    fn iterate(&self, s: u64, a: &RingElem, e: &RingElem, e_cyc: &CycInt) -> RingElem {
        if s <= 64 {
            // s ⋆ a = Σ_{k≥1} C(s,k) e^{k−1} a^k, by Horner: only multiplies by `a`
            let mut acc = self.ctx.zero();
            for k in (1..=s).rev() {
                let c = e_cyc.pow(k - 1).scale(&binomial(s, k));
                acc = &(&acc + &self.ctx.from_cyc(&c)) * a;
            }
            return acc;
        }
        let mut s = s;
        let mut acc = self.ctx.zero();
        let mut base = a.clone();
        while s > 0 {
            if s & 1 == 1 {
                acc = Self::oplus_with(&acc, &base, e);
            }
            s >>= 1;
            if s > 0 {
                base = Self::oplus_with(&base, &base, e);
            }
        }
        acc
    }

    /// `s * a = a ⊕ ⋯ ⊕ a` (`s` times).
    pub fn star(&self, s: u64, a: &RingElem) -> RingElem {
        self.iterate(s, a, &self.eta, &CycInt::eta(self.prime()))
    }

    /// `r *_p z = z ⊕_p ⋯ ⊕_p z` (`r` times).
    pub fn star_p(&self, r: u64, z: &RingElem) -> RingElem {
        self.iterate(r, z, &self.eta_p, &CycInt::eta(self.prime()).pow(self.prime().get() as u64))
    }

    /// `pr #_p z`, evaluated from the generic polynomial over `Z[ρ]`.
    pub fn sharp_p(&self, pr: u64, z: &RingElem) -> Result<RingElem> {
        let coeffs = sharp_poly(self.prime(), pr)?;
        let mut acc = self.ctx.zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * z) + &self.ctx.from_cyc(c);
        }
        Ok(acc)
    }
}

/// An automorphism `τ` of a context with `τ(ρ) = ρ^s`.
#[derive(Clone, Debug)]
pub struct TauAction {
    pub hom: RingHom,
    pub s: u64,
    delta: RingElem,
    delta_p: RingElem,
}

impl TauAction {
    pub fn new(hom: RingHom, s: u64) -> Result<Self> {
        let ctx = hom.source();
        ensure!(ctx.same(hom.target()), Argument, "τ must be an endomorphism");
        let p = ctx.prime();
        let expect = if s % p.get() as u64 == 1 { CoeffMap::Identity } else { CoeffMap::Galois(s) };
        let ok = match (hom.coeff_map(), expect) {
            (CoeffMap::Identity, CoeffMap::Identity) => true,
            (CoeffMap::Galois(a), CoeffMap::Galois(b)) => a % p.get() as u64 == b % p.get() as u64,
            _ => false,
        };
        ensure!(ok, Argument, "τ does not send ρ to ρ^{s}");
        let d = delta_s(p, s);
        let delta = ctx.from_cyc(&d);
        let delta_p = ctx.from_cyc(&d.pow(p.get() as u64));
        Ok(TauAction { hom, s, delta, delta_p })
    }

    /// `τ` fixing every variable of `ctx` and acting by `ρ ↦ ρ^s` on coefficients.
    pub fn fixing_vars(ctx: &Arc<RingCtx>, s: u64) -> Result<Self> {
        let p = ctx.prime().get() as u64;
        let coeff = if s % p == 1 { CoeffMap::Identity } else { CoeffMap::Galois(s) };
        let images = (0..ctx.nvars()).map(|v| ctx.var_at(v)).collect();
        Self::new(RingHom::new(ctx, ctx, images, coeff)?, s)
    }

    pub fn apply(&self, x: &RingElem) -> Result<RingElem> {
        self.hom.apply(x)
    }

    /// `δτ(x) = δ_s τ(x)`.
    pub fn delta_tau(&self, x: &RingElem) -> Result<RingElem> {
        Ok(&self.delta * &self.hom.apply(x)?)
    }

    /// `δ^pτ(x) = δ_s^p τ(x)`.
    pub fn delta_p_tau(&self, x: &RingElem) -> Result<RingElem> {
        Ok(&self.delta_p * &self.hom.apply(x)?)
    }

    pub fn delta(&self) -> &RingElem {
        &self.delta
    }

    /// Order of τ as a map, checked on generators and `ρ` up to `bound`.
    pub fn order(&self, bound: u32) -> Result<Option<u32>> {
        let ctx = self.hom.source();
        let gens: Vec<RingElem> = (0..ctx.nvars()).map(|v| ctx.var_at(v)).chain([ctx.rho()]).collect();
        let mut cur = gens.clone();
        for k in 1..=bound {
            cur = cur.iter().map(|g| self.hom.apply(g)).collect::<Result<_>>()?;
            if cur == gens {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::BaseRing;

    fn gen_ring(p: u32) -> (Arc<RingCtx>, EtaOps) {
        let p = Prime::new(p).unwrap();
        let ctx = RingCtx::polynomial_ring(BaseRing::integers(p), &["x", "y", "z"]).unwrap();
        let ops = EtaOps::new(&ctx);
        (ctx, ops)
    }

    #[test]
    fn phi_is_multiplicative() {
        for p in [2, 3, 5, 7] {
            let (ctx, ops) = gen_ring(p);
            let x = ctx.var("x").unwrap();
            let y = ctx.var("y").unwrap();
            assert_eq!(ops.phi(&ops.oplus(&x, &y)), &ops.phi(&x) * &ops.phi(&y));
            assert_eq!(ops.phi_p(&ops.oplus_p(&x, &y)), &ops.phi_p(&x) * &ops.phi_p(&y));
        }
    }

    #[test]
    fn star_of_one_is_delta() {
        for p in [2u32, 3, 5, 7] {
            let (ctx, ops) = gen_ring(p);
            for s in 0..p as u64 {
                assert_eq!(ops.star(s, &ctx.one()), ctx.from_cyc(&delta_s(ctx.prime(), s)));
            }
            // 1 ⊕ θ = 1 + ρθ
            let z = ctx.var("z").unwrap();
            assert_eq!(ops.oplus(&ctx.one(), &z), &ctx.one() + &(&ctx.rho() * &z));
        }
    }

    #[test]
    fn sharp_is_generic_expansion() {
        for p in [2u32, 3, 5] {
            let (ctx, ops) = gen_ring(p);
            let z = ctx.var("z").unwrap();
            for r in 1..=3u64 {
                let pr = p as u64 * r;
                let lhs = ops.phi(&z).pow(pr);
                let rhs = ops.phi_p(&ops.sharp_p(pr, &z).unwrap());
                assert_eq!(lhs, rhs);
            }
            assert!(ops.sharp_p(p as u64 + 1, &z).is_err());
            assert!(ops.sharp_p(p as u64, &ctx.zero()).unwrap().is_zero());
        }
    }

    #[test]
    fn star_closed_form_matches_doubling() {
        let p = Prime::new(3).unwrap();
        let ctx = RingCtx::coefficients(BaseRing::modulo(p, 27).unwrap());
        let ops = EtaOps::new(&ctx);
        let a = &ctx.rho() + &ctx.int(5);
        for s in [63u64, 64, 65, 130] {
            let mut naive = ctx.zero();
            for _ in 0..s {
                naive = ops.oplus(&naive, &a);
            }
            assert_eq!(ops.star(s, &a), naive);
            let mut naive_p = ctx.zero();
            for _ in 0..s {
                naive_p = ops.oplus_p(&naive_p, &a);
            }
            assert_eq!(ops.star_p(s, &a), naive_p);
        }
    }

    #[test]
    fn ominus_roundtrip_finite() {
        let p = Prime::new(3).unwrap();
        let ctx = RingCtx::coefficients(BaseRing::modulo(p, 9).unwrap());
        let ops = EtaOps::new(&ctx);
        let all = ctx.elements().unwrap();
        for y in all.iter().step_by(7) {
            for z in all.iter().step_by(5) {
                let x = ops.oplus(y, z);
                assert_eq!(&ops.ominus(&x, y).unwrap(), z);
            }
        }
    }

    #[test]
    fn delta_tau_has_order_p_minus_one() {
        let p = Prime::new(3).unwrap();
        let ctx = RingCtx::polynomial_ring(BaseRing::integers(p), &["x0", "x1"]).unwrap();
        let tau = TauAction::fixing_vars(&ctx, 2).unwrap();
        assert_eq!(tau.order(10).unwrap(), Some(2));
        let x = &ctx.var("x0").unwrap() + &(&ctx.var("x1").unwrap() * &ctx.rho());
        let twice = tau.delta_tau(&tau.delta_tau(&x).unwrap()).unwrap();
        assert_eq!(twice, x);
        assert_eq!(tau.apply(&ctx.eta()).unwrap(), tau.delta() * &ctx.eta());
    }
}
