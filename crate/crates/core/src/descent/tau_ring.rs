//! `R = Z[ρ] ⊗ R'` with `τ(ρ) = ρ^s` and `τ|R' = id`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::schoice::{choose_s, SChoice};
use crate::cyclotomic::CycInt;
use crate::error::{ensure, Result};
use crate::eta_calculus::TauAction;
use crate::lattice::FqMatrix;
use crate::ring::{BaseRing, RingBuilder, RingCtx, RingElem};

#[derive(Clone, Debug)]
pub struct TauEquippedRing {
    pub ctx: Arc<RingCtx>,
    pub tau: TauAction,
    pub choice: SChoice,
}

impl TauEquippedRing {
    /// Equip `ctx` with `τ` fixing its variables.
    pub fn new(ctx: &Arc<RingCtx>) -> Result<Self> {
        let choice = choose_s(ctx.prime())?;
        let tau = TauAction::fixing_vars(ctx, choice.s)?;
        Ok(TauEquippedRing { ctx: Arc::clone(ctx), tau, choice })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjoinReport {
    pub ring: String,
    pub s: u64,
    pub r: u64,
    pub tau_order: Option<u32>,
    /// `ρ^p = 1 ≠ ρ` in `R`.
    pub rho_order_p: bool,
    /// `R^τ = R'`: by kernel count for finite rings, by the rank of `τ − 1` on `Z[ρ]` otherwise.
    pub fixed_ring: bool,
    pub fixed_ring_method: String,
}

/// `Z[ρ] ⊗ R'` where `R'` is given by a presentation over `Z` (read off the
/// context: `Z[ρ]/(m)[vars]/(rules)` is `Z[ρ] ⊗ Z/m[vars]/(rules)`).
///
/// With `trivial = true` and `pR' = 0` the ring is instead `R'` itself, a
/// `Z[ρ]`-algebra through `ρ ↦ 1`, and τ is the identity.
pub fn adjoin_rho(ctx: &Arc<RingCtx>, trivial: bool) -> Result<(TauEquippedRing, AdjoinReport)> {
    let p = ctx.prime();
    let d = ctx.base().desc();
    ensure!(
        d.eta_power.is_none() && d.rho.is_none(),
        Argument,
        "{} is not of the form Z[ρ] ⊗ R' (its ideal involves η or ρ)",
        ctx.describe()
    );
    let ring = if trivial {
        ensure!(
            d.m.is_some_and(|m| m % p.get() as i64 == 0 && m != 0 && m.unsigned_abs() == p.get() as u64),
            Argument,
            "the trivial adjunction needs pR' = 0"
        );
        let base = BaseRing::residue_field(p);
        let mut b = RingBuilder::new(base);
        for n in ctx.var_names() {
            b = b.var(n);
        }
        let bare = b.build()?;
        let mut b = RingBuilder::from_ctx(&bare);
        for v in 0..ctx.nvars() {
            if let Some(rule) = ctx.rule(v) {
                let rhs = bare.from_poly(rule.rhs.clone())?;
                b = b.rule(&ctx.var_names()[v], rule.exp, &rhs)?;
            }
        }
        let c = b.build()?;
        let tau = TauAction::fixing_vars(&c, 1)?;
        let choice = SChoice { p, s: 1, r: 0 };
        TauEquippedRing { ctx: c, tau, choice }
    } else {
        TauEquippedRing::new(ctx)?
    };
    let report = adjoin_report(&ring)?;
    Ok((ring, report))
}

pub fn adjoin_report(ring: &TauEquippedRing) -> Result<AdjoinReport> {
    let ctx = &ring.ctx;
    let p = ctx.prime();
    let pp = p.get();
    let rho = ctx.rho();
    let rho_order_p = rho.pow(pp as u64).is_one() && !rho.is_one();
    let tau_order = ring.tau.order(pp)?;
    let (fixed_ring, method) = if let Some(total) = ctx.size() {
        let gens = ctx.additive_generators()?;
        let images: Vec<Vec<RingElem>> =
            gens.iter().map(|g| Ok(vec![&ring.tau.apply(g)? - g])).collect::<Result<_>>()?;
        let kernel = &total / ctx.zspan_size(&images)?;
        let expect = match ring.choice.s {
            1 => total.clone(),
            _ => {
                let m = ctx.base().characteristic().expect("finite base");
                num_traits::pow(BigInt::from(m), ctx.finite().expect("finite").monomials().len())
            }
        };
        (kernel == expect, format!("kernel count: |R^τ| = {kernel}, |R'| = {expect}"))
    } else {
        (cyclotomic_fixed_part_is_z(p, ring.choice.s), "rank of τ − 1 on Z[ρ]".to_string())
    };
    Ok(AdjoinReport {
        ring: ctx.describe(),
        s: ring.choice.s,
        r: ring.choice.r,
        tau_order,
        rho_order_p,
        fixed_ring,
        fixed_ring_method: method,
    })
}

/// `Σ r_i ρ^i` is τ-fixed only for `r_i = 0, i > 0`: column 0 of `τ − 1` is zero and
/// the other columns are independent (rank checked modulo a large prime, a lower bound for the rational rank).
pub fn cyclotomic_fixed_part_is_z(p: crate::cyclotomic::Prime, s: u64) -> bool {
    let n = p.rank();
    if s % p.get() as u64 == 1 {
        return n == 1;
    }
    const Q: u64 = 1_000_003;
    let mut m = FqMatrix::zeros(Q, n, n - 1);
    let mut col0_zero = true;
    for j in 0..n {
        let img = &CycInt::rho_pow(p, j as i64).galois(s) - &CycInt::rho_pow(p, j as i64);
        for (i, c) in img.coeffs().iter().enumerate() {
            if j == 0 {
                col0_zero &= num_traits::Zero::is_zero(c);
            } else {
                let v = c.mod_floor(&BigInt::from(Q));
                m.set(i, j - 1, v.to_u64().expect("reduced"));
            }
        }
    }
    col0_zero && m.rank() == n - 1
}

/// Whether `x ∈ gR` in a finite context.
pub fn in_principal_ideal(g: &RingElem, x: &RingElem) -> Result<bool> {
    let ctx = g.ctx();
    let gens: Vec<Vec<RingElem>> = ctx.additive_generators()?.iter().map(|a| vec![a * g]).collect();
    let before = ctx.zspan_size(&gens)?;
    let mut more = gens;
    more.push(vec![x.clone()]);
    Ok(ctx.zspan_size(&more)? == before)
}

/// Some `y` with `y · g = x` in a finite context (first in coordinate order).
pub fn solve_multiple(g: &RingElem, x: &RingElem) -> Result<Option<RingElem>> {
    let ctx = g.ctx();
    if !in_principal_ideal(g, x)? {
        return Ok(None);
    }
    for y in ctx.elements()? {
        if &(&y * g) == x {
            return Ok(Some(y));
        }
    }
    Ok(None)
}
