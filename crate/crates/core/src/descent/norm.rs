//! The twisted norms `N` (on `A*_p`, through `δ^pτ` and `*_p`) and `N'` (on `A*`, through `δτ` and `*`).

use serde::Serialize;

use super::tau_ring::TauEquippedRing;
use crate::error::Result;
use crate::eta_calculus::{EtaOps, TauAction};
use crate::ring::RingElem;

/// `N(z) = (s^{p−2} *_p z) ⊕_p (s^{p−3} *_p δ^pτ(z)) ⊕_p … ⊕_p (δ^pτ)^{p−2}(z)`.
pub fn norm_operator_n(tau: &TauAction, z: &RingElem) -> Result<RingElem> {
    let ops = EtaOps::new(z.ctx());
    let pp = z.prime().get();
    let mut acc = z.ctx().zero();
    let mut cur = z.clone();
    for k in 0..pp.saturating_sub(1) {
        let e = tau.s.pow(pp - 2 - k);
        acc = ops.oplus_p(&acc, &ops.star_p(e, &cur));
        if k + 2 < pp {
            cur = tau.delta_p_tau(&cur)?;
        }
    }
    Ok(acc)
}

/// `N'(x) = (s^{p−2} * x) ⊕ (s^{p−3} * δτ(x)) ⊕ … ⊕ (δτ)^{p−2}(x)`.
pub fn norm_operator_n_prime(tau: &TauAction, x: &RingElem) -> Result<RingElem> {
    let ops = EtaOps::new(x.ctx());
    let pp = x.prime().get();
    let mut acc = x.ctx().zero();
    let mut cur = x.clone();
    for k in 0..pp.saturating_sub(1) {
        let e = tau.s.pow(pp - 2 - k);
        acc = ops.oplus(&acc, &ops.star(e, &cur));
        if k + 2 < pp {
            cur = tau.delta_tau(&cur)?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub z: String,
    pub n: String,
    /// `δ^pτ(N(z)) ⊕_p (pr *_p z) = s *_p N(z)`.
    pub recursion: bool,
    /// `1 + N(z)η^p = Π_k τ^k(1 + zη^p)^{s^{p−2−k}}`.
    pub kummer_form: bool,
}

pub fn norm_report(ring: &TauEquippedRing, z: &RingElem) -> Result<NormReport> {
    let tau = &ring.tau;
    let ops = EtaOps::new(&ring.ctx);
    let n = norm_operator_n(tau, z)?;
    let pr = ring.choice.s.pow(z.prime().get() - 1) - 1;
    let lhs = ops.oplus_p(&tau.delta_p_tau(&n)?, &ops.star_p(pr, z));
    let recursion = lhs == ops.star_p(ring.choice.s, &n);
    let pp = z.prime().get();
    let mut prod = ring.ctx.one();
    let mut w = ops.phi_p(z);
    for k in 0..pp.saturating_sub(1) {
        prod = &prod * &w.pow(ring.choice.s.pow(pp - 2 - k));
        w = tau.apply(&w)?;
    }
    let kummer_form = ops.phi_p(&n) == prod;
    Ok(NormReport { z: z.to_string(), n: n.to_string(), recursion, kummer_form })
}
