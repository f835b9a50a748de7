//! From a normal basis `{σ^i z}` with `Σ σ^i z = 1` to a generator with `σ(θ') = ρθ' + 1`.

use std::sync::Arc;

use serde::Serialize;

use super::{build_gen_as_poly, orbit};
use crate::cyclotomic::{delta_s, CycInt, Prime};
use crate::error::{ensure, Error, Result};
use crate::ring::{RingCtx, RingElem, RingHom};

/// `r_i = δ_{p+1−i}`: the unique solution of `r_{i−1} = ρ r_i + 1` (indices mod p) with `r_0 = 1`.
pub fn normal_basis_coefficients(p: Prime) -> Vec<CycInt> {
    let pp = p.get() as u64;
    (0..pp).map(|i| delta_s(p, (pp + 1 - i) % pp)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalBasisResult {
    pub theta: String,
    pub a: String,
    pub r: Vec<String>,
    /// `r_0 = 1`, `r_1 = 0`, `r_i = ρ r_{i+1} + 1`.
    pub r_recursion: bool,
    pub normal_basis: Option<bool>,
    /// `σ(θ') = ρθ' + 1`.
    pub sigma_relation: bool,
    /// `θ'^p + g(θ') − a = 0` with `a = (−1)^{p−1} Π σ^i θ'` in the base.
    pub annihilated: bool,
    /// `1, θ', …, θ'^{p−1}` is a basis over the base (finite rings only).
    pub powers_basis: Option<bool>,
    /// `α = Σ ρ^{p−i+1} σ^i(z)` satisfies `σ(α) = ρα`.
    pub kummer_eigenvector: bool,
    #[serde(skip)]
    pub theta_elem: Option<RingElem>,
    #[serde(skip)]
    pub a_elem: Option<RingElem>,
}

impl NormalBasisResult {
    pub fn passed(&self) -> bool {
        self.r_recursion
            && self.sigma_relation
            && self.annihilated
            && self.kummer_eigenvector
            && self.normal_basis.unwrap_or(true)
            && self.powers_basis.unwrap_or(true)
    }
}

/// `s` is a ring containing `base` (as a variable prefix) with automorphism `sigma` of order `p`
/// fixing `base`; `z` generates a normal basis up to the unit `Σ σ^i z`.
pub fn normal_basis_to_theta(base: &Arc<RingCtx>, sigma: &RingHom, z: &RingElem) -> Result<NormalBasisResult> {
    let s = sigma.source();
    ensure!(sigma.target().same(s) && z.ctx().same(s), Structural, "σ must be an endomorphism of the ring of z");
    let p = s.prime();
    let pp = p.get() as usize;
    let zs = orbit(sigma, z, pp + 1)?;
    ensure!(&zs[pp] == z, Argument, "σ^p(z) ≠ z");
    let total = zs[..pp].iter().fold(s.zero(), |acc, x| &acc + x);
    let inv = total
        .try_invert()?
        .ok_or_else(|| Error::Argument(format!("Σ σ^i(z) = {total} is not a unit; cannot normalize")))?;
    let zn: Vec<RingElem> = zs[..pp].iter().map(|x| x * &inv).collect();

    let r = normal_basis_coefficients(p);
    let rho = CycInt::rho(p);
    let r_recursion = r[0].is_one()
        && (pp < 2 || r[1].is_zero())
        && (0..pp).all(|i| r[i] == &(&rho * &r[(i + 1) % pp]) + &CycInt::one(p));

    let theta = zn.iter().zip(&r).fold(s.zero(), |acc, (x, c)| &acc + &(x * &s.from_cyc(c)));
    let sigma_relation = sigma.apply(&theta)? == &(&s.rho() * &theta) + &s.one();

    let conj = orbit(sigma, &theta, pp)?;
    let mut a = conj.iter().fold(s.one(), |acc, x| &acc * x);
    if pp.is_multiple_of(2) {
        a = -a;
    }
    let gp = build_gen_as_poly(p)?;
    let in_base = a.lives_in_prefix(base.nvars()) && sigma.apply(&a)? == a;
    let annihilated = in_base && gp.eval(&theta, &a).is_zero();

    let (normal_basis, powers_basis) = if s.is_finite() && base.is_finite() {
        let sub: Vec<RingElem> = base.additive_generators()?.iter().map(|g| s.embed(g)).collect::<Result<_>>()?;
        let size = base.size().expect("finite");
        let powers: Vec<RingElem> = (0..pp).map(|j| theta.pow(j as u64)).collect();
        (Some(s.is_basis_over(&zn, &sub, &size)?), Some(s.is_basis_over(&powers, &sub, &size)?))
    } else {
        (None, None)
    };

    let alpha = zn
        .iter()
        .enumerate()
        .fold(s.zero(), |acc, (i, x)| &acc + &(x * &s.from_cyc(&CycInt::rho_pow(p, (pp + 1 - i) as i64))));
    let kummer_eigenvector = sigma.apply(&alpha)? == &s.rho() * &alpha;

    let a_base = if in_base { Some(a.restrict_to(base)?) } else { None };
    Ok(NormalBasisResult {
        theta: theta.to_string(),
        a: a_base.as_ref().map_or_else(|| a.to_string(), ToString::to_string),
        r: r.iter().map(ToString::to_string).collect(),
        r_recursion,
        normal_basis,
        sigma_relation,
        annihilated,
        powers_basis,
        kummer_eigenvector,
        theta_elem: Some(theta),
        a_elem: a_base,
    })
}
