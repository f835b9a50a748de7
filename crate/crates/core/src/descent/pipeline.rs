//! Bringing a generator with `σ(θ) = ρθ + 1` into the form
//! `δτ(θ) = (s*θ) ⊖ (r *_p z)η^{p−1}`, `p #_p θ = N(z)` with `z ∈ R`.
//!
//! Each step records the identity it establishes. Where an element has to be
//! recovered from its class (η may be a zero divisor), a bounded search over
//! shifts `θ ⊖ y, y ∈ R` takes over; the report says which route was used.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::norm::{norm_operator_n, norm_operator_n_prime};
use super::tau_ring::{in_principal_ideal, solve_multiple, TauEquippedRing};
use crate::error::{ensure, Error, Result};
use crate::eta_calculus::{EtaOps, TauAction};
use crate::lattice::inv_mod;
use crate::ring::{RingCtx, RingElem, RingHom};

#[derive(Clone, Debug, Serialize)]
pub struct PipelineStep {
    pub name: String,
    pub identity: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub steps: Vec<PipelineStep>,
    /// `"pipeline"` or `"search"`.
    pub route: String,
    pub theta: String,
    pub z: String,
    /// The final normal form, checked from scratch.
    pub normal_form: bool,
}

/// The data a pipeline run works on.
pub struct Setting<'a> {
    pub ring: &'a TauEquippedRing,
    pub ext: &'a Arc<RingCtx>,
    pub sigma: &'a RingHom,
    pub tau: &'a TauAction,
}

impl Setting<'_> {
    fn ops(&self) -> EtaOps {
        EtaOps::new(self.ext)
    }

    fn in_base(&self, x: &RingElem) -> Result<Option<RingElem>> {
        if x.lives_in_prefix(self.ring.ctx.nvars()) && self.sigma.apply(x)? == *x {
            Ok(Some(x.restrict_to(&self.ring.ctx)?))
        } else {
            Ok(None)
        }
    }

    /// `(s*θ) ⊖ δτ(θ)`.
    fn twist(&self, theta: &RingElem) -> Result<RingElem> {
        let ops = self.ops();
        ops.ominus(&ops.star(self.ring.choice.s, theta), &self.tau.delta_tau(theta)?)
    }

    /// `δτ(θ) = (s*θ) ⊖ (r *_p z)η^{p−1}`, `p #_p θ = N(z)`, `σ(θ) = ρθ + 1`.
    pub fn is_normal_form(&self, theta: &RingElem, z: &RingElem) -> Result<bool> {
        let ops = self.ops();
        let pp = self.ext.prime().get() as u64;
        let sigma_ok = self.sigma.apply(theta)? == &(&self.ext.rho() * theta) + &self.ext.one();
        let w = self.ext.embed(
            &(&EtaOps::new(&self.ring.ctx).star_p(self.ring.choice.r, z) * &self.ring.ctx.eta_pow(pp as u32 - 1)),
        )?;
        let rhs = ops.ominus(&ops.star(self.ring.choice.s, theta), &w)?;
        let tau_ok = self.tau.delta_tau(theta)? == rhs;
        let sharp_ok = ops.sharp_p(pp, theta)? == self.ext.embed(&norm_operator_n(&self.ring.tau, z)?)?;
        Ok(sigma_ok && tau_ok && sharp_ok)
    }
}

fn step(steps: &mut Vec<PipelineStep>, name: &str, identity: &str, holds: bool) -> bool {
    steps.push(PipelineStep { name: name.into(), identity: identity.into(), holds });
    holds
}

fn modp(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// `y = ⊕_{a ≠ s} (a − s)^{-1} e_a(x)` with the idempotents `e_a = −Σ_k a^{-k}(δτ)^k` of `F_p[⟨δτ⟩]`,
/// so that `x ≡ δτ(y) ⊖ (s*y)` modulo the `V_s`-part and `A*_p`.
pub fn eigen_preimage(tau: &TauAction, s: u64, x: &RingElem) -> Result<RingElem> {
    let ops = EtaOps::new(x.ctx());
    let pp = x.prime().get() as u64;
    let orbit = tau_orbit(tau, x, pp as usize - 1)?;
    let mut y = x.ctx().zero();
    for a in 1..pp {
        if a == s % pp {
            continue;
        }
        let inv_as = inv_mod(modp(a as i64 - (s % pp) as i64, pp), pp).expect("a ≠ s");
        let inv_a = inv_mod(a, pp).expect("a ≠ 0");
        let mut ak = 1u64;
        for xk in &orbit {
            let c = (pp - inv_as) % pp * ak % pp;
            y = ops.oplus(&y, &ops.star(c, xk));
            ak = ak * inv_a % pp;
        }
    }
    Ok(y)
}

fn tau_orbit(tau: &TauAction, x: &RingElem, n: usize) -> Result<Vec<RingElem>> {
    let mut out = vec![x.clone()];
    for _ in 1..n {
        let next = tau.delta_tau(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

/// Run the named steps starting from `theta` with `σ(θ) = ρθ + 1`.
pub fn improve(set: &Setting, theta: &RingElem) -> Result<(RingElem, RingElem, PipelineReport)> {
    let ext = set.ext;
    ensure!(theta.ctx().same(ext), Structural, "θ is not in the extension");
    ensure!(
        set.sigma.apply(theta)? == &(&ext.rho() * theta) + &ext.one(),
        Argument,
        "θ does not satisfy σ(θ) = ρθ + 1"
    );
    let mut steps = Vec::new();
    let attempt = run_steps(set, theta, &mut steps)?;
    let (route, theta1, z1) = match attempt {
        Some((t, z)) => ("pipeline", t, z),
        None => {
            let (t, z) = search(set, theta)?
                .ok_or_else(|| Error::Consistency("no normal form found among the shifts θ ⊖ y, y ∈ R".into()))?;
            ("search", t, z)
        }
    };
    let normal_form = set.is_normal_form(&theta1, &z1)?;
    let report =
        PipelineReport { steps, route: route.into(), theta: theta1.to_string(), z: z1.to_string(), normal_form };
    Ok((theta1, z1, report))
}

fn run_steps(set: &Setting, theta: &RingElem, steps: &mut Vec<PipelineStep>) -> Result<Option<(RingElem, RingElem)>> {
    let ext = set.ext;
    let ops = set.ops();
    let base = &set.ring.ctx;
    let bops = EtaOps::new(base);
    let ch = set.ring.choice;
    let p = ext.prime();
    let pp = p.get() as u64;
    let (s, r) = (ch.s, ch.r);

    let x0 = set.twist(theta)?;
    let x0_base = set.in_base(&x0)?;
    let ok = step(steps, "initial_z", "z₀ = (s*θ) ⊖ δτ(θ) is σ-fixed", x0_base.is_some());
    let ok = ok
        & step(
            steps,
            "initial_z",
            "δτ(θ) = (s*θ) ⊖ z₀",
            set.tau.delta_tau(theta)? == ops.ominus(&ops.star(s, theta), &x0)?,
        );
    if !ok {
        return Ok(None);
    }
    step(steps, "n_prime", "N'(z₀) = p*(r*θ)", norm_operator_n_prime(set.tau, &x0)? == ops.star(ch.pr(), theta));

    // θ ↦ θ ⊖ y
    let y = eigen_preimage(&set.ring.tau, s, x0_base.as_ref().expect("checked"))?;
    let theta1 = ops.ominus(theta, &ext.embed(&y)?)?;
    let x1 = set.twist(&theta1)?;
    let eta = ext.eta();
    let in_bp = in_principal_ideal(&ext.eta_pow(pp as u32), &(&x1 * &eta))?;
    step(steps, "lemma_shift", "θ₁ = θ ⊖ y has (s*θ₁) ⊖ δτ(θ₁) ∈ A*_p", in_bp);
    let Some(x1b) = set.in_base(&x1)? else { return Ok(None) };
    let r_inv = inv_mod(r % pp, pp).expect("r prime to p");
    let t = r * r_inv;
    let theta2 = ops.star(t, &theta1);
    let x2 = set.twist(&theta2)?;
    step(steps, "lemma_shift", "θ₂ = (rr')*θ₁ has twist (rr')*z₁", x2 == ops.star(t, &x1));

    // recover z with r'*z₁ = zη^{p−1}
    let v = bops.star(r_inv, &x1b);
    let Some(mut z) = solve_multiple(&base.eta_pow(pp as u32 - 1), &v)? else {
        step(steps, "extract_z", "r'*z₁ ∈ η^{p−1}R", false);
        return Ok(None);
    };
    let w = |z: &RingElem| -> Result<RingElem> { ext.embed(&(&bops.star_p(r, z) * &base.eta_pow(pp as u32 - 1))) };
    let tau_form = |th: &RingElem, z: &RingElem| -> Result<bool> {
        Ok(set.tau.delta_tau(th)? == ops.ominus(&ops.star(s, th), &w(z)?)?)
    };
    if !step(steps, "extract_z", "δτ(θ₂) = (s*θ₂) ⊖ (r *_p z)η^{p−1}", tau_form(&theta2, &z)?) {
        return Ok(None);
    }

    // d = (p #_p θ) ⊖_p N(z)
    let sharp = ops.sharp_p(pp, &theta2)?;
    let Some(sharp_b) = set.in_base(&sharp)? else { return Ok(None) };
    let d = bops.ominus_p(&sharp_b, &norm_operator_n(&set.ring.tau, &z)?)?;
    step(steps, "defect", "δ^pτ(d) = s *_p d", set.ring.tau.delta_p_tau(&d)? == bops.star_p(s, &d));
    let n = bops.star_p(r, &d);
    let c = modp(-(s as i64) * r_inv as i64, pp);
    let m = n.scale_int(c as i64);
    z = bops.oplus_p(&z, &m);
    let d = bops.ominus_p(&sharp_b, &norm_operator_n(&set.ring.tau, &z)?)?;
    let ok = step(steps, "m_correction", "z ↦ z ⊕_p m keeps the τ-relation", tau_form(&theta2, &z)?)
        & step(steps, "m_correction", "r *_p d = 0", bops.star_p(r, &d).is_zero());
    if !ok {
        return Ok(None);
    }

    // rr' = 1 + p·m₂, e = m₂ *_p (⊖_p d), d = p *_p e
    let m2 = (t - 1) / pp;
    let neg_d = bops.ominus_p(&base.zero(), &d)?;
    let e = bops.star_p(m2, &neg_d);
    step(steps, "e_correction", "p *_p e = d", bops.star_p(pp, &e) == d);
    let theta3 = ops.ominus(&theta2, &ext.embed(&(&e * &base.eta_pow(pp as u32 - 1)))?)?;
    let sharp_ok = ops.sharp_p(pp, &theta3)? == ext.embed(&norm_operator_n(&set.ring.tau, &z)?)?;
    let ok = step(steps, "e_correction", "p #_p θ' = N(z)", sharp_ok)
        & step(steps, "e_correction", "δτ(θ') = (s*θ') ⊖ (r *_p z)η^{p−1}", tau_form(&theta3, &z)?);
    Ok(ok.then_some((theta3, z)))
}

/// Shifts `t*(θ ⊖ y)` with `y ∈ R`, `t ∈ {1, rr'}`, and every `z ∈ R`.
fn search(set: &Setting, theta: &RingElem) -> Result<Option<(RingElem, RingElem)>> {
    let base = &set.ring.ctx;
    ensure!(base.is_finite(), Unsupported, "the fallback search needs a finite base");
    let ops = set.ops();
    let pp = base.prime().get() as u64;
    let r = set.ring.choice.r;
    let ts = if r == 0 { vec![1] } else { vec![1, r * inv_mod(r % pp, pp).expect("r prime to p")] };
    let elems = base.elements()?;
    for t in ts {
        for y in &elems {
            if !EtaOps::new(base).phi(y).is_unit()? {
                continue;
            }
            let th = ops.star(t, &ops.ominus(theta, &set.ext.embed(y)?)?);
            for z in &elems {
                if set.is_normal_form(&th, z)? {
                    return Ok(Some((th, z.clone())));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenReport {
    pub samples: usize,
    pub seed: u64,
    /// `δτ(v_a) ≡ a*v_a` modulo `B*_p` for every sample and `a`.
    pub eigenvectors: bool,
    /// `⊕_a v_a ≡ x`.
    pub decomposition: bool,
    /// `N'(v_a) ∈ B*_p` for `a ≠ s`.
    pub annihilated_off_s: bool,
    /// `N'(v_s) ≡ (−1/s)*v_s`.
    pub scalar_on_s: bool,
}

impl EigenReport {
    pub fn passed(&self) -> bool {
        self.eigenvectors && self.decomposition && self.annihilated_off_s && self.scalar_on_s
    }
}

/// `F_p[⟨δτ⟩]`-decomposition of `B*/B*_p` on random units of a finite `S`.
pub fn eigen_check(tau: &TauAction, s: u64, samples: usize, seed: u64) -> Result<EigenReport> {
    let ext = tau.hom.source();
    let ops = EtaOps::new(ext);
    let pp = ext.prime().get() as u64;
    let eta_p = ext.eta_pow(pp as u32);
    let eta = ext.eta();
    let in_bp = |x: &RingElem| in_principal_ideal(&eta_p, &(x * &eta));
    let same = |a: &RingElem, b: &RingElem| -> Result<bool> { in_bp(&ops.ominus(a, b)?) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = EigenReport {
        samples,
        seed,
        eigenvectors: true,
        decomposition: true,
        annihilated_off_s: true,
        scalar_on_s: true,
    };
    let mut done = 0;
    while done < samples {
        let x = ext.random_element(&mut rng)?;
        if !ops.phi(&x).is_unit()? {
            continue;
        }
        done += 1;
        let orbit = tau_orbit(tau, &x, pp as usize - 1)?;
        let mut total = ext.zero();
        for a in 1..pp {
            let inv_a = inv_mod(a, pp).expect("a ≠ 0");
            let mut v = ext.zero();
            let mut ak = 1u64;
            for xk in &orbit {
                v = ops.oplus(&v, &ops.star((pp - ak) % pp, xk));
                ak = ak * inv_a % pp;
            }
            total = ops.oplus(&total, &v);
            rep.eigenvectors &= same(&tau.delta_tau(&v)?, &ops.star(a, &v))?;
            let nv = norm_operator_n_prime(tau, &v)?;
            if a == s % pp {
                let c = (pp - inv_mod(a, pp).expect("a ≠ 0")) % pp;
                rep.scalar_on_s &= same(&nv, &ops.star(c, &v))?;
            } else {
                rep.annihilated_off_s &= in_bp(&nv)?;
            }
        }
        rep.decomposition &= same(&total, &x)?;
    }
    Ok(rep)
}
