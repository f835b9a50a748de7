//! `S = R[θ]/(θ^p + g(θ) − N(z))` with σ and τ, `τ(θ) = δ^{-1}((s*θ) ⊖ (r *_p z)η^{p−1})`.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::norm::{norm_operator_n, norm_report, NormReport};
use super::tau_ring::{in_principal_ideal, TauEquippedRing};
use crate::cyclotomic::{delta_s, CycInt, Prime};
use crate::error::{ensure, Error, Result};
use crate::eta_calculus::{EtaOps, TauAction};
use crate::galois::{build_extension, GaloisCertificate, GaloisExt};
use crate::ring::{BaseRing, CoeffMap, RingBuilder, RingCtx, RingElem, RingHom};

#[derive(Clone, Debug)]
pub struct DescentExt {
    pub ring: TauEquippedRing,
    pub z: RingElem,
    pub u: RingElem,
    pub galois: GaloisExt,
    /// τ on `S`.
    pub tau: TauAction,
}

impl DescentExt {
    pub fn ext(&self) -> &Arc<RingCtx> {
        &self.galois.ext
    }

    pub fn theta(&self) -> &RingElem {
        &self.galois.theta
    }

    /// `ε = Σ_{j=0}^{p−2} τ^j(θ)`.
    pub fn epsilon(&self) -> Result<RingElem> {
        let pp = self.ring.ctx.prime().get();
        let mut cur = self.theta().clone();
        let mut acc = cur.clone();
        for _ in 1..pp.saturating_sub(1).max(1) {
            cur = self.tau.apply(&cur)?;
            acc = &acc + &cur;
        }
        Ok(acc)
    }
}

fn delta_inverse(p: Prime, s: u64) -> Result<CycInt> {
    CycInt::one(p).exact_div(&delta_s(p, s)).ok_or_else(|| Error::Consistency(format!("δ_{s} is not a unit")))
}

/// `τ(θ)` given `z ∈ R`; the inverse of `1 + (r *_p z)η^p` is taken in `R`.
fn tau_theta(ring: &TauEquippedRing, z: &RingElem, ext: &Arc<RingCtx>, theta: &RingElem) -> Result<RingElem> {
    let p = ring.ctx.prime();
    let ops_r = EtaOps::new(&ring.ctx);
    let y = &ops_r.star_p(ring.choice.r, z) * ops_r.eta_pm1();
    let inv = ops_r.phi(&y).inverse("1 + (r *_p z)η^p")?;
    let ops = EtaOps::new(ext);
    let num = &ops.star(ring.choice.s, theta) - &ext.embed(&y)?;
    let dinv = ext.from_cyc(&delta_inverse(p, ring.choice.s)?);
    Ok(&(&num * &ext.embed(&inv)?) * &dinv)
}

/// Build `S` over the τ-equipped ring `R` from `z ∈ R` and verify that it is Galois.
pub fn build_descent_ext(ring: &TauEquippedRing, z: &RingElem) -> Result<DescentExt> {
    ensure!(z.ctx().same(&ring.ctx), Structural, "z is not in {}", ring.ctx.describe());
    let u = norm_operator_n(&ring.tau, z)?;
    let galois = build_extension(&ring.ctx, &u)?;
    let ext = &galois.ext;
    let mut images: Vec<RingElem> = (0..ring.ctx.nvars()).map(|v| ext.var_at(v)).collect();
    images.push(tau_theta(ring, z, ext, &galois.theta)?);
    let coeff = if ring.choice.s == 1 { CoeffMap::Identity } else { CoeffMap::Galois(ring.choice.s) };
    let hom = RingHom::new(ext, ext, images, coeff)
        .map_err(|e| Error::Consistency(format!("τ does not respect the defining relation: {e}")))?;
    let tau = TauAction::new(hom, ring.choice.s)?;
    Ok(DescentExt { ring: ring.clone(), z: z.clone(), u, galois, tau })
}

/// Whether `x ∈ ηS`: exact division over `Z[ρ]`, ideal membership in finite rings.
fn divisible_by_eta(x: &RingElem) -> Result<Option<bool>> {
    let ctx = x.ctx();
    if ctx.has_exact_base() {
        return Ok(Some(x.exact_divide_by_eta_power(1).is_ok()));
    }
    if ctx.is_finite() {
        return Ok(Some(in_principal_ideal(&ctx.eta(), x)?));
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonReport {
    pub epsilon: String,
    pub tau_fixed: bool,
    /// `σ(ε) ≡ ε − 1 (mod η)`.
    pub sigma_shift: Option<bool>,
    /// `1, ε, …, ε^{p−1}` is an `R`-basis of `S`.
    pub spans: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TauFixedReport {
    pub size_s_tau: String,
    pub size_r_tau: String,
    /// `|S^τ| = |R^τ|^p`.
    pub rank_p: bool,
    /// `ε^i` times the monomials of `R'` span `S^τ` additively.
    pub epsilon_basis: bool,
    /// `S^τ ∩ S^σ = R^τ`.
    pub joint_fixed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub ring: String,
    pub p: u32,
    pub s: u64,
    pub r: u64,
    pub z: String,
    pub u: String,
    pub tau_theta: String,
    /// τ has order `p − 1` on `S` (1 at `p = 2`).
    pub tau_order: bool,
    pub commutes_with_sigma: bool,
    /// `τ(α)(1 + zη^p)^r = α^s` for `α = 1 + θη`.
    pub kummer: bool,
    /// `τ(θ) ≡ θ (mod η)`.
    pub eta_reduction: Option<bool>,
    pub norm: NormReport,
    pub epsilon: EpsilonReport,
    /// `{x ∈ S : σ(1 + xη) = 1 + xη}·η = Rη`.
    pub lemma_fixed_units: Option<bool>,
    pub tau_fixed: Option<TauFixedReport>,
    pub galois: GaloisCertificate,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.tau_order
            && self.commutes_with_sigma
            && self.kummer
            && self.eta_reduction.unwrap_or(true)
            && self.norm.recursion
            && self.norm.kummer_form
            && self.epsilon.tau_fixed
            && self.epsilon.sigma_shift.unwrap_or(true)
            && self.epsilon.spans.unwrap_or(true)
            && self.lemma_fixed_units.unwrap_or(true)
            && self.tau_fixed.as_ref().is_none_or(|t| t.rank_p && t.epsilon_basis && t.joint_fixed)
            && self.galois.passed()
    }
}

type ElemMap<'a> = &'a dyn Fn(&RingElem) -> Result<RingElem>;

fn kernel_size(ctx: &Arc<RingCtx>, maps: &[ElemMap<'_>]) -> Result<BigInt> {
    let total = ctx.size().ok_or_else(|| Error::Unsupported("kernel of an infinite ring".into()))?;
    let gens = ctx.additive_generators()?;
    let images: Vec<Vec<RingElem>> =
        gens.iter().map(|g| maps.iter().map(|f| f(g)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    Ok(total / ctx.zspan_size(&images)?)
}

fn tau_fixed_report(d: &DescentExt, eps: &RingElem) -> Result<TauFixedReport> {
    let s = d.ext();
    let r = &d.ring.ctx;
    let pp = r.prime().get() as usize;
    let tau_s = |x: &RingElem| Ok(&d.tau.apply(x)? - x);
    let sigma_s = |x: &RingElem| Ok(&d.galois.sigma.apply(x)? - x);
    let tau_r = |x: &RingElem| Ok(&d.ring.tau.apply(x)? - x);
    let s_tau = kernel_size(s, &[&tau_s])?;
    let r_tau = kernel_size(r, &[&tau_r])?;
    let joint = kernel_size(s, &[&tau_s, &sigma_s])?;
    let rank_p = s_tau == num_traits::pow(r_tau.clone(), pp);
    let mons = r.finite().expect("finite").monomials().to_vec();
    let mut gens = Vec::new();
    let mut ok = true;
    for i in 0..pp {
        let e = eps.pow(i as u64);
        ok &= d.tau.apply(&e)? == e;
        for m in &mons {
            let mono = m.iter().enumerate().fold(r.one(), |acc, (v, &e)| &acc * &r.var_at(v).pow(e as u64));
            gens.push(vec![&s.embed(&mono)? * &e]);
        }
    }
    let epsilon_basis = ok && s.zspan_size(&gens)? == s_tau;
    Ok(TauFixedReport {
        size_s_tau: s_tau.to_string(),
        size_r_tau: r_tau.to_string(),
        rank_p,
        epsilon_basis,
        joint_fixed: joint == r_tau,
    })
}

pub fn descent_report(d: &DescentExt) -> Result<DescentReport> {
    let ring = &d.ring;
    let p = ring.ctx.prime();
    let pp = p.get();
    let s_ctx = d.ext();
    let theta = d.theta();
    let sigma = &d.galois.sigma;
    let ops = EtaOps::new(s_ctx);
    let tau_theta = d.tau.apply(theta)?;

    let expect_order = if ring.choice.s == 1 { 1 } else { pp - 1 };
    let tau_order = d.tau.order(pp)? == Some(expect_order);
    let commutes_with_sigma = sigma.apply(&tau_theta)? == d.tau.apply(&sigma.apply(theta)?)?;

    let alpha = ops.phi(theta);
    let w = s_ctx.embed(&EtaOps::new(&ring.ctx).phi_p(&d.z))?;
    let kummer = &d.tau.apply(&alpha)? * &w.pow(ring.choice.r) == alpha.pow(ring.choice.s);

    let eta_reduction = divisible_by_eta(&(&tau_theta - theta))?;
    let norm = norm_report(ring, &d.z)?;

    let eps = d.epsilon()?;
    let tau_fixed_eps = d.tau.apply(&eps)? == eps;
    let shift = &(&sigma.apply(&eps)? - &eps) + &s_ctx.one();
    let sigma_shift = divisible_by_eta(&shift)?;
    let (spans, lemma_fixed_units, tau_fixed) = if s_ctx.is_finite() {
        let sub: Vec<RingElem> =
            ring.ctx.additive_generators()?.iter().map(|g| s_ctx.embed(g)).collect::<Result<_>>()?;
        let size = ring.ctx.size().expect("finite");
        let powers: Vec<RingElem> = (0..pp).map(|j| eps.pow(j as u64)).collect();
        let spans = s_ctx.is_basis_over(&powers, &sub, &size)?;
        (Some(spans), Some(lemma_fixed_units_check(d)?), Some(tau_fixed_report(d, &eps)?))
    } else {
        (None, None, None)
    };

    Ok(DescentReport {
        ring: ring.ctx.describe(),
        p: pp,
        s: ring.choice.s,
        r: ring.choice.r,
        z: d.z.to_string(),
        u: d.u.to_string(),
        tau_theta: tau_theta.to_string(),
        tau_order,
        commutes_with_sigma,
        kummer,
        eta_reduction,
        norm,
        epsilon: EpsilonReport { epsilon: eps.to_string(), tau_fixed: tau_fixed_eps, sigma_shift, spans },
        lemma_fixed_units,
        tau_fixed,
        galois: d.galois.certificate.clone(),
    })
}

/// With `K = {x : (σx − x)η = 0}` ⊇ `ann(η)`: `|Kη| = |ηS| / |im((σ − 1)η)|`, compared with `|ηR|`.
fn lemma_fixed_units_check(d: &DescentExt) -> Result<bool> {
    let s = d.ext();
    let r = &d.ring.ctx;
    let eta_s = s.eta();
    let gens = s.additive_generators()?;
    let eta_span = s.zspan_size(&gens.iter().map(|g| vec![g * &eta_s]).collect::<Vec<_>>())?;
    let im = s.zspan_size(
        &gens.iter().map(|g| Ok(vec![&(&d.galois.sigma.apply(g)? - g) * &eta_s])).collect::<Result<Vec<_>>>()?,
    )?;
    let eta_r = r.eta();
    let r_span = r.zspan_size(&r.additive_generators()?.iter().map(|g| vec![g * &eta_r]).collect::<Vec<_>>())?;
    Ok(&eta_span / &im == r_span && (&eta_span % &im) == BigInt::from(0))
}

/// `R = Z[ρ][x_0..x_{p−2}](1/C)` with `C = Π_k τ^k(1 + zη^p)` and `z = Σ x_i ρ^i`.
pub fn generic_ring(p: Prime) -> Result<(TauEquippedRing, RingElem)> {
    let names: Vec<String> = (0..p.rank()).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let free = RingCtx::polynomial_ring(BaseRing::integers(p), &refs)?;
    let z = generic_z(&free)?;
    let tfree = TauEquippedRing::new(&free)?;
    let w = EtaOps::new(&free).phi_p(&z);
    let mut c = free.one();
    let mut cur = w;
    for _ in 0..tfree.choice.tau_order().max(1) {
        c = &c * &cur;
        cur = tfree.tau.apply(&cur)?;
    }
    let ctx = RingBuilder::from_ctx(&free).inverse(&c, Some("C"))?.build()?;
    let ring = TauEquippedRing::new(&ctx)?;
    let z = generic_z(&ctx)?;
    Ok((ring, z))
}

fn generic_z(ctx: &Arc<RingCtx>) -> Result<RingElem> {
    let p = ctx.prime();
    let mut z = ctx.zero();
    for i in 0..p.rank() {
        z = &z + &(&ctx.var(&format!("x{i}"))? * &ctx.from_cyc(&CycInt::rho_pow(p, i as i64)));
    }
    Ok(z)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecializationReport {
    pub ring: String,
    pub values: Vec<String>,
    pub descent: DescentReport,
    /// Against the symbolic extension when it was built: `x_i ↦ values`, `θ ↦ θ` is a ring map
    /// and it intertwines τ and σ.
    pub map: Option<bool>,
    pub tau_compatible: Option<bool>,
    pub sigma_compatible: Option<bool>,
}

impl SpecializationReport {
    pub fn passed(&self) -> bool {
        self.descent.passed()
            && self.map.unwrap_or(true)
            && self.tau_compatible.unwrap_or(true)
            && self.sigma_compatible.unwrap_or(true)
    }
}

/// The descent at `z = Σ values[i] ρ^i` in a finite `Z[ρ] ⊗ R'`, compared with the generic
/// extension when one is given.
pub fn specialize(
    generic: Option<&DescentExt>,
    target: &Arc<RingCtx>,
    values: &[RingElem],
) -> Result<(DescentExt, SpecializationReport)> {
    let p = target.prime();
    ensure!(values.len() == p.rank(), Argument, "expected {} values, got {}", p.rank(), values.len());
    let tring = TauEquippedRing::new(target)?;
    let z = values
        .iter()
        .enumerate()
        .fold(target.zero(), |acc, (i, v)| &acc + &(v * &target.from_cyc(&CycInt::rho_pow(p, i as i64))));
    let spec = build_descent_ext(&tring, &z)?;
    let (mut map, mut tau_compatible, mut sigma_compatible) = (None, None, None);
    if let Some(generic) = generic {
        let h = RingHom::new(&generic.ring.ctx, target, values.to_vec(), CoeffMap::Identity)?;
        ensure!(h.apply(&generic.z)? == z, Consistency, "specialization of z disagrees");
        let mut images: Vec<RingElem> = values.iter().map(|v| spec.ext().embed(v)).collect::<Result<_>>()?;
        images.push(spec.theta().clone());
        match RingHom::new(generic.ext(), spec.ext(), images, CoeffMap::Identity) {
            Ok(big) => {
                let th = generic.theta();
                map = Some(true);
                tau_compatible = Some(big.apply(&generic.tau.apply(th)?)? == spec.tau.apply(&big.apply(th)?)?);
                sigma_compatible =
                    Some(big.apply(&generic.galois.sigma.apply(th)?)? == spec.galois.sigma.apply(&big.apply(th)?)?);
            }
            Err(_) => map = Some(false),
        }
    }
    let descent = descent_report(&spec)?;
    let report = SpecializationReport {
        ring: target.describe(),
        values: values.iter().map(ToString::to_string).collect(),
        descent,
        map,
        tau_compatible,
        sigma_compatible,
    };
    Ok((spec, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericDescentReport {
    pub p: u32,
    pub symbolic: Option<DescentReport>,
    /// Modulo η, `N(z) = (p − 1)s^{p−2} z`: τ is trivial on `Z[ρ]/(η)` and `δ_s ≡ s`.
    pub norm_mod_eta_is_trace: bool,
    pub specializations: Vec<SpecializationReport>,
}

impl GenericDescentReport {
    pub fn passed(&self) -> bool {
        self.symbolic.as_ref().is_none_or(DescentReport::passed)
            && self.norm_mod_eta_is_trace
            && self.specializations.iter().all(SpecializationReport::passed)
    }
}

fn norm_mod_eta(p: Prime) -> Result<bool> {
    let names: Vec<String> = (0..p.rank()).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let free = RingCtx::polynomial_ring(BaseRing::integers(p), &refs)?;
    let t = TauEquippedRing::new(&free)?;
    let z = generic_z(&free)?;
    let n = norm_operator_n(&t.tau, &z)?;
    let low = RingCtx::polynomial_ring(BaseRing::residue_field(p), &refs)?;
    let h = RingHom::canonical(&free, &low)?;
    let pp = p.get();
    // δ_s ≡ s (mod η), so the k-th term carries s^{p−2−k}·s^{pk} ≡ s^{p−2} (mod p)
    let q = pp as u64;
    let sm = t.choice.s % q;
    let pw = |e: u32| (0..e).fold(1u64, |a, _| a * sm % q);
    let weight: u64 = (0..pp.saturating_sub(1)).map(|k| pw(pp - 2 - k) * pw(pp * k) % q).sum::<u64>() % q;
    Ok(h.apply(&n)? == h.apply(&z)?.scale_int(weight as i64))
}

/// The default specializations: `Z[ρ]/(p²)` at `z = 1` and `z = ρ`.
pub fn default_specializations(p: Prime) -> Result<Vec<(Arc<RingCtx>, Vec<RingElem>)>> {
    let pp = p.get() as i64;
    let t = RingCtx::coefficients(BaseRing::modulo(p, pp * pp)?);
    let mut out = Vec::new();
    for hot in 0..p.rank().min(2) {
        let vals = (0..p.rank()).map(|i| if i == hot { t.one() } else { t.zero() }).collect();
        out.push((Arc::clone(&t), vals));
    }
    Ok(out)
}

/// The generic construction with its symbolic checks when `symbolic`, then each specialization.
pub fn build_generic_descent(
    p: Prime,
    symbolic: bool,
    specs: &[(Arc<RingCtx>, Vec<RingElem>)],
) -> Result<(Option<DescentExt>, GenericDescentReport)> {
    let generic = if symbolic {
        let (ring, z) = generic_ring(p)?;
        Some(build_descent_ext(&ring, &z)?)
    } else {
        None
    };
    let symbolic = generic.as_ref().map(descent_report).transpose()?;
    let mut specializations = Vec::new();
    for (t, vals) in specs {
        specializations.push(specialize(generic.as_ref(), t, vals)?.1);
    }
    let report =
        GenericDescentReport { p: p.get(), symbolic, norm_mod_eta_is_trace: norm_mod_eta(p)?, specializations };
    Ok((generic, report))
}
