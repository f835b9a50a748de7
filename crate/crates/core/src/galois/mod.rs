//! Cyclic degree-p extensions `S = R[Z]/(Z^p + g(Z) − a)` with `σ(θ) = ρθ + 1`.

mod lift;
mod normal_basis;

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::cyclotomic::{compute_eta_data, delta_s, CycInt, Prime};
use crate::error::{ensure, Error, Result};
use crate::eta_calculus::EtaOps;
use crate::ring::{BaseRing, CoeffMap, RingBuilder, RingCtx, RingElem, RingHom};

pub use lift::{lift_extension, preimage, LiftReport};
pub use normal_basis::{normal_basis_coefficients, normal_basis_to_theta, NormalBasisResult};

/// `Z^p + g(Z) − u` with `g(Z) = x Σ_{i=1}^{p−1} b_i η^{i−1} Z^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenASPoly {
    pub p: Prime,
    /// `g_coeffs[i − 1]` is the coefficient of `Z^i`.
    pub g_coeffs: Vec<CycInt>,
}

impl GenASPoly {
    /// `g(z)` in the ring of `z`.
    pub fn eval_g(&self, z: &RingElem) -> RingElem {
        let ctx = z.ctx();
        let mut acc = ctx.zero();
        for c in self.g_coeffs.iter().rev() {
            acc = &(&acc + &ctx.from_cyc(c)) * z;
        }
        acc
    }

    /// `z^p + g(z) − a`.
    pub fn eval(&self, z: &RingElem, a: &RingElem) -> RingElem {
        &(&z.pow(self.p.get() as u64) + &self.eval_g(z)) - a
    }
}

/// Build `g` and verify `η^p(Z^p + g(Z) − u) = (1 + ηZ)^p − (1 + uη^p)` in `Z[ρ][Z, u]`,
/// `(1 + zη)^p = 1 + (g(z) + z^p)η^p`, and `g ≡ −Z (mod η)`.
pub fn build_gen_as_poly(p: Prime) -> Result<GenASPoly> {
    let ed = compute_eta_data(p)?;
    let mut g_coeffs = Vec::with_capacity(p.rank());
    let mut eta_pow = CycInt::one(p);
    for b in &ed.b {
        g_coeffs.push((&ed.x_unit * &eta_pow).scale(b));
        eta_pow = &eta_pow * &ed.eta;
    }
    let gp = GenASPoly { p, g_coeffs };
    check_gen_as_poly(&gp)?;
    Ok(gp)
}

fn check_gen_as_poly(gp: &GenASPoly) -> Result<()> {
    let p = gp.p;
    let pp = p.get();
    let ring = RingCtx::polynomial_ring(BaseRing::integers(p), &["Z", "u"])?;
    let z = ring.var("Z")?;
    let u = ring.var("u")?;
    let eta = ring.eta();
    let eta_p = ring.eta_pow(pp);
    let lhs = &eta_p * &gp.eval(&z, &u);
    let rhs = &(&ring.one() + &(&eta * &z)).pow(pp as u64) - &(&ring.one() + &(&u * &eta_p));
    ensure!(lhs == rhs, Consistency, "defining identity fails for p = {p}");
    let ops = EtaOps::new(&ring);
    let expect = &ops.phi_p(&(&gp.eval_g(&z) + &z.pow(pp as u64)));
    ensure!(&ops.phi(&z).pow(pp as u64) == expect, Consistency, "(1+zη)^p expansion fails for p = {p}");
    for (i, c) in gp.g_coeffs.iter().enumerate() {
        let want = if i == 0 { pp - 1 } else { 0 };
        ensure!(c.mod_eta() == want, Consistency, "g is not ≡ −Z mod η (coefficient of Z^{})", i + 1);
    }
    if pp == 2 {
        ensure!(gp.g_coeffs == [CycInt::from_int(p, -1)], Consistency, "g(Z) ≠ −Z at p = 2");
    }
    Ok(())
}

/// Whether `1 + aη^p` is a unit, with the inverse as witness.
#[derive(Clone, Debug, Serialize)]
pub struct Separability {
    pub separable: bool,
    pub unit: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse: Option<String>,
}

pub fn is_separable_param(a: &RingElem) -> Result<Separability> {
    let ops = EtaOps::new(a.ctx());
    let d = ops.phi_p(a);
    let inv = d.try_invert()?;
    Ok(Separability { separable: inv.is_some(), unit: d.to_string(), inverse: inv.map(|x| x.to_string()) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisCertificate {
    pub base: String,
    pub a: String,
    pub separable: bool,
    /// `σ^p = id` and `σ^k(θ) ≠ θ` for `0 < k < p`.
    pub order_p: bool,
    /// `σ^i(θ) = ρ^i θ + δ_i`.
    pub sigma_powers: bool,
    /// `Z^p + g(Z) − a = Π_i (Z − σ^i θ)`.
    pub factorization: bool,
    pub fixed_ring: bool,
    pub fixed_ring_method: String,
    /// Every `σ^i θ − θ`, `0 < i < p`, is a unit (inverse verified).
    pub discriminant_unit: bool,
    /// `Π_j σ^j(σ^i θ − θ) = ρ^{p(p−1)/2} δ_i^p (1 + aη^p)` for all `0 < i < p`.
    pub discriminant_closed_form: bool,
    /// Whether the same product also equals `δ_i (1 + aη^p)` (the first-power form).
    pub discriminant_first_power_form: bool,
    /// `p #_p θ = g(θ) + θ^p`, and it is σ-fixed.
    pub sharp_theta: bool,
}

impl GaloisCertificate {
    /// The checks that decide Galois-ness.
    pub fn passed(&self) -> bool {
        self.separable
            && self.order_p
            && self.sigma_powers
            && self.factorization
            && self.fixed_ring
            && self.discriminant_unit
            && self.discriminant_closed_form
            && self.sharp_theta
    }
}

/// `S = R[θ]/(θ^p + g(θ) − a)` with `σ`.
#[derive(Clone, Debug)]
pub struct GaloisExt {
    pub base: Arc<RingCtx>,
    pub a: RingElem,
    pub ext: Arc<RingCtx>,
    pub theta: RingElem,
    pub sigma: RingHom,
    pub gpoly: GenASPoly,
    pub certificate: GaloisCertificate,
}

pub const THETA: &str = "theta";

/// Present `S` and `σ` without running the verification.
pub fn present_extension(base: &Arc<RingCtx>, a: &RingElem, name: &str) -> Result<(Arc<RingCtx>, RingElem, RingHom)> {
    ensure!(a.ctx().same(base), Structural, "parameter lives in {}, not {}", a.ctx().describe(), base.describe());
    ensure!(base.var_index(name).is_none(), Argument, "base already has a variable named {name}");
    let p = base.prime();
    let gp = build_gen_as_poly(p)?;
    let pre = RingBuilder::from_ctx(base).var(name).build()?;
    let t = pre.var(name)?;
    let a_pre = pre.embed(a)?;
    ensure!(a.den_power() == 0, Unsupported, "parameter must be a polynomial in the base presentation");
    let rhs = &a_pre - &gp.eval_g(&t);
    let ext = RingBuilder::from_ctx(base).var(name).rule(name, p.get(), &rhs)?.build()?;
    let theta = ext.var(name)?;
    let mut images: Vec<RingElem> = (0..base.nvars()).map(|v| ext.var_at(v)).collect();
    images.push(&(&ext.rho() * &theta) + &ext.one());
    let sigma = RingHom::new(&ext, &ext, images, CoeffMap::Identity)
        .map_err(|e| Error::Consistency(format!("σ does not respect the defining relation: {e}")))?;
    Ok((ext, theta, sigma))
}

pub fn build_extension(base: &Arc<RingCtx>, a: &RingElem) -> Result<GaloisExt> {
    let sep = is_separable_param(a)?;
    if !sep.separable {
        return Err(Error::UnitRequired(format!(
            "1 + aη^p = {} is not a unit; the extension is not separable",
            sep.unit
        )));
    }
    let (ext, theta, sigma) = present_extension(base, a, THETA)?;
    let gpoly = build_gen_as_poly(base.prime())?;
    let certificate = verify(base, a, &ext, &theta, &sigma, &gpoly)?;
    Ok(GaloisExt { base: Arc::clone(base), a: a.clone(), ext, theta, sigma, gpoly, certificate })
}

/// `σ^k(x)` for `k = 0..n`.
pub fn orbit(sigma: &RingHom, x: &RingElem, n: usize) -> Result<Vec<RingElem>> {
    let mut out = vec![x.clone()];
    for _ in 1..n {
        let next = sigma.apply(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

fn verify(
    base: &Arc<RingCtx>,
    a: &RingElem,
    ext: &Arc<RingCtx>,
    theta: &RingElem,
    sigma: &RingHom,
    gp: &GenASPoly,
) -> Result<GaloisCertificate> {
    let p = base.prime();
    let pp = p.get() as usize;
    let ops = EtaOps::new(ext);
    let a_s = ext.embed(a)?;
    let conj = orbit(sigma, theta, pp + 1)?;

    let order_p = &conj[pp] == theta && conj[1..pp].iter().all(|c| c != theta);
    let sigma_powers = (0..pp).all(|i| {
        let want = &(&ext.from_cyc(&CycInt::rho_pow(p, i as i64)) * theta) + &ext.from_cyc(&delta_s(p, i as u64));
        conj[i] == want
    });

    // Π (Z − σ^i θ) over S[Z]
    let sz = RingBuilder::from_ctx(ext).var("Z").build()?;
    let z = sz.var("Z")?;
    let mut prod = sz.one();
    for c in &conj[..pp] {
        prod = &prod * &(&z - &sz.embed(c)?);
    }
    let factorization = prod == gp.eval(&z, &sz.embed(&a_s)?);

    let (fixed_ring, fixed_ring_method) = fixed_ring_check(base, ext, sigma)?;

    let unit = ops.phi_p(&a_s);
    let sign = CycInt::rho_pow(p, (pp * (pp - 1) / 2) as i64);
    let mut discriminant_unit = true;
    let mut closed = true;
    let mut first_power = true;
    for i in 1..pp {
        let d = &conj[i] - theta;
        let ds = orbit(sigma, &d, pp)?;
        let rest = ds[1..].iter().fold(ext.one(), |acc, x| &acc * x);
        let norm = &d * &rest;
        let delta = delta_s(p, i as u64);
        closed &= norm == (&unit * &ext.from_cyc(&(&sign * &delta.pow(pp as u64))));
        first_power &= norm == (&unit * &ext.from_cyc(&delta));
        // d · rest · N^{-1} = 1 with N in the base ring
        let ok = if norm.lives_in_prefix(base.nvars()) {
            match norm.restrict_to(base)?.try_invert()? {
                Some(inv) => (&d * &(&rest * &ext.embed(&inv)?)).is_one(),
                None => false,
            }
        } else {
            false
        };
        discriminant_unit &= ok;
    }

    let sharp = ops.sharp_p(pp as u64, theta)?;
    let sharp_theta = sharp == &gp.eval_g(theta) + &theta.pow(pp as u64) && sigma.apply(&sharp)? == sharp;

    Ok(GaloisCertificate {
        base: base.describe(),
        a: a.to_string(),
        separable: true,
        order_p,
        sigma_powers,
        factorization,
        fixed_ring,
        fixed_ring_method,
        discriminant_unit,
        discriminant_closed_form: closed,
        discriminant_first_power_form: first_power,
        sharp_theta,
    })
}

/// Whether `S^σ = R`.
///
/// Finite `S`: `|ker(σ − 1)| = |S| / |im(σ − 1)|` is compared with `|R|`.
/// Exact `Z[ρ]` base: σ is triangular on `1, θ, …, θ^{p−1}` with diagonal `ρ^j`,
/// and `ρ^j − 1 = δ_j η` is a non-zero-divisor, so only constants are fixed.
pub fn fixed_ring_check(base: &Arc<RingCtx>, ext: &Arc<RingCtx>, sigma: &RingHom) -> Result<(bool, String)> {
    let p = base.prime();
    let pp = p.get() as usize;
    if let Some(total) = ext.size() {
        let gens = ext.additive_generators()?;
        let images: Vec<Vec<RingElem>> = gens.iter().map(|g| Ok(vec![&sigma.apply(g)? - g])).collect::<Result<_>>()?;
        let im = ext.zspan_size(&images)?;
        let kernel = total / im;
        let base_size = base.size().ok_or_else(|| Error::Consistency("finite extension of an infinite base".into()))?;
        let base_fixed = (0..base.nvars()).all(|v| sigma.apply(&ext.var_at(v)).is_ok_and(|x| x == ext.var_at(v)));
        return Ok((kernel == base_size && base_fixed, format!("kernel count: |S^σ| = {kernel}, |R| = {base_size}")));
    }
    if base.has_exact_base() {
        let t = base.nvars();
        let theta = ext.var_at(t);
        let mut ok = true;
        for j in 0..pp {
            let img = sigma.apply(&theta.pow(j as u64))?;
            let parts = img.split_by_var(t);
            ok &= parts.len() == j + 1;
            ok &= parts.last().is_some_and(|c| *c == ext.from_cyc(&CycInt::rho_pow(p, j as i64)));
        }
        return Ok((ok, "triangular σ on the power basis over a Z[ρ]-torsion-free base".into()));
    }
    Err(Error::Unsupported(format!(
        "fixed ring of an extension of {} (finite coefficients, free variables)",
        base.describe()
    )))
}

/// `θ' = θ ⊕ z` generates the extension with parameter `a ⊕_p (g(z) + z^p)`.
#[derive(Clone, Debug)]
pub struct ShiftResult {
    pub new_a: RingElem,
    pub shifted: GaloisExt,
    /// `θ' ↦ θ ⊕ z`.
    pub iso: RingHom,
    /// `θ ↦ θ' ⊖ z`.
    pub inverse: RingHom,
    pub commutes_with_sigma: bool,
    pub round_trip: bool,
}

pub fn shift_theta(ext: &GaloisExt, z: &RingElem) -> Result<ShiftResult> {
    let base = &ext.base;
    let p = base.prime().get();
    let bops = EtaOps::new(base);
    bops.phi(z).inverse("1 + zη")?;
    let new_a = bops.oplus_p(&ext.a, &(&ext.gpoly.eval_g(z) + &z.pow(p as u64)));
    let shifted = build_extension(base, &new_a)?;

    let sops = EtaOps::new(&ext.ext);
    let zs = ext.ext.embed(z)?;
    let mut images: Vec<RingElem> = (0..base.nvars()).map(|v| ext.ext.var_at(v)).collect();
    images.push(sops.oplus(&ext.theta, &zs));
    let iso = RingHom::new(&shifted.ext, &ext.ext, images, CoeffMap::Identity)?;

    let tops = EtaOps::new(&shifted.ext);
    let zt = shifted.ext.embed(z)?;
    let mut back: Vec<RingElem> = (0..base.nvars()).map(|v| shifted.ext.var_at(v)).collect();
    back.push(tops.ominus(&shifted.theta, &zt)?);
    let inverse = RingHom::new(&ext.ext, &shifted.ext, back, CoeffMap::Identity)?;

    let th = &shifted.theta;
    let commutes_with_sigma = iso.apply(&shifted.sigma.apply(th)?)? == ext.sigma.apply(&iso.apply(th)?)?;
    let round_trip = inverse.apply(&iso.apply(th)?)? == *th && iso.apply(&inverse.apply(&ext.theta)?)? == ext.theta;
    Ok(ShiftResult { new_a, shifted, iso, inverse, commutes_with_sigma, round_trip })
}

/// Serializable summary of `g`.
#[derive(Clone, Debug, Serialize)]
pub struct GPolyReport {
    pub p: u32,
    /// Coefficient of `Z^i` at index `i − 1`, each as a `Z[ρ]` coordinate vector.
    pub g: Vec<Vec<String>>,
    pub g_display: Vec<String>,
    pub identity_checked: bool,
}

impl GenASPoly {
    pub fn report(&self) -> GPolyReport {
        GPolyReport {
            p: self.p.get(),
            g: self.g_coeffs.iter().map(|c| c.coeffs().iter().map(BigInt::to_string).collect()).collect(),
            g_display: self.g_coeffs.iter().map(ToString::to_string).collect(),
            identity_checked: true,
        }
    }
}

#[cfg(test)]
mod tests;
