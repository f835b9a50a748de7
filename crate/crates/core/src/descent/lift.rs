//! Lifting a cyclic extension along `R' → R''` with `pR'' = 0`, for rings without `ρ`.
//!
//! Over `Z[ρ] ⊗ R''` the extension gets a generator in normal form, whose `z`
//! is read off in ρ-coordinates, lifted to `R'` coordinatewise, and used to
//! build the descent extension over `Z[ρ] ⊗ R'`; its τ-invariants lift `S''`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::generic::{build_descent_ext, descent_report, DescentReport};
use super::pipeline::{improve, PipelineReport, Setting};
use super::tau_ring::TauEquippedRing;
use crate::cyclotomic::CycInt;
use crate::error::{ensure, Error, Result};
use crate::eta_calculus::TauAction;
use crate::galois::{build_extension, lift_extension, normal_basis_to_theta, LiftReport, NormalBasisResult};
use crate::ring::{CoeffMap, Poly, RingBuilder, RingCtx, RingElem, RingHom};

const T: &str = "theta";

#[derive(Clone, Debug, Serialize)]
pub struct DescentLift {
    pub normal_basis: NormalBasisResult,
    pub pipeline: PipelineReport,
    /// ρ-coordinates of `z` over `R''`.
    pub z_coords: Vec<String>,
    /// The same coordinates read in `R'`.
    pub lifted_coords: Vec<String>,
    pub descent: DescentReport,
    /// `θ ↦ θ'` is a ring map `S → Z[ρ] ⊗ S''`.
    pub reduction_map: bool,
    pub tau_equivariant: bool,
    pub sigma_equivariant: bool,
    /// The image of `ε` is τ-fixed, and `ε^i` times monomials span `(Z[ρ] ⊗ S'')^τ = S''`.
    pub epsilon_reduces: bool,
}

impl DescentLift {
    pub fn passed(&self) -> bool {
        self.normal_basis.passed()
            && self.pipeline.normal_form
            && self.descent.passed()
            && self.reduction_map
            && self.tau_equivariant
            && self.sigma_equivariant
            && self.epsilon_reduces
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RhoFreeLiftReport {
    pub p: u32,
    pub source_ring: String,
    pub target_ring: String,
    pub target_a: String,
    /// `"degenerate"` at `p = 2` (τ is trivial and the lift is the plain one), `"descent"` otherwise.
    pub route: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<LiftReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descent: Option<DescentLift>,
}

impl RhoFreeLiftReport {
    pub fn passed(&self) -> bool {
        self.degenerate.as_ref().is_none_or(LiftReport::passed) && self.descent.as_ref().is_none_or(DescentLift::passed)
    }
}

/// Lift the Artin–Schreier extension `T^p − T − a''` of the ρ-free ring `R''` to `R'`.
///
/// Both rings are given as `Z[ρ]/(m)[vars]/(rules)`, read as `Z/m[vars]/(rules)`;
/// the target must have `m = p` and the same variables.
pub fn lift_without_rho(source: &Arc<RingCtx>, target: &Arc<RingCtx>, a: &RingElem) -> Result<RhoFreeLiftReport> {
    let p = source.prime();
    let pp = p.get();
    ensure!(target.prime() == p, Structural, "source and target have different primes");
    ensure!(a.ctx().same(target), Structural, "parameter is not in the target ring");
    let td = target.base().desc();
    ensure!(
        td.m == Some(pp as i64) && td.eta_power.is_none() && td.rho.is_none(),
        Argument,
        "the target must be Z/p[vars]/(rules) (pR'' = 0), got {}",
        target.describe()
    );
    ensure!(source.var_names() == target.var_names(), Argument, "source and target must use the same variables");
    ensure!(is_rho_free(a), Argument, "the parameter {a} involves ρ");
    let h = RingHom::canonical(source, target)?;
    let mut report = RhoFreeLiftReport {
        p: pp,
        source_ring: source.describe(),
        target_ring: target.describe(),
        target_a: a.to_string(),
        route: String::new(),
        degenerate: None,
        descent: None,
    };
    if pp == 2 {
        // Z[ρ] = Z and T² + g(T) − a is T² − T − a
        let ext = build_extension(target, a)?;
        report.route = "degenerate".into();
        report.degenerate = Some(lift_extension(&h, &ext)?.1);
        return Ok(report);
    }
    report.route = "descent".into();
    report.descent = Some(descent_lift(source, target, a)?);
    Ok(report)
}

fn is_rho_free(a: &RingElem) -> bool {
    a.den_power() == 0 && a.terms().values().all(|c| c.coeffs().iter().skip(1).all(num_traits::Zero::is_zero))
}

fn descent_lift(source: &Arc<RingCtx>, target: &Arc<RingCtx>, a: &RingElem) -> Result<DescentLift> {
    let p = source.prime();
    let pp = p.get() as u64;
    let r1 = TauEquippedRing::new(target)?;
    // Z[ρ] ⊗ S'' with σ(T) = T + 1 and τ trivial on T
    let pre = RingBuilder::from_ctx(target).var(T).build()?;
    let rhs = &pre.var(T)? + &pre.embed(a)?;
    let s1 = RingBuilder::from_ctx(target).var(T).rule(T, p.get(), &rhs)?.build()?;
    let t = s1.var(T)?;
    let fixed: Vec<RingElem> = (0..target.nvars()).map(|v| s1.var_at(v)).collect();
    let sigma1 = RingHom::new(&s1, &s1, [fixed.clone(), vec![&t + &s1.one()]].concat(), CoeffMap::Identity)?;
    let tau1 = TauAction::new(
        RingHom::new(&s1, &s1, [fixed, vec![t.clone()]].concat(), CoeffMap::Galois(r1.choice.s))?,
        r1.choice.s,
    )?;

    // Σ_i σ^i(−T^{p−1}) = 1
    let nb = normal_basis_to_theta(target, &sigma1, &-t.pow(pp - 1))?;
    let theta0 = nb.theta_elem.clone().ok_or_else(|| Error::Consistency("normal basis gave no generator".into()))?;
    let set = Setting { ring: &r1, ext: &s1, sigma: &sigma1, tau: &tau1 };
    let (theta1, z1, pipeline) = improve(&set, &theta0)?;

    let coords = rho_coordinates(&z1)?;
    let lifted: Vec<RingElem> = coords.iter().map(|c| source.from_poly(c.terms().clone())).collect::<Result<_>>()?;
    for (x, y) in lifted.iter().zip(&coords) {
        ensure!(h_apply(source, target, x)? == *y, Consistency, "coordinate lift does not reduce correctly");
    }
    let z = lifted
        .iter()
        .enumerate()
        .fold(source.zero(), |acc, (i, x)| &acc + &(x * &source.from_cyc(&CycInt::rho_pow(p, i as i64))));
    let ring = TauEquippedRing::new(source)?;
    let d = build_descent_ext(&ring, &z).map_err(|e| match e {
        Error::UnitRequired(m) => Error::Argument(format!("unit-lifting hypothesis violated: {m}")),
        other => other,
    })?;
    let descent = descent_report(&d)?;

    let mut images: Vec<RingElem> = (0..source.nvars()).map(|v| s1.var_at(v)).collect();
    images.push(theta1.clone());
    let big = RingHom::new(d.ext(), &s1, images, CoeffMap::Identity);
    let (reduction_map, tau_equivariant, sigma_equivariant, epsilon_reduces) = match &big {
        Ok(big) => {
            let th = d.theta();
            let tau_eq = big.apply(&d.tau.apply(th)?)? == tau1.apply(&theta1)?;
            let sigma_eq = big.apply(&d.galois.sigma.apply(th)?)? == sigma1.apply(&theta1)?;
            let eps = big.apply(&d.epsilon()?)?;
            (true, tau_eq, sigma_eq, epsilon_spans_invariants(target, &s1, &tau1, &eps)?)
        }
        Err(_) => (false, false, false, false),
    };
    Ok(DescentLift {
        normal_basis: nb,
        pipeline,
        z_coords: coords.iter().map(ToString::to_string).collect(),
        lifted_coords: lifted.iter().map(ToString::to_string).collect(),
        descent,
        reduction_map,
        tau_equivariant,
        sigma_equivariant,
        epsilon_reduces,
    })
}

fn h_apply(source: &Arc<RingCtx>, target: &Arc<RingCtx>, x: &RingElem) -> Result<RingElem> {
    RingHom::canonical(source, target)?.apply(x)
}

/// `z = Σ_j x_j ρ^j` with integer-coefficient `x_j`.
fn rho_coordinates(z: &RingElem) -> Result<Vec<RingElem>> {
    let ctx = z.ctx();
    let p = ctx.prime();
    ensure!(z.den_power() == 0, Unsupported, "z has a denominator");
    let mut parts: Vec<Poly> = vec![BTreeMap::new(); p.rank()];
    for (m, c) in z.terms() {
        for (j, cj) in c.coeffs().iter().enumerate() {
            if !num_traits::Zero::is_zero(cj) {
                parts[j].insert(m.clone(), CycInt::from_int(p, cj.clone()));
            }
        }
    }
    parts.into_iter().map(|q| ctx.from_poly(q)).collect()
}

/// `|S^τ| = |R''|^p`, the image of `ε` is τ-fixed, and `ε^i · monomials` generate `S^τ`.
fn epsilon_spans_invariants(r: &Arc<RingCtx>, s: &Arc<RingCtx>, tau: &TauAction, eps: &RingElem) -> Result<bool> {
    let pp = r.prime().get() as usize;
    if tau.apply(eps)? != *eps {
        return Ok(false);
    }
    let total = s.size().ok_or_else(|| Error::Unsupported("infinite target".into()))?;
    let gens = s.additive_generators()?;
    let im: Vec<Vec<RingElem>> = gens.iter().map(|g| Ok(vec![&tau.apply(g)? - g])).collect::<Result<_>>()?;
    let fixed = total / s.zspan_size(&im)?;
    let m = r.base().characteristic().expect("finite");
    let mons = r.finite().expect("finite").monomials().to_vec();
    let r_prime = num_traits::pow(num_bigint::BigInt::from(m), mons.len());
    let mut span = Vec::new();
    for i in 0..pp {
        let e = eps.pow(i as u64);
        for mono in &mons {
            let x = mono.iter().enumerate().fold(r.one(), |acc, (v, &k)| &acc * &r.var_at(v).pow(k as u64));
            span.push(vec![&s.embed(&x)? * &e]);
        }
    }
    Ok(fixed == num_traits::pow(r_prime, pp) && s.zspan_size(&span)? == fixed)
}
