//! Specializations of `B`: cyclic algebras `Δ(L/R, σ, b)`, differential crossed
//! products `[c, b]` in characteristic `p`, and lifting the latter along `R → R/I`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::azumaya::psi_matrix;
use super::{QWeyl, QWeylElem};
use crate::cyclotomic::Prime;
use crate::error::{ensure, Result};
use crate::galois::{preimage, present_extension};
use crate::ring::{BaseRing, RingBuilder, RingCtx, RingElem, RingHom};

/// `Σ ℓ_i β^i` with `ℓ_i ∈ L`, `β ℓ = σ(ℓ) β`, `β^p = b`.
struct CyclicAlg {
    sigma: RingHom,
    b: RingElem,
    p: usize,
}

impl CyclicAlg {
    fn sigma_pow(&self, m: &RingElem, i: usize) -> Result<RingElem> {
        (0..i).try_fold(m.clone(), |acc, _| self.sigma.apply(&acc))
    }

    fn mul(&self, a: &[RingElem], c: &[RingElem]) -> Result<Vec<RingElem>> {
        let zero = a[0].ctx().zero();
        let mut out = vec![zero; self.p];
        for (i, l) in a.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            for (j, m) in c.iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                let mut term = l * &self.sigma_pow(m, i)?;
                if i + j >= self.p {
                    term = &term * &self.b;
                }
                let k = (i + j) % self.p;
                out[k] = &out[k] + &term;
            }
        }
        Ok(out)
    }

    fn pow(&self, a: &[RingElem], e: usize) -> Result<Vec<RingElem>> {
        let mut acc = self.scalar(&a[0].ctx().one());
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    fn scalar(&self, l: &RingElem) -> Vec<RingElem> {
        let mut v = vec![l.ctx().zero(); self.p];
        v[0] = l.clone();
        v
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicReport {
    pub p: u32,
    pub ring: String,
    pub u: String,
    pub b: String,
    /// `βγ − ργβ = 1` for `γ = α β^{-1}`.
    pub relation: bool,
    /// `φ(x^p) = β^p = b`.
    pub x_p_is_b: bool,
    /// `φ(y^p) = γ^p`, compared with `N(α)/b = (−1)^{p+1} u / b`.
    pub y_p: String,
    pub y_p_matches_norm: bool,
    /// The images `γ^i β^j` form an `R`-basis of `Δ(L/R, σ, b)` (finite rings only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_basis: Option<bool>,
    /// `ρ = 1` in `R`: the relation is `βγ − γβ = 1` and `Δ = [γ^p, b]`.
    pub char_p: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossed_product: Option<DcpReport>,
}

impl CyclicReport {
    pub fn passed(&self) -> bool {
        self.relation
            && self.x_p_is_b
            && self.y_p_matches_norm
            && self.phi_basis != Some(false)
            && self.crossed_product.as_ref().is_none_or(DcpReport::passed)
    }
}

/// The map `B → Δ(L/R, σ, b)`, `x ↦ β`, `y ↦ γ = αβ^{-1}`, with `L = R[α]/(α^p + g(α) − u)`.
pub fn specialize_cyclic(ctx: &Arc<RingCtx>, u: &RingElem, b: &RingElem) -> Result<CyclicReport> {
    let p = ctx.prime();
    let pp = p.get() as usize;
    let b_inv = b.inverse("b")?;
    let (ext, alpha, sigma) = present_extension(ctx, u, "alpha")?;
    let alg = CyclicAlg { sigma, b: ext.embed(b)?, p: pp };
    let mut beta = vec![ext.zero(); pp];
    beta[1] = ext.one();
    let mut gamma = vec![ext.zero(); pp];
    gamma[pp - 1] = &alpha * &ext.embed(&b_inv)?;

    let one = alg.scalar(&ext.one());
    let rho = ext.rho();
    let bg = alg.mul(&beta, &gamma)?;
    let gb = alg.mul(&gamma, &beta)?;
    let rel: Vec<RingElem> = bg.iter().zip(&gb).map(|(x, y)| x - &(&rho * y)).collect();
    let relation = rel == one;
    let x_p_is_b = alg.pow(&beta, pp)? == alg.scalar(&alg.b);
    let gp = alg.pow(&gamma, pp)?;
    let sign = if pp % 2 == 1 { ctx.one() } else { -&ctx.one() };
    let expected = &(&sign * u) * &b_inv;
    let y_p_matches_norm = gp == alg.scalar(&ext.embed(&expected)?);

    let phi_basis = if ctx.is_finite() {
        let v = ext.var_index("alpha").expect("adjoined");
        let mut rows = Vec::with_capacity(pp * pp);
        for i in 0..pp {
            for j in 0..pp {
                let e = alg.mul(&alg.pow(&gamma, i)?, &alg.pow(&beta, j)?)?;
                let mut row = Vec::with_capacity(pp * pp);
                for l in &e {
                    let mut parts = l.split_by_var(v);
                    parts.resize(pp, ext.zero());
                    for c in parts {
                        row.push(c.restrict_to(ctx)?);
                    }
                }
                rows.push(row);
            }
        }
        Some(ctx.matrix_is_invertible(&rows)?)
    } else {
        None
    };

    let char_p = ctx.rho() == ctx.one();
    let crossed_product = match (char_p, gp[0].restrict_to(ctx)) {
        (true, Ok(c)) if ctx.is_finite() => Some(diff_crossed_product_check(ctx, &c, b)?),
        _ => None,
    };
    Ok(CyclicReport {
        p: p.get(),
        ring: ctx.describe(),
        u: u.to_string(),
        b: b.to_string(),
        relation,
        x_p_is_b,
        y_p: gp[0].to_string(),
        y_p_matches_norm,
        phi_basis,
        char_p,
        crossed_product,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DcpReport {
    pub ring: String,
    pub c: String,
    pub b: String,
    pub rank: usize,
    /// `βγ − γβ = 1`.
    pub relation: bool,
    pub psi_invertible: bool,
}

impl DcpReport {
    pub fn passed(&self) -> bool {
        self.relation && self.psi_invertible
    }
}

/// `[c, b]`: `γ^p = c`, `β^p = b`, `βγ − γβ = 1`, over a finite ring with `pR = 0`.
pub fn diff_crossed_product_check(ctx: &Arc<RingCtx>, c: &RingElem, b: &RingElem) -> Result<DcpReport> {
    let p = ctx.prime();
    ensure!(ctx.int(p.get()).is_zero(), Argument, "[c, b] needs pR = 0, not {}", ctx.describe());
    ensure!(c.ctx().same(ctx) && b.ctx().same(ctx), Structural, "c, b must lie in {}", ctx.describe());
    let alg = dcp_alg(ctx, c, b);
    let (beta, gamma) = (QWeylElem::x(&alg), QWeylElem::y(&alg));
    let relation = beta.commutator(&gamma)? == QWeylElem::one(&alg);
    Ok(DcpReport {
        ring: ctx.describe(),
        c: c.to_string(),
        b: b.to_string(),
        rank: alg.side() * alg.side(),
        relation,
        psi_invertible: ctx.matrix_is_invertible(&psi_matrix(&alg)?)?,
    })
}

/// `x = β`, `y = γ`, `q = 1`.
fn dcp_alg(ctx: &Arc<RingCtx>, c: &RingElem, b: &RingElem) -> Arc<QWeyl> {
    QWeyl::bounded(ctx, ctx.one(), b.clone(), c.clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct DcpSweepReport {
    pub p: u32,
    pub seed: u64,
    pub cases: Vec<DcpReport>,
}

impl DcpSweepReport {
    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(DcpReport::passed)
    }
}

/// `F_p[ε]/(ε²)`.
pub fn dual_numbers(base: BaseRing) -> Result<Arc<RingCtx>> {
    let pre = RingBuilder::new(base.clone()).var("eps").build()?;
    RingBuilder::new(base).var("eps").rule("eps", 2, &pre.zero())?.build()
}

/// `[0, 0]`, `samples` random `(c, b)` over `F_p`, and `[ε, 0]` over `F_p[ε]/(ε²)`.
pub fn dcp_sweep(p: Prime, samples: usize, seed: u64) -> Result<DcpSweepReport> {
    let fp = RingCtx::coefficients(BaseRing::residue_field(p));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = vec![diff_crossed_product_check(&fp, &fp.zero(), &fp.zero())?];
    for _ in 0..samples {
        let (c, b) = (fp.random_element(&mut rng)?, fp.random_element(&mut rng)?);
        cases.push(diff_crossed_product_check(&fp, &c, &b)?);
    }
    let dual = dual_numbers(BaseRing::residue_field(p))?;
    cases.push(diff_crossed_product_check(&dual, &dual.var("eps")?, &dual.zero())?);
    Ok(DcpSweepReport { p: p.get(), seed, cases })
}

#[derive(Clone, Debug, Serialize)]
pub struct BrauerLiftReport {
    pub source: String,
    pub target: String,
    pub c_target: String,
    pub b_target: String,
    pub c_lift: String,
    pub b_lift: String,
    /// `η ↦ 0`, so `B ⊗ R/I` is `[c'', b'']`.
    pub eta_in_ideal: bool,
    pub p_in_ideal: bool,
    /// `η` is nilpotent in `R`, so `1 + ηR` and `1 + pR` consist of units.
    pub eta_nilpotent: bool,
    /// `1 + b c η^p` is a unit in `R`.
    pub locus_unit: bool,
    pub lift_azumaya: bool,
    /// `ψ` of the lift maps entrywise onto `ψ` of `[c'', b'']`.
    pub reduces: bool,
    pub target_azumaya: bool,
}

impl BrauerLiftReport {
    pub fn passed(&self) -> bool {
        self.eta_in_ideal
            && self.p_in_ideal
            && self.eta_nilpotent
            && self.locus_unit
            && self.lift_azumaya
            && self.reduces
            && self.target_azumaya
    }
}

/// Lift `[c'', b'']` over `R/I` to `B ⊗ R` with `x^p = b`, `y^p = c` for preimages `c, b`.
pub fn brauer_lift_demo(h: &RingHom, c: &RingElem, b: &RingElem) -> Result<BrauerLiftReport> {
    let (src, tgt) = (h.source(), h.target());
    ensure!(src.is_finite() && tgt.is_finite(), Unsupported, "the demo needs finite rings");
    let p = src.prime();
    let eta_in_ideal = h.apply(&src.eta())?.is_zero();
    let p_in_ideal = h.apply(&src.int(p.get()))?.is_zero();
    let eta_nilpotent = (1..=64).any(|k| src.eta_pow(k).is_zero());
    let cl = preimage(h, c)?;
    let bl = preimage(h, b)?;
    let lift = QWeyl::bounded(src, src.rho(), bl.clone(), cl.clone());
    let locus_unit = (&src.one() + &(&(&bl * &cl) * &src.eta_pow(p.get()))).is_unit()?;
    let m = psi_matrix(&lift)?;
    let lift_azumaya = src.matrix_is_invertible(&m)?;
    let (target_azumaya, reduces) = if eta_in_ideal && p_in_ideal {
        let d = diff_crossed_product_check(tgt, c, b)?;
        let mt = psi_matrix(&dcp_alg(tgt, c, b))?;
        let mut same = true;
        for (r1, r2) in m.iter().zip(&mt) {
            for (a, a2) in r1.iter().zip(r2) {
                same &= h.apply(a)? == *a2;
            }
        }
        (d.psi_invertible, same)
    } else {
        (false, false)
    };
    Ok(BrauerLiftReport {
        source: src.describe(),
        target: tgt.describe(),
        c_target: c.to_string(),
        b_target: b.to_string(),
        c_lift: cl.to_string(),
        b_lift: bl.to_string(),
        eta_in_ideal,
        p_in_ideal,
        eta_nilpotent,
        locus_unit,
        lift_azumaya,
        reduces,
        target_azumaya,
    })
}

/// `Z[ρ]/(p²) → F_p` with `[0, 0]` and `[1, 1]`, and `Z[ρ]/(p²)[ε]/(ε²) → F_p[ε]/(ε²)` with `[ε, 1]`.
pub fn default_brauer_demos(p: Prime) -> Result<Vec<BrauerLiftReport>> {
    let m = (p.get() * p.get()) as i64;
    let r = RingCtx::coefficients(BaseRing::modulo(p, m)?);
    let f = RingCtx::coefficients(BaseRing::residue_field(p));
    let h = RingHom::canonical(&r, &f)?;
    let mut out = vec![brauer_lift_demo(&h, &f.zero(), &f.zero())?, brauer_lift_demo(&h, &f.one(), &f.one())?];
    let r2 = dual_numbers(BaseRing::modulo(p, m)?)?;
    let f2 = dual_numbers(BaseRing::residue_field(p))?;
    let h2 = RingHom::canonical(&r2, &f2)?;
    out.push(brauer_lift_demo(&h2, &f2.var("eps")?, &f2.one())?);
    Ok(out)
}
