//! The map `ψ: B ⊗_C B° → End_C(B)`, `ψ(a ⊗ b)(z) = azb`, and where it is invertible.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::det::bareiss_det;
use super::{QWeyl, QWeylElem};
use crate::cyclotomic::Prime;
use crate::error::{ensure, Error, Result};
use crate::ring::expr::parse_elem;
use crate::ring::{BaseRing, CoeffMap, RingCtx, RingElem, RingHom};

/// Matrix of `ψ` over the coefficient ring of a bounded algebra.
///
/// Column `a·n + b` is `ψ(e_a ⊗ e_b°)`; row `c·n + d` is the coefficient of `e_d` in `e_a e_c e_b`.
pub fn psi_matrix(alg: &Arc<QWeyl>) -> Result<Vec<Vec<RingElem>>> {
    ensure!(alg.center().is_some(), Unsupported, "ψ needs the bounded model x^p = s, y^p = t");
    let n = alg.side() * alg.side();
    let basis: Vec<QWeylElem> = (0..n).map(|m| QWeylElem::basis(alg, m)).collect();
    let left: Vec<Vec<QWeylElem>> =
        basis.iter().map(|a| basis.iter().map(|c| a.mul(c)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let cols: Vec<Vec<RingElem>> = (0..n * n)
        .into_par_iter()
        .map(|col| {
            let (a, b) = (col / n, col % n);
            let mut out = Vec::with_capacity(n * n);
            for c in 0..n {
                out.extend(left[a][c].mul(&basis[b])?.coords()?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok((0..n * n).map(|r| cols.iter().map(|col| col[r].clone()).collect()).collect())
}

/// `1 + N s t η^p` with `N = (−1)^{p+1}` the norm sign (`N(α) = (−1)^{p+1} u`):
/// `1 + stη^p` for odd `p`, `1 − 4st` at `p = 2`.
pub fn locus_poly(ctx: &Arc<RingCtx>, s: &RingElem, t: &RingElem) -> RingElem {
    let st = &(s * t) * &ctx.eta_pow(ctx.prime().get());
    if ctx.prime().get() == 2 {
        &ctx.one() - &st
    } else {
        &ctx.one() + &st
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolicDet {
    pub det: String,
    pub locus: String,
    /// `det = unit · locus^k`.
    pub unit: Option<String>,
    pub exponent: Option<u32>,
    /// `det` is a unit times a power of `1 + stη^p` taken without the norm sign.
    pub unsigned_form: bool,
    /// The image of `det` in `F_p[s, t]` is a nonzero constant, so `(f, p) = C`.
    pub unit_mod_p: bool,
}

impl SymbolicDet {
    pub fn passed(&self) -> bool {
        self.unit.is_some() && self.exponent.is_some_and(|k| k >= 1) && self.unit_mod_p
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointResult {
    pub s: String,
    pub t: String,
    pub psi_invertible: bool,
    pub locus_unit: bool,
    /// `f(s, t)` is a unit, when the symbolic determinant is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_unit: Option<bool>,
}

impl PointResult {
    pub fn agrees(&self) -> bool {
        self.psi_invertible == self.locus_unit && self.det_unit.is_none_or(|d| d == self.locus_unit)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NilpotenceReport {
    pub field: String,
    pub s: String,
    pub t: String,
    pub locus_value: String,
    /// Dimension of the two-sided ideal generated by `1 + ηxy`.
    pub ideal_dim: usize,
    pub algebra_dim: usize,
    /// Least `k` with `J^k = 0`.
    pub nilpotency_index: Option<usize>,
}

impl NilpotenceReport {
    pub fn passed(&self) -> bool {
        self.ideal_dim > 0 && self.nilpotency_index.is_some()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AzumayaCert {
    pub p: u32,
    pub mode: String,
    pub matrix_size: usize,
    pub basis: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<SymbolicDet>,
    pub field: String,
    pub points: Vec<PointResult>,
    pub locus_matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilpotence: Option<NilpotenceReport>,
}

impl AzumayaCert {
    pub fn passed(&self) -> bool {
        self.locus_matches
            && self.symbolic.as_ref().is_none_or(SymbolicDet::passed)
            && self.nilpotence.as_ref().is_none_or(NilpotenceReport::passed)
    }
}

/// Symbolic `det ψ` over `Z[ρ][s, t]`, factored against `1 + stη^p`.
pub fn symbolic_det(p: Prime) -> Result<(Arc<RingCtx>, RingElem, SymbolicDet)> {
    ensure!(
        p.get() <= 3,
        Unsupported,
        "symbolic determinant is capped at p ≤ 3 ({}×{} matrix); use evaluated mode",
        p.get().pow(4),
        p.get().pow(4)
    );
    let alg = QWeyl::over_center(p)?;
    let ctx = alg.ctx().clone();
    let f = bareiss_det(&psi_matrix(&alg)?)?;
    let g = locus_poly(&ctx, &ctx.var("s")?, &ctx.var("t")?);
    let (unit, k) = unit_times_power(&f, &g)?;
    let unsigned = &ctx.one() + &(&(&ctx.var("s")? * &ctx.var("t")?) * &ctx.eta_pow(p.get()));
    let unsigned_form = unit_times_power(&f, &unsigned)?.0.is_some();
    let fp = RingCtx::polynomial_ring(BaseRing::residue_field(p), &["s", "t"])?;
    let red = RingHom::canonical(&ctx, &fp)?.apply(&f)?;
    let unit_mod_p = !red.is_zero() && red.as_constant().is_some();
    let report = SymbolicDet {
        det: f.to_string(),
        locus: g.to_string(),
        unsigned_form,
        unit: unit.as_ref().map(ToString::to_string),
        exponent: unit.is_some().then_some(k),
        unit_mod_p,
    };
    Ok((ctx, f, report))
}

/// `f = unit · g^k`: the unit (if the cofactor is one) and `k`.
fn unit_times_power(f: &RingElem, g: &RingElem) -> Result<(Option<crate::cyclotomic::CycInt>, u32)> {
    let mut rest = f.clone();
    let mut k = 0u32;
    while rest.as_constant().is_none() {
        match rest.exact_div(g) {
            Ok(q) => {
                rest = q;
                k += 1;
            }
            Err(Error::NotDivisible(_)) => break,
            Err(e) => return Err(e),
        }
    }
    Ok((rest.as_constant().filter(|c| c.is_unit()), k))
}

/// A prime field `Z[ρ]/(q, ρ − r)` with `q ≡ 1 mod p` (any odd `q` at `p = 2`), `q ≥ min_q`.
pub fn eval_field(p: Prime, min_q: u64) -> Result<Arc<RingCtx>> {
    let pp = p.get() as u64;
    let is_prime = |q: u64| q > 1 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d));
    let q = (min_q.max(3)..).find(|&q| is_prime(q) && (pp == 2 || q % pp == 1)).expect("primes ≡ 1 mod p exist");
    let base = if pp == 2 {
        BaseRing::modulo(p, q as i64)?
    } else {
        let pow = |mut b: u64, mut e: u64| {
            let mut acc = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % q;
                }
                b = b * b % q;
                e >>= 1;
            }
            acc
        };
        let r = (2..q).find(|&r| pow(r, pp) == 1).expect("q ≡ 1 mod p");
        BaseRing::quotient(p, Some(q as i64), None, Some(r as i64))?
    };
    Ok(RingCtx::coefficients(base))
}

/// `ψ` at every point of `F_q²` (`q` from [`eval_field`]), against `1 + s₀t₀η^p ≠ 0`.
pub fn evaluated_sweep(field: &Arc<RingCtx>, symbolic: Option<(&Arc<RingCtx>, &RingElem)>) -> Result<Vec<PointResult>> {
    let elems = field.elements()?;
    let pts: Vec<(RingElem, RingElem)> =
        elems.iter().flat_map(|s| elems.iter().map(move |t| (s.clone(), t.clone()))).collect();
    evaluate_points(field, pts, symbolic)
}

/// `ψ` at the given points `(s₀, t₀)` of a finite coefficient ring.
pub fn evaluate_points(
    field: &Arc<RingCtx>,
    pts: Vec<(RingElem, RingElem)>,
    symbolic: Option<(&Arc<RingCtx>, &RingElem)>,
) -> Result<Vec<PointResult>> {
    let q = field.rho();
    pts.into_par_iter()
        .map(|(s, t)| {
            let alg = QWeyl::bounded(field, q.clone(), s.clone(), t.clone());
            let psi_invertible = field.matrix_is_invertible(&psi_matrix(&alg)?)?;
            let locus_unit = locus_poly(field, &s, &t).is_unit()?;
            let det_unit = match symbolic {
                Some((ctx, f)) => {
                    let h = RingHom::by_names(ctx, field, &[("s", s.clone()), ("t", t.clone())], CoeffMap::Identity)?;
                    Some(h.apply(f)?.is_unit()?)
                }
                None => None,
            };
            Ok(PointResult { s: s.to_string(), t: t.to_string(), psi_invertible, locus_unit, det_unit })
        })
        .collect()
}

/// Symbolic (optional) and pointwise analysis of `ψ`; all of `F_q²` unless `points` are given
/// as expressions in the evaluation field.
pub fn azumaya_det(p: Prime, symbolic: bool, min_q: u64, points: Option<&[(String, String)]>) -> Result<AzumayaCert> {
    let field = eval_field(p, min_q)?;
    let sym = if symbolic { Some(symbolic_det(p)?) } else { None };
    let sym_ref = sym.as_ref().map(|(c, f, _)| (c, f));
    let points = match points {
        None => evaluated_sweep(&field, sym_ref)?,
        Some(pts) => {
            let parsed = pts
                .iter()
                .map(|(s, t)| Ok((parse_elem(&field, s)?, parse_elem(&field, t)?)))
                .collect::<Result<Vec<_>>>()?;
            evaluate_points(&field, parsed, sym_ref)?
        }
    };
    let locus_matches = points.iter().all(PointResult::agrees);
    let nilpotence = match points.iter().find(|r| !r.locus_unit) {
        Some(_) => Some(nilpotence_witness(&field)?),
        None => None,
    };
    let alg = QWeyl::free(p);
    let n = alg.side();
    Ok(AzumayaCert {
        p: p.get(),
        mode: if symbolic { "symbolic" } else { "evaluated" }.into(),
        matrix_size: n.pow(4),
        basis: (0..n * n).map(|m| QWeylElem::basis(&alg, m).to_string()).collect(),
        symbolic: sym.map(|(_, _, r)| r),
        field: field.describe(),
        points,
        locus_matches,
        nilpotence,
    })
}

/// Row-reduced span over `F_q`.
struct Span {
    q: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Span {
    fn new(q: u64) -> Self {
        Span { q, rows: Vec::new() }
    }

    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let q = self.q;
        for (piv, r) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(r) {
                    *x = (*x + q - c * y % q) % q;
                }
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else { return false };
        let inv = crate::lattice::inv_mod(v[piv], q).expect("q prime");
        for x in v.iter_mut() {
            *x = *x * inv % q;
        }
        for (_, r) in self.rows.iter_mut() {
            let c = r[piv];
            if c != 0 {
                for (x, y) in r.iter_mut().zip(&v) {
                    *x = (*x + q - c * y % q) % q;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

fn fq_vector(e: &QWeylElem, q: u64) -> Result<Vec<u64>> {
    let ctx = e.alg().ctx();
    e.coords()?
        .iter()
        .map(|c| {
            let v = ctx.coords(c)?;
            ensure!(v[1..].iter().all(|&x| x == 0), Unsupported, "coefficient ring is not a prime field");
            Ok(v[0].rem_euclid(q as i128) as u64)
        })
        .collect()
}

fn from_fq(alg: &Arc<QWeyl>, v: &[u64]) -> Result<QWeylElem> {
    let ctx = alg.ctx();
    let mut out = QWeylElem::zero(alg);
    for (m, &c) in v.iter().enumerate() {
        if c != 0 {
            out = out.add(&QWeylElem::basis(alg, m).scale(&ctx.int(c)))?;
        }
    }
    Ok(out)
}

/// At a point of `V(1 + stη^p)` over the prime field `field`, the two-sided ideal
/// generated by `1 + ηxy` is nilpotent.
pub fn nilpotence_witness(field: &Arc<RingCtx>) -> Result<NilpotenceReport> {
    let q = field.base().characteristic().ok_or_else(|| Error::Unsupported("infinite field".into()))? as u64;
    let elems = field.elements()?;
    let (s, t) = elems
        .iter()
        .flat_map(|s| elems.iter().map(move |t| (s.clone(), t.clone())))
        .find(|(s, t)| !s.is_zero() && locus_poly(field, s, t).is_zero())
        .ok_or_else(|| Error::Consistency("no point on 1 + stη^p = 0".into()))?;
    let alg = QWeyl::bounded(field, field.rho(), s.clone(), t.clone());
    let n = alg.side() * alg.side();
    let w = QWeylElem::one(&alg).add(&QWeylElem::from_word(&alg, "xy")?.scale(&field.eta()))?;
    let basis: Vec<QWeylElem> = (0..n).map(|m| QWeylElem::basis(&alg, m)).collect();
    let mut ideal = Span::new(q);
    for a in &basis {
        let aw = a.mul(&w)?;
        for b in &basis {
            ideal.insert(fq_vector(&aw.mul(b)?, q)?);
        }
    }
    let gens: Vec<QWeylElem> = ideal.rows.iter().map(|(_, v)| from_fq(&alg, v)).collect::<Result<_>>()?;
    let mut power = gens.clone();
    let mut index = None;
    let mut prev_dim = gens.len();
    for k in 2..=n + 1 {
        if power.is_empty() {
            index = Some(k - 1);
            break;
        }
        let mut next = Span::new(q);
        for a in &power {
            for b in &gens {
                next.insert(fq_vector(&a.mul(b)?, q)?);
            }
        }
        power = next.rows.iter().map(|(_, v)| from_fq(&alg, v)).collect::<Result<_>>()?;
        if power.is_empty() {
            index = Some(k);
            break;
        }
        if power.len() == prev_dim {
            break;
        }
        prev_dim = power.len();
    }
    Ok(NilpotenceReport {
        field: field.describe(),
        s: s.to_string(),
        t: t.to_string(),
        locus_value: locus_poly(field, &s, &t).to_string(),
        ideal_dim: gens.len(),
        algebra_dim: n,
        nilpotency_index: index,
    })
}
