//! The algebra `B = Z[ρ]⟨x, y⟩/(xy − ρyx − 1)` and its specializations.
//!
//! Elements are kept in the normal form `Σ c_{ij} y^i x^j` with commutative
//! coefficients on the left. The same code handles `xy − qyx = 1` for any
//! central `q` (`q = 1` gives the differential crossed products), optionally
//! with the central reductions `x^p = s`, `y^p = t`.

mod azumaya;
mod cyclic;
mod det;
mod rewrite;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::cyclotomic::Prime;
use crate::error::{ensure, Result};
use crate::ring::{BaseRing, RingCtx, RingElem};

pub use azumaya::{
    azumaya_det, eval_field, evaluate_points, evaluated_sweep, locus_poly, nilpotence_witness, psi_matrix,
    symbolic_det, AzumayaCert, NilpotenceReport, PointResult, SymbolicDet,
};
pub use cyclic::{
    brauer_lift_demo, dcp_sweep, default_brauer_demos, diff_crossed_product_check, dual_numbers, specialize_cyclic,
    BrauerLiftReport, CyclicReport, DcpReport, DcpSweepReport,
};
pub use det::bareiss_det;
pub use rewrite::{rewrite_word, Strategy};

/// `xy − q·yx = 1` over a commutative coefficient ring, with optional `x^p = s`, `y^p = t`.
#[derive(Clone, Debug)]
pub struct QWeyl {
    ctx: Arc<RingCtx>,
    q: RingElem,
    /// `(s, t)` with `x^p = s`, `y^p = t`.
    center: Option<(RingElem, RingElem)>,
}

impl QWeyl {
    /// `B` itself, coefficients in `Z[ρ]`, no reductions.
    pub fn free(p: Prime) -> Arc<QWeyl> {
        let ctx = RingCtx::coefficients(BaseRing::integers(p));
        let q = ctx.rho();
        Arc::new(QWeyl { ctx, q, center: None })
    }

    /// `B` as a free module of rank `p²` over `C = Z[ρ][s, t]`.
    pub fn over_center(p: Prime) -> Result<Arc<QWeyl>> {
        let ctx = RingCtx::polynomial_ring(BaseRing::integers(p), &["s", "t"])?;
        let (s, t) = (ctx.var("s")?, ctx.var("t")?);
        Ok(Self::bounded(&ctx, ctx.rho(), s, t))
    }

    /// `B ⊗_C R` along `s, t ↦` the given elements (`q = ρ`), or `[t, s]` for `q = 1`.
    pub fn bounded(ctx: &Arc<RingCtx>, q: RingElem, s: RingElem, t: RingElem) -> Arc<QWeyl> {
        Arc::new(QWeyl { ctx: Arc::clone(ctx), q, center: Some((s, t)) })
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn prime(&self) -> Prime {
        self.ctx.prime()
    }

    pub fn q(&self) -> &RingElem {
        &self.q
    }

    pub fn center(&self) -> Option<&(RingElem, RingElem)> {
        self.center.as_ref()
    }

    /// Side length `p` of the monomial basis in the bounded model.
    pub fn side(&self) -> usize {
        self.prime().get() as usize
    }
}

/// `Σ c_{ij} y^i x^j`, keyed by `(i, j)`.
#[derive(Clone)]
pub struct QWeylElem {
    alg: Arc<QWeyl>,
    terms: BTreeMap<(u32, u32), RingElem>,
}

impl PartialEq for QWeylElem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl Eq for QWeylElem {}

fn add_into(map: &mut BTreeMap<(u32, u32), RingElem>, k: (u32, u32), c: RingElem) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(v) => {
            *v = &*v + &c;
            if v.is_zero() {
                map.remove(&k);
            }
        }
        None => {
            map.insert(k, c);
        }
    }
}

impl QWeylElem {
    pub fn zero(alg: &Arc<QWeyl>) -> Self {
        QWeylElem { alg: Arc::clone(alg), terms: BTreeMap::new() }
    }

    pub fn scalar(alg: &Arc<QWeyl>, c: &RingElem) -> Result<Self> {
        Self::term(alg, 0, 0, c)
    }

    pub fn one(alg: &Arc<QWeyl>) -> Self {
        Self::monomial(alg, 0, 0)
    }

    /// `y^i x^j`.
    pub fn monomial(alg: &Arc<QWeyl>, i: u32, j: u32) -> Self {
        Self::term(alg, i, j, &alg.ctx.one()).expect("coefficient from the algebra's ring")
    }

    /// `c · y^i x^j`.
    pub fn term(alg: &Arc<QWeyl>, i: u32, j: u32, c: &RingElem) -> Result<Self> {
        ensure!(c.ctx().same(&alg.ctx), Structural, "coefficient is not in {}", alg.ctx.describe());
        let mut terms = BTreeMap::new();
        add_into(&mut terms, (i, j), c.clone());
        Ok(QWeylElem { alg: Arc::clone(alg), terms }.reduced())
    }

    pub fn x(alg: &Arc<QWeyl>) -> Self {
        Self::monomial(alg, 0, 1)
    }

    pub fn y(alg: &Arc<QWeyl>) -> Self {
        Self::monomial(alg, 1, 0)
    }

    /// Product of the letters of `word` (each `x` or `y`).
    pub fn from_word(alg: &Arc<QWeyl>, word: &str) -> Result<Self> {
        let mut acc = Self::one(alg);
        for ch in word.chars() {
            let g = match ch {
                'x' => Self::x(alg),
                'y' => Self::y(alg),
                c if c.is_whitespace() || c == '*' || c == '·' => continue,
                c => return Err(crate::error::Error::Parse(format!("unexpected letter {c:?} in word"))),
            };
            acc = acc.mul(&g)?;
        }
        Ok(acc)
    }

    pub fn alg(&self) -> &Arc<QWeyl> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), RingElem> {
        &self.terms
    }

    /// Coefficient of `y^i x^j`.
    pub fn coeff(&self, i: u32, j: u32) -> RingElem {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| self.alg.ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_alg(&self, other: &Self) -> Result<()> {
        ensure!(Arc::ptr_eq(&self.alg, &other.alg), Structural, "elements of different algebras");
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_alg(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            add_into(&mut terms, *k, c.clone());
        }
        Ok(QWeylElem { alg: Arc::clone(&self.alg), terms })
    }

    pub fn neg(&self) -> Self {
        QWeylElem { alg: Arc::clone(&self.alg), terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RingElem) -> Self {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            add_into(&mut terms, *k, v * c);
        }
        QWeylElem { alg: Arc::clone(&self.alg), terms }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_alg(other)?;
        let alg = &self.alg;
        let mut cache: HashMap<(u32, u32), Terms> = HashMap::new();
        let mut out = BTreeMap::new();
        for (&(i, j), c1) in &self.terms {
            for (&(k, l), c2) in &other.terms {
                let mid = cache.entry((j, k)).or_insert_with(|| x_pow_y_pow(alg, j, k));
                let c12 = c1 * c2;
                for ((a, b), c) in mid.iter() {
                    add_into(&mut out, (i + a, b + l), &c12 * c);
                }
            }
        }
        Ok(QWeylElem { alg: Arc::clone(alg), terms: out }.reduced())
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.alg);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Apply `y^p = t`, `x^p = s` (bounded model only).
    fn reduced(self) -> Self {
        let Some((s, t)) = &self.alg.center else { return self };
        let p = self.alg.prime().get();
        if self.terms.keys().all(|&(i, j)| i < p && j < p) {
            return self;
        }
        let mut out = BTreeMap::new();
        for ((mut i, mut j), mut c) in self.terms {
            while i >= p {
                i -= p;
                c = &c * t;
            }
            while j >= p {
                j -= p;
                c = &c * s;
            }
            add_into(&mut out, (i, j), c);
        }
        QWeylElem { alg: self.alg, terms: out }
    }

    /// Coordinates on `y^i x^j`, index `i·p + j` (bounded model).
    pub fn coords(&self) -> Result<Vec<RingElem>> {
        ensure!(self.alg.center.is_some(), Unsupported, "coordinates need the bounded model");
        let n = self.alg.side();
        let mut v = vec![self.alg.ctx.zero(); n * n];
        for (&(i, j), c) in &self.terms {
            v[i as usize * n + j as usize] = c.clone();
        }
        Ok(v)
    }

    /// Basis element `e_m = y^{m / p} x^{m mod p}`.
    pub fn basis(alg: &Arc<QWeyl>, m: usize) -> Self {
        let n = alg.side();
        Self::monomial(alg, (m / n) as u32, (m % n) as u32)
    }

    /// Random element with exponents below `max_exp` and small integer coefficients.
    pub fn random<R: Rng + ?Sized>(alg: &Arc<QWeyl>, rng: &mut R, max_exp: u32, terms: usize) -> Self {
        let mut out = BTreeMap::new();
        for _ in 0..terms {
            let (i, j) = (rng.gen_range(0..max_exp), rng.gen_range(0..max_exp));
            let c = &alg.ctx.int(rng.gen_range(-3i64..=3)) + &(&alg.ctx.rho() * &alg.ctx.int(rng.gen_range(-2i64..=2)));
            add_into(&mut out, (i, j), c);
        }
        QWeylElem { alg: Arc::clone(alg), terms: out }.reduced()
    }
}

type Terms = Vec<((u32, u32), RingElem)>;

/// `x^j y^k` in normal form, by pushing one `y` at a time through `y^a x^b`:
/// `x^b y = q^b y x^b + [b]_q x^{b−1}`.
fn x_pow_y_pow(alg: &QWeyl, j: u32, k: u32) -> Terms {
    let ctx = &alg.ctx;
    let mut qpow = vec![ctx.one()];
    let mut qint = vec![ctx.zero()];
    for b in 1..=j as usize {
        qpow.push(&qpow[b - 1] * &alg.q);
        qint.push(&qint[b - 1] + &qpow[b - 1]);
    }
    let mut cur: BTreeMap<(u32, u32), RingElem> = BTreeMap::new();
    cur.insert((0, j), ctx.one());
    for _ in 0..k {
        let mut next = BTreeMap::new();
        for (&(a, b), c) in &cur {
            add_into(&mut next, (a + 1, b), c * &qpow[b as usize]);
            if b > 0 {
                add_into(&mut next, (a, b - 1), c * &qint[b as usize]);
            }
        }
        cur = next;
    }
    cur.into_iter().collect()
}

fn fmt_monomial(i: u32, j: u32) -> String {
    let part = |v: &str, e: u32| match e {
        0 => String::new(),
        1 => v.to_string(),
        e => format!("{v}^{e}"),
    };
    format!("{}{}", part("y", i), part("x", j))
}

impl fmt::Display for QWeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest total degree first
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| std::cmp::Reverse((i + j, i, j)));
        for k in keys {
            let c = &self.terms[&k];
            let mono = fmt_monomial(k.0, k.1);
            let mut cs = c.to_string();
            if cs.contains(' ') && !(cs.starts_with('(') && cs.ends_with(')')) {
                cs = format!("({cs})");
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (mono.is_empty(), cs.as_str()) {
                (true, _) => write!(f, "{cs}")?,
                (false, "1") => write!(f, "{mono}")?,
                (false, "-1") => write!(f, "-{mono}")?,
                (false, _) => write!(f, "{cs}·{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QWeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QWeylElem({self})")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub p: u32,
    /// `[x^p, x] = [x^p, y] = [y^p, x] = [y^p, y] = 0`.
    pub generators_central: bool,
    /// `[x^p, w] = [y^p, w] = 0` for random `w`.
    pub random_central: bool,
    pub random_samples: usize,
    /// `(y^i x^j)·s^a t^b = y^{i+pb} x^{j+pa}` exactly for `i, j < p`, `a, b ≤ degree_bound`,
    /// so the `p²` monomials are independent over `C` in those degrees.
    pub basis_independent: bool,
    pub degree_bound: u32,
    /// `x^i y = ρ^i y x^i + δ_i x^{i−1}` for `0 ≤ i ≤ 2p`, against single-step rewriting.
    pub commutation_closed_form: bool,
}

impl CenterReport {
    pub fn passed(&self) -> bool {
        self.generators_central && self.random_central && self.basis_independent && self.commutation_closed_form
    }
}

pub fn verify_center(p: Prime, samples: usize, seed: u64) -> Result<CenterReport> {
    use rand::SeedableRng;
    let alg = QWeyl::free(p);
    let pp = p.get();
    let (x, y) = (QWeylElem::x(&alg), QWeylElem::y(&alg));
    let (xp, yp) = (x.pow(pp)?, y.pow(pp)?);
    let mut generators_central = true;
    for c in [&xp, &yp] {
        for w in [&x, &y] {
            generators_central &= c.commutator(w)?.is_zero();
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut random_central = true;
    for _ in 0..samples {
        let w = QWeylElem::random(&alg, &mut rng, pp + 2, 4);
        random_central &= xp.commutator(&w)?.is_zero() && yp.commutator(&w)?.is_zero();
    }
    let degree_bound = 2;
    let mut basis_independent = true;
    for i in 0..pp {
        for j in 0..pp {
            for a in 0..=degree_bound {
                for b in 0..=degree_bound {
                    let prod = QWeylElem::monomial(&alg, i, j).mul(&xp.pow(a)?.mul(&yp.pow(b)?)?)?;
                    basis_independent &= prod == QWeylElem::monomial(&alg, i + pp * b, j + pp * a);
                }
            }
        }
    }
    let commutation_closed_form = rewrite::closed_form_matches(p, 2 * pp)?;
    Ok(CenterReport {
        p: pp,
        generators_central,
        random_central,
        random_samples: samples,
        basis_independent,
        degree_bound,
        commutation_closed_form,
    })
}

#[cfg(test)]
mod tests;
