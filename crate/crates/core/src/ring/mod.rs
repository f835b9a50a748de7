//! Presented commutative `Z[ρ]`-algebras with unique normal forms.
//!
//! A context is `B[v_1..v_n] / (power rules)` localized at one element `D`,
//! where `B` is `Z[ρ]` or a finite quotient of it. Power rules `v^e → rhs`
//! form a tower (the rhs of `v` only mentions lower variables and `v` below
//! `e`), so the ring is free over the subring of unruled variables and
//! reduction is confluent. Elements are `num / D^k` with `D ∤ num`.

mod base;
pub mod descriptor;
pub mod expr;
mod finite;
mod hom;
pub(crate) mod poly;
mod units;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;

pub use base::{BaseDesc, BaseRing};
pub use finite::FiniteData;
pub use hom::{CoeffMap, RingHom};
pub use poly::{Monomial, Poly};

use crate::cyclotomic::{CycInt, Prime};
use crate::error::{ensure, Error, Result};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug)]
pub struct PowerRule {
    pub exp: u32,
    pub rhs: Poly,
}

#[derive(Debug)]
pub struct RingCtx {
    id: u64,
    base: BaseRing,
    vars: Vec<String>,
    rules: Vec<Option<PowerRule>>,
    /// Declared inverse factors `f_i` (with optional alias); `D = Π f_i`.
    factors: Vec<(Poly, Option<String>)>,
    denom: Option<Poly>,
    finite: Option<FiniteData>,
}

/// Incremental construction of a [`RingCtx`].
#[derive(Clone, Debug)]
pub struct RingBuilder {
    base: BaseRing,
    vars: Vec<String>,
    rules: Vec<Option<PowerRule>>,
    factors: Vec<(Poly, Option<String>)>,
}

impl RingBuilder {
    pub fn new(base: BaseRing) -> Self {
        RingBuilder { base, vars: Vec::new(), rules: Vec::new(), factors: Vec::new() }
    }

    pub fn from_ctx(ctx: &RingCtx) -> Self {
        RingBuilder {
            base: ctx.base.clone(),
            vars: ctx.vars.clone(),
            rules: ctx.rules.clone(),
            factors: ctx.factors.clone(),
        }
    }

    pub fn var(mut self, name: &str) -> Self {
        self.vars.push(name.to_string());
        self.rules.push(None);
        for (f, _) in &mut self.factors {
            *f = pad(f, self.vars.len());
        }
        for r in self.rules.iter_mut().flatten() {
            r.rhs = pad(&r.rhs, self.vars.len());
        }
        self
    }

    pub fn vars(mut self, names: &[&str]) -> Self {
        for n in names {
            self = self.var(n);
        }
        self
    }

    /// Install `name^exp → rhs`; `rhs` lives in a context whose variables are a prefix of ours.
    pub fn rule(mut self, name: &str, exp: u32, rhs: &RingElem) -> Result<Self> {
        let v = self.index(name)?;
        ensure!(exp >= 1, Argument, "rule exponent must be positive");
        ensure!(self.rules[v].is_none(), Argument, "variable {name} already has a rule");
        ensure!(rhs.den == 0, Unsupported, "rule right-hand sides must be polynomial");
        self.check_prefix(&rhs.ctx)?;
        let rhs = pad(&rhs.num, self.vars.len());
        for m in rhs.keys() {
            ensure!(
                m[v + 1..].iter().all(|&e| e == 0) && m[v] < exp,
                Argument,
                "rule for {name} must only use lower variables and {name} below degree {exp}"
            );
        }
        ensure!(
            !self.factors.iter().any(|(f, _)| f.keys().any(|m| m[v] > 0)),
            Argument,
            "{name} occurs in a declared inverse"
        );
        self.rules[v] = Some(PowerRule { exp, rhs });
        Ok(self)
    }

    /// Adjoin an inverse of `f`, optionally named.
    pub fn inverse(mut self, f: &RingElem, alias: Option<&str>) -> Result<Self> {
        ensure!(f.den == 0, Argument, "inverse must be declared for a polynomial");
        self.check_prefix(&f.ctx)?;
        ensure!(
            !self.base.is_finite(),
            Unsupported,
            "localization over a finite base; invert elements directly instead"
        );
        let poly = pad(&f.num, self.vars.len());
        let zero = vec![0; self.vars.len()];
        ensure!(poly.get(&zero).is_some_and(CycInt::is_one), Argument, "declared inverse must have constant term 1");
        for m in poly.keys() {
            for (v, &e) in m.iter().enumerate() {
                ensure!(
                    e == 0 || self.rules[v].is_none(),
                    Argument,
                    "declared inverse uses ruled variable {}",
                    self.vars[v]
                );
            }
        }
        if let Some(a) = alias {
            ensure!(!self.vars.iter().any(|v| v == a), Argument, "alias {a} clashes with a variable");
        }
        self.factors.push((poly, alias.map(str::to_string)));
        Ok(self)
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| Error::Argument(format!("unknown variable {name}")))
    }

    fn check_prefix(&self, ctx: &RingCtx) -> Result<()> {
        ensure!(ctx.base == self.base, Structural, "coefficient rings differ");
        ensure!(
            ctx.vars.len() <= self.vars.len() && ctx.vars[..] == self.vars[..ctx.vars.len()],
            Structural,
            "element variables are not a prefix of the builder's"
        );
        Ok(())
    }

    pub fn build(self) -> Result<Arc<RingCtx>> {
        let n = self.vars.len();
        for (i, a) in self.vars.iter().enumerate() {
            ensure!(!a.is_empty(), Argument, "empty variable name");
            ensure!(!self.vars[..i].contains(a), Argument, "duplicate variable {a}");
        }
        let p = self.base.prime();
        let denom = if self.factors.is_empty() {
            None
        } else {
            let mut d = poly::constant(n, CycInt::one(p));
            for (f, _) in &self.factors {
                d = poly::mul(&d, f);
            }
            Some(d)
        };
        let mut ctx = RingCtx {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            base: self.base,
            vars: self.vars,
            rules: self.rules,
            factors: self.factors,
            denom,
            finite: None,
        };
        // rule right-hand sides are stored reduced
        for v in 0..n {
            if let Some(r) = ctx.rules[v].clone() {
                let mut rhs = r.rhs;
                ctx.reduce_coeffs(&mut rhs);
                ctx.rules[v] = Some(PowerRule { exp: r.exp, rhs });
            }
        }
        if ctx.base.is_finite() && ctx.rules.iter().all(Option::is_some) {
            ctx.finite = Some(FiniteData::new(&ctx)?);
        }
        Ok(Arc::new(ctx))
    }
}

fn pad(a: &Poly, n: usize) -> Poly {
    a.iter()
        .map(|(m, c)| {
            let mut m = m.clone();
            m.resize(n, 0);
            (m, c.clone())
        })
        .collect()
}

impl RingCtx {
    /// `B[vars]` with no relations.
    pub fn polynomial_ring(base: BaseRing, vars: &[&str]) -> Result<Arc<RingCtx>> {
        RingBuilder::new(base).vars(vars).build()
    }

    /// The coefficient ring itself, with no variables.
    pub fn coefficients(base: BaseRing) -> Arc<RingCtx> {
        RingBuilder::new(base).build().expect("no variables to validate")
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn prime(&self) -> Prime {
        self.base.prime()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn rule(&self, v: usize) -> Option<&PowerRule> {
        self.rules.get(v).and_then(Option::as_ref)
    }

    pub fn is_ruled(&self, v: usize) -> bool {
        self.rule(v).is_some()
    }

    pub fn is_finite(&self) -> bool {
        self.finite.is_some()
    }

    pub fn finite(&self) -> Option<&FiniteData> {
        self.finite.as_ref()
    }

    /// `Z[ρ]` coefficients (η is a non-zero-divisor).
    pub fn has_exact_base(&self) -> bool {
        !self.base.is_finite()
    }

    pub fn is_localized(&self) -> bool {
        self.denom.is_some()
    }

    pub(crate) fn denom(&self) -> Option<&Poly> {
        self.denom.as_ref()
    }

    pub fn same(&self, other: &RingCtx) -> bool {
        self.id == other.id
    }

    /// Same base, same variables, same relations and localization (independently built twins).
    pub fn same_presentation(&self, other: &RingCtx) -> bool {
        self.base == other.base
            && self.vars == other.vars
            && self.denom == other.denom
            && self.rules.len() == other.rules.len()
            && self.rules.iter().zip(&other.rules).all(|(a, b)| match (a, b) {
                (None, None) => true,
                (Some(a), Some(b)) => a.exp == b.exp && a.rhs == b.rhs,
                _ => false,
            })
    }

    pub fn describe(&self) -> String {
        let mut s = self.base.label();
        if !self.vars.is_empty() {
            s.push_str(&format!("[{}]", self.vars.join(",")));
        }
        let rules: Vec<String> = self
            .rules
            .iter()
            .enumerate()
            .filter_map(|(v, r)| r.as_ref().map(|r| format!("{}^{}", self.vars[v], r.exp)))
            .collect();
        if !rules.is_empty() {
            s.push_str(&format!(" / ({} reduced)", rules.join(", ")));
        }
        if !self.factors.is_empty() {
            s.push_str(&format!(" localized at {} factor(s)", self.factors.len()));
        }
        s
    }

    pub(crate) fn reduce_coeffs(&self, a: &mut Poly) {
        if self.base.is_finite() {
            let keys: Vec<Monomial> = a.keys().cloned().collect();
            for k in keys {
                let c = self.base.reduce(&a[&k]);
                if c.is_zero() {
                    a.remove(&k);
                } else {
                    a.insert(k, c);
                }
            }
        }
    }

    pub(crate) fn reduce_rules(&self, mut a: Poly) -> Poly {
        for v in (0..self.vars.len()).rev() {
            let Some(rule) = &self.rules[v] else { continue };
            loop {
                let bad: Vec<Monomial> = a.keys().filter(|m| m[v] >= rule.exp).cloned().collect();
                if bad.is_empty() {
                    break;
                }
                for m in bad {
                    let c = a.remove(&m).expect("key present");
                    let mut rest = m;
                    rest[v] -= rule.exp;
                    poly::add_scaled(&mut a, &rule.rhs, &c, Some(&rest));
                }
                self.reduce_coeffs(&mut a);
            }
        }
        self.reduce_coeffs(&mut a);
        a
    }

    /// Normal form of `num / D^den`.
    pub(crate) fn normalize(self: &Arc<Self>, num: Poly, mut den: u32) -> RingElem {
        let mut num = self.reduce_rules(num);
        if num.is_empty() {
            den = 0;
        }
        if let Some(d) = &self.denom {
            while den > 0 {
                match poly::exact_div(&num, d) {
                    Some(q) => {
                        num = q;
                        den -= 1;
                    }
                    None => break,
                }
            }
        } else {
            den = 0;
        }
        RingElem { ctx: Arc::clone(self), num, den }
    }

    pub fn zero(self: &Arc<Self>) -> RingElem {
        RingElem { ctx: Arc::clone(self), num: Poly::new(), den: 0 }
    }

    pub fn one(self: &Arc<Self>) -> RingElem {
        self.from_cyc(&CycInt::one(self.prime()))
    }

    pub fn int(self: &Arc<Self>, n: impl Into<BigInt>) -> RingElem {
        self.from_cyc(&CycInt::from_int(self.prime(), n))
    }

    pub fn from_cyc(self: &Arc<Self>, c: &CycInt) -> RingElem {
        self.normalize(poly::constant(self.nvars(), c.clone()), 0)
    }

    pub fn rho(self: &Arc<Self>) -> RingElem {
        self.from_cyc(&CycInt::rho(self.prime()))
    }

    pub fn eta(self: &Arc<Self>) -> RingElem {
        self.from_cyc(&CycInt::eta(self.prime()))
    }

    pub fn eta_pow(self: &Arc<Self>, k: u32) -> RingElem {
        self.from_cyc(&CycInt::eta(self.prime()).pow(k as u64))
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Result<RingElem> {
        let v = self.var_index(name).ok_or_else(|| Error::Argument(format!("unknown variable {name}")))?;
        Ok(self.var_at(v))
    }

    pub fn var_at(self: &Arc<Self>, v: usize) -> RingElem {
        let mut m = vec![0; self.nvars()];
        m[v] = 1;
        let mut num = Poly::new();
        num.insert(m, CycInt::one(self.prime()));
        self.normalize(num, 0)
    }

    /// The element named by an inverse alias, i.e. `1/f`.
    pub fn alias(self: &Arc<Self>, name: &str) -> Option<RingElem> {
        let i = self.factors.iter().position(|(_, a)| a.as_deref() == Some(name))?;
        Some(self.inverse_of_factor(i))
    }

    pub fn alias_names(&self) -> Vec<String> {
        self.factors.iter().filter_map(|(_, a)| a.clone()).collect()
    }

    pub(crate) fn inverse_of_factor(self: &Arc<Self>, i: usize) -> RingElem {
        let d = self.denom.as_ref().expect("factor implies denominator");
        let cof = poly::exact_div(d, &self.factors[i].0).expect("factor divides D");
        self.normalize(cof, 1)
    }

    /// The declared inverse factors as elements.
    pub fn declared_factors(self: &Arc<Self>) -> Vec<RingElem> {
        self.factors.iter().map(|(f, _)| self.normalize(f.clone(), 0)).collect()
    }

    pub fn from_poly(self: &Arc<Self>, num: Poly) -> Result<RingElem> {
        ensure!(num.keys().all(|m| m.len() == self.nvars()), Argument, "monomial length mismatch");
        ensure!(num.values().all(|c| c.prime() == self.prime()), Structural, "coefficient prime mismatch");
        Ok(self.normalize(num, 0))
    }

    /// Reinterpret an element of a context whose variables are a prefix of ours
    /// (same coefficient ring, same localization).
    pub fn embed(self: &Arc<Self>, a: &RingElem) -> Result<RingElem> {
        if a.ctx.same(self) {
            return Ok(a.clone());
        }
        let src = &a.ctx;
        ensure!(src.base == self.base, Structural, "coefficient rings differ");
        ensure!(
            src.vars.len() <= self.vars.len() && src.vars[..] == self.vars[..src.vars.len()],
            Structural,
            "variables of {} are not a prefix of {}",
            src.describe(),
            self.describe()
        );
        if a.den > 0 {
            ensure!(src.denom.as_ref().map(|d| pad(d, self.nvars())) == self.denom, Structural, "localizations differ");
        }
        for v in 0..src.nvars() {
            let same = match (&src.rules[v], &self.rules[v]) {
                (None, _) => true,
                (Some(a), Some(b)) => a.exp == b.exp && pad(&a.rhs, self.nvars()) == b.rhs,
                _ => false,
            };
            ensure!(same, Structural, "relation on {} differs", src.vars[v]);
        }
        Ok(self.normalize(pad(&a.num, self.nvars()), a.den))
    }
}

/// An element `num / D^den` in normal form.
#[derive(Clone)]
pub struct RingElem {
    ctx: Arc<RingCtx>,
    num: Poly,
    den: u32,
}

impl RingElem {
    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> &Poly {
        &self.num
    }

    pub fn den_power(&self) -> u32 {
        self.den
    }

    pub fn prime(&self) -> Prime {
        self.ctx.prime()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == self.ctx.one()
    }

    /// The element as a constant of the coefficient ring, if it is one.
    pub fn as_constant(&self) -> Option<CycInt> {
        if self.den > 0 {
            return None;
        }
        match self.num.len() {
            0 => Some(CycInt::zero(self.prime())),
            1 => {
                let (m, c) = self.num.iter().next()?;
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check(&self, other: &RingElem) -> Result<()> {
        ensure!(
            self.ctx.same(&other.ctx),
            Structural,
            "elements of different rings: {} vs {}",
            self.ctx.describe(),
            other.ctx.describe()
        );
        Ok(())
    }

    fn lift_den(&self, k: u32) -> Poly {
        if k == self.den {
            return self.num.clone();
        }
        let d = self.ctx.denom.as_ref().expect("den > 0 implies D");
        let extra = poly::pow(d, self.ctx.nvars(), self.prime(), (k - self.den) as u64);
        poly::mul(&self.num, &extra)
    }

    pub fn checked_add(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        if self.den == 0 && other.den == 0 {
            let mut r = poly::add(&self.num, &other.num);
            self.ctx.reduce_coeffs(&mut r);
            return Ok(RingElem { ctx: Arc::clone(&self.ctx), num: r, den: 0 });
        }
        let k = self.den.max(other.den);
        let r = poly::add(&self.lift_den(k), &other.lift_den(k));
        Ok(self.ctx.normalize(r, k))
    }

    pub fn checked_sub(&self, other: &RingElem) -> Result<RingElem> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        let r = poly::mul(&self.num, &other.num);
        Ok(self.ctx.normalize(r, self.den + other.den))
    }

    pub fn pow(&self, mut e: u64) -> RingElem {
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &CycInt) -> RingElem {
        self.ctx.normalize(poly::scale(&self.num, c), self.den)
    }

    pub fn scale_int(&self, n: i64) -> RingElem {
        self.scale(&CycInt::from_int(self.prime(), n))
    }

    /// `a / η^k`, defined only over `Z[ρ]` coefficients where `η` is a non-zero-divisor.
    pub fn exact_divide_by_eta_power(&self, k: u32) -> Result<RingElem> {
        ensure!(
            self.ctx.has_exact_base(),
            Unsupported,
            "division by η is only performed over Z[ρ] coefficients, not in {}",
            self.ctx.describe()
        );
        let e = CycInt::eta(self.prime()).pow(k as u64);
        let mut out = Poly::new();
        for (m, c) in &self.num {
            let q = c
                .exact_div(&e)
                .ok_or_else(|| Error::NotDivisible(format!("coefficient {c} is not divisible by η^{k}")))?;
            out.insert(m.clone(), q);
        }
        Ok(self.ctx.normalize(out, self.den))
    }

    /// `self / d` in a plain polynomial ring over `Z[ρ]` (no rules, no localization).
    pub fn exact_div(&self, d: &RingElem) -> Result<RingElem> {
        ensure!(self.ctx.same(&d.ctx), Structural, "operands live in different rings");
        ensure!(
            self.ctx.has_exact_base()
                && !self.ctx.is_localized()
                && (0..self.ctx.nvars()).all(|v| !self.ctx.is_ruled(v)),
            Unsupported,
            "exact division needs a polynomial ring over Z[ρ], not {}",
            self.ctx.describe()
        );
        ensure!(!d.is_zero(), NotDivisible, "division by zero");
        let q = poly::exact_div(&self.num, &d.num)
            .ok_or_else(|| Error::NotDivisible(format!("{d} does not divide {self}")))?;
        Ok(self.ctx.normalize(q, 0))
    }

    /// Degree in variable `v` of the numerator.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.num.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    /// Coefficients with respect to powers of variable `v`: `a = Σ_j c_j v^j`.
    pub fn split_by_var(&self, v: usize) -> Vec<RingElem> {
        let deg = self.degree_in(v) as usize;
        let mut parts = vec![Poly::new(); deg + 1];
        for (m, c) in &self.num {
            let mut mm = m.clone();
            let j = mm[v] as usize;
            mm[v] = 0;
            parts[j].insert(mm, c.clone());
        }
        parts.into_iter().map(|p| self.ctx.normalize(p, self.den)).collect()
    }

    /// Whether the numerator only involves the first `k` variables.
    pub fn lives_in_prefix(&self, k: usize) -> bool {
        self.num.keys().all(|m| m[k..].iter().all(|&e| e == 0))
    }

    /// Reinterpret in a context whose variables are a prefix of ours (inverse of [`RingCtx::embed`]).
    pub fn restrict_to(&self, target: &Arc<RingCtx>) -> Result<RingElem> {
        if self.ctx.same(target) {
            return Ok(self.clone());
        }
        let k = target.nvars();
        ensure!(
            k <= self.ctx.nvars() && target.vars[..] == self.ctx.vars[..k],
            Structural,
            "{} is not a prefix of {}",
            target.describe(),
            self.ctx.describe()
        );
        ensure!(target.base == self.ctx.base, Structural, "coefficient rings differ");
        ensure!(self.lives_in_prefix(k), Argument, "element involves variables beyond {}", target.describe());
        if self.den > 0 {
            ensure!(
                self.ctx.denom.as_ref().map(|d| d.iter().map(|(m, c)| (m[..k].to_vec(), c.clone())).collect::<Poly>())
                    == target.denom,
                Structural,
                "localizations differ"
            );
        }
        let num: Poly = self.num.iter().map(|(m, c)| (m[..k].to_vec(), c.clone())).collect();
        Ok(target.normalize(num, self.den))
    }

    /// Structural-equality check that reports context mismatch instead of `false`.
    pub fn checked_eq(&self, other: &RingElem) -> Result<bool> {
        self.check(other)?;
        Ok(self.num == other.num && self.den == other.den)
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.num == other.num && self.den == other.den
    }
}

impl Eq for RingElem {}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        self.checked_add(rhs).expect("ring mismatch in +")
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self.checked_sub(rhs).expect("ring mismatch in -")
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        self.checked_mul(rhs).expect("ring mismatch in *")
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        let mut num = poly::neg(&self.num);
        self.ctx.reduce_coeffs(&mut num);
        RingElem { ctx: Arc::clone(&self.ctx), num, den: self.den }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RingElem {
            type Output = RingElem;
            fn $m(self, rhs: RingElem) -> RingElem { (&self).$m(&rhs) }
        }
        impl $tr<&RingElem> for RingElem {
            type Output = RingElem;
            fn $m(self, rhs: &RingElem) -> RingElem { (&self).$m(rhs) }
        }
        impl $tr<RingElem> for &RingElem {
            type Output = RingElem;
            fn $m(self, rhs: RingElem) -> RingElem { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

fn fmt_poly(ctx: &RingCtx, num: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if num.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (m, c) in num.iter().rev() {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        let mono: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| if e == 1 { ctx.vars[v].clone() } else { format!("{}^{e}", ctx.vars[v]) })
            .collect();
        let cs = c.to_string();
        let simple = !cs.contains(' ');
        match (mono.is_empty(), c.is_one()) {
            (true, _) => write!(f, "{}", if simple { cs } else { format!("({cs})") })?,
            (false, true) => write!(f, "{}", mono.join("*"))?,
            (false, false) => {
                let cs = if simple { cs } else { format!("({cs})") };
                write!(f, "{}*{}", cs, mono.join("*"))?
            }
        }
    }
    Ok(())
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 0 {
            return fmt_poly(&self.ctx, &self.num, f);
        }
        write!(f, "(")?;
        fmt_poly(&self.ctx, &self.num, f)?;
        write!(f, ")/(")?;
        fmt_poly(&self.ctx, self.ctx.denom.as_ref().expect("den > 0"), f)?;
        write!(f, ")")?;
        if self.den > 1 {
            write!(f, "^{}", self.den)?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem({self})")
    }
}

#[cfg(test)]
mod tests;
