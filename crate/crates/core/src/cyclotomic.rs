//! Exact arithmetic in the cyclotomic integers `Z[ρ] = Z[X]/(1 + X + ... + X^{p-1})`.
//!
//! Elements are stored in the power basis `1, ρ, ..., ρ^{p-2}`; the relation
//! `ρ^{p-1} = -(1 + ρ + ... + ρ^{p-2})` is applied eagerly so that the
//! coefficient vector is the unique representative.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ensure, Error, Result};

/// A prime `p`, the order of the cyclic group and of the root of unity `ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    /// Default upper bound on `p`; `p`-th power expansions grow quickly.
    pub const DEFAULT_CAP: u32 = 13;

    pub fn new(p: u32) -> Result<Self> {
        Self::with_cap(p, Self::DEFAULT_CAP)
    }

    pub fn with_cap(p: u32, cap: u32) -> Result<Self> {
        ensure!(is_prime(p), Argument, "{p} is not prime");
        ensure!(p <= cap, Argument, "p = {p} exceeds the configured cap {cap}");
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Rank of `Z[ρ]` over `Z`, i.e. `p - 1`.
    #[inline]
    pub fn rank(self) -> usize {
        self.0 as usize - 1
    }

    /// Whether `s` generates `(Z/pZ)^*`.
    pub fn is_primitive_root(self, s: u64) -> bool {
        let p = self.0 as u64;
        let s = s % p;
        if s == 0 {
            return false;
        }
        let mut x = 1u64;
        for k in 1..p {
            x = x * s % p;
            if x == 1 {
                return k == p - 1;
            }
        }
        false
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `Z[ρ]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycInt {
    p: Prime,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: Prime) -> Self {
        CycInt { p, coeffs: vec![BigInt::zero(); p.rank()] }
    }

    pub fn one(p: Prime) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: Prime, n: impl Into<BigInt>) -> Self {
        let mut c = Self::zero(p);
        c.coeffs[0] = n.into();
        c
    }

    /// Builds an element from a coefficient vector of length `p - 1`.
    pub fn from_coeffs(p: Prime, coeffs: Vec<BigInt>) -> Result<Self> {
        ensure!(
            coeffs.len() == p.rank(),
            Structural,
            "expected {} coefficients for p = {p}, got {}",
            p.rank(),
            coeffs.len()
        );
        Ok(CycInt { p, coeffs })
    }

    /// Reduces an arbitrary-length polynomial in `ρ` (coefficient of `ρ^k` at index `k`).
    pub fn from_poly(p: Prime, poly: &[BigInt]) -> Self {
        let pp = p.get() as usize;
        let mut full = vec![BigInt::zero(); pp];
        for (k, c) in poly.iter().enumerate() {
            full[k % pp] += c;
        }
        Self::fold_full(p, full)
    }

    /// `ρ^k` for any integer exponent.
    pub fn rho_pow(p: Prime, k: i64) -> Self {
        let pp = p.get() as i64;
        let k = k.rem_euclid(pp) as usize;
        let mut full = vec![BigInt::zero(); pp as usize];
        full[k] = BigInt::one();
        Self::fold_full(p, full)
    }

    pub fn rho(p: Prime) -> Self {
        Self::rho_pow(p, 1)
    }

    /// `η = ρ - 1`.
    pub fn eta(p: Prime) -> Self {
        &Self::rho(p) - &Self::one(p)
    }

    // length-p vector in 1, ρ, ..., ρ^{p-1} → basis 1, ..., ρ^{p-2}
    fn fold_full(p: Prime, mut full: Vec<BigInt>) -> Self {
        let top = full.pop().expect("p >= 2");
        for c in full.iter_mut() {
            *c -= &top;
        }
        CycInt { p, coeffs: full }
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The integer value if the element lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check(&self, other: &Self) -> Result<()> {
        ensure!(self.p == other.p, Structural, "mismatched primes {} and {}", self.p, other.p);
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
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

    /// The ring automorphism `ρ ↦ ρ^k`, `k` prime to `p`.
    pub fn galois(&self, k: u64) -> Self {
        let pp = self.p.get() as u64;
        debug_assert!(!k.is_multiple_of(pp));
        let mut full = vec![BigInt::zero(); pp as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[((i as u64) * k % pp) as usize] += c;
        }
        Self::fold_full(self.p, full)
    }

    /// Product of all non-trivial Galois conjugates; `self * conj = N(self)`.
    pub fn conjugate_product(&self) -> Self {
        let mut acc = Self::one(self.p);
        for k in 2..self.p.get() as u64 {
            acc = &acc * &self.galois(k);
        }
        acc
    }

    /// The absolute norm `N_{Q(ρ)/Q}`.
    pub fn norm(&self) -> BigInt {
        let n = self * &self.conjugate_product();
        n.as_integer().cloned().expect("norm lies in Z")
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    /// Exact quotient `self / d` in `Z[ρ]`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some(k) = d.as_integer() {
            return self.div_integer(k);
        }
        let conj = d.conjugate_product();
        let n = (d * &conj).as_integer().cloned().expect("norm lies in Z");
        (self * &conj).div_integer(&n)
    }

    /// Coefficientwise exact division by an integer.
    pub fn div_integer(&self, k: &BigInt) -> Option<Self> {
        if k.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CycInt { p: self.p, coeffs: out })
    }

    /// Image in `Z[ρ]/(η) = F_p` (ρ ↦ 1).
    pub fn mod_eta(&self) -> u32 {
        let pp = BigInt::from(self.p.get());
        let s: BigInt = self.coeffs.iter().sum();
        let r = s.mod_floor(&pp);
        u32::try_from(&r).expect("residue fits")
    }

    /// The automorphism `τ: ρ ↦ ρ^s`; `s` must generate `(Z/pZ)^*`.
    pub fn tau(&self, s: u64) -> Result<Self> {
        ensure!(self.p.is_primitive_root(s), Argument, "{s} is not a primitive root mod {}", self.p);
        Ok(self.galois(s))
    }
}

/// `τ` applied to `a`; see [`CycInt::tau`].
pub fn tau_on_cyc(a: &CycInt, s: u64) -> Result<CycInt> {
    a.tau(s)
}

/// `δ_s = 1 + ρ + ... + ρ^{s-1}`, depending only on `s mod p`.
pub fn delta_s(p: Prime, s: u64) -> CycInt {
    let k = (s % p.get() as u64) as usize;
    let mut poly = vec![BigInt::zero(); k.max(1)];
    for c in poly.iter_mut().take(k) {
        *c = BigInt::one();
    }
    if k == 0 {
        return CycInt::zero(p);
    }
    CycInt::from_poly(p, &poly)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Structural constants attached to `η = ρ - 1`.
///
/// `(1 + η)^p = 1` expands to `η^p + pηy = 0` with `y = Σ b_i η^{i-1}`,
/// `b_i = C(p, i)/p`; hence `η^{p-1} = -py` and `p = x η^{p-1}` with the
/// unit `x = -1/y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaData {
    pub p: Prime,
    pub eta: CycInt,
    #[serde(serialize_with = "ser_bigints")]
    pub b: Vec<BigInt>,
    pub y: CycInt,
    pub x_unit: CycInt,
    /// `x · y = -1`, checked at construction.
    pub x_inv_is_neg_y: bool,
}

fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

pub fn compute_eta_data(p: Prime) -> Result<EtaData> {
    let pp = p.get();
    let eta = CycInt::eta(p);
    let b: Vec<BigInt> = (1..pp)
        .map(|i| {
            let c = binomial(pp as u64, i as u64);
            let (q, r) = c.div_rem(&BigInt::from(pp));
            debug_assert!(r.is_zero());
            q
        })
        .collect();
    let mut y = CycInt::zero(p);
    let mut eta_pow = CycInt::one(p);
    for bi in &b {
        y = &y + &eta_pow.scale(bi);
        eta_pow = &eta_pow * &eta;
    }
    let minus_one = CycInt::from_int(p, -1);
    let x_unit = minus_one.exact_div(&y).ok_or_else(|| Error::Consistency("y is not a unit in Z[ρ]".into()))?;

    let eta_pm1 = eta.pow(pp as u64 - 1);
    let p_int = CycInt::from_int(p, pp);
    ensure!(eta_pm1 == -&(&p_int * &y), Consistency, "η^(p-1) != -p·y for p = {p}");
    ensure!(&x_unit * &eta_pm1 == p_int, Consistency, "x·η^(p-1) != p for p = {p}");
    let xy_ok = &x_unit * &y == minus_one;
    ensure!(xy_ok, Consistency, "x·y != -1 for p = {p}");
    ensure!(x_unit.mod_eta() == pp - 1, Consistency, "x is not -1 mod η for p = {p}");
    ensure!(b[0].is_one(), Consistency, "b_1 != 1");

    Ok(EtaData { p, eta, b, y, x_unit, x_inv_is_neg_y: xy_ok })
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p, "mismatched primes");
        CycInt { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p, "mismatched primes");
        CycInt { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p, "mismatched primes");
        let pp = self.p.get() as usize;
        let mut full = vec![BigInt::zero(); pp];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % pp] += a * b;
            }
        }
        CycInt::fold_full(self.p, full)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycInt {
            type Output = CycInt;
            fn $m(self, rhs: CycInt) -> CycInt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "ρ{}", sup(k))?,
                (_, false) => write!(f, "{mag}ρ{}", sup(k))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[p={}]({})", self.p, self)
    }
}

pub(crate) fn sup(k: usize) -> String {
    if k == 1 {
        String::new()
    } else {
        format!("^{k}")
    }
}

#[derive(Serialize, Deserialize)]
struct CycIntJson {
    p: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycIntJson { p: self.p.get(), coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CycIntJson::deserialize(d)?;
        let p = Prime::with_cap(raw.p, u32::MAX).map_err(D::Error::custom)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycInt::from_coeffs(p, coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    /// Naive oracle: multiply as integer polynomials, then reduce by
    /// repeated substitution of the minimal polynomial from the top degree.
    fn naive_mul(p: u32, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut prod = vec![0i64; a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let n = p as usize - 1;
        for d in (n..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            // ρ^d = ρ^{d-n} · ρ^n = -ρ^{d-n}(1 + ... + ρ^{n-1})
            for k in 0..n {
                prod[d - n + k] -= c;
            }
        }
        prod.truncate(n);
        prod
    }

    fn ci(p: u32, v: &[i64]) -> CycInt {
        CycInt::from_coeffs(pr(p), v.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    #[test]
    fn rho_times_top_power() {
        for p in [3u32, 5, 7] {
            let r = CycInt::rho(pr(p));
            let top = CycInt::rho_pow(pr(p), p as i64 - 2);
            let expect = ci(p, &vec![-1; p as usize - 1]);
            assert_eq!(&r * &top, expect);
        }
    }

    #[test]
    fn eta_squared_p3() {
        let e = CycInt::eta(pr(3));
        assert_eq!(&e * &e, ci(3, &[0, -3]));
        assert_eq!(naive_mul(3, &[-1, 1], &[-1, 1]), vec![0, -3]);
    }

    #[test]
    fn mul_matches_naive_oracle() {
        let cases: &[(u32, &[i64], &[i64])] = &[
            (5, &[1, -2, 3, 4], &[7, 0, -1, 2]),
            (7, &[3, 1, 4, 1, 5, 9], &[2, 7, 1, 8, 2, 8]),
            (3, &[5, -6], &[-2, 9]),
        ];
        for (p, a, b) in cases {
            let got = &ci(*p, a) * &ci(*p, b);
            assert_eq!(got, ci(*p, &naive_mul(*p, a, b)));
        }
    }

    #[test]
    fn identity_element() {
        let a = ci(5, &[3, -1, 4, 1]);
        assert_eq!(&a * &CycInt::one(pr(5)), a);
    }

    #[test]
    fn eta_data_small_primes() {
        let d2 = compute_eta_data(pr(2)).unwrap();
        assert_eq!(d2.eta, CycInt::from_int(pr(2), -2));
        assert!(d2.y.is_one());
        assert_eq!(d2.x_unit, CycInt::from_int(pr(2), -1));

        let d3 = compute_eta_data(pr(3)).unwrap();
        assert_eq!(d3.y, CycInt::rho(pr(3)));
        assert_eq!(&d3.eta * &d3.eta, ci(3, &[0, -3]));
        assert_eq!(d3.x_unit, ci(3, &[1, 1]));
        for p in [2, 3, 5, 7, 11] {
            let d = compute_eta_data(pr(p)).unwrap();
            assert_eq!(d.x_unit.mod_eta(), p - 1);
            assert_eq!(d.y.mod_eta(), 1);
        }
    }

    #[test]
    fn delta_values() {
        for p in [2u32, 3, 5, 7] {
            let q = pr(p);
            assert!(delta_s(q, 1).is_one());
            assert!(delta_s(q, 0).is_zero());
            assert!(delta_s(q, p as u64).is_zero());
            for s in 1..p as u64 {
                assert!(delta_s(q, s).is_unit(), "δ_{s} unit for p={p}");
                assert_eq!(delta_s(q, s + p as u64), delta_s(q, s));
            }
            for s in 1..p as u64 {
                for t in 1..p as u64 {
                    let lhs = delta_s(q, (s + t) % p as u64);
                    let rhs = &delta_s(q, s) + &(&CycInt::rho_pow(q, s as i64) * &delta_s(q, t));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn tau_basics() {
        let q = pr(3);
        let e = CycInt::eta(q);
        assert_eq!(e.tau(2).unwrap(), &delta_s(q, 2) * &e);
        assert!(CycInt::one(q).tau(2).unwrap().is_one());
        assert!(CycInt::one(pr(7)).tau(2).is_err());
        let a = ci(5, &[3, 1, -4, 1]);
        let mut t = a.clone();
        for _ in 0..4 {
            t = t.tau(2).unwrap();
        }
        assert_eq!(t, a);
    }

    #[test]
    fn exact_division() {
        let q = pr(5);
        let a = ci(5, &[3, 1, -4, 1]);
        let b = ci(5, &[2, 0, 1, 7]);
        assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        assert!(CycInt::one(q).exact_div(&CycInt::eta(q)).is_none());
    }

    #[test]
    fn json_round_trip() {
        let a = ci(7, &[1, -2, 3, 0, 0, 123456789012]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"p":7,"coeffs":["1","-2","3","0","0","123456789012"]}"#);
        let back: CycInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rejects_non_primes() {
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(17).is_err());
        assert!(Prime::with_cap(17, 17).is_ok());
    }
}
