//! Coefficient rings `Z[ρ]` and `Z[ρ]/I` for ideals `I` generated by an
//! integer `m`, a power of `η`, and optionally `ρ - c`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycInt, Prime};
use crate::error::{ensure, Error, Result};
use crate::lattice::{prime_factors, Hnf};

/// JSON description of a coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseDesc {
    pub p: u32,
    #[serde(default)]
    pub m: Option<i64>,
    #[serde(default)]
    pub eta_power: Option<u32>,
    /// Extra generator `ρ - rho`, used to select one residue field of `Z[ρ]/(q)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<i64>,
}

/// The HNF is taken over reversed coordinates (`ρ^{p−2}, …, ρ, 1`), so
/// reduction clears high powers of ρ first and integers stay integers.
#[derive(Clone, Debug)]
pub(crate) struct IdealData {
    hnf: Hnf,
    pub index: BigInt,
    /// Smallest positive integer in the ideal.
    pub exponent: i128,
    pub primes: Vec<u64>,
    pub rows_i128: Vec<Vec<i128>>,
    pub gens: Vec<CycInt>,
}

#[derive(Clone, Debug)]
pub struct BaseRing {
    p: Prime,
    desc: BaseDesc,
    ideal: Option<IdealData>,
}

impl BaseRing {
    pub fn integers(p: Prime) -> Self {
        BaseRing { p, desc: BaseDesc { p: p.get(), m: None, eta_power: None, rho: None }, ideal: None }
    }

    pub fn from_desc(desc: &BaseDesc) -> Result<Self> {
        let p = Prime::new(desc.p)?;
        Self::quotient(p, desc.m, desc.eta_power, desc.rho)
    }

    /// `Z[ρ]/(m, η^k, ρ - c)` with any subset of the generators.
    pub fn quotient(p: Prime, m: Option<i64>, eta_power: Option<u32>, rho: Option<i64>) -> Result<Self> {
        let mut gens = Vec::new();
        if let Some(m) = m {
            ensure!(m != 0 || eta_power.is_some() || rho.is_some(), Argument, "zero modulus with no other generator");
            if m != 0 {
                gens.push(CycInt::from_int(p, m));
            }
        }
        if let Some(k) = eta_power {
            gens.push(CycInt::eta(p).pow(k as u64));
        }
        if let Some(c) = rho {
            gens.push(&CycInt::rho(p) - &CycInt::from_int(p, c));
        }
        let desc = BaseDesc { p: p.get(), m, eta_power, rho };
        if gens.is_empty() {
            return Ok(BaseRing { p, desc, ideal: None });
        }
        let ideal = IdealData::new(p, gens)?;
        Ok(BaseRing { p, desc, ideal: Some(ideal) })
    }

    /// `Z[ρ]/(m)`.
    pub fn modulo(p: Prime, m: i64) -> Result<Self> {
        Self::quotient(p, Some(m), None, None)
    }

    /// `Z[ρ]/(η) = F_p`.
    pub fn residue_field(p: Prime) -> Self {
        Self::quotient(p, None, Some(1), None).expect("(η) has finite index")
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn desc(&self) -> &BaseDesc {
        &self.desc
    }

    pub fn is_finite(&self) -> bool {
        self.ideal.is_some()
    }

    pub(crate) fn ideal(&self) -> Option<&IdealData> {
        self.ideal.as_ref()
    }

    /// `|Z[ρ]/I|`, `None` for `Z[ρ]` itself.
    pub fn size(&self) -> Option<&BigInt> {
        self.ideal.as_ref().map(|i| &i.index)
    }

    /// The smallest positive integer in `I` (the characteristic).
    pub fn characteristic(&self) -> Option<i128> {
        self.ideal.as_ref().map(|i| i.exponent)
    }

    pub fn reduce(&self, a: &CycInt) -> CycInt {
        match &self.ideal {
            None => a.clone(),
            Some(i) => {
                let mut v = a.coeffs().to_vec();
                i.reduce(&mut v);
                CycInt::from_coeffs(self.p, v).expect("length preserved")
            }
        }
    }

    pub fn is_zero(&self, a: &CycInt) -> bool {
        self.reduce(a).is_zero()
    }

    /// Whether the ring automorphism `ρ ↦ ρ^k` descends to this quotient.
    pub fn stable_under_galois(&self, k: u64) -> bool {
        match &self.ideal {
            None => true,
            Some(i) => i.gens.iter().all(|g| self.is_zero(&g.galois(k))),
        }
    }

    /// Whether the canonical map (twisted by `ρ ↦ ρ^k`) from `self` to `target` is well defined.
    pub fn maps_into(&self, target: &BaseRing, k: u64) -> bool {
        if self.p != target.p {
            return false;
        }
        match &self.ideal {
            None => true,
            Some(i) => i.gens.iter().all(|g| target.is_zero(&g.galois(k))),
        }
    }

    /// Diagonal of the ideal's HNF: coordinate `j` of a reduced element ranges over `0..diag[j]`.
    pub fn digit_ranges(&self) -> Option<Vec<BigInt>> {
        self.ideal.as_ref().map(|i| (0..self.p.rank()).map(|j| i.diag(j).clone()).collect())
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if let Some(m) = self.desc.m {
            parts.push(m.to_string());
        }
        if let Some(k) = self.desc.eta_power {
            parts.push(if k == 1 { "η".to_string() } else { format!("η^{k}") });
        }
        if let Some(c) = self.desc.rho {
            parts.push(format!("ρ-{c}"));
        }
        if parts.is_empty() {
            format!("Z[ρ] (p={})", self.p)
        } else {
            format!("Z[ρ]/({}) (p={})", parts.join(", "), self.p)
        }
    }
}

impl PartialEq for BaseRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && match (&self.ideal, &other.ideal) {
                (None, None) => true,
                (Some(a), Some(b)) => a.hnf == b.hnf,
                _ => false,
            }
    }
}

impl IdealData {
    /// Reduce a coordinate vector (in the usual order) to its canonical representative.
    pub fn reduce(&self, v: &mut [BigInt]) {
        v.reverse();
        self.hnf.reduce(v);
        v.reverse();
    }

    /// Reduced coordinate `j` ranges over `0..diag(j)`.
    pub fn diag(&self, j: usize) -> &BigInt {
        self.hnf.diag(self.hnf.rows.len() - 1 - j)
    }

    fn new(p: Prime, gens: Vec<CycInt>) -> Result<Self> {
        let n = p.rank();
        let mut rows = Vec::new();
        for g in &gens {
            for i in 0..n {
                let v = g * &CycInt::rho_pow(p, i as i64);
                let mut c = v.coeffs().to_vec();
                c.reverse();
                rows.push(c);
            }
        }
        let hnf =
            Hnf::from_generators(rows, n).ok_or_else(|| Error::Argument("ideal has infinite index in Z[ρ]".into()))?;
        let index = hnf.index();
        let idx = index
            .to_i128()
            .filter(|&x| x < (1i128 << 62))
            .ok_or_else(|| Error::Unsupported(format!("quotient of size {index} is too large")))?;
        let primes = prime_factors(&index);
        // smallest n > 0 with n ∈ I; it divides the index
        let in_ideal = |d: i128| {
            let mut v = CycInt::from_int(p, d).coeffs().to_vec();
            v.reverse();
            hnf.reduce(&mut v);
            v.iter().all(Zero::is_zero)
        };
        let mut exponent = idx;
        for &q in &primes {
            let q = q as i128;
            while exponent % q == 0 && in_ideal(exponent / q) {
                exponent /= q;
            }
        }
        let rows_i128 =
            hnf.rows.iter().map(|r| r.iter().rev().map(|x| x.to_i128().expect("bounded by index")).collect()).collect();
        Ok(IdealData { hnf, index, exponent, primes, rows_i128, gens })
    }
}

impl BaseRing {
    /// Generators of the ideal as elements of `Z[ρ]` (empty for `Z[ρ]`).
    pub fn ideal_generators(&self) -> Vec<CycInt> {
        self.ideal.as_ref().map(|i| i.gens.clone()).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_field_has_p_elements() {
        for p in [2u32, 3, 5, 7] {
            let b = BaseRing::residue_field(Prime::new(p).unwrap());
            assert_eq!(b.size().unwrap(), &BigInt::from(p));
            assert_eq!(b.characteristic(), Some(p as i128));
        }
    }

    #[test]
    fn modulo_nine_p3() {
        let p = Prime::new(3).unwrap();
        let b = BaseRing::modulo(p, 9).unwrap();
        assert_eq!(b.size().unwrap(), &BigInt::from(81));
        assert_eq!(b.characteristic(), Some(9));
        let e = CycInt::eta(p);
        assert!(!b.is_zero(&e.pow(3)));
        assert!(b.is_zero(&e.pow(4)));
        assert!(b.stable_under_galois(2));
    }

    #[test]
    fn eta_powers() {
        let p = Prime::new(5).unwrap();
        let b = BaseRing::quotient(p, None, Some(6), None).unwrap();
        assert_eq!(b.size().unwrap(), &BigInt::from(5u32.pow(6)));
        assert_eq!(b.characteristic(), Some(25));
        assert!(BaseRing::quotient(p, Some(0), None, None).is_err());
    }

    #[test]
    fn rho_evaluation_gives_field() {
        let p = Prime::new(3).unwrap();
        let b = BaseRing::quotient(p, Some(7), None, Some(2)).unwrap();
        assert_eq!(b.size().unwrap(), &BigInt::from(7));
        assert_eq!(b.reduce(&CycInt::rho(p)), b.reduce(&CycInt::from_int(p, 2)));
        assert!(!b.stable_under_galois(2));
    }
}
