use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::cyclotomic::Prime;
use crate::error::{Error, Result};

/// `s` with `τ(ρ) = ρ^s` generating `(Z/p)^*`, and `r = (s^{p−1} − 1)/p` prime to `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SChoice {
    pub p: Prime,
    pub s: u64,
    pub r: u64,
}

impl SChoice {
    /// `p·r`.
    pub fn pr(&self) -> u64 {
        self.p.get() as u64 * self.r
    }

    /// Order of `τ` on `Z[ρ]`.
    pub fn tau_order(&self) -> u32 {
        self.p.get() - 1
    }
}

/// Smallest admissible `s`; at `p = 2` this is `s = 1`, `r = 0` and τ is trivial.
pub fn choose_s(p: Prime) -> Result<SChoice> {
    let pp = p.get() as u64;
    if pp == 2 {
        return Ok(SChoice { p, s: 1, r: 0 });
    }
    for s in 2..pp * pp + pp {
        if s % pp == 0 || !p.is_primitive_root(s % pp) {
            continue;
        }
        let n = num_traits::pow(BigInt::from(s), (pp - 1) as usize) - BigInt::one();
        let (r, rem) = n.div_rem(&BigInt::from(pp));
        debug_assert!(rem == BigInt::from(0));
        if r.mod_floor(&BigInt::from(pp)) != BigInt::from(0) {
            let r = r.to_u64().ok_or_else(|| Error::Unsupported("r does not fit in u64".into()))?;
            return Ok(SChoice { p, s, r });
        }
    }
    Err(Error::Consistency(format!("no admissible s found for p = {p}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let c = choose_s(Prime::new(3).unwrap()).unwrap();
        assert_eq!((c.s, c.r), (2, 1));
        let c = choose_s(Prime::new(5).unwrap()).unwrap();
        assert_eq!((c.s, c.r), (2, 3));
        let c = choose_s(Prime::new(2).unwrap()).unwrap();
        assert_eq!(c.s, 1);
        for p in [7u32, 11, 13] {
            let c = choose_s(Prime::new(p).unwrap()).unwrap();
            let n = num_traits::pow(BigInt::from(c.s), p as usize - 1) - 1;
            assert_eq!(n, BigInt::from(c.pr()));
            assert!(!c.r.is_multiple_of(p as u64));
        }
    }
}
