//! Integer linear algebra: Hermite normal forms over `Z` and modulo `m`,
//! and Gaussian elimination over prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Upper-triangular Hermite normal form of a full-rank lattice in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    /// `rows[i][j] == 0` for `j < i`, `rows[i][i] > 0`, `0 <= rows[k][i] < rows[i][i]` for `k < i`.
    pub rows: Vec<Vec<BigInt>>,
}

impl Hnf {
    /// HNF of the lattice spanned by `gens`; `None` if the span is not of full rank `n`.
    pub fn from_generators(mut gens: Vec<Vec<BigInt>>, n: usize) -> Option<Hnf> {
        let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for c in 0..n {
            loop {
                let mut best: Option<usize> = None;
                for (k, g) in gens.iter().enumerate() {
                    if !g[c].is_zero() && best.is_none_or(|b| g[c].abs() < gens[b][c].abs()) {
                        best = Some(k);
                    }
                }
                let b = best?;
                let piv = gens[b].clone();
                let mut others_zero = true;
                for (k, g) in gens.iter_mut().enumerate() {
                    if k == b || g[c].is_zero() {
                        continue;
                    }
                    let q = g[c].div_floor(&piv[c]);
                    for j in c..n {
                        let t = &q * &piv[j];
                        g[j] -= t;
                    }
                    if !g[c].is_zero() {
                        others_zero = false;
                    }
                }
                if others_zero {
                    let mut row = gens.swap_remove(b);
                    if row[c].is_negative() {
                        row.iter_mut().for_each(|x| *x = -&*x);
                    }
                    out.push(row);
                    gens.retain(|g| g.iter().any(|x| !x.is_zero()));
                    break;
                }
            }
        }
        reduce_above(&mut out);
        Some(Hnf { rows: out })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn diag(&self, i: usize) -> &BigInt {
        &self.rows[i][i]
    }

    /// `|Z^n / L|`.
    pub fn index(&self) -> BigInt {
        (0..self.dim()).map(|i| self.diag(i).clone()).product()
    }

    /// Canonical representative of `v + L` with `0 <= v_i < d_i`.
    pub fn reduce(&self, v: &mut [BigInt]) {
        for (i, row) in self.rows.iter().enumerate() {
            let q = v[i].div_floor(&row[i]);
            if q.is_zero() {
                continue;
            }
            for j in i..v.len() {
                v[j] -= &q * &row[j];
            }
        }
    }
}

fn reduce_above(rows: &mut [Vec<BigInt>]) {
    for c in 0..rows.len() {
        let (upper, lower) = rows.split_at_mut(c);
        let piv = &lower[0];
        for r in upper.iter_mut() {
            let q = r[c].div_floor(&piv[c]);
            if q.is_zero() {
                continue;
            }
            for j in c..piv.len() {
                r[j] -= &q * &piv[j];
            }
        }
    }
}

/// Hermite normal form of `L + mZ^n` with all arithmetic done in `i128`.
#[derive(Clone, Debug)]
pub struct ModHnf {
    pub m: i128,
    /// One row per column; `rows[c][c]` divides `m`.
    pub rows: Vec<Vec<i128>>,
}

pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl ModHnf {
    pub fn new(gens: impl IntoIterator<Item = Vec<i128>>, n: usize, m: i128) -> ModHnf {
        assert!(m > 0);
        let mut work: Vec<Vec<i128>> = gens
            .into_iter()
            .map(|mut g| {
                g.iter_mut().for_each(|x| *x = x.rem_euclid(m));
                g
            })
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        let mut rows = Vec::with_capacity(n);
        for c in 0..n {
            // Euclid on column c among working rows
            loop {
                let nz: Vec<usize> = (0..work.len()).filter(|&k| work[k][c] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let b = *nz.iter().min_by_key(|&&k| work[k][c]).unwrap();
                let piv = work[b].clone();
                for &k in &nz {
                    if k == b {
                        continue;
                    }
                    let q = work[k][c] / piv[c];
                    let row = &mut work[k];
                    row[c] -= q * piv[c];
                    for j in c + 1..n {
                        row[j] = (row[j] - q * piv[j]).rem_euclid(m);
                    }
                }
            }
            let pos = (0..work.len()).find(|&k| work[k][c] != 0);
            let pivot_row = match pos {
                None => {
                    let mut r = vec![0; n];
                    r[c] = m;
                    r
                }
                Some(k) => {
                    let prow = work.swap_remove(k);
                    let a = prow[c];
                    let (g, u, _) = ext_gcd(a, m);
                    let mut r = vec![0; n];
                    r[c] = g;
                    let mut resid = vec![0; n];
                    let cof = m / g;
                    for j in c + 1..n {
                        r[j] = (u.rem_euclid(m) * prow[j]).rem_euclid(m);
                        resid[j] = (cof * prow[j]).rem_euclid(m);
                    }
                    if resid.iter().any(|&x| x != 0) {
                        work.push(resid);
                    }
                    r
                }
            };
            rows.push(pivot_row);
            work.retain(|g| g.iter().any(|&x| x != 0));
        }
        for c in 0..n {
            let (upper, lower) = rows.split_at_mut(c);
            let piv = &lower[0];
            for r in upper.iter_mut() {
                let q = r[c].div_euclid(piv[c]);
                if q != 0 {
                    for j in c..n {
                        r[j] -= q * piv[j];
                    }
                }
            }
        }
        ModHnf { m, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn diag(&self, c: usize) -> i128 {
        self.rows[c][c]
    }

    pub fn index(&self) -> BigInt {
        self.rows.iter().enumerate().map(|(c, r)| BigInt::from(r[c])).product()
    }

    pub fn reduce(&self, v: &mut [i128]) {
        for (c, row) in self.rows.iter().enumerate() {
            let q = v[c].div_euclid(row[c]);
            if q != 0 {
                for j in c..v.len() {
                    v[j] -= q * row[j];
                }
            }
        }
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }
}

/// Matrix over the prime field `F_q`, stored row-major with entries in `[0, q)`.
#[derive(Clone, Debug)]
pub struct FqMatrix {
    pub q: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

pub fn inv_mod(a: u64, q: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, q as i128);
    (g == 1).then(|| x.rem_euclid(q as i128) as u64)
}

impl FqMatrix {
    pub fn zeros(q: u64, rows: usize, cols: usize) -> Self {
        FqMatrix { q, rows, cols, data: vec![0; rows * cols] }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.q;
    }

    /// Row-reduces in place; returns pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let q = self.q as u128;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), self.q).expect("q prime") as u128;
            for j in c..self.cols {
                let v = (self.get(r, j) as u128 * inv % q) as u64;
                self.data[r * self.cols + j] = v;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c) as u128;
                if f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let sub = f * self.get(r, j) as u128 % q;
                    let cur = self.get(i, j) as u128;
                    self.data[i * self.cols + j] = ((cur + q - sub) % q) as u64;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let mut aug = FqMatrix::zeros(self.q, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = (self.q - m.get(r, f)) % self.q;
                }
                v
            })
            .collect()
    }
}

pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs().to_u128().expect("modulus fits in u128");
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d as u64);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

pub fn bigint_one_hot(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_of_simple_lattice() {
        let h = Hnf::from_generators(vec![bi(&[4, 6]), bi(&[2, 8])], 2).unwrap();
        assert_eq!(h.index(), BigInt::from(20));
        let mut v = bi(&[4, 6]);
        h.reduce(&mut v);
        assert!(v.iter().all(Zero::is_zero));
    }

    #[test]
    fn mod_hnf_matches_bigint_hnf() {
        let gens = vec![vec![3i128, 5, 7], vec![1, 0, 9], vec![0, 2, 4]];
        let m = 36;
        let mh = ModHnf::new(gens.clone(), 3, m);
        let mut all: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        for i in 0..3 {
            let mut e = vec![BigInt::zero(); 3];
            e[i] = BigInt::from(m);
            all.push(e);
        }
        let h = Hnf::from_generators(all, 3).unwrap();
        assert_eq!(mh.index(), h.index());
        for (r1, r2) in mh.rows.iter().zip(&h.rows) {
            assert_eq!(r1.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>(), *r2);
        }
    }

    #[test]
    fn fq_solve_and_kernel() {
        let mut a = FqMatrix::zeros(7, 2, 3);
        for (i, v) in [1u64, 2, 3, 2, 4, 6].iter().enumerate() {
            a.data[i] = *v;
        }
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: u64 = (0..3).map(|j| a.get(0, j) * v[j]).sum::<u64>() % 7;
            assert_eq!(s, 0);
        }
        assert!(a.solve(&[1, 3]).is_none());
        assert!(a.solve(&[1, 2]).is_some());
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(&BigInt::from(360)), vec![2, 3, 5]);
        assert_eq!(prime_factors(&BigInt::from(49)), vec![7]);
    }
}
