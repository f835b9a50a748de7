use crate::error::{ensure, Result};
use crate::ring::RingElem;

/// Fraction-free (Bareiss) determinant over a polynomial ring on `Z[ρ]`.
pub fn bareiss_det(m: &[Vec<RingElem>]) -> Result<RingElem> {
    let n = m.len();
    ensure!(n > 0, Argument, "empty matrix");
    ensure!(m.iter().all(|r| r.len() == n), Argument, "matrix is not square");
    let ctx = m[0][0].ctx().clone();
    let mut a: Vec<Vec<RingElem>> = m.to_vec();
    let mut prev = ctx.one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else { return Ok(ctx.zero()) };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = if prev.is_one() { num } else { num.exact_div(&prev)? };
            }
            a[i][k] = ctx.zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}
