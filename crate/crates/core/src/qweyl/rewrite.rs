//! Independent oracle: normal forms by literal rewriting `xy → q·yx + 1` on words.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{QWeyl, QWeylElem};
use crate::cyclotomic::Prime;
use crate::error::{Error, Result};
use crate::ring::RingElem;

/// Which occurrence of `xy` to rewrite next.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "leftmost" => Ok(Strategy::Leftmost),
            "rightmost" => Ok(Strategy::Rightmost),
            s => match s.strip_prefix("random") {
                Some(rest) => {
                    let seed = rest.trim_start_matches(':');
                    let seed = if seed.is_empty() {
                        0
                    } else {
                        seed.parse().map_err(|_| Error::Parse(format!("bad seed in {s:?}")))?
                    };
                    Ok(Strategy::Random(seed))
                }
                None => Err(Error::Parse(format!("unknown strategy {s:?} (leftmost, rightmost, random[:seed])"))),
            },
        }
    }
}

/// Rewrite `word` to normal form one `xy` at a time; does not use the algebra's multiplication.
pub fn rewrite_word(alg: &Arc<QWeyl>, word: &str, strategy: Strategy) -> Result<QWeylElem> {
    let letters: Vec<u8> = word.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    if let Some(bad) = letters.iter().find(|&&b| b != b'x' && b != b'y') {
        return Err(Error::Parse(format!("unexpected letter {:?} in word", *bad as char)));
    }
    let ctx = alg.ctx();
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut pending: Vec<(Vec<u8>, RingElem)> = vec![(letters, ctx.one())];
    let mut done: BTreeMap<Vec<u8>, RingElem> = BTreeMap::new();
    while let Some((w, c)) = pending.pop() {
        let hits: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&k| w[k] == b'x' && w[k + 1] == b'y').collect();
        if hits.is_empty() {
            let e = done.entry(w).or_insert_with(|| ctx.zero());
            *e = &*e + &c;
            continue;
        }
        let k = match (&strategy, rng.as_mut()) {
            (Strategy::Leftmost, _) => hits[0],
            (Strategy::Rightmost, _) => hits[hits.len() - 1],
            (_, Some(r)) => hits[r.gen_range(0..hits.len())],
            _ => unreachable!(),
        };
        let mut swapped = w.clone();
        swapped.swap(k, k + 1);
        let mut dropped = w;
        dropped.drain(k..k + 2);
        pending.push((swapped, &c * alg.q()));
        pending.push((dropped, c));
    }
    let mut out = QWeylElem::zero(alg);
    for (w, c) in done {
        let i = w.iter().take_while(|&&b| b == b'y').count() as u32;
        let j = w.len() as u32 - i;
        out = out.add(&QWeylElem::term(alg, i, j, &c)?)?;
    }
    Ok(out)
}

/// `x^i · y = ρ^i·y x^i + δ_i·x^{i−1}` for `0 ≤ i ≤ max_i`, with both sides from the rewriter.
pub(super) fn closed_form_matches(p: Prime, max_i: u32) -> Result<bool> {
    let alg = QWeyl::free(p);
    let ctx = alg.ctx();
    let rho = ctx.rho();
    let mut delta = ctx.zero();
    for i in 0..=max_i {
        let word = format!("{}y", "x".repeat(i as usize));
        let lhs = rewrite_word(&alg, &word, Strategy::Leftmost)?;
        let mut rhs = QWeylElem::term(&alg, 1, i, &rho.pow(i as u64))?;
        if i > 0 {
            rhs = rhs.add(&QWeylElem::term(&alg, 0, i - 1, &delta)?)?;
        }
        if lhs != rhs {
            return Ok(false);
        }
        delta = &delta + &rho.pow(i as u64);
    }
    Ok(true)
}
