//! Upper bound for the diagonal of the mollified second moment: a product over
//! blocks of `sum_{Omega(n) <= K} k^{2 Omega(n)} g(n)^2 / n` plus the tail term
//! `(64 max(2, k+3/2)/K)^{2R} (R!)^2 sum_{Omega(n) = R} g(n)^2 / n`, `R = r_k K`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mollifier::{r_exponent, tail_base, PreparedScheme};
use crate::special::ln_factorial;

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalBlock {
    pub j: usize,
    pub order: usize,
    pub tail_degree: usize,
    pub first: f64,
    pub ln_tail: f64,
    /// `log(first + tail)`.
    pub ln_total: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalReport {
    pub k: f64,
    pub blocks: Vec<DiagonalBlock>,
    pub ln_product: f64,
}

impl DiagonalReport {
    pub fn product(&self) -> f64 {
        self.ln_product.exp()
    }
}

fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `log sum_{Omega(n) = d} g(n)^2 / n` for `d <= degree`, `n` over products of `primes`.
pub fn ln_degree_sums(primes: &[u64], degree: usize) -> Vec<f64> {
    let mut lc = vec![f64::NEG_INFINITY; degree + 1];
    lc[0] = 0.0;
    let ln_fact: Vec<f64> = (0..=degree as u64).map(ln_factorial).collect();
    for &p in primes {
        let lp = (p as f64).ln();
        let mut next = lc.clone();
        for d in 1..=degree {
            let mut acc = next[d];
            for e in 1..=d {
                if lc[d - e] == f64::NEG_INFINITY {
                    continue;
                }
                acc = ln_add(acc, lc[d - e] - 2.0 * ln_fact[e] - e as f64 * lp);
            }
            next[d] = acc;
        }
        lc = next;
    }
    lc
}

pub fn diagonal_upper(scheme: &PreparedScheme, k: f64) -> Result<DiagonalReport> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("diagonal bound needs k > 0, got {k}")));
    }
    let r = r_exponent(k)? as usize;
    let mut blocks = Vec::with_capacity(scheme.num_blocks());
    let mut ln_product = 0.0;
    for (i, block) in scheme.blocks().iter().enumerate() {
        let primes = scheme.primes(i + 1)?;
        let kk = block.order;
        let big_r = r * kk;
        if primes.len().saturating_mul(big_r * big_r) > 5_000_000_000 {
            return Err(Error::SupportSize(format!(
                "block {} has {} primes at tail degree {big_r}",
                i + 1,
                primes.len()
            )));
        }
        let lc = ln_degree_sums(primes, big_r);
        let ln_first = (0..=kk).fold(f64::NEG_INFINITY, |acc, d| ln_add(acc, lc[d] + 2.0 * d as f64 * k.ln()));
        let ln_tail = 2.0 * big_r as f64 * tail_base(k, kk).ln() + 2.0 * ln_factorial(big_r as u64) + lc[big_r];
        let ln_total = ln_add(ln_first, ln_tail);
        ln_product += ln_total;
        blocks.push(DiagonalBlock {
            j: i + 1,
            order: kk,
            tail_degree: big_r,
            first: ln_first.exp(),
            ln_tail,
            ln_total,
        });
    }
    Ok(DiagonalReport { k, blocks, ln_product })
}
