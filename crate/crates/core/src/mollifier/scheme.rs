//! Block exponents `alpha_j`, prime intervals `I_j` and truncation orders.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::arithmetic::ArithmeticTable;
use crate::error::{Error, Result};

/// One block `I_j = (lo, hi]` of the scheme.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    /// 1-based block index `j`.
    pub index: usize,
    pub alpha: f64,
    pub lo: f64,
    pub hi: f64,
    /// Real truncation threshold `e^2 k alpha_j^{-3/4}`.
    pub threshold: f64,
    /// `ceil(threshold)`.
    pub order: usize,
}

impl Block {
    /// A block with explicit bounds and threshold, for hand-built schemes.
    pub fn explicit(index: usize, alpha: f64, lo: f64, hi: f64, threshold: f64) -> Self {
        Self {
            index,
            alpha,
            lo,
            hi,
            threshold,
            order: threshold.ceil().max(0.0) as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockScheme {
    pub t: f64,
    pub k: f64,
    pub m: i32,
    pub ratio: f64,
    pub blocks: Vec<Block>,
    /// Set when no `alpha_j <= 10^{-M}` exists, so that `J = 1`.
    pub degenerate: bool,
}

/// `e^2 k alpha^{-3/4}`.
pub fn truncation_threshold(k: f64, alpha: f64) -> f64 {
    E * E * k * alpha.powf(-0.75)
}

impl BlockScheme {
    /// `alpha_j = ratio^{j-1} / (log log T)^2`, `J = 1 + max{j : alpha_j <= 10^{-M}}`.
    pub fn build(t: f64, k: f64, m: i32, ratio: f64) -> Result<Self> {
        if !(t >= 16.0) {
            return Err(Error::Domain(format!("block scheme needs T >= 16, got {t}")));
        }
        if !(k > 0.0) || m < 1 || !(ratio > 1.0) {
            return Err(Error::Domain(format!(
                "block scheme needs k > 0, M >= 1, ratio > 1; got k = {k}, M = {m}, ratio = {ratio}"
            )));
        }
        let loglog = t.ln().ln();
        let alpha = |j: usize| ratio.powi(j as i32 - 1) / (loglog * loglog);
        let cutoff = 10f64.powi(-m);
        let mut max_j = 0;
        while alpha(max_j + 1) <= cutoff {
            max_j += 1;
            if max_j > 10_000 {
                return Err(Error::Domain("block scheme has too many blocks".into()));
            }
        }
        let big_j = max_j + 1;
        let degenerate = max_j == 0;
        if degenerate {
            log::warn!(
                "degenerate block scheme: alpha_1 = {:.4} > 10^-{m}, using J = 1",
                alpha(1)
            );
        }
        let log_t = t.ln();
        let mut blocks = Vec::with_capacity(big_j);
        let mut prev = 0.0;
        for j in 1..=big_j {
            let a = alpha(j);
            blocks.push(Block::explicit(
                j,
                a,
                (prev * log_t).exp(),
                (a * log_t).exp(),
                truncation_threshold(k, a),
            ));
            prev = a;
        }
        Ok(Self {
            t,
            k,
            m,
            ratio,
            blocks,
            degenerate,
        })
    }

    /// Scheme from explicit blocks.
    pub fn from_blocks(t: f64, k: f64, blocks: Vec<Block>) -> Self {
        Self {
            t,
            k,
            m: 0,
            ratio: f64::NAN,
            blocks,
            degenerate: false,
        }
    }

    /// `J`.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.alpha).collect()
    }

    pub fn orders(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.order).collect()
    }

    /// `40 e^2 k 10^{-M/4}`.
    pub fn length_bound_exponent(&self) -> f64 {
        40.0 * E * E * self.k * 10f64.powf(-(self.m as f64) / 4.0)
    }

    /// `sum_j alpha_j ceil(e^2 k alpha_j^{-3/4})`.
    pub fn length_exponent(&self) -> f64 {
        self.blocks.iter().map(|b| b.alpha * b.order as f64).sum()
    }

    pub fn block(&self, j: usize) -> Result<&Block> {
        if j == 0 || j > self.blocks.len() {
            return Err(Error::Domain(format!(
                "block index {j} outside 1..={}",
                self.blocks.len()
            )));
        }
        Ok(&self.blocks[j - 1])
    }

    /// Binds the primes of each interval from `table`.
    pub fn with_primes(&self, table: &ArithmeticTable) -> Result<PreparedScheme> {
        let primes = self
            .blocks
            .iter()
            .map(|b| table.primes_in(b.lo, b.hi).map(|p| p.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparedScheme {
            scheme: self.clone(),
            primes,
        })
    }
}

/// A block scheme together with the primes in each interval.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedScheme {
    pub scheme: BlockScheme,
    primes: Vec<Vec<u64>>,
}

impl PreparedScheme {
    /// A scheme with no blocks: every mollifier factor is identically 1.
    pub fn trivial(t: f64, k: f64) -> Self {
        Self {
            scheme: BlockScheme::from_blocks(t, k, Vec::new()),
            primes: Vec::new(),
        }
    }

    /// Explicit blocks with explicit prime lists.
    pub fn from_parts(scheme: BlockScheme, primes: Vec<Vec<u64>>) -> Self {
        assert_eq!(scheme.blocks.len(), primes.len());
        Self { scheme, primes }
    }

    pub fn num_blocks(&self) -> usize {
        self.scheme.num_blocks()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.scheme.blocks
    }

    pub fn k(&self) -> f64 {
        self.scheme.k
    }

    pub fn t(&self) -> f64 {
        self.scheme.t
    }

    /// Primes of `I_j` (1-based).
    pub fn primes(&self, j: usize) -> Result<&[u64]> {
        self.scheme.block(j)?;
        Ok(&self.primes[j - 1])
    }

    /// `sum_{p in I_j} 1/p` for every block.
    pub fn reciprocal_prime_sums(&self) -> Vec<f64> {
        self.primes
            .iter()
            .map(|ps| ps.iter().map(|&p| 1.0 / p as f64).sum())
            .collect()
    }
}
