//! Monte Carlo over i.i.d. uniform phases `X_p = e^{i theta_p}`, keyed by
//! `(seed, prime, sample index)` so every stream is reproducible in parallel.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::expressions::Expectation;
use crate::error::{Error, Result};

/// Fewest samples an estimate is computed from.
pub const MIN_SAMPLES: usize = 1000;
const CHUNK: usize = 4096;

/// `theta_p` of sample `index` under `seed`, uniform on `[0, 2pi)`.
pub fn phase(seed: u64, prime: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(prime);
    rng.set_word_pos(2 * index as u128);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * TAU
}

/// Phases of one sample at the queried primes.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSample {
    pub seed: u64,
    pub index: u64,
    pub phases: BTreeMap<u64, f64>,
}

impl PhaseSample {
    pub fn draw(seed: u64, index: u64, primes: &[u64]) -> Self {
        Self {
            seed,
            index,
            phases: primes.iter().map(|&p| (p, phase(seed, p, index))).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_samples: 100_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n_samples)`.
    pub std_error: f64,
    pub n_samples: usize,
}

impl McEstimate {
    /// `(x - mean) / std_error`; 0 when both the error and the gap vanish.
    pub fn z_score(&self, x: f64) -> f64 {
        let d = self.mean - x;
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }

    pub fn agrees_with(&self, x: f64, sigmas: f64) -> bool {
        (self.mean - x).abs() <= sigmas * self.std_error
    }
}

/// `(count, mean, sum of squared deviations)` of a run of values.
#[derive(Clone, Copy, Debug)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let m2 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
        Self { n, mean, m2 }
    }

    fn merge(a: Self, b: Self) -> Self {
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        Self {
            n,
            mean: a.mean + d * b.n / n,
            m2: a.m2 + b.m2 + d * d * a.n * b.n / n,
        }
    }
}

fn merge_tree(xs: &[Moments]) -> Moments {
    if xs.len() == 1 {
        return xs[0];
    }
    let mid = xs.len() / 2;
    Moments::merge(merge_tree(&xs[..mid]), merge_tree(&xs[mid..]))
}

/// Monte Carlo estimate of `E[expr(X)]`.
pub fn mc_expectation(expr: &dyn Expectation, config: &McConfig) -> Result<McEstimate> {
    if config.n_samples < MIN_SAMPLES {
        return Err(Error::InsufficientPoints {
            needed: MIN_SAMPLES,
            got: config.n_samples,
        });
    }
    let primes = expr.primes();
    let n = config.n_samples;
    let chunks: Vec<Moments> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let mut theta = vec![0.0; primes.len()];
            let vals: Vec<f64> = (lo..hi)
                .map(|i| {
                    for (t, &p) in theta.iter_mut().zip(&primes) {
                        *t = phase(config.seed, p, i as u64);
                    }
                    expr.eval(&theta)
                })
                .collect();
            Moments::of(&vals)
        })
        .collect();
    let m = merge_tree(&chunks);
    let var = m.m2 / (m.n - 1.0);
    Ok(McEstimate {
        mean: m.mean,
        std_error: (var / m.n).sqrt(),
        n_samples: n,
    })
}
