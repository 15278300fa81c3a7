//! Short prime sums `G_{l,j}(t) = Re sum_{n in I_l} w_j(n) n^{-1/2-it}` and the
//! partition of zeros by the first block where one of them is large.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::Zero;
use crate::arithmetic::lambda_script_l;
use crate::error::{Error, Result};
use crate::mollifier::PreparedScheme;

/// `w_j(n)` for the `n` of one interval `I_l`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GSumWeights {
    /// Weight index `j`.
    pub j: usize,
    /// Interval index `l`.
    pub l: usize,
    /// `(n, w_j(n))`, `n` ascending.
    pub weights: Vec<(u64, f64)>,
}

/// `script L = log(T / 2pi)`.
pub fn script_l(t: f64) -> f64 {
    (t / (2.0 * PI)).ln()
}

/// `Lambda_L(n) / (n^{1/(alpha_j log T)} log n) * log(T^{alpha_j}/n) / log T^{alpha_j}`.
pub fn weight(n: u64, alpha_j: f64, t: f64) -> f64 {
    let lam = lambda_script_l(n, script_l(t));
    if lam == 0.0 {
        return 0.0;
    }
    let x = n as f64;
    let big = alpha_j * t.ln();
    lam / (x.powf(1.0 / big) * x.ln()) * (big - x.ln()) / big
}

impl GSumWeights {
    /// Weights `w_j` on `I_l`: primes of the interval and prime squares `<= script L` in it.
    pub fn new(scheme: &PreparedScheme, l: usize, j: usize) -> Result<Self> {
        if l == 0 || l > j || j > scheme.num_blocks() {
            return Err(Error::Domain(format!(
                "G sums need 1 <= l <= j <= {}, got l = {l}, j = {j}",
                scheme.num_blocks()
            )));
        }
        let t = scheme.t();
        let alpha_j = scheme.scheme.block(j)?.alpha;
        let block = scheme.scheme.block(l)?;
        let ell = script_l(t);
        let mut ns: Vec<u64> = scheme.primes(l)?.to_vec();
        // Squares of primes up to sqrt(script L) that land in I_l.
        for p in 2..=(ell.max(0.0).sqrt() as u64) {
            if crate::arithmetic::factorize_trial(p).is_prime() {
                let q = (p * p) as f64;
                if q > block.lo && q <= block.hi && q <= ell {
                    ns.push(p * p);
                }
            }
        }
        ns.sort_unstable();
        let weights = ns
            .into_iter()
            .map(|n| (n, weight(n, alpha_j, t)))
            .filter(|&(_, w)| w != 0.0)
            .collect();
        Ok(Self { j, l, weights })
    }

    /// `0 <= w(p) <= 1` and `0 <= w(p^2) <= 1/2`.
    pub fn within_bounds(&self) -> bool {
        self.weights.iter().all(|&(n, w)| {
            let cap = if crate::arithmetic::factorize_trial(n).is_prime() { 1.0 } else { 0.5 };
            (0.0..=cap).contains(&w)
        })
    }
}

pub fn g_sum(weights: &GSumWeights, t: f64) -> f64 {
    let s = Complex64::new(0.5, t);
    weights
        .weights
        .iter()
        .rev()
        .map(|&(n, w)| w * (-s * (n as f64).ln()).exp().re)
        .sum()
}

/// All `G_{m,l}` tables for `1 <= m <= l <= J`, indexed `[m-1][l-m]`.
pub fn all_weights(scheme: &PreparedScheme) -> Result<Vec<Vec<GSumWeights>>> {
    let jj = scheme.num_blocks();
    (1..=jj)
        .map(|m| (m..=jj).map(|l| GSumWeights::new(scheme, m, l)).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    /// `counts[j] = |S(j)|`, `0 <= j <= J`.
    pub counts: Vec<usize>,
    /// Set index of each classified zero, in table order.
    pub labels: Vec<usize>,
    pub total: usize,
    /// Zeros meeting the `S(J)` condition read only at `l = J`.
    pub literal_last: usize,
}

impl Classification {
    /// `|S(0)| / N(T, 2T)`.
    pub fn exceptional_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.counts[0] as f64 / self.total as f64
        }
    }
}

/// `T (log T) exp(-(log log T)^2 / 10)`, the shape of the `S(0)` measure bound.
pub fn exceptional_shape(t: f64) -> f64 {
    let ll = t.ln().ln();
    t * t.ln() * (-(ll * ll) / 10.0).exp()
}

/// Assigns each zero to `S(j)`, where `j + 1` is the first interval `m` with
/// `|G_{m,l}(gamma)| > alpha_m^{-3/4}` for some `l >= m`, and `J` when there is none.
pub fn classify_zeros(zeros: &[Zero], scheme: &PreparedScheme) -> Result<Classification> {
    let jj = scheme.num_blocks();
    let tables = all_weights(scheme)?;
    let caps: Vec<f64> = scheme.blocks().iter().map(|b| b.alpha.powf(-0.75)).collect();
    let rows: Vec<(usize, bool)> = zeros
        .par_iter()
        .map(|z| {
            let big = |m: usize, l: usize| g_sum(&tables[m - 1][l - m], z.gamma).abs() > caps[m - 1];
            let label = (1..=jj)
                .find(|&m| (m..=jj).any(|l| big(m, l)))
                .map_or(jj, |m| m - 1);
            let literal = (1..=jj).all(|m| !big(m, jj));
            (label, literal)
        })
        .collect();
    let mut counts = vec![0; jj + 1];
    for &(label, _) in &rows {
        counts[label] += 1;
    }
    Ok(Classification {
        counts,
        labels: rows.iter().map(|r| r.0).collect(),
        total: rows.len(),
        literal_last: rows.iter().filter(|r| r.1).count(),
    })
}

/// One point of the scatter `log|zeta'(rho)|` against `sum_{l <= j} G_{l,j}(gamma) + log log T + 1/alpha_j`.
#[derive(Clone, Debug, Serialize)]
pub struct ScatterPoint {
    pub gamma: f64,
    pub j: usize,
    pub log_abs_zeta_prime: f64,
    pub aggregate: f64,
}

pub fn log_derivative_scatter(
    gammas: &[f64],
    zeta_primes: &[Complex64],
    scheme: &PreparedScheme,
    j: usize,
) -> Result<Vec<ScatterPoint>> {
    let alpha_j = scheme.scheme.block(j)?.alpha;
    let tables: Vec<GSumWeights> = (1..=j).map(|l| GSumWeights::new(scheme, l, j)).collect::<Result<_>>()?;
    let offset = scheme.t().ln().ln() + 1.0 / alpha_j;
    Ok(gammas
        .iter()
        .zip(zeta_primes)
        .map(|(&g, zp)| ScatterPoint {
            gamma: g,
            j,
            log_abs_zeta_prime: zp.norm().ln(),
            aggregate: tables.iter().map(|w| g_sum(w, g)).sum::<f64>() + offset,
        })
        .collect())
}
