//! Discrete moments `J_k(T) = N(T)^{-1} sum_{0 < gamma <= T} |zeta'(rho)|^{2k}`.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::reduce::pairwise_sum;
use crate::analytic::{zeta_prime, PrecisionProfile, Zero, ZeroTable};
use crate::error::{Error, Result};

/// Ordinates below the first zero; the lowest dyadic window ends here.
const FIRST_ZERO_FLOOR: f64 = 14.0;

/// `zeta'(1/2 + i gamma)` for each zero, in table order.
pub fn zeta_prime_at_zeros(zeros: &[Zero], profile: &PrecisionProfile) -> Result<Vec<Complex64>> {
    zeros
        .par_iter()
        .map(|z| zeta_prime(Complex64::new(0.5, z.gamma), profile))
        .collect()
}

/// Dyadic windows `(T/2^{i+1}, T/2^i]` covering `(0, T]`, in ascending order.
pub fn dyadic_windows(t: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut hi = t;
    while hi / 2.0 > FIRST_ZERO_FLOOR {
        out.push((hi / 2.0, hi));
        hi /= 2.0;
    }
    out.push((0.0, hi));
    out.reverse();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    #[serde(rename = "T")]
    pub t: f64,
    pub k: f64,
    pub n_zeros: usize,
    pub j_k: f64,
    /// `(log T)^{k(k+2)}`.
    pub normalizer: f64,
    pub ratio: f64,
    pub runtime_ms: u64,
    /// Per dyadic window: `(lo, hi, count, sum |zeta'|^{2k})`.
    #[serde(skip)]
    pub windows: Vec<(f64, f64, usize, f64)>,
}

/// `(log T)^{k(k+2)}`.
pub fn moment_normalizer(t: f64, k: f64) -> f64 {
    t.ln().powf(k * (k + 2.0))
}

fn check_complete(zeros: &ZeroTable, t: f64) -> Result<()> {
    if zeros.t_lo > 0.0 || t > zeros.t_max {
        return Err(Error::Coverage {
            lo: 0.0,
            hi: t,
            have: zeros.t_max,
        });
    }
    Ok(())
}

/// `J_k(T)` from precomputed `zeta'` values aligned with `zeros.zeros`.
pub fn moment_from_values(zeros: &ZeroTable, values: &[Complex64], t: f64, k: f64) -> Result<MomentReport> {
    let start = Instant::now();
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("moment exponent must be >= 0, got {k}")));
    }
    check_complete(zeros, t)?;
    assert_eq!(values.len(), zeros.len(), "one zeta' value per zero");
    let mut windows = Vec::new();
    let mut partials = Vec::new();
    let mut n = 0;
    for (lo, hi) in dyadic_windows(t) {
        let a = zeros.count_up_to(lo);
        let b = zeros.count_up_to(hi);
        let terms: Vec<f64> = values[a..b].iter().map(|z| z.norm().powf(2.0 * k)).collect();
        let s = pairwise_sum(&terms);
        windows.push((lo, hi, b - a, s));
        partials.push(s);
        n += b - a;
    }
    if n == 0 {
        return Err(Error::EmptyTable);
    }
    let j_k = pairwise_sum(&partials) / n as f64;
    let normalizer = moment_normalizer(t, k);
    Ok(MomentReport {
        t,
        k,
        n_zeros: n,
        j_k,
        normalizer,
        ratio: j_k / normalizer,
        runtime_ms: start.elapsed().as_millis() as u64,
        windows,
    })
}

/// `J_k(T)` with each `|zeta'(rho)|` from the analytic engine.
pub fn compute_moment(zeros: &ZeroTable, t: f64, k: f64, profile: &PrecisionProfile) -> Result<MomentReport> {
    let start = Instant::now();
    check_complete(zeros, t)?;
    let sub = zeros.truncated(t)?;
    let values = zeta_prime_at_zeros(&sub.zeros, profile)?;
    let mut report = moment_from_values(&sub, &values, t, k)?;
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_tile_the_range() {
        let w = dyadic_windows(5000.0);
        assert_eq!(w[0].0, 0.0);
        assert_eq!(w.last().unwrap().1, 5000.0);
        for p in w.windows(2) {
            assert_eq!(p[0].1, p[1].0);
        }
        assert!(w[0].1 <= 2.0 * FIRST_ZERO_FLOOR);
        assert_eq!(dyadic_windows(20.0), vec![(0.0, 20.0)]);
    }

    #[test]
    fn normalizer_values() {
        assert_eq!(moment_normalizer(100.0, 0.0), 1.0);
        let l = 100f64.ln();
        assert!((moment_normalizer(100.0, 1.0) - l.powi(3)).abs() < 1e-9);
    }
}
