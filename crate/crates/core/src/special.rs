//! Special functions shared by the analytic engine and the random model.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

const MAX_BERNOULLI_INDEX: usize = 160;

/// Even-index Bernoulli numbers `B_0, B_2, ..., B_160` as exact rationals,
/// via the Akiyama-Tanigawa transform.
fn bernoulli_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = MAX_BERNOULLI_INDEX;
        let mut a: Vec<BigRational> = (0..=n)
            .map(|m| BigRational::new(BigInt::from(1), BigInt::from(m as u64 + 1)))
            .collect();
        let mut out = Vec::with_capacity(n / 2 + 1);
        // After pass m, a[0] holds B_m (with B_1 = +1/2 in this convention).
        for m in 0..=n {
            if m > 0 {
                for j in 0..=(n - m) {
                    let diff = &a[j] - &a[j + 1];
                    a[j] = diff * BigRational::from_integer(BigInt::from(j as u64 + 1));
                }
            }
            if m % 2 == 0 {
                out.push(a[0].clone());
            }
        }
        out
    })
}

/// `B_{2k}` as a float. Panics if `2k` exceeds the tabulated range.
pub fn bernoulli_even(k: usize) -> f64 {
    let table = bernoulli_table();
    assert!(k < table.len(), "Bernoulli index 2k = {} out of range", 2 * k);
    table[k].to_f64().unwrap_or(f64::NAN)
}

/// `B_{2k} / (2k)!` as a float, for `k >= 0`.
pub fn bernoulli_over_factorial(k: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let raw = bernoulli_table();
        let mut fact = BigInt::from(1);
        let mut out = Vec::with_capacity(raw.len());
        for (k, b) in raw.iter().enumerate() {
            if k > 0 {
                let a = BigInt::from(2 * k as u64 - 1);
                let c = BigInt::from(2 * k as u64);
                fact = fact * a * c;
            }
            let q = b / BigRational::from_integer(fact.clone());
            out.push(q.to_f64().unwrap_or(0.0));
        }
        out
    });
    t[k]
}

/// Principal-branch continuous `log Gamma(z)` for `Re z > 0`.
///
/// Stirling series after an upward shift until `|z| >= 16`; the shift uses
/// principal logs of `z + j`, which keeps `Im log Gamma` continuous in the
/// right half plane.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re <= 0.0 {
        // Reflection; only the value modulo 2 pi i is meaningful here.
        let pi = Complex64::new(PI, 0.0);
        return pi.ln() - (pi * z).sin().ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 16.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for k in 1..=12 {
        let b = bernoulli_even(k);
        series += pow * (b / ((2 * k) as f64 * (2 * k - 1) as f64));
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Digamma `psi(z)` for `Re z > 0`.
pub fn digamma(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 16.0 {
        shift += w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for k in 1..=12 {
        series += pow * (bernoulli_even(k) / (2 * k) as f64);
        pow *= inv2;
    }
    w.ln() - 0.5 * inv - series - shift
}

/// Real `log Gamma(x)` for `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(Complex64::new(x, 0.0)).re
}

/// `log n!`.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 30 {
        return (2..=n).map(|i| (i as f64).ln()).sum();
    }
    ln_gamma_real(n as f64 + 1.0)
}

/// Modified Bessel function `I_0(z) = sum (z/2)^{2n} / (n!)^2`.
pub fn bessel_i0(z: f64) -> Result<f64> {
    if !z.is_finite() || z.abs() > 700.0 {
        return Err(Error::Overflow(format!("bessel_i0 argument {z} outside |z| <= 700")));
    }
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0_f64;
    loop {
        n += 1.0;
        term *= q / (n * n);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    Ok(sum)
}
