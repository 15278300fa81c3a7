//! Reference implementations for tests, written without the library's code paths.
//!
//! Bernoulli numbers come from `B_2k / (2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}`,
//! `theta` from its asymptotic series, and zeros from a fixed-step scan of `Z`.

#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

const EM_ORDER: usize = 20;

fn zeta_even(k: usize) -> f64 {
    if k == 1 {
        return PI * PI / 6.0;
    }
    let s = 2 * k as i32;
    let n = 2000usize;
    let head: f64 = (1..n).map(|m| (m as f64).powi(-s)).sum();
    let nf = n as f64;
    head + nf.powi(1 - s) / (s as f64 - 1.0) + 0.5 * nf.powi(-s) + (s as f64) / 12.0 * nf.powi(-s - 1)
}

fn bernoulli_ratios() -> Vec<f64> {
    (1..=EM_ORDER)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * 2.0 * zeta_even(k) / (2.0 * PI).powi(2 * k as i32)
        })
        .collect()
}

/// Euler-Maclaurin `zeta(s)` with main sum length `max(50, |t|/pi + 20)`.
pub fn zeta(s: Complex64) -> Complex64 {
    let b = bernoulli_ratios();
    let n = (s.im.abs() / PI + 20.0).max(50.0).ceil() as usize;
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 1..n {
        sum += (-s * (m as f64).ln()).exp();
    }
    let n_s = (-s * nf.ln()).exp();
    sum += n_s * nf / (s - 1.0) + n_s * 0.5;
    // term_k = B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut rising = s;
    let mut power = n_s / nf;
    for (k, &bk) in b.iter().enumerate() {
        if k > 0 {
            let j = 2.0 * k as f64;
            rising *= (s + (j - 1.0)) * (s + j);
            power /= nf * nf;
        }
        sum += rising * power * bk;
    }
    sum
}

/// Asymptotic Riemann-Siegel theta, accurate to ~1e-11 for `t >= 10`.
pub fn theta(t: f64) -> f64 {
    t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
        + 127.0 / (430080.0 * t.powi(7))
        + 511.0 / (1216512.0 * t.powi(9))
}

pub fn hardy_z(t: f64) -> f64 {
    (Complex64::from_polar(1.0, theta(t)) * zeta(Complex64::new(0.5, t))).re
}

/// Sign changes of `Z` on `[10, t_max]` at step `step`, bisected to `1e-12`.
pub fn dense_scan_zeros(t_max: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut a = 10.0;
    let mut za = hardy_z(a);
    while a < t_max {
        let b = (a + step).min(t_max);
        let zb = hardy_z(b);
        if za * zb < 0.0 {
            let (mut lo, mut hi, mut zlo) = (a, b, za);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                let zm = hardy_z(mid);
                if zm * zlo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    zlo = zm;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        a = b;
        za = zb;
    }
    out
}

/// `mu(n)` by trial division.
pub fn mobius(mut n: u64) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `Lambda_2(n) = sum_{d | n} mu(d) log^2(n/d)`.
pub fn lambda2_brute(n: u64) -> f64 {
    (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| mobius(d) as f64 * ((n / d) as f64).ln().powi(2))
        .sum()
}

/// Number of distinct prime factors by trial division.
pub fn distinct_primes(mut n: u64) -> u32 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            count += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    count + u32::from(n > 1)
}
