//! Closed forms: moments of `Re X_p`, Bessel products, the multinomial moment
//! bound and Stirling's bounds.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::special::{bessel_i0, ln_factorial};

/// `E[(Re X_p)^m]`: `C(2h, h) 2^{-m}` for `m = 2h`, 0 for odd `m`.
pub fn moment_re_xp(m: u32) -> BigRational {
    if m % 2 == 1 {
        return BigRational::zero();
    }
    let h = m / 2;
    BigRational::new(binomial(BigInt::from(m), BigInt::from(h)), BigInt::one() << m as usize)
}

/// `prod_p I_0(2 w(p)/sqrt p + 2(k-1)/sqrt p)` over `(p, w(p))`; with all `w = 0`
/// this is the `(k-1)`-only product.
pub fn expectation_product(prime_weights: &[(u64, f64)], k: f64) -> Result<f64> {
    let mut acc = 1.0;
    for &(p, w) in prime_weights {
        let r = (p as f64).sqrt();
        acc *= bessel_i0(2.0 * w / r + 2.0 * (k - 1.0) / r)?;
    }
    Ok(acc)
}

/// Compositions of `m` into `parts` non-negative parts.
pub fn composition_count(m: u64, parts: u64) -> u64 {
    if parts == 0 {
        return u64::from(m == 0);
    }
    binomial(BigInt::from(m + parts - 1), BigInt::from(parts - 1))
        .to_u64()
        .unwrap_or(u64::MAX)
}

/// `E[(2 Re P(X))^{2m}]` for `P = sum_p X_p / sqrt p`, exactly:
/// `sum multinom(2m; 2m_1, ..) prod C(2m_i, m_i) / p_i^{m_i}`. Odd powers vanish.
pub fn re_prime_sum_moment_exact(primes: &[u64], m: u32) -> BigRational {
    let fact = |n: u32| -> BigInt { (1..=n).map(BigInt::from).product() };
    let total = fact(2 * m);
    let mut acc = BigRational::zero();
    let mut parts = vec![0u32; primes.len()];
    fn walk(
        i: usize,
        left: u32,
        parts: &mut Vec<u32>,
        primes: &[u64],
        total: &BigInt,
        fact: &dyn Fn(u32) -> BigInt,
        acc: &mut BigRational,
    ) {
        if i + 1 == parts.len() || parts.is_empty() {
            if parts.is_empty() {
                if left == 0 {
                    *acc += BigRational::one();
                }
                return;
            }
            parts[i] = left;
            let mut num = total.clone();
            let mut den = BigInt::one();
            for (&mi, &p) in parts.iter().zip(primes) {
                // multinom denominator (2m_i)!, times C(2m_i, m_i) / p^{m_i}
                den *= fact(2 * mi);
                num *= binomial(BigInt::from(2 * mi), BigInt::from(mi));
                den *= BigInt::from(p).pow(mi);
            }
            *acc += BigRational::new(num, den);
            return;
        }
        for mi in 0..=left {
            parts[i] = mi;
            walk(i + 1, left - mi, parts, primes, total, fact, acc);
        }
    }
    walk(0, m, &mut parts, primes, &total, &fact, &mut acc);
    acc
}

/// `(2m)! / (2^{2m} m!) (sum_p 4/p)^m`, exactly.
pub fn multinomial_bound_exact(primes: &[u64], m: u32) -> BigRational {
    let fact = |n: u32| -> BigInt { (1..=n).map(BigInt::from).product() };
    let s: BigRational = primes
        .iter()
        .map(|&p| BigRational::new(BigInt::from(4), BigInt::from(p)))
        .fold(BigRational::zero(), |a, b| a + b);
    let c = BigRational::new(fact(2 * m), (BigInt::one() << (2 * m) as usize) * fact(m));
    c * num_traits::pow(s, m as usize)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StirlingBounds {
    pub n: u64,
    pub ln_lower: f64,
    pub ln_factorial: f64,
    pub ln_upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl StirlingBounds {
    pub fn lower(&self) -> f64 {
        self.ln_lower.exp()
    }

    pub fn upper(&self) -> f64 {
        self.ln_upper.exp()
    }
}

/// `(n/e)^n <= n! <= n (n/e)^n`, compared in log space.
pub fn stirling_bounds(n: u64) -> StirlingBounds {
    assert!(n >= 1, "Stirling bounds need n >= 1");
    let x = n as f64;
    let ln_lower = x * (x.ln() - 1.0);
    let ln_upper = ln_lower + x.ln();
    let lf = ln_factorial(n);
    let guard = 1e-12 * lf.abs().max(1.0);
    StirlingBounds {
        n,
        ln_lower,
        ln_factorial: lf,
        ln_upper,
        lower_holds: ln_lower <= lf + guard,
        upper_holds: lf <= ln_upper + guard,
    }
}

/// Smallest `n0 <= limit` with the upper bound holding on `n0..=limit`.
pub fn stirling_upper_crossover(limit: u64) -> Option<u64> {
    let mut n0 = None;
    for n in (1..=limit).rev() {
        if stirling_bounds(n).upper_holds {
            n0 = Some(n);
        } else {
            break;
        }
    }
    n0
}
