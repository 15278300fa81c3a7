//! Arithmetic functions: `Lambda`, `Lambda_2`, `Lambda_L`, `g`, `omega`, `Omega`,
//! and Mertens prime sums.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::sieve::{factorize_trial, ArithmeticTable, FactoredInteger};

/// `Lambda(n)`: `log p` when `n = p^k`, else 0.
pub fn von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    von_mangoldt_factored(&factorize_trial(n))
}

pub fn von_mangoldt_factored(f: &FactoredInteger) -> f64 {
    match f.prime_power() {
        Some((p, _)) => (p as f64).ln(),
        None => 0.0,
    }
}

/// `Lambda(a/b)`, which vanishes unless `a/b` is an integer.
pub fn von_mangoldt_rational(a: u64, b: u64) -> f64 {
    assert!(a >= 1 && b >= 1, "Lambda(a/b) needs positive a, b");
    if a % b != 0 {
        return 0.0;
    }
    von_mangoldt(a / b)
}

/// `Lambda_2(n) = Lambda(n) log n + (Lambda * Lambda)(n)`.
pub fn lambda2(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    lambda2_factored(&factorize_trial(n))
}

pub fn lambda2_factored(f: &FactoredInteger) -> f64 {
    let n = f.n;
    if n < 2 {
        return 0.0;
    }
    let mut total = von_mangoldt_factored(f) * (n as f64).ln();
    // (Lambda * Lambda)(n): only prime-power divisors d with n/d a prime power contribute.
    for &(p, e) in &f.factors {
        let lp = (p as f64).ln();
        let mut d = 1u64;
        for _ in 0..e {
            d *= p;
            let rest = n / d;
            if rest == 1 {
                continue;
            }
            let lr = von_mangoldt(rest);
            total += lp * lr;
        }
    }
    total
}

/// Dense table of `Lambda(n)` for `n < len`.
pub fn von_mangoldt_table(table: &ArithmeticTable, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for &p in table.primes() {
        if p as usize >= len {
            break;
        }
        let lp = (p as f64).ln();
        let mut q = p;
        while (q as usize) < len {
            out[q as usize] = lp;
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
        }
    }
    out
}

/// Dense table of `Lambda_2(n)` for `n < len`, by the same identity.
pub fn lambda2_table(table: &ArithmeticTable, len: usize) -> Vec<f64> {
    let lam = von_mangoldt_table(table, len);
    let conv = super::convolution::dirichlet_convolve_dense(&lam, &lam);
    (0..len)
        .map(|n| if n < 2 { 0.0 } else { lam[n] * (n as f64).ln() + conv[n] })
        .collect()
}

/// `Lambda_L(n)`: `Lambda(n)` if `n = p`, or if `n = p^2 <= script_l`; else 0.
pub fn lambda_script_l(n: u64, script_l: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    match factorize_trial(n).prime_power() {
        Some((p, 1)) => (p as f64).ln(),
        Some((p, 2)) if (n as f64) <= script_l => (p as f64).ln(),
        _ => 0.0,
    }
}

/// `g(n) = prod 1/e_i!` for `n = prod p_i^{e_i}`, exactly.
pub fn g_mult(n: u64) -> BigRational {
    assert!(n >= 1, "g(n) needs n >= 1");
    g_mult_factored(&factorize_trial(n))
}

pub fn g_mult_factored(f: &FactoredInteger) -> BigRational {
    let mut den = BigInt::one();
    for &(_, e) in &f.factors {
        for i in 2..=e {
            den *= BigInt::from(i);
        }
    }
    BigRational::new(BigInt::one(), den)
}

/// `g(n)` as a float.
pub fn g_mult_f64(f: &FactoredInteger) -> f64 {
    f.factors
        .iter()
        .map(|&(_, e)| 1.0 / factorial_f64(e))
        .product()
}

pub(crate) fn factorial_f64(e: u32) -> f64 {
    (2..=e).map(|i| i as f64).product()
}

/// `(omega(n), Omega(n))`.
pub fn omega_pair(n: u64) -> (u32, u32) {
    assert!(n >= 1, "omega needs n >= 1");
    let f = factorize_trial(n);
    (f.omega(), f.big_omega())
}

/// `omega(n) / (log n / log log n)`, the ratio against the classical order bound.
pub fn omega_ratio(n: u64) -> Option<f64> {
    if n < 3 {
        return None;
    }
    let x = n as f64;
    let bound = x.ln() / x.ln().ln();
    Some(omega_pair(n).0 as f64 / bound)
}

/// `sum_{p <= x} 1/p` over the primes of `table`.
pub fn mertens_prime_sum_with(table: &ArithmeticTable, x: f64) -> crate::Result<f64> {
    let primes = table.primes_in(0.0, x)?;
    // Largest terms last for a slightly better rounded sum.
    Ok(primes.iter().rev().map(|&p| 1.0 / p as f64).sum())
}

/// `sum_{p <= x} 1/p`, sieving up to `x`.
pub fn mertens_prime_sum(x: f64) -> f64 {
    assert!(x >= 2.0, "mertens_prime_sum needs x >= 2");
    let table = ArithmeticTable::new(x.floor() as u64);
    mertens_prime_sum_with(&table, x).expect("table covers x")
}
