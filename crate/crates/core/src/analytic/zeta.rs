//! Euler-Maclaurin evaluation of `zeta(s)` and `zeta'(s)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::bernoulli_over_factorial;

/// Default ceiling on `|Im s|`.
pub const DEFAULT_T_CEILING: f64 = 1.0e5;

/// Truncation parameters for Euler-Maclaurin summation.
///
/// The main-sum length is the smallest `N` for which the first omitted
/// Bernoulli correction falls below `tolerance`, scaled by `term_scale` and
/// floored at `min_terms`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionProfile {
    pub name: String,
    pub bernoulli_order: usize,
    pub term_scale: f64,
    pub min_terms: usize,
    pub tolerance: f64,
    pub t_ceiling: f64,
}

impl PrecisionProfile {
    pub fn standard() -> Self {
        Self {
            name: "standard".into(),
            bernoulli_order: 20,
            term_scale: 1.0,
            min_terms: 20,
            tolerance: 1e-12,
            t_ceiling: DEFAULT_T_CEILING,
        }
    }

    /// Doubled Bernoulli order and doubled main-sum length.
    pub fn oracle() -> Self {
        Self {
            name: "oracle".into(),
            bernoulli_order: 40,
            term_scale: 2.0,
            min_terms: 40,
            tolerance: 1e-12,
            t_ceiling: DEFAULT_T_CEILING,
        }
    }

    pub fn names() -> &'static [&'static str] {
        &["standard", "oracle"]
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "standard" => Ok(Self::standard()),
            "oracle" => Ok(Self::oracle()),
            other => Err(Error::UnknownName {
                name: other.to_string(),
                known: Self::names().join(", "),
            }),
        }
    }

    pub fn with_ceiling(mut self, t_ceiling: f64) -> Self {
        self.t_ceiling = t_ceiling;
        self
    }

    /// Main-sum length `N` used at `s`.
    pub fn terms_for(&self, s: Complex64) -> usize {
        let m = self.bernoulli_order;
        // log |B_{2m+2}/(2m+2)! * prod_{j=0}^{2m} (s+j)| - log tol = (sigma + 2m + 1) log N
        let mut log_mag = bernoulli_over_factorial(m + 1).abs().ln();
        for j in 0..=(2 * m) {
            log_mag += (s + j as f64).norm().max(1e-300).ln();
        }
        let decay = s.re + 2.0 * m as f64 + 1.0;
        let n = if decay > 1.0 {
            ((log_mag - self.tolerance.ln()) / decay).exp()
        } else {
            self.min_terms as f64
        };
        let n = (n * self.term_scale).ceil();
        let cap = 1.0e8;
        (n.min(cap) as usize).max(self.min_terms)
    }
}

impl Default for PrecisionProfile {
    fn default() -> Self {
        Self::standard()
    }
}

fn check_domain(s: Complex64, profile: &PrecisionProfile) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::PoleAtOne);
    }
    if s.im.abs() > profile.t_ceiling {
        return Err(Error::CeilingExceeded {
            t: s.im.abs(),
            ceiling: profile.t_ceiling,
        });
    }
    Ok(())
}

/// `n^{-s}` for a positive integer `n` given `ln n`.
#[inline]
fn pow_neg(ln_n: f64, s: Complex64) -> Complex64 {
    let mag = (-s.re * ln_n).exp();
    let (sin, cos) = (s.im * ln_n).sin_cos();
    Complex64::new(mag * cos, -mag * sin)
}

/// `zeta(s)` by Euler-Maclaurin summation.
pub fn zeta(s: Complex64, profile: &PrecisionProfile) -> Result<Complex64> {
    check_domain(s, profile)?;
    let n = profile.terms_for(s);
    Ok(zeta_em(s, n, profile.bernoulli_order).0)
}

/// `zeta'(s)` by termwise differentiation of the Euler-Maclaurin formula.
pub fn zeta_prime(s: Complex64, profile: &PrecisionProfile) -> Result<Complex64> {
    check_domain(s, profile)?;
    let n = profile.terms_for(s);
    Ok(zeta_em(s, n, profile.bernoulli_order).1)
}

/// Both `zeta(s)` and `zeta'(s)` from one pass.
pub fn zeta_and_prime(s: Complex64, profile: &PrecisionProfile) -> Result<(Complex64, Complex64)> {
    check_domain(s, profile)?;
    let n = profile.terms_for(s);
    Ok(zeta_em(s, n, profile.bernoulli_order))
}

/// Euler-Maclaurin with main-sum length `n_terms` and Bernoulli order `m`.
/// Returns `(zeta(s), zeta'(s))`.
pub(crate) fn zeta_em(s: Complex64, n_terms: usize, m: usize) -> (Complex64, Complex64) {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    // Summed from the small tail end first.
    for k in (1..n_terms).rev() {
        let ln_k = (k as f64).ln();
        let term = pow_neg(ln_k, s);
        sum += term;
        dsum -= term * ln_k;
    }
    let big_n = n_terms as f64;
    let ln_n = big_n.ln();
    let n_pow = pow_neg(ln_n, s); // N^{-s}
    let sm1 = s - 1.0;
    let n_one_minus_s = n_pow * big_n; // N^{1-s}

    let integral = n_one_minus_s / sm1;
    let d_integral = -integral * ln_n - n_one_minus_s / (sm1 * sm1);
    let half = 0.5 * n_pow;
    let d_half = -half * ln_n;

    // sum_k B_{2k}/(2k)! * q_k with q_k = P_k(s) N^{1-s-2k}, P_k(s) = prod_{j=0}^{2k-2} (s+j).
    // q_k is advanced directly so that P_k alone never overflows.
    let mut corr = Complex64::new(0.0, 0.0);
    let mut dcorr = Complex64::new(0.0, 0.0);
    let inv_n2 = 1.0 / (big_n * big_n);
    let mut q = s * n_one_minus_s * inv_n2;
    let mut dq = (n_one_minus_s - s * n_one_minus_s * ln_n) * inv_n2;
    for k in 1..=m {
        let c = bernoulli_over_factorial(k);
        corr += q * c;
        dcorr += dq * c;
        let a = s + (2 * k - 1) as f64;
        let b = s + (2 * k) as f64;
        let ab = a * b * inv_n2;
        let next_dq = dq * ab + q * (a + b) * inv_n2;
        q *= ab;
        dq = next_dq;
    }
    (
        sum + integral + half + corr,
        dsum + d_integral + d_half + dcorr,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn special_values() {
        let p = PrecisionProfile::standard();
        assert!((zeta(c(2.0, 0.0), &p).unwrap().re - PI * PI / 6.0).abs() < 1e-10);
        assert!((zeta(c(0.0, 0.0), &p).unwrap() - c(-0.5, 0.0)).norm() < 1e-12);
        assert!((zeta(c(-1.0, 0.0), &p).unwrap() - c(-1.0 / 12.0, 0.0)).norm() < 1e-12);
        let zp0 = zeta_prime(c(0.0, 0.0), &p).unwrap();
        assert!((zp0.re + 0.5 * (2.0 * PI).ln()).abs() < 1e-10);
    }

    #[test]
    fn zeta_prime_at_two_matches_direct_series() {
        // -sum log n / n^2 with an integral tail estimate
        let n_max = 2_000_000u64;
        let mut acc = 0.0;
        for n in (2..=n_max).rev() {
            let x = n as f64;
            acc += x.ln() / (x * x);
        }
        let x = n_max as f64;
        // int_x^inf log u / u^2 du = (log x + 1)/x, minus half the last term
        acc += (x.ln() + 1.0) / x - 0.5 * x.ln() / (x * x);
        let p = PrecisionProfile::standard();
        let zp = zeta_prime(c(2.0, 0.0), &p).unwrap();
        assert!((zp.re + acc).abs() < 1e-10, "{} vs {}", zp.re, -acc);
        assert!((zp.re - (-0.9375482543158437)).abs() < 1e-10);
    }

    #[test]
    fn errors() {
        let p = PrecisionProfile::standard();
        assert!(matches!(zeta(c(1.0, 0.0), &p), Err(Error::PoleAtOne)));
        assert!(matches!(
            zeta(c(0.5, 2.0e5), &p),
            Err(Error::CeilingExceeded { .. })
        ));
        assert!(PrecisionProfile::by_name("nope").is_err());
    }

    #[test]
    fn standard_and_oracle_agree() {
        let std = PrecisionProfile::standard();
        let orc = PrecisionProfile::oracle();
        for &(re, im) in &[(0.5, 0.0), (0.5, 14.1347), (0.2, 300.0), (0.9, 2500.0), (0.5, 20000.0)] {
            let a = zeta(c(re, im), &std).unwrap();
            let b = zeta(c(re, im), &orc).unwrap();
            assert!((a - b).norm() < 1e-10, "s = {re}+{im}i: {a} vs {b}");
        }
        let half = zeta(c(0.5, 0.0), &orc).unwrap();
        assert!((half.re - (-1.4603545088095868)).abs() < 1e-10);
    }
}
