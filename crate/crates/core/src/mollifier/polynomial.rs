//! Truncated exponentials, block prime sums, mollifier factors and their
//! Dirichlet coefficient expansion.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::scheme::PreparedScheme;
use crate::error::{Error, Result};

/// Largest support `expand_coefficients` will materialise.
pub const SUPPORT_GUARD: usize = 10_000_000;

/// `E_ell(x) = sum_{j <= ceil(ell)} x^j / j!`.
pub fn truncated_exp(ell: f64, x: Complex64) -> Complex64 {
    assert!(ell >= 0.0, "truncation threshold must be non-negative");
    truncated_exp_order(ell.ceil() as usize, x)
}

/// Partial exponential series through degree `order`.
pub fn truncated_exp_order(order: usize, x: Complex64) -> Complex64 {
    // Horner from the top degree down.
    let mut acc = Complex64::new(1.0, 0.0);
    for j in (1..=order).rev() {
        acc = Complex64::new(1.0, 0.0) + acc * x / j as f64;
    }
    acc
}

/// `P_j(s) = sum_{p in I_j} p^{-s}`.
pub fn eval_prime_sum(scheme: &PreparedScheme, j: usize, s: Complex64) -> Result<Complex64> {
    Ok(prime_sum(scheme.primes(j)?, s))
}

fn prime_sum(primes: &[u64], s: Complex64) -> Complex64 {
    // Largest primes (smallest terms) first.
    primes
        .iter()
        .rev()
        .map(|&p| (-s * (p as f64).ln()).exp())
        .sum()
}

/// `N_j(s, alpha) = E_{threshold_j}(alpha P_j(s))`.
pub fn eval_factor(scheme: &PreparedScheme, j: usize, alpha: f64, s: Complex64) -> Result<Complex64> {
    let block = scheme.scheme.block(j)?;
    let p = eval_prime_sum(scheme, j, s)?;
    Ok(truncated_exp(block.threshold, p * alpha))
}

/// `N(s, alpha) = prod_j N_j(s, alpha)`; identically 1 for a scheme without blocks.
pub fn eval_mollifier(scheme: &PreparedScheme, alpha: f64, s: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 1..=scheme.num_blocks() {
        acc *= eval_factor(scheme, j, alpha, s)?;
    }
    Ok(acc)
}

/// `N(s, alpha)` at many points, in parallel over `s`.
pub fn eval_mollifier_many(scheme: &PreparedScheme, alpha: f64, points: &[Complex64]) -> Result<Vec<Complex64>> {
    points
        .par_iter()
        .map(|&s| eval_mollifier(scheme, alpha, s))
        .collect()
}

/// Finite Dirichlet series `sum_n c(n) n^{-s}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DirichletPolynomial {
    coeffs: BTreeMap<u64, Complex64>,
}

impl DirichletPolynomial {
    pub fn new(coeffs: BTreeMap<u64, Complex64>) -> Result<Self> {
        if coeffs.contains_key(&0) {
            return Err(Error::Domain("Dirichlet polynomial frequency 0".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &BTreeMap<u64, Complex64> {
        &self.coeffs
    }

    /// Largest frequency with a stored coefficient; 0 when empty.
    pub fn max_frequency(&self) -> u64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        // Descending n: small terms first.
        self.coeffs
            .iter()
            .rev()
            .map(|(&n, &c)| c * (-s * (n as f64).ln()).exp())
            .sum()
    }

    pub fn evaluate_many(&self, points: &[Complex64]) -> Vec<Complex64> {
        points.par_iter().map(|&s| self.evaluate(s)).collect()
    }
}

/// One coefficient `a_alpha(n)` with the shape of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoefficientTerm {
    pub value: f64,
    /// `omega(n)`.
    pub omega: u32,
    /// `Omega(n)`.
    pub big_omega: u32,
}

/// `a_alpha(n)` on the full support of `N(s, alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MollifierCoefficients {
    pub alpha: f64,
    terms: BTreeMap<u64, CoefficientTerm>,
}

impl MollifierCoefficients {
    pub fn terms(&self) -> &BTreeMap<u64, CoefficientTerm> {
        &self.terms
    }

    /// `a_alpha(n)`, zero off the support.
    pub fn get(&self, n: u64) -> f64 {
        self.terms.get(&n).map_or(0.0, |t| t.value)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_frequency(&self) -> u64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn to_polynomial(&self) -> DirichletPolynomial {
        DirichletPolynomial {
            coeffs: self
                .terms
                .iter()
                .map(|(&n, t)| (n, Complex64::new(t.value, 0.0)))
                .collect(),
        }
    }

    /// Frequencies `n` whose coefficient violates `|a(n)| <= e^{|alpha| omega(n)}`.
    pub fn coefficient_bound_violations(&self) -> Vec<u64> {
        let a = self.alpha.abs();
        self.terms
            .iter()
            .filter(|(_, t)| t.value.abs() > (a * t.omega as f64).exp() * (1.0 + 1e-12))
            .map(|(&n, _)| n)
            .collect()
    }

    /// Writes `n,a_alpha_n` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "a_alpha_n"])?;
        for (&n, t) in &self.terms {
            w.write_record([n.to_string(), format!("{:e}", t.value)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Monomials of one block: `(n, alpha^Omega g(n), omega, Omega)` with `Omega(n) <= order`.
fn block_terms(primes: &[u64], order: usize, alpha: f64, budget: usize) -> Result<Vec<(u64, CoefficientTerm)>> {
    let mut out = vec![(
        1u64,
        CoefficientTerm {
            value: 1.0,
            omega: 0,
            big_omega: 0,
        },
    )];
    if alpha == 0.0 {
        return Ok(out);
    }
    // Each prime multiplies the current list by p^e / e! alpha^e for the
    // exponents e that keep Omega within the order.
    for &p in primes {
        let base = out.len();
        for i in 0..base {
            let (n, t) = out[i];
            let mut m = n;
            let mut c = t.value;
            for e in 1..=(order - t.big_omega as usize) {
                m = m.checked_mul(p).filter(|&m| m <= i64::MAX as u64).ok_or_else(|| {
                    Error::SupportSize(format!("frequency overflows 2^63 at prime {p}"))
                })?;
                c *= alpha / e as f64;
                out.push((
                    m,
                    CoefficientTerm {
                        value: c,
                        omega: t.omega + 1,
                        big_omega: t.big_omega + e as u32,
                    },
                ));
                if out.len() > budget {
                    return Err(Error::SupportSize(format!(
                        "block support exceeds {budget} terms"
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Full coefficient map of `N(s, alpha)`. Blocks use disjoint primes, so the
/// product of block terms is a bijection onto the support.
pub fn expand_coefficients(scheme: &PreparedScheme, alpha: f64) -> Result<MollifierCoefficients> {
    expand_coefficients_with_guard(scheme, alpha, SUPPORT_GUARD)
}

pub fn expand_coefficients_with_guard(
    scheme: &PreparedScheme,
    alpha: f64,
    guard: usize,
) -> Result<MollifierCoefficients> {
    let mut acc: Vec<(u64, CoefficientTerm)> = vec![(
        1,
        CoefficientTerm {
            value: 1.0,
            omega: 0,
            big_omega: 0,
        },
    )];
    for (j, block) in scheme.blocks().iter().enumerate() {
        let terms = block_terms(scheme.primes(j + 1)?, block.order, alpha, guard)?;
        let size = acc.len().saturating_mul(terms.len());
        if size > guard {
            return Err(Error::SupportSize(format!(
                "support would have {size} terms, guard is {guard}"
            )));
        }
        let mut next = Vec::with_capacity(size);
        for &(m, a) in &acc {
            for &(n, b) in &terms {
                let mn = m
                    .checked_mul(n)
                    .filter(|&x| x <= i64::MAX as u64)
                    .ok_or_else(|| Error::SupportSize("frequency overflows 2^63".into()))?;
                next.push((
                    mn,
                    CoefficientTerm {
                        value: a.value * b.value,
                        omega: a.omega + b.omega,
                        big_omega: a.big_omega + b.big_omega,
                    },
                ));
            }
        }
        acc = next;
    }
    Ok(MollifierCoefficients {
        alpha,
        terms: acc.into_iter().collect(),
    })
}
