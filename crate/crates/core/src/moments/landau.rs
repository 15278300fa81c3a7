//! Sums `sum_{T < gamma <= 2T} (a/b)^{i gamma}` against their main terms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::reduce::pairwise_sum;
use crate::analytic::ZeroTable;
use crate::arithmetic::von_mangoldt_rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LandauCheck {
    pub a: u64,
    pub b: u64,
    pub t: f64,
    pub count: usize,
    pub lhs: Complex64,
    pub main_term: Complex64,
    /// `sqrt(ab) (log T)^2`.
    pub error_envelope: f64,
}

/// CSV row `a,b,T,lhs_re,lhs_im,main_re,envelope`.
#[derive(Clone, Debug, Serialize)]
pub struct LandauRow {
    pub a: u64,
    pub b: u64,
    #[serde(rename = "T")]
    pub t: f64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub main_re: f64,
    pub envelope: f64,
}

impl LandauCheck {
    pub fn row(&self) -> LandauRow {
        LandauRow {
            a: self.a,
            b: self.b,
            t: self.t,
            lhs_re: self.lhs.re,
            lhs_im: self.lhs.im,
            main_re: self.main_term.re,
            envelope: self.error_envelope,
        }
    }

    /// `|lhs - main| / envelope`.
    pub fn error_ratio(&self) -> f64 {
        (self.lhs - self.main_term).norm() / self.error_envelope
    }

    pub fn within(&self, slack: f64) -> bool {
        self.error_ratio() <= slack
    }
}

/// Main term: `N(T, 2T)` when `a = b`, else `-(T/2pi) Lambda(x)/sqrt(x)` with `x = max/min`.
pub fn landau_main_term(a: u64, b: u64, t: f64, count: usize) -> f64 {
    if a == b {
        return count as f64;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    let x = hi as f64 / lo as f64;
    -(t / (2.0 * PI)) * von_mangoldt_rational(hi, lo) / x.sqrt()
}

pub fn landau_sum(a: u64, b: u64, t: f64, zeros: &ZeroTable) -> Result<LandauCheck> {
    if a == 0 || b == 0 {
        return Err(Error::Domain(format!("Landau sum needs a, b >= 1, got ({a}, {b})")));
    }
    let window = zeros.window(t, 2.0 * t)?;
    let lhs = if a == b {
        Complex64::new(window.len() as f64, 0.0)
    } else {
        let l = (a as f64 / b as f64).ln();
        let terms: Vec<Complex64> = window
            .iter()
            .map(|z| Complex64::from_polar(1.0, z.gamma * l))
            .collect();
        pairwise_sum(&terms)
    };
    Ok(LandauCheck {
        a,
        b,
        t,
        count: window.len(),
        lhs,
        main_term: Complex64::new(landau_main_term(a, b, t, window.len()), 0.0),
        error_envelope: (a as f64 * b as f64).sqrt() * t.ln().powi(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_terms() {
        assert_eq!(landau_main_term(5, 5, 10.0, 7), 7.0);
        assert_eq!(landau_main_term(6, 1, 2500.0, 0), 0.0);
        let m = landau_main_term(2, 1, 2500.0, 0);
        assert!((m + 195.0).abs() < 0.1, "{m}");
        assert_eq!(landau_main_term(1, 2, 2500.0, 0), m);
        assert_eq!(landau_main_term(3, 2, 2500.0, 0), 0.0);
    }
}
