//! The functional-equation factor `chi(s) = 2^s pi^{s-1} Gamma(1-s) sin(pi s / 2)`
//! and its logarithmic derivative.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{digamma, ln_gamma};

// Below this |Im s| the factors are evaluated directly rather than in log space.
const DIRECT_IM_LIMIT: f64 = 20.0;

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// `log sin z` (any branch), stable for large `|Im z|`.
fn ln_sin(z: Complex64) -> Complex64 {
    if z.im > DIRECT_IM_LIMIT {
        // sin z = -e^{-iz}/(2i) (1 - e^{2iz})
        let w = (2.0 * i() * z).exp();
        -i() * z - (2.0 * i()).ln() + (Complex64::new(1.0, 0.0) - w).ln() + i() * PI
    } else if z.im < -DIRECT_IM_LIMIT {
        // sin z = e^{iz}/(2i) (1 - e^{-2iz})
        let w = (-2.0 * i() * z).exp();
        i() * z - (2.0 * i()).ln() + (Complex64::new(1.0, 0.0) - w).ln()
    } else {
        z.sin().ln()
    }
}

fn ln_cos(z: Complex64) -> Complex64 {
    ln_sin(z + PI / 2.0)
}

/// `chi(s)`.
///
/// For `Re s <= 1/2` the defining formula is used; otherwise the reflected
/// form `(2 pi)^s / (2 Gamma(s) cos(pi s / 2))`, so that the Gamma argument
/// always has positive real part. Poles (`s = 1, 3, 5, ...`) are a domain error.
pub fn chi(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s.im == 0.0 && s.re >= 1.0 && s.re.fract() == 0.0 && (s.re as i64) % 2 == 1 {
        return Err(Error::Domain(format!("chi has a pole at s = {}", s.re)));
    }
    let two_pi = 2.0 * PI;
    if s.re <= 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - s;
        let arg = s * (PI / 2.0);
        if s.im.abs() <= DIRECT_IM_LIMIT {
            let sin = arg.sin();
            if sin.norm() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let log_rest = s * LN_2 + (s - 1.0) * PI.ln() + ln_gamma(one_minus);
            Ok(log_rest.exp() * sin)
        } else {
            let log = s * LN_2 + (s - 1.0) * PI.ln() + ln_gamma(one_minus) + ln_sin(arg);
            Ok(log.exp())
        }
    } else {
        let arg = s * (PI / 2.0);
        if s.im.abs() <= DIRECT_IM_LIMIT {
            let cos = arg.cos();
            let log_rest = s * two_pi.ln() - LN_2 - ln_gamma(s);
            let value = log_rest.exp() / cos;
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(Error::Domain(format!("chi has a pole near s = {s}")));
            }
            Ok(value)
        } else {
            let log = s * two_pi.ln() - LN_2 - ln_gamma(s) - ln_cos(arg);
            Ok(log.exp())
        }
    }
}

/// `cot z`, stable for large `|Im z|`.
fn cot(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if z.im >= 0.0 {
        let w = (2.0 * i() * z).exp();
        i() * (w + one) / (w - one)
    } else {
        let w = (-2.0 * i() * z).exp();
        i() * (one + w) / (one - w)
    }
}

/// `(chi'/chi)(s) = log 2 pi - psi(1 - s) + (pi/2) cot(pi s / 2)` on the strip
/// `-1 <= Re s <= 2`, `|Im s| >= 1`.
pub fn chi_log_deriv(s: Complex64) -> Result<Complex64> {
    if !(-1.0..=2.0).contains(&s.re) || s.im.abs() < 1.0 || !s.im.is_finite() {
        return Err(Error::Domain(format!(
            "chi_log_deriv needs -1 <= Re s <= 2 and |Im s| >= 1, got {s}"
        )));
    }
    let one_minus = Complex64::new(1.0, 0.0) - s;
    Ok((2.0 * PI).ln() - digamma(one_minus) + (PI / 2.0) * cot(s * (PI / 2.0)))
}

/// `C = |t| * |(chi'/chi)(s) + log(|t| / 2 pi)|`, the constant implied by the
/// `O(1/|t|)` remainder at this point.
pub fn chi_log_deriv_remainder_constant(s: Complex64) -> Result<f64> {
    let v = chi_log_deriv(s)?;
    let t = s.im.abs();
    Ok(t * (v + (t / (2.0 * PI)).ln()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn special_values() {
        assert!((chi(c(0.5, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        let m1 = chi(c(-1.0, 0.0)).unwrap();
        assert!((m1 - c(-1.0 / (2.0 * PI * PI), 0.0)).norm() < 1e-14);
        // zeta(-1) = chi(-1) zeta(2)
        assert!((m1.re * PI * PI / 6.0 + 1.0 / 12.0).abs() < 1e-14);
        assert!((chi(c(2.0, 0.0)).unwrap() - c(-2.0 * PI * PI, 0.0)).norm() < 1e-10);
        assert_eq!(chi(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(chi(c(1.0, 0.0)).is_err());
        assert!(chi(c(3.0, 0.0)).is_err());
    }

    #[test]
    fn reflection_identity_on_grid() {
        for a in 0..10 {
            for b in 0..10 {
                let s = c(-0.5 + 0.2 * a as f64, -400.0 + 90.0 * b as f64 + 0.37);
                let prod = chi(s).unwrap() * chi(c(1.0, 0.0) - s).unwrap();
                assert!((prod - c(1.0, 0.0)).norm() < 1e-10, "s = {s}: {prod}");
            }
        }
    }

    #[test]
    fn branches_agree_near_the_switch() {
        // Both formulas are valid everywhere off the poles; check continuity at Re s = 1/2.
        for &t in &[3.0, 19.0, 25.0, 700.0] {
            let a = chi(c(0.5, t)).unwrap();
            let b = chi(c(0.5 + 1e-12, t)).unwrap();
            assert!((a - b).norm() < 1e-9 * a.norm(), "t = {t}");
            assert!((a.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn log_derivative_asymptotics() {
        let a = chi_log_deriv(c(0.5, 100.0)).unwrap();
        assert!((a.re + (100.0 / (2.0 * PI)).ln()).abs() < 0.05);
        let b = chi_log_deriv(c(0.5, 1000.0)).unwrap();
        assert!((b.re + (1000.0 / (2.0 * PI)).ln()).abs() < 0.005);
        // central difference of log chi
        let s = c(0.3, 57.0);
        let h = 1e-6;
        let fd = (chi(s + h).unwrap().ln() - chi(s - h).unwrap().ln()) / (2.0 * h);
        assert!((fd - chi_log_deriv(s).unwrap()).norm() < 1e-6);
        assert!(chi_log_deriv(c(3.0, 10.0)).is_err());
        assert!(chi_log_deriv(c(0.5, 0.5)).is_err());
    }

    #[test]
    fn log_derivative_symmetry() {
        for &(sig, t) in &[(0.5, 10.0), (0.0, 33.0), (1.7, 250.0), (-0.8, 4.0)] {
            let a = chi_log_deriv(c(sig, t)).unwrap();
            let b = chi_log_deriv(c(1.0 - sig, -t)).unwrap();
            // chi(s) chi(1-s) = 1 makes this an exact identity, no conjugation needed.
            assert!((a - b).norm() < 1e-10, "({sig}, {t})");
            let c_ = chi_log_deriv(c(sig, -t)).unwrap();
            assert!((a - c_.conj()).norm() < 1e-10);
        }
    }
}
