//! Riemann-Siegel theta and the Hardy Z function.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::zeta::{zeta, PrecisionProfile};
use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// `theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi`, continuous in `t`.
pub fn rs_theta(t: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// `e^{i theta(t)} zeta(1/2 + it)` before discarding the (vanishing) imaginary part.
pub fn hardy_z_complex(t: f64, profile: &PrecisionProfile) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("hardy_z needs t >= 0, got {t}")));
    }
    let rot = Complex64::from_polar(1.0, rs_theta(t));
    Ok(rot * zeta(Complex64::new(0.5, t), profile)?)
}

/// Hardy's `Z(t)`, real on the real line; its sign changes are the zero ordinates.
pub fn hardy_z(t: f64, profile: &PrecisionProfile) -> Result<f64> {
    Ok(hardy_z_complex(t, profile)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_at_origin_is_zeta_half() {
        let p = PrecisionProfile::standard();
        assert_eq!(rs_theta(0.0), 0.0);
        let z0 = hardy_z(0.0, &p).unwrap();
        let zh = zeta(Complex64::new(0.5, 0.0), &PrecisionProfile::oracle()).unwrap();
        assert!((z0 - zh.re).abs() < 1e-12);
        assert!((z0 + 1.4603545).abs() < 1e-7);
    }

    #[test]
    fn z_is_real() {
        let p = PrecisionProfile::standard();
        for &t in &[10.0, 50.0, 100.0, 1234.5, 9000.0] {
            let v = hardy_z_complex(t, &p).unwrap();
            assert!(v.im.abs() <= 1e-9, "t = {t}: {v}");
        }
    }

    #[test]
    fn first_sign_change() {
        let p = PrecisionProfile::standard();
        let a = hardy_z(14.0, &p).unwrap();
        let b = hardy_z(14.2, &p).unwrap();
        assert!(a * b < 0.0);
        assert!(hardy_z(-1.0, &p).is_err());
    }

    #[test]
    fn theta_asymptotic() {
        // theta(t) ~ t/2 log(t/2pi) - t/2 - pi/8 + 1/(48 t)
        let t = 1000.0;
        let approx = t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0 + 1.0 / (48.0 * t);
        assert!((rs_theta(t) - approx).abs() < 1e-8);
    }
}
