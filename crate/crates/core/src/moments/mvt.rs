//! Mean values `int g(t) A(t) B(t) dt` of two Dirichlet polynomials
//! `A = sum a_n n^{-it}`, `B = sum b_n n^{it}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance of the quadrature.
pub const MVT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MvtWeight {
    One,
    /// `log(t/2pi)`.
    Log,
    /// `log^2(t/2pi)`.
    LogSquared,
}

impl MvtWeight {
    pub const NAMES: [&'static str; 3] = ["1", "log", "log2"];

    pub fn eval(self, t: f64) -> f64 {
        let l = (t / (2.0 * PI)).ln();
        match self {
            Self::One => 1.0,
            Self::Log => l,
            Self::LogSquared => l * l,
        }
    }

    /// `int_{t1}^{t2} g`.
    pub fn integral(self, t1: f64, t2: f64) -> f64 {
        let prim = |t: f64| {
            let l = (t / (2.0 * PI)).ln();
            match self {
                Self::One => t,
                Self::Log => t * (l - 1.0),
                Self::LogSquared => t * (l * l - 2.0 * l + 2.0),
            }
        };
        prim(t2) - prim(t1)
    }

    /// `int_{t1}^{t2} |g'|`.
    pub fn total_variation(self, t1: f64, t2: f64) -> f64 {
        match self {
            Self::One => 0.0,
            Self::Log => (t2 / t1).ln(),
            Self::LogSquared => {
                let (a, b) = (self.eval(t1), self.eval(t2));
                if t1 < 2.0 * PI && 2.0 * PI < t2 {
                    a + b
                } else {
                    (b - a).abs()
                }
            }
        }
    }
}

impl FromStr for MvtWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "one" => Ok(Self::One),
            "log" => Ok(Self::Log),
            "log2" | "log^2" => Ok(Self::LogSquared),
            _ => Err(Error::UnknownName {
                name: s.to_string(),
                known: Self::NAMES.join(", "),
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MvtCheck {
    pub weight: MvtWeight,
    pub t1: f64,
    pub t2: f64,
    pub lhs: Complex64,
    /// `int g * sum a_n b_n`.
    pub main_term: Complex64,
    /// `(|g(T1)| + |g(T2)| + int |g'|) (sum n|a_n|^2)^{1/2} (sum n|b_n|^2)^{1/2}`.
    pub envelope: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MvtRow {
    pub weight: MvtWeight,
    pub t1: f64,
    pub t2: f64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub main_re: f64,
    pub main_im: f64,
    pub envelope: f64,
    pub error_ratio: f64,
}

impl MvtCheck {
    pub fn row(&self) -> MvtRow {
        MvtRow {
            weight: self.weight,
            t1: self.t1,
            t2: self.t2,
            lhs_re: self.lhs.re,
            lhs_im: self.lhs.im,
            main_re: self.main_term.re,
            main_im: self.main_term.im,
            envelope: self.envelope,
            error_ratio: self.error_ratio(),
        }
    }

    pub fn error_ratio(&self) -> f64 {
        (self.lhs - self.main_term).norm() / self.envelope
    }
}

fn simpson_step(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: usize,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature { a, b });
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}

/// Adaptive Simpson on `[a, b]` to relative tolerance `rel_tol`, after an
/// initial split into `pieces` panels.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, rel_tol: f64, pieces: usize) -> Result<Complex64> {
    let pieces = pieces.max(1);
    let h = (b - a) / pieces as f64;
    // Coarse magnitude estimate for the absolute target.
    let samples = 8 * pieces;
    let scale = (0..=samples)
        .map(|i| f(a + (b - a) * i as f64 / samples as f64).norm())
        .fold(0.0, f64::max)
        * (b - a);
    let tol = rel_tol * scale.max(f64::MIN_POSITIVE) / pieces as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..pieces {
        let (x0, x1) = (a + h * i as f64, a + h * (i + 1) as f64);
        let (f0, f1, fm) = (f(x0), f(x1), f(0.5 * (x0 + x1)));
        let whole = (f0 + fm * 4.0 + f1) * ((x1 - x0) / 6.0);
        total += simpson_step(f, x0, x1, f0, fm, f1, whole, tol, 50)?;
    }
    Ok(total)
}

fn eval_sum(coeffs: &BTreeMap<u64, Complex64>, t: f64, sign: f64) -> Complex64 {
    coeffs
        .iter()
        .map(|(&n, &c)| c * Complex64::from_polar(1.0, sign * t * (n as f64).ln()))
        .sum()
}

/// Both sides of the mean-value identity for finitely supported `a`, `b`.
pub fn mvt_check(
    a: &BTreeMap<u64, Complex64>,
    b: &BTreeMap<u64, Complex64>,
    weight: MvtWeight,
    t1: f64,
    t2: f64,
) -> Result<MvtCheck> {
    if !(t2 > t1) || t1 < 0.0 || (weight != MvtWeight::One && t1 <= 0.0) {
        return Err(Error::Domain(format!(
            "mean-value interval [{t1}, {t2}] invalid for weight {weight:?}"
        )));
    }
    if a.contains_key(&0) || b.contains_key(&0) {
        return Err(Error::Domain("coefficient index 0".into()));
    }
    let f = |t: f64| eval_sum(a, t, -1.0) * eval_sum(b, t, 1.0) * weight.eval(t);
    // Panels short enough to resolve the fastest oscillation.
    let max_n = a.keys().chain(b.keys()).copied().max().unwrap_or(1) as f64;
    let omega = 2.0 * max_n.ln().max(1.0);
    let pieces = ((t2 - t1) * omega / PI).ceil().clamp(1.0, 1e6) as usize;
    let lhs = adaptive_simpson(&f, t1, t2, MVT_TOLERANCE, pieces)?;
    let diag: Complex64 = a.iter().filter_map(|(n, &x)| b.get(n).map(|&y| x * y)).sum();
    let norm = |c: &BTreeMap<u64, Complex64>| c.iter().map(|(&n, x)| n as f64 * x.norm_sqr()).sum::<f64>().sqrt();
    let envelope = (weight.eval(t1).abs() + weight.eval(t2).abs() + weight.total_variation(t1, t2)) * norm(a) * norm(b);
    Ok(MvtCheck {
        weight,
        t1,
        t2,
        lhs,
        main_term: diag * weight.integral(t1, t2),
        envelope,
    })
}
