//! The twisted sum `S = sum zeta'(rho) N(rho, k-1) N(conj rho, k)` and its Hölder split.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::moment::zeta_prime_at_zeros;
use super::reduce::pairwise_sum;
use crate::analytic::{PrecisionProfile, ZeroTable};
use crate::error::{Error, Result};
use crate::mollifier::{eval_mollifier, PreparedScheme};

/// `zeta'`, `N(rho, k-1)` and `N(conj rho, k)` at one zero.
#[derive(Clone, Copy, Debug)]
pub struct MollifiedZero {
    pub gamma: f64,
    pub zeta_prime: Complex64,
    pub n_km1: Complex64,
    pub n_k_conj: Complex64,
}

/// Evaluates the mollifier at each zero; `values` are aligned with `gammas`.
pub fn mollify_zeros(gammas: &[f64], values: &[Complex64], scheme: &PreparedScheme, k: f64) -> Result<Vec<MollifiedZero>> {
    assert_eq!(gammas.len(), values.len());
    gammas
        .par_iter()
        .zip(values.par_iter())
        .map(|(&g, &zp)| {
            let rho = Complex64::new(0.5, g);
            Ok(MollifiedZero {
                gamma: g,
                zeta_prime: zp,
                n_km1: eval_mollifier(scheme, k - 1.0, rho)?,
                // 1 - rho = conj(rho) on the critical line.
                n_k_conj: eval_mollifier(scheme, k, rho.conj())?,
            })
        })
        .collect()
}

/// Zeros in `(0, T]` with their mollified data.
pub fn mollified_window(zeros: &ZeroTable, t: f64, scheme: &PreparedScheme, k: f64, profile: &PrecisionProfile) -> Result<Vec<MollifiedZero>> {
    let w = zeros.window(zeros.t_lo, t)?;
    if w.is_empty() {
        return Err(Error::EmptyTable);
    }
    let values = zeta_prime_at_zeros(w, profile)?;
    let gammas: Vec<f64> = w.iter().map(|z| z.gamma).collect();
    mollify_zeros(&gammas, &values, scheme, k)
}

pub fn twisted_sum_from(data: &[MollifiedZero]) -> Complex64 {
    let terms: Vec<Complex64> = data.iter().map(|d| d.zeta_prime * d.n_km1 * d.n_k_conj).collect();
    pairwise_sum(&terms)
}

/// The raw twisted sum over `0 < gamma <= T`.
pub fn twisted_sum(zeros: &ZeroTable, t: f64, scheme: &PreparedScheme, k: f64, profile: &PrecisionProfile) -> Result<Complex64> {
    Ok(twisted_sum_from(&mollified_window(zeros, t, scheme, k, profile)?))
}

/// `T (log T)^{k^2 + 2}`, the scale of the twisted sum.
pub fn twisted_scale(t: f64, k: f64) -> f64 {
    t * t.ln().powf(k * k + 2.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderCheck {
    pub k: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub lhs: f64,
    #[serde(rename = "f1")]
    pub factor1: f64,
    #[serde(rename = "f2")]
    pub factor2: f64,
    #[serde(rename = "f3")]
    pub factor3: f64,
    /// `lhs / (f1 f2 f3)`.
    pub slack: f64,
}

impl HolderCheck {
    pub fn holds(&self) -> bool {
        self.slack <= 1.0 + 1e-12
    }
}

/// Hölder split of `|S|`. For `k <= 1/2`:
/// `(sum |zeta'|^{2k})^{1/2} (sum |zeta' N_{k-1}|^2)^{(1-k)/2} (sum |N_k|^{2/k} |N_{k-1}|^2)^{k/2}`;
/// above: `(sum |zeta'|^{2k})^{1/(2k)} (sum |N_{k-1} N_k|^{2k/(2k-1)})^{(2k-1)/(2k)}`.
pub fn holder_from(data: &[MollifiedZero], t: f64, k: f64) -> Result<HolderCheck> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("Hölder split needs k > 0, got {k}")));
    }
    let lhs = twisted_sum_from(data).norm();
    let sum = |f: &dyn Fn(&MollifiedZero) -> f64| pairwise_sum(&data.iter().map(f).collect::<Vec<_>>());
    let zk = sum(&|d| d.zeta_prime.norm().powf(2.0 * k));
    let (f1, f2, f3) = if k <= 0.5 {
        let s2 = sum(&|d| (d.zeta_prime * d.n_km1).norm_sqr());
        let s3 = sum(&|d| d.n_k_conj.norm().powf(2.0 / k) * d.n_km1.norm_sqr());
        (zk.powf(0.5), s2.powf((1.0 - k) / 2.0), s3.powf(k / 2.0))
    } else {
        let q = 2.0 * k / (2.0 * k - 1.0);
        let s2 = sum(&|d| (d.n_km1 * d.n_k_conj).norm().powf(q));
        (zk.powf(1.0 / (2.0 * k)), s2.powf(1.0 / q), 1.0)
    };
    Ok(HolderCheck {
        k,
        t,
        lhs,
        factor1: f1,
        factor2: f2,
        factor3: f3,
        slack: lhs / (f1 * f2 * f3),
    })
}

pub fn holder_chain(zeros: &ZeroTable, t: f64, scheme: &PreparedScheme, k: f64, profile: &PrecisionProfile) -> Result<HolderCheck> {
    holder_from(&mollified_window(zeros, t, scheme, k, profile)?, t, k)
}
