//! Tail polynomials `Q_j(s, k)` and the pointwise block inequalities they support.

use num_complex::Complex64;
use serde::Serialize;

use super::polynomial::{eval_prime_sum, truncated_exp};
use super::scheme::PreparedScheme;
use crate::error::{Error, Result};

/// Relative slack allowed on either side of a floating-point inequality.
pub const ROUNDING_GUARD: f64 = 1e-12;

/// `r_k = 2 + ceil(1/k)` for `k <= 1/2`, `1 + ceil(2k/(2k-1))` above.
pub fn r_exponent(k: f64) -> Result<u32> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("r_k needs k > 0, got {k}")));
    }
    Ok(if k <= 0.5 {
        2 + (1.0 / k).ceil() as u32
    } else {
        1 + (2.0 * k / (2.0 * k - 1.0)).ceil() as u32
    })
}

/// `64 max(2, k + 3/2) / K`, the base multiplier of `Q_j`.
pub fn tail_base(k: f64, order: usize) -> f64 {
    64.0 * f64::max(2.0, k + 1.5) / order as f64
}

/// `Q_j(s, k) = (64 max(2, k+3/2) P_j(s) / K_j)^{K_j}` with `K_j = ceil(e^2 k alpha_j^{-3/4})`.
pub fn eval_tail(scheme: &PreparedScheme, j: usize, k: f64, s: Complex64) -> Result<Complex64> {
    let order = scheme.scheme.block(j)?.order;
    let p = eval_prime_sum(scheme, j, s)?;
    Ok((p * tail_base(k, order)).powu(order as u32))
}

/// `|Q_j(s, k)|^{2 r_k}` in log space, `-inf` when `P_j(s) = 0`.
pub fn ln_tail_power(scheme: &PreparedScheme, j: usize, k: f64, s: Complex64) -> Result<f64> {
    let order = scheme.scheme.block(j)?.order;
    let p = eval_prime_sum(scheme, j, s)?;
    let r = r_exponent(k)? as f64;
    Ok(2.0 * r * order as f64 * (tail_base(k, order) * p.norm()).ln())
}

/// One evaluation of the block inequality at `s`.
#[derive(Clone, Debug, Serialize)]
pub struct BlockInequality {
    pub j: usize,
    pub t: f64,
    /// `|P_j(s)|`.
    pub prime_sum_abs: f64,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
    pub holds: bool,
}

fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Checks, for block `j` at `s`, the inequality
/// `|N_j(k)|^{2/k}|N_j(k-1)|^2 <= |N_j(k)|^2 (1+e^{-l})^{2/k+2}(1-e^{-l})^{-2} + |Q_j|^{2r_k}` for `k <= 1/2`, or
/// `|N_j(k-1)N_j(k)|^{2k/(2k-1)} <= |N_j(k)|^2 (1+e^{-l})^{2k/(2k-1)}(1-e^{-l})^{-2} + |Q_j|^{2r_k}` above,
/// with `l` the real threshold of the block. Done in log space.
pub fn check_block_inequality(scheme: &PreparedScheme, j: usize, k: f64, s: Complex64) -> Result<BlockInequality> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("block inequality needs k > 0, got {k}")));
    }
    let block = scheme.scheme.block(j)?;
    let p = eval_prime_sum(scheme, j, s)?;
    let nk = truncated_exp(block.threshold, p * k).norm().ln();
    let nk1 = truncated_exp(block.threshold, p * (k - 1.0)).norm().ln();
    let el = (-block.threshold).exp();
    let (ln_lhs, first) = if k <= 0.5 {
        (
            (2.0 / k) * nk + 2.0 * nk1,
            2.0 * nk + (2.0 / k + 2.0) * el.ln_1p() - 2.0 * (-el).ln_1p(),
        )
    } else {
        let q = 2.0 * k / (2.0 * k - 1.0);
        (q * (nk + nk1), 2.0 * nk + q * el.ln_1p() - 2.0 * (-el).ln_1p())
    };
    let ln_rhs = ln_add(first, ln_tail_power(scheme, j, k, s)?);
    Ok(BlockInequality {
        j,
        t: s.im,
        prime_sum_abs: p.norm(),
        ln_lhs,
        ln_rhs,
        holds: ln_lhs <= ln_rhs + ROUNDING_GUARD.ln_1p(),
    })
}

/// `|e^z - E_K(z)|`, summed as the tail series to avoid cancellation.
pub fn exp_truncation_error(order: usize, z: Complex64) -> f64 {
    let mut term = Complex64::new(1.0, 0.0);
    for r in 1..=order {
        term *= z / r as f64;
    }
    let mut tail = Complex64::new(0.0, 0.0);
    let mut r = order + 1;
    loop {
        term *= z / r as f64;
        tail += term;
        if term.norm() <= 1e-18 * tail.norm() || r > order + 10_000 {
            break;
        }
        r += 1;
    }
    tail.norm()
}

/// Result of the two-step bound `|E_K(z) - e^z| <= |z|^K/K! <= (ae/20)^K`.
#[derive(Clone, Debug, Serialize)]
pub struct TruncationBound {
    pub order: usize,
    pub a: f64,
    pub z_abs: f64,
    pub error: f64,
    pub middle: f64,
    pub bound: f64,
    /// `|z| <= aK/20` and `0 < a <= 2`.
    pub in_hypothesis: bool,
    pub holds: bool,
}

pub fn check_truncation_bound(order: usize, a: f64, z: Complex64) -> TruncationBound {
    let k = order as f64;
    let error = exp_truncation_error(order, z);
    let ln_middle = k * z.norm().ln() - crate::special::ln_factorial(order as u64);
    let middle = ln_middle.exp();
    let bound = (a * std::f64::consts::E / 20.0).powi(order as i32);
    let in_hypothesis = a > 0.0 && a <= 2.0 && z.norm() <= a * k / 20.0;
    let g = 1.0 + ROUNDING_GUARD;
    TruncationBound {
        order,
        a,
        z_abs: z.norm(),
        error,
        middle,
        bound,
        in_hypothesis,
        holds: error <= middle * g && middle <= bound * g,
    }
}
