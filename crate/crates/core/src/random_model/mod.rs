//! Random model with independent uniform phases `X_p` on the unit circle and
//! completely multiplicative `X_n`.

mod exact;
mod expressions;
mod mc;

use serde::Serialize;

pub use crate::special::bessel_i0;
pub use exact::{
    composition_count, expectation_product, moment_re_xp, multinomial_bound_exact, re_prime_sum_moment_exact,
    stirling_bounds, stirling_upper_crossover, StirlingBounds,
};
pub use expressions::{
    build_expression, ConstantOne, ExpGPlusRePrimeSum, ExpRePrimeSum, Expectation, ExpressionBuilder,
    ExpressionParams, GPowerTimesExp, RePrimeSumPower, EXPRESSIONS,
};
pub use mc::{mc_expectation, phase, McConfig, McEstimate, PhaseSample, MIN_SAMPLES};

use crate::error::Result;
use num_traits::ToPrimitive;

/// Exact expansion is used up to this many compositions.
pub const EXACT_TERM_LIMIT: u64 = 10_000;

/// `E[(2 Re P)^{2m}]` against `(2m)!/(2^{2m} m!) (sum 4/p)^m`.
#[derive(Clone, Debug, Serialize)]
pub struct MultinomialCheck {
    pub m: u32,
    pub n_primes: usize,
    pub value: f64,
    pub bound: f64,
    pub exact: bool,
    /// Monte Carlo standard error; 0 for exact values.
    pub std_error: f64,
}

impl MultinomialCheck {
    /// `value <= bound`, allowing three standard errors for Monte Carlo values.
    pub fn holds(&self) -> bool {
        self.value <= self.bound + 3.0 * self.std_error
    }
}

pub fn multinomial_moment_bound(primes: &[u64], m: u32, config: &McConfig) -> Result<MultinomialCheck> {
    assert!(m >= 1, "multinomial bound needs m >= 1");
    let bound = multinomial_bound_exact(primes, m).to_f64().unwrap_or(f64::INFINITY);
    if composition_count(m as u64, primes.len() as u64) <= EXACT_TERM_LIMIT {
        let value = re_prime_sum_moment_exact(primes, m).to_f64().unwrap_or(f64::NAN);
        return Ok(MultinomialCheck {
            m,
            n_primes: primes.len(),
            value,
            bound,
            exact: true,
            std_error: 0.0,
        });
    }
    let est = mc_expectation(&RePrimeSumPower::new(primes, m), config)?;
    Ok(MultinomialCheck {
        m,
        n_primes: primes.len(),
        value: est.mean,
        bound,
        exact: false,
        std_error: est.std_error,
    })
}

/// CSV row `expression-id, blocks, k, n_samples, mc_mean, mc_stderr, closed_form, z_score`.
#[derive(Clone, Debug, Serialize)]
pub struct McRow {
    #[serde(rename = "expression-id")]
    pub expression_id: String,
    pub blocks: String,
    pub k: f64,
    pub n_samples: usize,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub closed_form: Option<f64>,
    pub z_score: Option<f64>,
}

impl McRow {
    pub fn new(expr: &dyn Expectation, blocks: &[usize], k: f64, est: &McEstimate) -> Self {
        let cf = expr.closed_form();
        Self {
            expression_id: expr.id().to_string(),
            blocks: blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(";"),
            k,
            n_samples: est.n_samples,
            mc_mean: est.mean,
            mc_stderr: est.std_error,
            closed_form: cf,
            z_score: cf.map(|x| est.z_score(x)),
        }
    }
}
