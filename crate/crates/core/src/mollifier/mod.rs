//! Block mollifier `N(s, alpha) = prod_j E_{l_j}(alpha P_j(s))`.
//!
//! A factor `n_j` of a support frequency is counted by `Omega(n_j) <= ceil(l_j)`,
//! which is the degree of the truncated exponential.

mod bounds;
mod polynomial;
mod scheme;

pub use bounds::{
    check_block_inequality, check_truncation_bound, eval_tail, exp_truncation_error, ln_tail_power,
    r_exponent, tail_base, BlockInequality, TruncationBound, ROUNDING_GUARD,
};
pub use polynomial::{
    eval_factor, eval_mollifier, eval_mollifier_many, eval_prime_sum, expand_coefficients,
    expand_coefficients_with_guard, truncated_exp, truncated_exp_order, CoefficientTerm,
    DirichletPolynomial, MollifierCoefficients, SUPPORT_GUARD,
};
pub use scheme::{truncation_threshold, Block, BlockScheme, PreparedScheme};
