//! Number-theoretic kernels.

pub mod convolution;
pub mod functions;
pub mod sieve;

pub use convolution::{dirichlet_convolve, dirichlet_convolve_dense, CoefficientMap};
pub use functions::{
    g_mult, g_mult_f64, lambda2, lambda2_table, lambda_script_l, mertens_prime_sum, mertens_prime_sum_with,
    omega_pair, omega_ratio, von_mangoldt, von_mangoldt_rational, von_mangoldt_table,
};
pub use sieve::{factorize_trial, ArithmeticTable, FactoredInteger, DEFAULT_SIEVE_LIMIT};
