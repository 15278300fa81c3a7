//! Evaluation of `zeta`, `zeta'`, `chi`, the Hardy Z function, and zero finding.

pub mod chi;
pub mod hardy;
pub mod zeros;
pub mod zeta;

pub use chi::{chi, chi_log_deriv, chi_log_deriv_remainder_constant};
pub use hardy::{hardy_z, hardy_z_complex, rs_theta};
pub use zeros::{find_zeros, rvm_main_term, rvm_slack, Zero, ZeroFinder, ZeroTable, ZeroTableSidecar};
pub use zeta::{zeta, zeta_and_prime, zeta_prime, PrecisionProfile, DEFAULT_T_CEILING};

/// A point `sigma + i t`.
pub type ComplexPoint = num_complex::Complex64;
