//! Discrete moments of `zeta'` over zeros and the checks around the mollified lower bound.
//!
//! Inequalities with explicit constants are asserted by callers through the
//! `holds`-style accessors. Statements with unspecified constants only produce ratios.

mod diagonal;
mod gsum;
mod holder;
mod landau;
mod moment;
mod mvt;
mod reduce;

use std::path::Path;

use serde::Serialize;

pub use diagonal::{diagonal_upper, ln_degree_sums, DiagonalBlock, DiagonalReport};
pub use gsum::{
    all_weights, classify_zeros, exceptional_shape, g_sum, log_derivative_scatter, script_l, weight,
    Classification, GSumWeights, ScatterPoint,
};
pub use holder::{
    holder_chain, holder_from, mollified_window, mollify_zeros, twisted_scale, twisted_sum,
    twisted_sum_from, HolderCheck, MollifiedZero,
};
pub use landau::{landau_main_term, landau_sum, LandauCheck, LandauRow};
pub use moment::{
    compute_moment, dyadic_windows, moment_from_values, moment_normalizer, zeta_prime_at_zeros,
    MomentReport,
};
pub use mvt::{adaptive_simpson, mvt_check, MvtCheck, MvtRow, MvtWeight, MVT_TOLERANCE};
pub use reduce::pairwise_sum;

/// Writes serialisable rows as CSV with a header.
pub fn write_csv<S: Serialize>(path: &Path, rows: &[S]) -> crate::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
