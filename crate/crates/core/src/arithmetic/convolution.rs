//! Sparse Dirichlet coefficient maps and their convolution.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_traits::Zero;

/// Sparse map `n -> f(n)` for `n >= 1`.
pub type CoefficientMap<T> = BTreeMap<u64, T>;

/// `(f * g)(k) = sum_{mn = k} f(m) g(n)` for `k <= limit`.
pub fn dirichlet_convolve<T>(f: &CoefficientMap<T>, g: &CoefficientMap<T>, limit: u64) -> CoefficientMap<T>
where
    T: Copy + Zero + Add<Output = T> + Mul<Output = T>,
{
    let mut out: CoefficientMap<T> = BTreeMap::new();
    for (&m, &a) in f.range(1..=limit) {
        if a.is_zero() {
            continue;
        }
        let max_n = limit / m;
        for (&n, &b) in g.range(1..=max_n) {
            let e = out.entry(m * n).or_insert_with(T::zero);
            *e = *e + a * b;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Dense variant: `f`, `g` indexed by `n` with index 0 unused.
pub fn dirichlet_convolve_dense(f: &[f64], g: &[f64]) -> Vec<f64> {
    let limit = f.len().min(g.len());
    let mut out = vec![0.0; limit];
    for m in 1..limit {
        if f[m] == 0.0 {
            continue;
        }
        let mut k = m;
        let mut n = 1;
        while k < limit {
            out[k] += f[m] * g[n];
            n += 1;
            k += m;
        }
    }
    out
}
