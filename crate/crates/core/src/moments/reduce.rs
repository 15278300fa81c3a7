//! Order-fixed pairwise summation, so totals do not depend on the thread count.

use std::ops::Add;

/// Sum of `xs` over a balanced binary tree fixed by `xs.len()` alone.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Add<Output = T> + Default,
{
    const LEAF: usize = 8;
    if xs.len() <= LEAF {
        return xs.iter().fold(T::default(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
