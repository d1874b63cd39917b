//! Deterministic compensated summation.
//!
//! All reductions over preimage trees use a fixed chunk size and a fixed
//! combine order, so results are bit-identical regardless of how many
//! threads rayon decides to use.

use rayon::prelude::*;

use crate::scalar::Real;

/// Chunk size for parallel reductions. Fixed so the reduction tree (and
/// therefore the floating-point result) does not depend on thread count.
const CHUNK: usize = 1 << 14;

/// Kahan-compensated sum of an iterator, in iteration order.
pub fn kahan<T: Real, I: IntoIterator<Item = T>>(xs: I) -> T {
    let mut s = T::zero();
    let mut c = T::zero();
    for x in xs {
        let y = x - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

/// Deterministic parallel sum of `f` mapped over `items`: per-chunk Kahan
/// sums combined sequentially in chunk order.
pub fn sum_map<A, T, F>(items: &[A], f: F) -> T
where
    A: Sync,
    T: Real,
    F: Fn(&A) -> T + Sync + Send,
{
    let partials: Vec<T> = items
        .par_chunks(CHUNK)
        .map(|chunk| kahan(chunk.iter().map(&f)))
        .collect();
    kahan(partials)
}

/// Deterministic parallel sum of a slice.
pub fn sum<T: Real>(xs: &[T]) -> T {
    sum_map(xs, |x| *x)
}

/// Deterministic maximum of `f` over `items` (ignores NaN inputs).
pub fn max_map<A, T, F>(items: &[A], f: F) -> T
where
    A: Sync,
    T: Real,
    F: Fn(&A) -> T + Sync + Send,
{
    items
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().map(&f).fold(T::neg_infinity(), T::max))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(T::neg_infinity(), T::max)
}

/// log(sum of exp(x)) over a slice, shifted by the maximum for stability.
/// Deterministic for any thread count.
pub fn log_sum_exp<T: Real>(xs: &[T]) -> T {
    let m = max_map(xs, |x| *x);
    if !m.is_finite() {
        return m;
    }
    m + sum_map(xs, |x| (*x - m).exp()).ln()
}
