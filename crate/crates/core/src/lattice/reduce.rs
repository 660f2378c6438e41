//! Deterministic reductions.
//!
//! Sums use a fixed binary split of the index range down to blocks of
//! [`BLOCK`] terms that are accumulated left to right. The split points
//! depend only on the length, and parallel execution only decides which
//! thread evaluates a subtree. The rounding sequence, and so the result, is
//! therefore identical for every thread count.

use crate::scalar::Real;

/// Leaf size of the pairwise tree.
pub const BLOCK: usize = 64;

/// Ranges at least this long are split across threads.
const PAR_MIN: usize = 1 << 13;

/// Pairwise sum of `f(i)` for `i` in `0..len`.
pub fn pairwise_sum_by<T, F>(len: usize, f: F) -> T
where
    T: Real,
    F: Fn(usize) -> T + Sync,
{
    sum_range(0, len, &f)
}

/// Pairwise sum of a slice.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    pairwise_sum_by(xs.len(), |i| xs[i])
}

fn sum_range<T, F>(lo: usize, hi: usize, f: &F) -> T
where
    T: Real,
    F: Fn(usize) -> T + Sync,
{
    let len = hi - lo;
    if len <= BLOCK {
        return (lo..hi).fold(T::zero(), |acc, i| acc + f(i));
    }
    let mid = lo + len / 2;
    if len >= PAR_MIN {
        let (a, b) = rayon::join(|| sum_range(lo, mid, f), || sum_range(mid, hi, f));
        a + b
    } else {
        sum_range(lo, mid, f) + sum_range(mid, hi, f)
    }
}

/// Maximum of `f(i)` over `0..len` (NaN propagates); `-inf` when empty.
pub fn max_by<T, F>(len: usize, f: F) -> T
where
    T: Real,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len)
        .into_par_iter()
        .map(f)
        .reduce(T::neg_infinity, |a, b| {
            if a.is_nan() || b.is_nan() {
                T::nan()
            } else {
                a.max(b)
            }
        })
}

/// Minimum of `f(i)` over `0..len` (NaN propagates); `+inf` when empty.
pub fn min_by<T, F>(len: usize, f: F) -> T
where
    T: Real,
    F: Fn(usize) -> T + Sync + Send,
{
    -max_by(len, |i| -f(i))
}
