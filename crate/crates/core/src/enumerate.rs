//! Lexicographic enumeration of `S_n`, sharded by contiguous rank ranges.

use rayon::prelude::*;

/// Permutations per shard. Fixed so shard boundaries never depend on the
/// worker count.
pub const SHARD_SIZE: u64 = 5040;

/// Largest `n` whose `n!` fits in a `u64`.
pub const MAX_ENUMERABLE_N: usize = 20;

pub fn factorial(n: usize) -> u64 {
    assert!(n <= MAX_ENUMERABLE_N, "{n}! overflows u64");
    (1..=n as u64).product()
}

/// Rearranges `values` into its lexicographic successor. Returns `false`
/// (leaving the slice untouched) when it is already the last permutation.
pub fn next_permutation(values: &mut [u32]) -> bool {
    let n = values.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}

/// The permutation of `1..=n` with lexicographic rank `rank` (0-based).
pub fn unrank(n: usize, mut rank: u64) -> Vec<u32> {
    assert!(rank < factorial(n), "rank {rank} out of range for n = {n}");
    let mut pool: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::with_capacity(n);
    for remaining in (1..=n).rev() {
        let f = factorial(remaining - 1);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

/// Lexicographic rank of `values` (a permutation of `1..=n`).
pub fn rank(values: &[u32]) -> u64 {
    let n = values.len();
    let mut r = 0;
    for i in 0..n {
        let smaller_after = values[i + 1..].iter().filter(|&&v| v < values[i]).count() as u64;
        r += smaller_after * factorial(n - 1 - i);
    }
    r
}

/// Visits every permutation of `1..=n` in parallel.
///
/// Each shard folds into its own accumulator created by `init`; the
/// accumulators are returned in shard order, so any order-sensitive merge
/// by the caller is schedule independent.
pub fn par_scan<A, I, V>(n: usize, init: I, visit: V) -> Vec<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[u32]) + Sync,
{
    let total = factorial(n);
    let shards = total.div_ceil(SHARD_SIZE);
    (0..shards)
        .into_par_iter()
        .map(|shard| {
            let start = shard * SHARD_SIZE;
            let end = (start + SHARD_SIZE).min(total);
            let mut acc = init();
            let mut values = unrank(n, start);
            for r in start..end {
                visit(&mut acc, &values);
                if r + 1 < end {
                    next_permutation(&mut values);
                }
            }
            acc
        })
        .collect()
}
