//! Seeded uniform sampling of permutations.
//!
//! The stream is pinned down completely:
//!
//! * sample `j` of a run with master seed `s` uses the sub-seed
//!   `splitmix64(s + j * 0x9E3779B97F4A7C15)` (wrapping arithmetic), where
//!   `splitmix64` is the standard SplitMix64 output function;
//! * the sub-seed feeds `ChaCha8Rng::seed_from_u64`;
//! * the permutation is a Fisher–Yates shuffle of `1..=n`, drawing
//!   `j = gen_range(0..=i)` for `i = n-1` down to `1` and swapping `i`, `j`.
//!
//! Because every sample owns its generator, results do not depend on how
//! samples are spread across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::permutation::Permutation;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sub_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng_for_sample(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sub_seed(master, index))
}

/// Uniform permutation of length `n` (Fisher–Yates).
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    assert!(n >= 1, "permutations have n >= 1");
    let mut values: Vec<u32> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        values.swap(i, j);
    }
    Permutation::from_values_unchecked(values)
}

/// Sample `index` of the stream with master seed `master`.
pub fn sample_permutation(n: usize, master: u64, index: u64) -> Permutation {
    random_permutation(n, &mut rng_for_sample(master, index))
}
