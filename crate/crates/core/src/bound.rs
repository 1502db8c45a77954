//! Lower bounds on the number of Pop passes from the position of a large
//! element after one pass, and the "large element far left" event.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::permutation::Permutation;

/// Element `n - i + 1` sits at position `k` of `σ_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundQuery {
    pub n: usize,
    pub i: usize,
    pub k: usize,
}

impl BoundQuery {
    pub fn new(n: usize, i: usize, k: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::InvalidParameter(format!("i = {i} outside 1..={n}")));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("k = {k} outside 1..={n}")));
        }
        Ok(BoundQuery { n, i, k })
    }
}

fn div_ceil_nonneg(a: i64, b: i64) -> i64 {
    debug_assert!(a >= 0 && b > 0);
    (a + b - 1) / b
}

/// Lower bound on `t*`, or `None` when the `i >= 2` branch has a negative
/// remaining distance `d = n - k - 5i + 7`.
///
/// * `i = 1`: `⌊2(n-k)/5⌋ + ⌈(n-k)/5⌉ + 1`
/// * `i >= 2`: `2i - 3 + ⌊2d/5⌋ + ⌈d/5⌉`
pub fn theorem_bound(q: BoundQuery) -> Option<u64> {
    let n = q.n as i64;
    let i = q.i as i64;
    let k = q.k as i64;
    let bound = if i == 1 {
        let d = n - k;
        2 * d / 5 + div_ceil_nonneg(d, 5) + 1
    } else {
        let d = n - k - 5 * i + 7;
        if d < 0 {
            return None;
        }
        2 * i - 3 + 2 * d / 5 + div_ceil_nonneg(d, 5)
    };
    Some(bound as u64)
}

/// The bound for one choice of `i`, read off `σ_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElementBound {
    pub i: usize,
    pub value: u32,
    pub k: usize,
    pub bound: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BestBound {
    pub bound: u64,
    /// `(i, k)` achieving the bound; smallest `i` on ties.
    pub witness: Option<(usize, usize)>,
}

/// Per-`i` bounds for every element, given `σ_1`.
pub fn bounds_from_first_pass(sigma1: &Permutation) -> Vec<ElementBound> {
    let n = sigma1.len();
    let inv = sigma1.inverse();
    (1..=n)
        .map(|i| {
            let value = (n - i + 1) as u32;
            let k = inv[value as usize - 1];
            ElementBound {
                i,
                value,
                k,
                bound: theorem_bound(BoundQuery { n, i, k }),
            }
        })
        .collect()
}

pub fn all_bounds(p: &Permutation) -> Vec<ElementBound> {
    bounds_from_first_pass(&p.pop())
}

fn best_of(bounds: &[ElementBound]) -> BestBound {
    let mut best = BestBound {
        bound: 0,
        witness: None,
    };
    for b in bounds {
        if let Some(value) = b.bound {
            if best.witness.is_none() || value > best.bound {
                best = BestBound {
                    bound: value,
                    witness: Some((b.i, b.k)),
                };
            }
        }
    }
    best
}

/// Strongest applicable bound over all `i`. The identity is rejected since
/// it needs zero passes while the `i = 1` branch always gives at least one.
pub fn best_bound(p: &Permutation) -> Result<BestBound> {
    if p.is_identity() {
        return Err(Error::IdentityInput);
    }
    Ok(best_of(&all_bounds(p)))
}

pub(crate) fn best_bound_from_first_pass(sigma1: &Permutation) -> BestBound {
    best_of(&bounds_from_first_pass(sigma1))
}

/// `n^{2/3}` and `n^{2/3} + 2 log2 n` in double precision.
pub fn lichev_thresholds(n: usize) -> (f64, f64) {
    let c = (n as f64).cbrt();
    let rank_limit = c * c;
    (rank_limit, rank_limit + 2.0 * (n as f64).log2())
}

/// True iff some element `n - i + 1` with `1 <= i < n^{2/3}` sits at a
/// position `< n^{2/3} + 2 log2 n` in `σ_1`.
pub fn check_lichev_event(p: &Permutation) -> bool {
    lichev_event_from_first_pass(&p.pop())
}

pub(crate) fn lichev_event_from_first_pass(sigma1: &Permutation) -> bool {
    let n = sigma1.len();
    let (rank_limit, position_limit) = lichev_thresholds(n);
    let inv = sigma1.inverse();
    (1..=n)
        .take_while(|&i| (i as f64) < rank_limit)
        .any(|i| (inv[n - i] as f64) < position_limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn q(n: usize, i: usize, k: usize) -> BoundQuery {
        BoundQuery::new(n, i, k).unwrap()
    }

    #[test]
    fn formula_examples() {
        assert_eq!(theorem_bound(q(10, 1, 1)), Some(6));
        assert_eq!(theorem_bound(q(20, 2, 1)), Some(11));
        assert_eq!(theorem_bound(q(6, 2, 5)), None);
        assert!(BoundQuery::new(5, 0, 1).is_err());
        assert!(BoundQuery::new(5, 1, 6).is_err());
    }

    #[test]
    fn best_bound_examples() {
        let p = perm("561234");
        assert_eq!(p.pop(), perm("516234"));
        let per_i = all_bounds(&p);
        assert_eq!(
            per_i[1],
            ElementBound {
                i: 2,
                value: 5,
                k: 1,
                bound: Some(2)
            }
        );
        // The i = 1 branch (6 at position 3) is stronger.
        assert_eq!(
            per_i[0],
            ElementBound {
                i: 1,
                value: 6,
                k: 3,
                bound: Some(3)
            }
        );
        assert_eq!(
            best_bound(&p).unwrap(),
            BestBound {
                bound: 3,
                witness: Some((1, 3))
            }
        );

        assert_eq!(
            best_bound(&perm("21")).unwrap(),
            BestBound {
                bound: 1,
                witness: Some((1, 2))
            }
        );
        assert_eq!(best_bound(&perm("213")).unwrap().bound, 1);
        assert_eq!(best_bound(&perm("123")), Err(Error::IdentityInput));
    }

    #[test]
    fn lichev_examples() {
        let n9 = perm("471836952");
        assert!(check_lichev_event(&n9));
        let (_, pos) = lichev_thresholds(9);
        assert!(pos > 9.0);

        let id = Permutation::identity(100);
        assert!(!check_lichev_event(&id));
        let rev = Permutation::from_values((1..=100).rev().collect()).unwrap();
        assert!(!check_lichev_event(&rev));

        // Cube: n^{2/3} = 100 exactly, so i ranges over 1..=99.
        let (rank_limit, _) = lichev_thresholds(1000);
        assert_eq!(rank_limit, 100.0);
    }
}
