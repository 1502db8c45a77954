//! Permutations in one-line notation and the Pop pass.
//!
//! Positions are 1-indexed throughout the public API, so `p.get(i)` is the
//! value at position `i` and `p.position_of(v)` is its inverse. Values are
//! stored as `u32`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection on `{1, ..., n}` with `n >= 1`, written in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Validates `values` as a permutation of `1..=n`.
    pub fn from_values(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(Error::OutOfRange {
                    value: u64::from(v),
                    n,
                });
            }
            let slot = &mut seen[v as usize - 1];
            if *slot {
                return Err(Error::DuplicateValue(u64::from(v)));
            }
            *slot = true;
        }
        // Length n with no duplicates and no out-of-range values is a bijection.
        Ok(Permutation { values })
    }

    /// Wraps values already known to be a permutation.
    pub(crate) fn from_values_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_values(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutations have n >= 1");
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    /// Value at 1-indexed position `i`.
    pub fn get(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    /// 1-indexed position of value `v`, if present. O(n).
    pub fn position_of(&self, v: u32) -> Option<usize> {
        self.values.iter().position(|&x| x == v).map(|i| i + 1)
    }

    /// `inverse()[v - 1]` is the 1-indexed position of `v`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v as usize - 1] = i + 1;
        }
        inv
    }

    pub fn is_identity(&self) -> bool {
        is_sorted(&self.values)
    }

    /// The conjugate `p'(i) = n + 1 - p(n + 1 - i)`. An involution that
    /// commutes with [`pop`].
    pub fn reverse_complement(&self) -> Self {
        let n1 = self.len() as u32 + 1;
        Permutation {
            values: self.values.iter().rev().map(|&v| n1 - v).collect(),
        }
    }

    pub fn decreasing_runs(&self) -> RunDecomposition {
        let mut runs = Vec::new();
        for_each_run(&self.values, |start, len| {
            runs.push(Run {
                start: start + 1,
                len,
            })
        });
        RunDecomposition { runs }
    }

    pub fn pop(&self) -> Self {
        let mut values = self.values.clone();
        pop_in_place(&mut values);
        Permutation { values }
    }

    /// Length of the longest maximal decreasing run.
    pub fn max_run_len(&self) -> usize {
        let mut longest = 0;
        for_each_run(&self.values, |_, len| longest = longest.max(len));
        longest
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts comma- and/or whitespace-separated integers, or a compact
    /// digit string such as `471836952` when `n <= 9`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let parse_err = |reason: String| Error::Parse {
            input: s.to_string(),
            reason,
        };
        if trimmed.is_empty() {
            return Err(Error::Empty);
        }
        let separated = trimmed.contains(|c: char| c == ',' || c.is_whitespace());
        let raw: Vec<u64> = if separated {
            trimmed
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|tok| !tok.is_empty())
                .map(|tok| {
                    tok.parse::<u64>()
                        .map_err(|e| parse_err(format!("token {tok:?}: {e}")))
                })
                .collect::<Result<_>>()?
        } else {
            if !trimmed.bytes().all(|b| b.is_ascii_digit()) {
                return Err(parse_err("expected digits".into()));
            }
            if trimmed.len() > 9 {
                return Err(parse_err(
                    "compact digit form is only accepted for n <= 9; use commas".into(),
                ));
            }
            trimmed.bytes().map(|b| u64::from(b - b'0')).collect()
        };
        let n = raw.len();
        let values = raw
            .into_iter()
            .map(|v| {
                u32::try_from(v)
                    .ok()
                    .filter(|&x| x >= 1 && x as usize <= n)
                    .ok_or(Error::OutOfRange { value: v, n })
            })
            .collect::<Result<Vec<u32>>>()?;
        Permutation::from_values(values)
    }
}

/// One maximal decreasing run: `len` consecutive positions from `start` (1-indexed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub start: usize,
    pub len: usize,
}

impl Run {
    /// Last position covered by the run.
    pub fn end(&self) -> usize {
        self.start + self.len - 1
    }
}

/// Partition of `1..=n` into maximal decreasing runs, singletons included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunDecomposition {
    pub runs: Vec<Run>,
}

impl RunDecomposition {
    /// `(start, len)` pairs, matching the one-line notation of the runs.
    pub fn segments(&self) -> Vec<(usize, usize)> {
        self.runs.iter().map(|r| (r.start, r.len)).collect()
    }
}

/// Calls `f(start, len)` for every maximal decreasing run, 0-indexed start.
#[inline]
pub(crate) fn for_each_run(values: &[u32], mut f: impl FnMut(usize, usize)) {
    let n = values.len();
    let mut start = 0;
    for i in 1..=n {
        if i == n || values[i] > values[i - 1] {
            f(start, i - start);
            start = i;
        }
    }
}

/// Applies one Pop pass in place. Returns `false` iff the slice was already
/// sorted (no run of length two or more).
pub fn pop_in_place(values: &mut [u32]) -> bool {
    let n = values.len();
    let mut changed = false;
    let mut start = 0;
    for i in 1..=n {
        if i == n || values[i] > values[i - 1] {
            if i - start > 1 {
                values[start..i].reverse();
                changed = true;
            }
            start = i;
        }
    }
    changed
}

fn is_sorted(values: &[u32]) -> bool {
    values.windows(2).all(|w| w[0] < w[1])
}

/// Number of Pop passes that sort `values`, mutating it into the identity.
///
/// Fails if more than `n` passes are needed, which would mean the pass
/// itself is broken (the true worst case is `n - 1`).
pub fn sort_in_place(values: &mut [u32]) -> Result<usize> {
    let n = values.len();
    let mut passes = 0;
    while pop_in_place(values) {
        passes += 1;
        if passes > n {
            return Err(Error::IterationCap { n, cap: n });
        }
    }
    Ok(passes)
}

/// `t*` without materialising the trace.
pub fn t_star(p: &Permutation) -> Result<usize> {
    let mut scratch = p.values.clone();
    sort_in_place(&mut scratch)
}

/// `σ_0, σ_1, ..., σ_{t*}` under repeated Pop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortTrace {
    steps: Vec<Permutation>,
}

impl SortTrace {
    pub fn new(p: &Permutation) -> Result<Self> {
        let n = p.len();
        let mut steps = vec![p.clone()];
        let mut current = p.values.clone();
        while pop_in_place(&mut current) {
            if steps.len() > n {
                return Err(Error::IterationCap { n, cap: n });
            }
            steps.push(Permutation {
                values: current.clone(),
            });
        }
        Ok(SortTrace { steps })
    }

    pub fn t_star(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn n(&self) -> usize {
        self.steps[0].len()
    }

    /// `σ_t`.
    pub fn step(&self, t: usize) -> &Permutation {
        &self.steps[t]
    }

    pub fn steps(&self) -> &[Permutation] {
        &self.steps
    }

    pub fn source(&self) -> &Permutation {
        &self.steps[0]
    }
}

pub fn sort_trace(p: &Permutation) -> Result<SortTrace> {
    SortTrace::new(p)
}
