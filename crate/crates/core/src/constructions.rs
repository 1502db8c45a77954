//! Two block-interleaved families with long pivot chains.
//!
//! Both draw from value blocks in a fixed cyclic pattern, taking the largest
//! unused element of the named block each time.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::motion::TraceMotions;
use crate::permutation::{Permutation, SortTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `n = 5k`; the top element pivots right `2k - 1` times.
    Asymmetric,
    /// `n = 4k - 1`; elements `1` and `n` pivot symmetrically.
    Symmetric,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Asymmetric => "asymmetric",
            Family::Symmetric => "symmetric",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asymmetric" => Ok(Family::Asymmetric),
            "symmetric" => Ok(Family::Symmetric),
            other => Err(Error::InvalidParameter(format!(
                "unknown family {other:?} (expected asymmetric or symmetric)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub k: usize,
}

impl FamilySpec {
    pub fn new(family: Family, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(FamilySpec { family, k })
    }

    pub fn n(&self) -> usize {
        match self.family {
            Family::Asymmetric => 5 * self.k,
            Family::Symmetric => 4 * self.k - 1,
        }
    }

    pub fn permutation(&self) -> Permutation {
        match self.family {
            Family::Asymmetric => asymmetric_family(self.k),
            Family::Symmetric => symmetric_family(self.k),
        }
    }

    /// Values whose pivot counts and arrival sorts are reported.
    pub fn designated_values(&self) -> Vec<u32> {
        let n = self.n() as u32;
        match self.family {
            Family::Asymmetric => vec![n],
            Family::Symmetric => vec![1, n],
        }
    }
}

/// Hands out the elements of `lo..=hi` from the top down.
struct Block {
    next: u32,
    lo: u32,
}

impl Block {
    fn new(lo: u32, hi: u32) -> Self {
        Block { next: hi, lo }
    }

    fn draw(&mut self) -> u32 {
        assert!(self.next >= self.lo, "block exhausted");
        let v = self.next;
        self.next -= 1;
        v
    }

    fn is_empty(&self) -> bool {
        self.next < self.lo
    }
}

/// `k` blocks of `S4, S3, S2, S3` followed by `1..=k` ascending, with
/// `S2 = k+1..=2k`, `S3 = 2k+1..=4k`, `S4 = 4k+1..=5k`.
pub fn asymmetric_family(k: usize) -> Permutation {
    assert!(k >= 1);
    let k = k as u32;
    let mut s2 = Block::new(k + 1, 2 * k);
    let mut s3 = Block::new(2 * k + 1, 4 * k);
    let mut s4 = Block::new(4 * k + 1, 5 * k);
    let mut values = Vec::with_capacity(5 * k as usize);
    for _ in 0..k {
        values.push(s4.draw());
        values.push(s3.draw());
        values.push(s2.draw());
        values.push(s3.draw());
    }
    debug_assert!(s2.is_empty() && s3.is_empty() && s4.is_empty());
    values.extend(1..=k);
    Permutation::from_values_unchecked(values)
}

/// `k - 1` blocks of `S3, S2, S1, S2` then a final `S3, S2, S1`, with
/// `S1 = 1..=k`, `S2 = k+1..=3k-1`, `S3 = 3k..=4k-1`.
pub fn symmetric_family(k: usize) -> Permutation {
    assert!(k >= 1);
    let k = k as u32;
    let mut s1 = Block::new(1, k);
    let mut s2 = Block::new(k + 1, 3 * k - 1);
    let mut s3 = Block::new(3 * k, 4 * k - 1);
    let mut values = Vec::with_capacity(4 * k as usize - 1);
    for _ in 1..k {
        values.push(s3.draw());
        values.push(s2.draw());
        values.push(s1.draw());
        values.push(s2.draw());
    }
    values.push(s3.draw());
    values.push(s2.draw());
    values.push(s1.draw());
    debug_assert!(s1.is_empty() && s2.is_empty() && s3.is_empty());
    Permutation::from_values_unchecked(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElementMetrics {
    pub value: u32,
    pub pivot_count: usize,
    pub arrival_sort: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyMetrics {
    pub family: Family,
    pub k: usize,
    pub n: usize,
    pub t_star: usize,
    pub elements: Vec<ElementMetrics>,
}

impl FamilyMetrics {
    pub fn element(&self, value: u32) -> Option<&ElementMetrics> {
        self.elements.iter().find(|e| e.value == value)
    }
}

pub fn family_metrics(spec: FamilySpec) -> Result<FamilyMetrics> {
    let p = spec.permutation();
    let trace = SortTrace::new(&p)?;
    let motions = TraceMotions::new(&trace)?;
    let elements = spec
        .designated_values()
        .into_iter()
        .map(|value| {
            Ok(ElementMetrics {
                value,
                pivot_count: motions.pivot_count(value)?,
                arrival_sort: motions.arrival_sort(value)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(FamilyMetrics {
        family: spec.family,
        k: spec.k,
        n: spec.n(),
        t_star: trace.t_star(),
        elements,
    })
}

/// `(position, value)` pairs for a scatter plot of the permutation.
pub fn plot_points(p: &Permutation) -> Vec<(usize, u32)> {
    p.values()
        .iter()
        .enumerate()
        .map(|(i, &v)| (i + 1, v))
        .collect()
}
