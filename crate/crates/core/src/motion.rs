//! What each element does during a Pop pass.
//!
//! After the first pass every decreasing run has length at most three, so an
//! element either switches (run of two), pivots (outer element of a run of
//! three), is the center of a pivot, or stays put as a singleton run. The
//! two edge kinds separate singletons at positions 1 and `n` from true
//! interior elements. Runs of length four or more can only be reversed by
//! the first pass; those elements get [`MotionKind::FirstSortReversal`]
//! with their raw offset.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::permutation::{for_each_run, Permutation, SortTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MotionKind {
    SwitchLeft,
    SwitchRight,
    PivotLeft,
    PivotRight,
    PivotCenter,
    StationaryInterior,
    StationaryLeftEdge,
    StationaryRightEdge,
    FirstSortReversal(i64),
}

impl MotionKind {
    pub fn offset(self) -> i64 {
        match self {
            MotionKind::SwitchLeft => -1,
            MotionKind::SwitchRight => 1,
            MotionKind::PivotLeft => -2,
            MotionKind::PivotRight => 2,
            MotionKind::PivotCenter
            | MotionKind::StationaryInterior
            | MotionKind::StationaryLeftEdge
            | MotionKind::StationaryRightEdge => 0,
            MotionKind::FirstSortReversal(offset) => offset,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MotionKind::SwitchLeft => "switch_left",
            MotionKind::SwitchRight => "switch_right",
            MotionKind::PivotLeft => "pivot_left",
            MotionKind::PivotRight => "pivot_right",
            MotionKind::PivotCenter => "pivot_center",
            MotionKind::StationaryInterior => "stationary_interior",
            MotionKind::StationaryLeftEdge => "stationary_left_edge",
            MotionKind::StationaryRightEdge => "stationary_right_edge",
            MotionKind::FirstSortReversal(_) => "first_sort_reversal",
        }
    }

    pub fn moves_left(self) -> bool {
        self.offset() < 0
    }

    pub fn moves_right(self) -> bool {
        self.offset() > 0
    }

    /// Own ±2 move as the outer element of a length-3 run.
    pub fn is_pivot(self) -> bool {
        matches!(self, MotionKind::PivotLeft | MotionKind::PivotRight)
    }

    pub fn is_stationary_edge(self) -> bool {
        matches!(
            self,
            MotionKind::StationaryLeftEdge | MotionKind::StationaryRightEdge
        )
    }

    /// The kind this motion becomes under reverse-complement conjugation.
    pub fn mirror(self) -> Self {
        match self {
            MotionKind::SwitchLeft => MotionKind::SwitchRight,
            MotionKind::SwitchRight => MotionKind::SwitchLeft,
            MotionKind::PivotLeft => MotionKind::PivotRight,
            MotionKind::PivotRight => MotionKind::PivotLeft,
            MotionKind::StationaryLeftEdge => MotionKind::StationaryRightEdge,
            MotionKind::StationaryRightEdge => MotionKind::StationaryLeftEdge,
            MotionKind::FirstSortReversal(offset) => MotionKind::FirstSortReversal(-offset),
            other => other,
        }
    }
}

impl std::fmt::Display for MotionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MotionKind::FirstSortReversal(o) => write!(f, "first_sort_reversal({o:+})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Classification of one Pop pass, `σ_{t-1} -> σ_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotionTable {
    transition_index: usize,
    source: Permutation,
    // Indexed by value - 1.
    motions: Vec<MotionKind>,
}

impl MotionTable {
    pub fn transition_index(&self) -> usize {
        self.transition_index
    }

    pub fn source(&self) -> &Permutation {
        &self.source
    }

    pub fn motion_of(&self, value: u32) -> MotionKind {
        self.motions[value as usize - 1]
    }

    /// `(value, motion)` in increasing value order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, MotionKind)> + '_ {
        self.motions
            .iter()
            .enumerate()
            .map(|(i, &m)| (i as u32 + 1, m))
    }

    /// Target positions obtained by applying each offset to the source
    /// position, indexed by value - 1.
    pub fn targets(&self) -> Vec<i64> {
        self.source
            .inverse()
            .iter()
            .zip(&self.motions)
            .map(|(&pos, m)| pos as i64 + m.offset())
            .collect()
    }

    /// Rebuilds `σ_t` from the source and the offsets. Fails if the offsets
    /// do not describe a bijection onto `1..=n`.
    pub fn apply(&self) -> Result<Permutation> {
        let n = self.source.len();
        let mut out = vec![0u32; n];
        for (i, target) in self.targets().into_iter().enumerate() {
            let value = i as u32 + 1;
            if target < 1 || target > n as i64 {
                return Err(Error::PositionOutOfRange {
                    position: target.max(0) as usize,
                    n,
                });
            }
            let slot = &mut out[target as usize - 1];
            if *slot != 0 {
                return Err(Error::DuplicateValue(u64::from(value)));
            }
            *slot = value;
        }
        Permutation::from_values(out)
    }
}

impl Serialize for MotionTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            value: u32,
            kind: &'static str,
            offset: i64,
        }
        let motions: Vec<Entry> = self
            .iter()
            .map(|(value, m)| Entry {
                value,
                kind: m.name(),
                offset: m.offset(),
            })
            .collect();
        let mut s = serializer.serialize_struct("MotionTable", 2)?;
        s.serialize_field("t", &self.transition_index)?;
        s.serialize_field("motions", &motions)?;
        s.end()
    }
}

/// Classifies every element of `source` for the sort that produces `σ_t`.
///
/// For `t >= 2` a run of length four or more is reported as
/// [`Error::LongRun`]; that can only happen if Pop's image had such a run.
pub fn classify_transition(source: &Permutation, transition_index: usize) -> Result<MotionTable> {
    if transition_index == 0 {
        return Err(Error::ZeroTransition);
    }
    let values = source.values();
    let n = values.len();
    let mut motions = vec![MotionKind::StationaryInterior; n];
    let mut long_run = None;
    for_each_run(values, |start, len| {
        let set = |motions: &mut Vec<MotionKind>, j: usize, kind| {
            motions[values[start + j] as usize - 1] = kind;
        };
        match len {
            1 => {
                let kind = if start == 0 {
                    MotionKind::StationaryLeftEdge
                } else if start == n - 1 {
                    MotionKind::StationaryRightEdge
                } else {
                    MotionKind::StationaryInterior
                };
                set(&mut motions, 0, kind);
            }
            2 => {
                set(&mut motions, 0, MotionKind::SwitchRight);
                set(&mut motions, 1, MotionKind::SwitchLeft);
            }
            3 => {
                set(&mut motions, 0, MotionKind::PivotRight);
                set(&mut motions, 1, MotionKind::PivotCenter);
                set(&mut motions, 2, MotionKind::PivotLeft);
            }
            _ => {
                if transition_index >= 2 && long_run.is_none() {
                    long_run = Some((start + 1, len));
                }
                for j in 0..len {
                    let offset = len as i64 - 1 - 2 * j as i64;
                    set(&mut motions, j, MotionKind::FirstSortReversal(offset));
                }
            }
        }
    });
    if let Some((start, length)) = long_run {
        return Err(Error::LongRun {
            transition: transition_index,
            start,
            length,
        });
    }
    Ok(MotionTable {
        transition_index,
        source: source.clone(),
        motions,
    })
}

/// Reading of "interior of an increasing run" at positions 1 and `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InteriorMode {
    /// Both neighbours must exist: `σ(i-1) < σ(i) < σ(i+1)`.
    Strict,
    /// Missing neighbours are vacuously satisfied.
    Weak,
}

impl InteriorMode {
    pub fn name(self) -> &'static str {
        match self {
            InteriorMode::Strict => "strict",
            InteriorMode::Weak => "weak",
        }
    }
}

impl std::str::FromStr for InteriorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(InteriorMode::Strict),
            "weak" => Ok(InteriorMode::Weak),
            other => Err(Error::InvalidParameter(format!(
                "unknown interior mode {other:?} (expected strict or weak)"
            ))),
        }
    }
}

fn check_position(p: &Permutation, i: usize) -> Result<()> {
    if i == 0 || i > p.len() {
        Err(Error::PositionOutOfRange {
            position: i,
            n: p.len(),
        })
    } else {
        Ok(())
    }
}

pub fn is_interior(p: &Permutation, i: usize, mode: InteriorMode) -> bool {
    let n = p.len();
    debug_assert!(i >= 1 && i <= n);
    let has_left = i > 1;
    let has_right = i < n;
    if mode == InteriorMode::Strict && !(has_left && has_right) {
        return false;
    }
    let v = p.get(i);
    (!has_left || p.get(i - 1) < v) && (!has_right || v < p.get(i + 1))
}

/// Like [`is_interior`] but with a checked position.
pub fn try_is_interior(p: &Permutation, i: usize, mode: InteriorMode) -> Result<bool> {
    check_position(p, i)?;
    Ok(is_interior(p, i, mode))
}

pub fn is_lr_max(p: &Permutation, i: usize) -> bool {
    let v = p.get(i);
    p.values()[..i - 1].iter().all(|&x| x < v)
}

pub fn is_rl_min(p: &Permutation, i: usize) -> bool {
    let v = p.get(i);
    p.values()[i..].iter().all(|&x| x > v)
}

pub fn smaller_left_count(p: &Permutation, i: usize) -> usize {
    let v = p.get(i);
    p.values()[..i - 1].iter().filter(|&&x| x < v).count()
}

pub fn larger_right_count(p: &Permutation, i: usize) -> usize {
    let v = p.get(i);
    p.values()[i..].iter().filter(|&&x| x > v).count()
}

/// All motion tables of a trace, `tables()[t - 1]` for sort `t`.
#[derive(Debug, Clone)]
pub struct TraceMotions {
    tables: Vec<MotionTable>,
    // positions[t][v - 1] = position of v in σ_t
    positions: Vec<Vec<usize>>,
}

impl TraceMotions {
    pub fn new(trace: &SortTrace) -> Result<Self> {
        let steps = trace.steps();
        let tables = steps[..trace.t_star()]
            .iter()
            .enumerate()
            .map(|(t, s)| classify_transition(s, t + 1))
            .collect::<Result<Vec<_>>>()?;
        let positions = steps.iter().map(Permutation::inverse).collect();
        Ok(TraceMotions { tables, positions })
    }

    pub fn tables(&self) -> &[MotionTable] {
        &self.tables
    }

    /// Motion of `value` during sort `t` (`1 <= t <= t*`).
    pub fn motion(&self, t: usize, value: u32) -> MotionKind {
        self.tables[t - 1].motion_of(value)
    }

    /// Position of `value` in `σ_t`.
    pub fn position(&self, t: usize, value: u32) -> usize {
        self.positions[t][value as usize - 1]
    }

    pub fn t_star(&self) -> usize {
        self.tables.len()
    }

    fn contains(&self, value: u32) -> bool {
        value >= 1 && value as usize <= self.positions[0].len()
    }

    pub fn trajectory(&self, value: u32) -> Result<Vec<TrajectoryEntry>> {
        if !self.contains(value) {
            return Err(Error::UnknownValue(value));
        }
        Ok((0..=self.t_star())
            .map(|t| TrajectoryEntry {
                position: self.position(t, value),
                motion: (t > 0).then(|| self.motion(t, value)),
            })
            .collect())
    }

    pub fn pivot_count(&self, value: u32) -> Result<usize> {
        if !self.contains(value) {
            return Err(Error::UnknownValue(value));
        }
        Ok(self
            .tables
            .iter()
            .filter(|tab| tab.motion_of(value).is_pivot())
            .count())
    }

    pub fn arrival_sort(&self, value: u32) -> Result<usize> {
        if !self.contains(value) {
            return Err(Error::UnknownValue(value));
        }
        let home = value as usize;
        let last_away = (0..=self.t_star())
            .rev()
            .find(|&t| self.position(t, value) != home);
        Ok(last_away.map_or(0, |t| t + 1))
    }
}

/// Where an element sits in `σ_t` and how it moved during sort `t`
/// (`None` for `t = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrajectoryEntry {
    pub position: usize,
    #[serde(serialize_with = "serialize_motion")]
    pub motion: Option<MotionKind>,
}

fn serialize_motion<S: Serializer>(m: &Option<MotionKind>, s: S) -> Result<S::Ok, S::Error> {
    match m {
        Some(m) => s.collect_str(m),
        None => s.serialize_none(),
    }
}

pub fn element_trajectory(trace: &SortTrace, value: u32) -> Result<Vec<TrajectoryEntry>> {
    TraceMotions::new(trace)?.trajectory(value)
}

/// Number of sorts in which `value` itself moved two places (pivot centers
/// are not counted).
pub fn pivot_count(trace: &SortTrace, value: u32) -> Result<usize> {
    TraceMotions::new(trace)?.pivot_count(value)
}

/// Least `t` such that `value` sits at position `value` in every `σ_{t'}`
/// with `t <= t' <= t*`.
pub fn arrival_sort(trace: &SortTrace, value: u32) -> Result<usize> {
    TraceMotions::new(trace)?.arrival_sort(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::sort_trace;
    use MotionKind::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example_second_sort() {
        let table = classify_transition(&perm("417386259"), 2).unwrap();
        let expected = [
            (4, SwitchRight),
            (1, SwitchLeft),
            (7, SwitchRight),
            (3, SwitchLeft),
            (8, PivotRight),
            (6, PivotCenter),
            (2, PivotLeft),
            (5, StationaryInterior),
            (9, StationaryRightEdge),
        ];
        for (v, kind) in expected {
            assert_eq!(table.motion_of(v), kind, "value {v}");
        }
        assert_eq!(table.apply().unwrap(), perm("143726859"));
    }

    #[test]
    fn sorted_source_is_stationary() {
        for t in [1, 2, 7] {
            let table = classify_transition(&perm("12345"), t).unwrap();
            assert_eq!(table.motion_of(1), StationaryLeftEdge);
            assert_eq!(table.motion_of(5), StationaryRightEdge);
            for v in 2..=4 {
                assert_eq!(table.motion_of(v), StationaryInterior);
            }
        }
    }

    #[test]
    fn first_sort_full_reversal() {
        let table = classify_transition(&perm("54321"), 1).unwrap();
        let offsets: Vec<i64> = [5, 4, 3, 2, 1]
            .iter()
            .map(|&v| table.motion_of(v).offset())
            .collect();
        assert_eq!(offsets, vec![4, 2, 0, -2, -4]);
        assert_eq!(table.motion_of(3), FirstSortReversal(0));
    }

    #[test]
    fn long_run_after_first_sort_is_structural_error() {
        let err = classify_transition(&perm("154326"), 2).unwrap_err();
        assert_eq!(
            err,
            Error::LongRun {
                transition: 2,
                start: 2,
                length: 4
            }
        );
        assert_eq!(
            classify_transition(&perm("12"), 0),
            Err(Error::ZeroTransition)
        );
    }

    #[test]
    fn interior_modes() {
        // 2 < 5 < 9 around position 8 of σ_1.
        let p = perm("417386259");
        assert!(is_interior(&p, 8, InteriorMode::Strict));
        assert!(!is_interior(&perm("471836952"), 8, InteriorMode::Strict));
        let q = perm("312");
        assert!(!is_interior(&q, 3, InteriorMode::Strict));
        assert!(is_interior(&q, 3, InteriorMode::Weak));
        for s in ["312", "12345", "54321", "471836952"] {
            assert!(!is_interior(&perm(s), 1, InteriorMode::Strict));
        }
        assert!(try_is_interior(&q, 4, InteriorMode::Weak).is_err());
    }

    #[test]
    fn records_and_counts() {
        let p = perm("417386259");
        assert!(is_lr_max(&p, 5));
        assert!(is_lr_max(&p, 1));
        assert_eq!(smaller_left_count(&p, 8), 4);
        let id = perm("12345");
        let rev = perm("54321");
        for i in 1..=5 {
            assert!(is_lr_max(&id, i) && is_rl_min(&id, i));
            assert_eq!(smaller_left_count(&id, i), i - 1);
            assert_eq!(larger_right_count(&id, i), 5 - i);
            assert_eq!(smaller_left_count(&rev, i), 0);
        }
        assert!(is_rl_min(&rev, 5));
    }

    #[test]
    fn trajectory_of_smallest_asymmetric_member() {
        let tr = sort_trace(&perm("54231")).unwrap();
        let traj = element_trajectory(&tr, 5).unwrap();
        let positions: Vec<usize> = traj.iter().map(|e| e.position).collect();
        assert_eq!(positions, vec![1, 3, 4, 5, 5]);
        let motions: Vec<MotionKind> = traj.iter().filter_map(|e| e.motion).collect();
        // [5,4,2] is a length-3 run, so the first move is a pivot.
        assert_eq!(
            motions,
            vec![PivotRight, SwitchRight, SwitchRight, StationaryRightEdge]
        );
        assert_eq!(pivot_count(&tr, 5).unwrap(), 1);
        assert_eq!(arrival_sort(&tr, 5).unwrap(), 3);
    }

    #[test]
    fn trajectory_edge_cases() {
        let tr = sort_trace(&perm("12345")).unwrap();
        let traj = element_trajectory(&tr, 3).unwrap();
        assert_eq!(
            traj,
            vec![TrajectoryEntry {
                position: 3,
                motion: None
            }]
        );
        assert_eq!(arrival_sort(&tr, 3).unwrap(), 0);
        assert_eq!(element_trajectory(&tr, 6), Err(Error::UnknownValue(6)));

        let tr = sort_trace(&perm("471836952")).unwrap();
        let m = TraceMotions::new(&tr).unwrap();
        for t in 0..=2 {
            assert_eq!(m.position(t, 6), 6);
        }
        assert_eq!(m.motion(2, 6), PivotCenter);

        let tr = sort_trace(&perm("321")).unwrap();
        assert_eq!(pivot_count(&tr, 2).unwrap(), 0);
    }

    #[test]
    fn table_json_shape() {
        let table = classify_transition(&perm("312"), 1).unwrap();
        let json = serde_json::to_value(&table).unwrap();
        assert_eq!(json["t"], 1);
        assert_eq!(json["motions"][0]["value"], 1);
        assert_eq!(json["motions"][0]["kind"], "switch_left");
        assert_eq!(json["motions"][0]["offset"], -1);
        assert_eq!(json["motions"][1]["kind"], "stationary_right_edge");
    }
}
