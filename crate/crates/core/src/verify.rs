//! Exhaustive and sampled checks of structural claims about Pop.
//!
//! Each [`Claim`] inspects one permutation's trace and emits
//! [`Counterexample`]s. The runners in this module scan every permutation up
//! to some `n_max` (sharded by lexicographic rank), a list of permutations,
//! or a seeded sample, and assemble a [`ClaimReport`] whose counterexamples
//! are sorted canonically so reports do not depend on the thread schedule.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bound::bounds_from_first_pass;
use crate::enumerate::{factorial, par_scan};
use crate::error::{Error, Result};
use crate::motion::{
    is_interior, is_lr_max, is_rl_min, larger_right_count, smaller_left_count, InteriorMode,
    MotionKind, TraceMotions,
};
use crate::permutation::{for_each_run, Permutation, SortTrace};
use crate::sampling::sample_permutation;

/// Largest `n_max` accepted by the exhaustive runner.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 11;

/// Half-width of the band at each end of the permutation where pivot
/// centers are excluded at sort `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PivotWindow {
    /// `⌈(s-1)/2⌉`
    CeilHalf,
    /// `⌊s/2⌋ + 1`
    FloorHalfPlusOne,
    /// `⌊(s+3)/2⌋`: the first or last `i` positions once `s > 2i - 4`.
    FirstLastI,
    /// `⌊(s+1)/2⌋`: within `i - 1` positions of an end once `s > 2i - 4`.
    WithinIMinusOne,
}

impl PivotWindow {
    pub const ALL: [PivotWindow; 4] = [
        PivotWindow::CeilHalf,
        PivotWindow::FloorHalfPlusOne,
        PivotWindow::FirstLastI,
        PivotWindow::WithinIMinusOne,
    ];

    pub fn id(self) -> &'static str {
        match self {
            PivotWindow::CeilHalf => "ceil-half",
            PivotWindow::FloorHalfPlusOne => "floor-half-plus-one",
            PivotWindow::FirstLastI => "first-last-i",
            PivotWindow::WithinIMinusOne => "within-i-minus-one",
        }
    }

    pub fn width(self, s: usize) -> usize {
        match self {
            PivotWindow::CeilHalf => s / 2,
            PivotWindow::FloorHalfPlusOne => s / 2 + 1,
            PivotWindow::FirstLastI => (s + 3) / 2,
            PivotWindow::WithinIMinusOne => s.div_ceil(2),
        }
    }
}

impl FromStr for PivotWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PivotWindow::ALL
            .into_iter()
            .find(|w| w.id() == s)
            .ok_or_else(|| Error::UnknownWindow(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    /// After at least one pass, no decreasing run has length four or more.
    NoLongRuns,
    /// A pivot center at sort `t >= 2` was interior in `σ_{t-2}`.
    PivotCenterOrigin(InteriorMode),
    /// An element moving left (right) at sort `t >= 2` moved the same way,
    /// or was interior, at sort `t - 1`.
    MotionPersistence(InteriorMode),
    /// Interior elements of `σ_t` are left-to-right maxima or have at least
    /// `⌈(t+1)/2⌉` smaller elements to their left, and mirrored.
    PopStop,
    /// No pivot center within `window.width(s)` of either end at sort
    /// `s >= s_min`.
    PivotWindow { window: PivotWindow, s_min: usize },
    /// `t* >= theorem_bound` for every applicable element of `σ_1`.
    SortBound,
}

impl Claim {
    pub const IDS: [&'static str; 6] = [
        "obs-2.1",
        "obs-3.1",
        "obs-3.2",
        "lemma-3.3",
        "pivot-window",
        "thm-3.4",
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Claim::NoLongRuns => "obs-2.1",
            Claim::PivotCenterOrigin(_) => "obs-3.1",
            Claim::MotionPersistence(_) => "obs-3.2",
            Claim::PopStop => "lemma-3.3",
            Claim::PivotWindow { .. } => "pivot-window",
            Claim::SortBound => "thm-3.4",
        }
    }

    pub fn default_pivot_window() -> Claim {
        Claim::PivotWindow {
            window: PivotWindow::CeilHalf,
            s_min: 2,
        }
    }

    /// Builds a claim from its id. `mode` applies to obs-3.1 and obs-3.2
    /// (default Strict); `window` and `s_min` to pivot-window.
    pub fn from_id(
        id: &str,
        mode: Option<InteriorMode>,
        window: Option<PivotWindow>,
        s_min: Option<usize>,
    ) -> Result<Claim> {
        let mode = mode.unwrap_or(InteriorMode::Strict);
        Ok(match id {
            "obs-2.1" => Claim::NoLongRuns,
            "obs-3.1" => Claim::PivotCenterOrigin(mode),
            "obs-3.2" => Claim::MotionPersistence(mode),
            "lemma-3.3" => Claim::PopStop,
            "pivot-window" => Claim::PivotWindow {
                window: window.unwrap_or(PivotWindow::CeilHalf),
                s_min: s_min.unwrap_or(2),
            },
            "thm-3.4" => Claim::SortBound,
            other => return Err(Error::UnknownClaim(other.to_string())),
        })
    }

    pub fn takes_mode(&self) -> bool {
        matches!(
            self,
            Claim::PivotCenterOrigin(_) | Claim::MotionPersistence(_)
        )
    }

    /// The sweep expected to come back clean at small `n`.
    pub fn standard_set() -> Vec<Claim> {
        vec![
            Claim::NoLongRuns,
            Claim::PivotCenterOrigin(InteriorMode::Strict),
            Claim::MotionPersistence(InteriorMode::Weak),
            Claim::PopStop,
            Claim::default_pivot_window(),
            Claim::SortBound,
        ]
    }

    fn parameters(&self) -> BTreeMap<String, Param> {
        let mut params = BTreeMap::new();
        match *self {
            Claim::PivotCenterOrigin(mode) | Claim::MotionPersistence(mode) => {
                params.insert("mode".into(), Param::Text(mode.name().into()));
            }
            Claim::PopStop => {
                params.insert(
                    "mode".into(),
                    Param::Text(InteriorMode::Strict.name().into()),
                );
            }
            Claim::PivotWindow { window, s_min } => {
                params.insert("window".into(), Param::Text(window.id().into()));
                params.insert("s_min".into(), Param::Int(s_min as u64));
            }
            Claim::NoLongRuns | Claim::SortBound => {}
        }
        params
    }

    /// Checks one permutation, appending any counterexamples to `out`.
    pub fn check(&self, p: &Permutation, out: &mut Vec<Counterexample>) {
        let trace = match SortTrace::new(p) {
            Ok(trace) => trace,
            Err(e) => {
                out.push(Counterexample::new(
                    p,
                    0,
                    0,
                    0,
                    format!("trace failed: {e}"),
                ));
                return;
            }
        };
        match *self {
            Claim::NoLongRuns => check_no_long_runs(&trace, out),
            Claim::SortBound => check_sort_bound(&trace, out),
            Claim::PopStop => check_pop_stop(&trace, out),
            _ => match TraceMotions::new(&trace) {
                Ok(motions) => match *self {
                    Claim::PivotCenterOrigin(mode) => {
                        check_pivot_center_origin(&trace, &motions, mode, out)
                    }
                    Claim::MotionPersistence(mode) => {
                        check_motion_persistence(&trace, &motions, mode, out)
                    }
                    Claim::PivotWindow { window, s_min } => {
                        check_pivot_window(&trace, &motions, window, s_min, out)
                    }
                    _ => unreachable!(),
                },
                Err(e) => out.push(Counterexample::new(
                    p,
                    0,
                    0,
                    0,
                    format!("classification failed: {e}"),
                )),
            },
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())?;
        match self {
            Claim::PivotCenterOrigin(m) | Claim::MotionPersistence(m) => {
                write!(f, " ({})", m.name())
            }
            Claim::PivotWindow { window, s_min } => {
                write!(f, " ({}, s_min = {s_min})", window.id())
            }
            _ => Ok(()),
        }
    }
}

fn check_no_long_runs(trace: &SortTrace, out: &mut Vec<Counterexample>) {
    for t in 1..=trace.t_star() {
        let step = trace.step(t);
        for_each_run(step.values(), |start, len| {
            if len >= 4 {
                out.push(Counterexample::new(
                    trace.source(),
                    t,
                    step.values()[start],
                    start + 1,
                    format!("decreasing run of length {len} in sigma_{t}"),
                ));
            }
        });
    }
}

fn check_pivot_center_origin(
    trace: &SortTrace,
    motions: &TraceMotions,
    mode: InteriorMode,
    out: &mut Vec<Counterexample>,
) {
    for t in 2..=trace.t_star() {
        let before = trace.step(t - 2);
        for (v, kind) in motions.tables()[t - 1].iter() {
            if kind != MotionKind::PivotCenter {
                continue;
            }
            let old = motions.position(t - 2, v);
            if !is_interior(before, old, mode) {
                out.push(Counterexample::new(
                    trace.source(),
                    t,
                    v,
                    motions.position(t - 1, v),
                    format!(
                        "pivot center at sort {t} was not {} interior in sigma_{} (position {old})",
                        mode.name(),
                        t - 2
                    ),
                ));
            }
        }
    }
}

fn check_motion_persistence(
    trace: &SortTrace,
    motions: &TraceMotions,
    mode: InteriorMode,
    out: &mut Vec<Counterexample>,
) {
    for t in 2..=trace.t_star() {
        let before = trace.step(t - 2);
        for (v, kind) in motions.tables()[t - 1].iter() {
            let same_way: fn(MotionKind) -> bool = if kind.moves_left() {
                MotionKind::moves_left
            } else if kind.moves_right() {
                MotionKind::moves_right
            } else {
                continue;
            };
            let prev = motions.motion(t - 1, v);
            let ok = same_way(prev)
                || prev == MotionKind::StationaryInterior
                || (mode == InteriorMode::Weak
                    && prev.is_stationary_edge()
                    && is_interior(before, motions.position(t - 2, v), InteriorMode::Weak));
            if !ok {
                out.push(Counterexample::new(
                    trace.source(),
                    t,
                    v,
                    motions.position(t - 1, v),
                    format!("{kind} at sort {t} preceded by {prev} at sort {}", t - 1),
                ));
            }
        }
    }
}

fn check_pop_stop(trace: &SortTrace, out: &mut Vec<Counterexample>) {
    let n = trace.n();
    for (t, step) in trace.steps().iter().enumerate() {
        let needed = (t + 2) / 2;
        for i in 2..n {
            if !is_interior(step, i, InteriorMode::Strict) {
                continue;
            }
            let smaller = smaller_left_count(step, i);
            let larger = larger_right_count(step, i);
            let left_ok = smaller >= needed || is_lr_max(step, i);
            let right_ok = larger >= needed || is_rl_min(step, i);
            if !(left_ok && right_ok) {
                out.push(Counterexample::new(
                    trace.source(),
                    t,
                    step.get(i),
                    i,
                    format!(
                        "interior in sigma_{t}: {smaller} smaller left, {larger} larger right, \
                         need {needed}"
                    ),
                ));
            }
        }
    }
}

fn check_pivot_window(
    trace: &SortTrace,
    motions: &TraceMotions,
    window: PivotWindow,
    s_min: usize,
    out: &mut Vec<Counterexample>,
) {
    let n = trace.n();
    for s in s_min.max(1)..=trace.t_star() {
        let w = window.width(s);
        for (v, kind) in motions.tables()[s - 1].iter() {
            if kind != MotionKind::PivotCenter {
                continue;
            }
            let p = motions.position(s - 1, v);
            if p <= w || p + w > n {
                out.push(Counterexample::new(
                    trace.source(),
                    s,
                    v,
                    p,
                    format!("pivot center at sort {s} within {w} of an end"),
                ));
            }
        }
    }
}

fn check_sort_bound(trace: &SortTrace, out: &mut Vec<Counterexample>) {
    let t_star = trace.t_star();
    if t_star == 0 {
        return;
    }
    for b in bounds_from_first_pass(trace.step(1)) {
        if let Some(bound) = b.bound {
            if (t_star as u64) < bound {
                out.push(Counterexample::new(
                    trace.source(),
                    t_star,
                    b.value,
                    b.k,
                    format!(
                        "i = {}, k = {}: bound {bound} exceeds t* = {t_star}",
                        b.i, b.k
                    ),
                ));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Param {
    Int(u64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub permutation: Permutation,
    pub t: usize,
    pub value: u32,
    pub position: usize,
    pub detail: String,
}

impl Counterexample {
    fn new(p: &Permutation, t: usize, value: u32, position: usize, detail: String) -> Self {
        Counterexample {
            permutation: p.clone(),
            t,
            value,
            position,
            detail,
        }
    }

    fn sort_key(&self) -> (usize, &[u32], usize, usize, u32, &str) {
        (
            self.permutation.len(),
            self.permutation.values(),
            self.t,
            self.position,
            self.value,
            &self.detail,
        )
    }
}

impl Ord for Counterexample {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Counterexample {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub parameters: BTreeMap<String, Param>,
    pub checked_count: u64,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_seconds: f64,
}

impl ClaimReport {
    fn assemble(
        claim: &Claim,
        extra: BTreeMap<String, Param>,
        checked_count: u64,
        mut counterexamples: Vec<Counterexample>,
        started: Instant,
    ) -> Self {
        counterexamples.sort();
        let mut parameters = claim.parameters();
        parameters.extend(extra);
        ClaimReport {
            claim_id: claim.id().to_string(),
            parameters,
            checked_count,
            counterexamples,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        }
    }

    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn contains(&self, permutation: &Permutation, t: usize, value: u32) -> bool {
        self.counterexamples
            .iter()
            .any(|c| &c.permutation == permutation && c.t == t && c.value == value)
    }
}

/// Checks `claim` on every permutation of every length `1..=n_max`.
pub fn verify_exhaustive(claim: Claim, n_max: usize) -> Result<ClaimReport> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    if n_max > DEFAULT_EXHAUSTIVE_CAP {
        return Err(Error::AboveExhaustiveCap {
            n: n_max,
            cap: DEFAULT_EXHAUSTIVE_CAP,
        });
    }
    let started = Instant::now();
    let mut checked = 0;
    let mut found = Vec::new();
    for n in 1..=n_max {
        checked += factorial(n);
        let shards = par_scan(n, Vec::new, |acc, values| {
            claim.check(&Permutation::from_values_unchecked(values.to_vec()), acc)
        });
        found.extend(shards.into_iter().flatten());
    }
    let mut extra = BTreeMap::new();
    extra.insert("n_min".into(), Param::Int(1));
    extra.insert("n_max".into(), Param::Int(n_max as u64));
    extra.insert("method".into(), Param::Text("exhaustive".into()));
    Ok(ClaimReport::assemble(
        &claim, extra, checked, found, started,
    ))
}

/// Checks `claim` on the given permutations only.
pub fn verify_permutations(claim: Claim, perms: &[Permutation]) -> ClaimReport {
    let started = Instant::now();
    let found: Vec<Counterexample> = perms
        .par_iter()
        .flat_map_iter(|p| {
            let mut out = Vec::new();
            claim.check(p, &mut out);
            out
        })
        .collect();
    let mut extra = BTreeMap::new();
    extra.insert("method".into(), Param::Text("list".into()));
    if let [p] = perms {
        extra.insert("permutation".into(), Param::Text(p.to_string()));
    }
    ClaimReport::assemble(&claim, extra, perms.len() as u64, found, started)
}

/// Checks `claim` on `samples` uniform permutations of length `n`.
pub fn verify_sampled(claim: Claim, n: usize, samples: u64, seed: u64) -> Result<ClaimReport> {
    if n == 0 || samples == 0 {
        return Err(Error::InvalidParameter(
            "n and samples must be at least 1".into(),
        ));
    }
    let started = Instant::now();
    let found: Vec<Counterexample> = (0..samples)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut out = Vec::new();
            claim.check(&sample_permutation(n, seed, j), &mut out);
            out
        })
        .collect();
    let mut extra = BTreeMap::new();
    extra.insert("method".into(), Param::Text("sampled".into()));
    extra.insert("n".into(), Param::Int(n as u64));
    extra.insert("samples".into(), Param::Int(samples));
    extra.insert("seed".into(), Param::Int(seed));
    Ok(ClaimReport::assemble(
        &claim, extra, samples, found, started,
    ))
}

pub fn verify_no_long_runs(n_max: usize) -> Result<ClaimReport> {
    verify_exhaustive(Claim::NoLongRuns, n_max)
}

pub fn verify_pivot_center_origin(n_max: usize, mode: InteriorMode) -> Result<ClaimReport> {
    verify_exhaustive(Claim::PivotCenterOrigin(mode), n_max)
}

pub fn verify_motion_persistence(n_max: usize, mode: InteriorMode) -> Result<ClaimReport> {
    verify_exhaustive(Claim::MotionPersistence(mode), n_max)
}

pub fn verify_pop_stop(n_max: usize) -> Result<ClaimReport> {
    verify_exhaustive(Claim::PopStop, n_max)
}

pub fn verify_pivot_window(n_max: usize, window: &str, s_min: usize) -> Result<ClaimReport> {
    let window = window.parse()?;
    verify_exhaustive(Claim::PivotWindow { window, s_min }, n_max)
}

pub fn verify_sort_bound(n_max: usize) -> Result<ClaimReport> {
    verify_exhaustive(Claim::SortBound, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn check(claim: Claim, s: &str) -> Vec<Counterexample> {
        let mut out = Vec::new();
        claim.check(&perm(s), &mut out);
        out
    }

    #[test]
    fn worked_example_satisfies_every_claim() {
        let p = perm("471836952");
        assert_eq!(p.pop().max_run_len(), 3);
        for claim in Claim::standard_set() {
            assert!(check(claim, "471836952").is_empty(), "{claim}");
        }
        // Value 6 pivots around at sort 2 and was interior at position 6 of σ_0.
        assert!(is_interior(&p, 6, InteriorMode::Strict));
    }

    #[test]
    fn boundary_gap_in_strict_persistence() {
        let ce = check(Claim::MotionPersistence(InteriorMode::Strict), "312");
        assert_eq!(ce.len(), 1);
        assert_eq!((ce[0].t, ce[0].value, ce[0].position), (2, 2, 3));
        assert!(check(Claim::MotionPersistence(InteriorMode::Weak), "312").is_empty());
    }

    #[test]
    fn first_sort_pivot_is_outside_window_range() {
        assert!(check(Claim::default_pivot_window(), "321").is_empty());
        let ce = check(
            Claim::PivotWindow {
                window: PivotWindow::CeilHalf,
                s_min: 1,
            },
            "321",
        );
        // w(1) = 0, so the center at position 2 of n = 3 is still fine...
        assert!(ce.is_empty());
        // ...but a wider window flags it.
        let ce = check(
            Claim::PivotWindow {
                window: PivotWindow::FirstLastI,
                s_min: 1,
            },
            "321",
        );
        assert_eq!((ce[0].t, ce[0].position), (1, 2));
    }

    #[test]
    fn small_exhaustive_reports() {
        let r = verify_no_long_runs(1).unwrap();
        assert_eq!(r.checked_count, 1);
        assert!(r.holds());
        assert!(verify_pivot_center_origin(2, InteriorMode::Strict)
            .unwrap()
            .holds());
        assert!(verify_motion_persistence(2, InteriorMode::Strict)
            .unwrap()
            .holds());
        assert!(verify_pivot_window(2, "ceil-half", 2).unwrap().holds());
        assert_eq!(
            verify_pivot_window(3, "nope", 2).unwrap_err(),
            Error::UnknownWindow("nope".into())
        );
        let r = verify_sort_bound(4).unwrap();
        assert_eq!(r.checked_count, 1 + 2 + 6 + 24);
        assert!(verify_exhaustive(Claim::PopStop, 12).is_err());
        assert!(verify_exhaustive(Claim::PopStop, 0).is_err());
    }

    #[test]
    fn claim_ids_round_trip() {
        for id in Claim::IDS {
            assert_eq!(Claim::from_id(id, None, None, None).unwrap().id(), id);
        }
        assert!(Claim::from_id("lemma-9", None, None, None).is_err());
        for w in PivotWindow::ALL {
            assert_eq!(w.id().parse::<PivotWindow>().unwrap(), w);
        }
        assert_eq!(PivotWindow::CeilHalf.width(2), 1);
        assert_eq!(PivotWindow::CeilHalf.width(5), 2);
    }

    #[test]
    fn report_contains_and_ordering() {
        let r = verify_motion_persistence(4, InteriorMode::Strict).unwrap();
        assert!(r.contains(&perm("312"), 2, 2));
        let mut sorted = r.counterexamples.clone();
        sorted.sort();
        assert_eq!(sorted, r.counterexamples);
        assert!(r.counterexamples.first().unwrap().permutation.len() <= 3);
    }

    #[test]
    fn sampled_and_listed_runs() {
        let r = verify_sampled(Claim::SortBound, 60, 20, 5).unwrap();
        assert_eq!(r.checked_count, 20);
        assert!(r.holds());
        let r = verify_permutations(Claim::NoLongRuns, &[perm("471836952")]);
        assert_eq!(
            r.parameters["permutation"],
            Param::Text("4,7,1,8,3,6,9,5,2".into())
        );
        assert!(r.holds());
    }
}
