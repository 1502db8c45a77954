//! Pop-stack sorting laboratory.
//!
//! [`Permutation::pop`] reverses every maximal decreasing run. On top of that
//! this crate provides motion classification for each pass ([`motion`]),
//! checkers for structural claims about repeated passes ([`verify`]), the
//! lower bound on the number of passes ([`bound`]), two extremal
//! constructions ([`constructions`]) and exact or sampled statistics of the
//! sorting depth ([`stats`]).

pub mod bound;
pub mod constructions;
pub mod enumerate;
pub mod error;
pub mod motion;
pub mod permutation;
pub mod sampling;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use motion::{classify_transition, InteriorMode, MotionKind, MotionTable};
pub use permutation::{sort_trace, t_star, Permutation, Run, RunDecomposition, SortTrace};
pub use verify::{Claim, ClaimReport, Counterexample, PivotWindow};
