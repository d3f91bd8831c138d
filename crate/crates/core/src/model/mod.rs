//! Dynamic-programming models searched by the beam search.

pub mod knapsack;
pub mod type1;
pub mod type2;

use std::fmt::Debug;
use std::hash::Hash;

use crate::instance::Time;

pub use type1::{State1, Type1Model};
pub use type2::{State2, Type2Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransitionKind {
    /// Open a new station with the given task.
    AssignFirst(usize),
    /// Append the given task to the open station.
    AssignNext(usize),
    /// Seal the open station.
    CloseStation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransitionRecord {
    pub kind: TransitionKind,
    pub weight: Time,
}

impl TransitionRecord {
    pub fn new(kind: TransitionKind, weight: Time) -> Self {
        TransitionRecord { kind, weight }
    }
}

/// A state-transition system with an additive or bottleneck objective.
///
/// Costs of the target state are zero; `path_cost` folds one transition
/// weight into the cost of the path that reached its source.
pub trait DpModel {
    type State: Clone + Eq + Hash + Debug;
    type Key: Clone + Eq + Hash;

    fn target(&self) -> Self::State;

    fn is_base(&self, s: &Self::State) -> bool;

    /// Appends every applicable transition and its successor to `out`.
    fn successors(&self, s: &Self::State, out: &mut Vec<(TransitionRecord, Self::State)>);

    fn path_cost(&self, g: Time, rec: &TransitionRecord) -> Time;

    /// Admissible bound on the best completion, folded the same way as
    /// `priority`. `None` means no completion exists.
    fn dual_bound(&self, s: &Self::State) -> Option<Time>;

    /// Bound on the full path cost through a node with cost `g` and bound `h`.
    fn priority(&self, g: Time, h: Time) -> Time;

    /// States with equal keys are compared by `dominates`.
    fn key(&self, s: &Self::State) -> Self::Key;

    /// Whether `a` reached at cost `ga` is at least as good as `b` at `gb`.
    fn dominates(&self, a: &Self::State, ga: Time, b: &Self::State, gb: Time) -> bool;
}

/// Sentinel stored in `u16` task fields for "no task".
pub(crate) fn encode(i: usize) -> u16 {
    u16::try_from(i).expect("task index fits u16")
}
