//! Cycle-time minimization for a fixed number of stations.

use crate::instance::Time;
use crate::model::{encode, DpModel, TransitionKind, TransitionRecord};
use crate::preprocess::{div_ceil, DerivedData};
use crate::taskset::TaskSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State2 {
    pub unscheduled: TaskSet,
    pub stations: u32,
    pub prev: u16,
    pub first: u16,
    /// Time used on the open (or last closed) station.
    pub used: Time,
    /// Largest station time seen so far.
    pub cycle: Time,
}

/// Quantities entering the cycle-time bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleInputs {
    pub sum_t: Time,
    pub sum_tau: Time,
    pub max_tau: Time,
    pub min_mu: Time,
    pub mu_first: Time,
    pub used: Time,
    pub m: i64,
    pub stations: i64,
}

impl CycleInputs {
    fn work(&self, opened: i64) -> Time {
        self.sum_tau
            + self.sum_t
            + self.used
            + self.mu_first
            + opened * (self.min_mu - self.max_tau)
    }
}

/// Both load bounds on the final cycle time, assuming every remaining
/// station gets opened: `(with setups, processing only)`.
pub fn cycle_terms(x: &CycleInputs) -> (Time, Time) {
    let d = x.m.min(x.m - x.stations + 1);
    (
        div_ceil(x.work(x.m - x.stations), d),
        div_ceil(x.sum_t + x.used, d),
    )
}

/// Same bounds minimized over every feasible number of further stations,
/// so they also hold when fewer stations get opened. `None` when no
/// further station may be opened but tasks remain unscheduled.
pub fn robust_cycle_terms(x: &CycleInputs, open: bool, tasks_left: bool) -> Option<(Time, Time)> {
    let lo = i64::from(!open && tasks_left);
    let hi = if tasks_left { x.m - x.stations } else { 0 };
    if hi < lo {
        return None;
    }
    // Stations sharing the remaining work: the new ones plus the current or
    // last closed one, which is absent only at the target state.
    let share = |opened: i64| opened + i64::from(x.stations > 0);
    // `work(k) / share(k)` is monotone in `k`, so an endpoint is minimal.
    let with_setups = div_ceil(x.work(lo), share(lo)).min(div_ceil(x.work(hi), share(hi)));
    let processing = div_ceil(x.sum_t + x.used, share(hi));
    Some((with_setups, processing))
}

pub struct Type2Model<'a> {
    pub pre: &'a DerivedData,
    pub m: usize,
}

impl<'a> Type2Model<'a> {
    pub fn new(pre: &'a DerivedData) -> Self {
        let m = pre
            .station_count
            .expect("type-2 data carries a station count");
        Type2Model { pre, m }
    }

    pub fn cycle_inputs(&self, s: &State2) -> CycleInputs {
        let pre = self.pre;
        let mut x = CycleInputs {
            sum_t: 0,
            sum_tau: 0,
            max_tau: 0,
            min_mu: 0,
            mu_first: pre.mu_min(s.first as usize),
            used: s.used,
            m: self.m as i64,
            stations: i64::from(s.stations),
        };
        let mut min_mu = Time::MAX;
        for i in s.unscheduled {
            x.sum_t += pre.task_times[i];
            x.sum_tau += pre.min_fwd_setup[i];
            x.max_tau = x.max_tau.max(pre.min_fwd_setup[i]);
            min_mu = min_mu.min(pre.min_bwd_setup[i]);
        }
        x.min_mu = if s.unscheduled.is_empty() { 0 } else { min_mu };
        x
    }

    fn ready(&self, u: TaskSet, i: usize) -> bool {
        !self.pre.pred_star[i].intersects(u)
    }
}

impl DpModel for Type2Model<'_> {
    type State = State2;
    type Key = (TaskSet, u16, u16, u32);

    fn target(&self) -> State2 {
        let d = encode(self.pre.dummy());
        State2 {
            unscheduled: self.pre.all_tasks(),
            stations: 0,
            prev: d,
            first: d,
            used: 0,
            cycle: 0,
        }
    }

    fn is_base(&self, s: &State2) -> bool {
        s.unscheduled.is_empty() && s.first as usize == self.pre.dummy()
    }

    fn successors(&self, s: &State2, out: &mut Vec<(TransitionRecord, State2)>) {
        let pre = self.pre;
        let dummy = pre.dummy();
        let u = s.unscheduled;
        let (p, f) = (s.prev as usize, s.first as usize);
        if f == dummy {
            if (s.stations as usize) < self.m {
                for i in u {
                    if self.ready(u, i) {
                        let t = pre.task_times[i];
                        let rec = TransitionRecord::new(TransitionKind::AssignFirst(i), t);
                        let next = State2 {
                            unscheduled: u.without(i),
                            stations: s.stations + 1,
                            prev: encode(i),
                            first: encode(i),
                            used: t,
                            cycle: s.cycle.max(t),
                        };
                        out.push((rec, next));
                    }
                }
            }
            return;
        }
        for i in u {
            if self.ready(u, i) {
                let used = s.used + pre.task_times[i] + pre.tau(p, i);
                let rec = TransitionRecord::new(TransitionKind::AssignNext(i), used);
                let next = State2 {
                    unscheduled: u.without(i),
                    prev: encode(i),
                    used,
                    cycle: s.cycle.max(used),
                    ..*s
                };
                out.push((rec, next));
            }
        }
        let used = s.used + pre.mu(p, f);
        let d = encode(dummy);
        out.push((
            TransitionRecord::new(TransitionKind::CloseStation, used),
            State2 {
                prev: d,
                first: d,
                used,
                cycle: s.cycle.max(used),
                ..*s
            },
        ));
    }

    fn path_cost(&self, g: Time, rec: &TransitionRecord) -> Time {
        g.max(rec.weight)
    }

    fn dual_bound(&self, s: &State2) -> Option<Time> {
        let open = s.first as usize != self.pre.dummy();
        let x = self.cycle_inputs(s);
        let (with_setups, processing) = robust_cycle_terms(&x, open, !s.unscheduled.is_empty())?;
        // Setup minima come from station windows that only hold for final
        // cycle times within the greedy upper bound.
        let capped = with_setups.min(self.pre.c_upper + 1);
        Some(s.cycle.max(capped).max(processing))
    }

    fn priority(&self, g: Time, h: Time) -> Time {
        g.max(h)
    }

    fn key(&self, s: &State2) -> Self::Key {
        (s.unscheduled, s.prev, s.first, s.stations)
    }

    fn dominates(&self, a: &State2, _ga: Time, b: &State2, _gb: Time) -> bool {
        self.key(a) == self.key(b) && a.used <= b.used && a.cycle <= b.cycle
    }
}
