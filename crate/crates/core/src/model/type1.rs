//! Station-count minimization for a fixed cycle time.

use crate::instance::Time;
use crate::model::knapsack::{bound2, bound3, credits, KnapsackWeights};
use crate::model::{encode, DpModel, TransitionKind, TransitionRecord};
use crate::preprocess::{div_ceil, DerivedData};
use crate::taskset::TaskSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State1 {
    pub unscheduled: TaskSet,
    /// Stations opened so far.
    pub stations: u32,
    /// Last task of the open station, or the dummy.
    pub prev: u16,
    /// First task of the open station, or the dummy.
    pub first: u16,
    /// Capacity left on the open station; zero when none is open.
    pub remaining: Time,
}

/// Quantities entering the load-based station bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadInputs {
    pub sum_t: Time,
    pub sum_tau: Time,
    pub max_tau: Time,
    pub min_mu: Time,
    pub mu_first: Time,
    pub remaining: Time,
    pub cycle: Time,
    pub stations: i64,
    pub m_lower: i64,
    pub m_upper: i64,
}

/// The three load terms: with setups and station-count range, with the
/// closing setup only, and processing only.
pub fn load_terms(x: &LoadInputs) -> [Time; 3] {
    let with_setups = x.mu_first + x.sum_tau + x.sum_t - (x.m_upper - x.stations) * x.max_tau
        + (x.m_lower - x.stations).max(0) * x.min_mu
        - x.remaining;
    [
        div_ceil(with_setups, x.cycle),
        div_ceil(x.mu_first + x.sum_t - x.remaining, x.cycle),
        div_ceil(x.sum_t - x.remaining, x.cycle),
    ]
}

pub struct Type1Model<'a> {
    pub pre: &'a DerivedData,
    pub cycle: Time,
    weights: Vec<KnapsackWeights>,
}

impl<'a> Type1Model<'a> {
    pub fn new(pre: &'a DerivedData) -> Self {
        let cycle = pre.cycle_time.expect("type-1 data carries a cycle time");
        let weights = pre
            .task_times
            .iter()
            .map(|&t| KnapsackWeights::of(t, cycle).unwrap_or_default())
            .collect();
        Type1Model {
            pre,
            cycle,
            weights,
        }
    }

    fn ready(&self, u: TaskSet, i: usize) -> bool {
        !self.pre.pred_star[i].intersects(u)
    }

    pub fn load_inputs(&self, s: &State1) -> LoadInputs {
        let pre = self.pre;
        let mut x = LoadInputs {
            sum_t: 0,
            sum_tau: 0,
            max_tau: 0,
            min_mu: 0,
            mu_first: pre.mu_min(s.first as usize),
            remaining: s.remaining,
            cycle: self.cycle,
            stations: i64::from(s.stations),
            m_lower: pre.m_lower as i64,
            m_upper: pre.m_upper as i64,
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

    /// All five bound terms, unclamped.
    pub fn terms(&self, s: &State1) -> [Time; 5] {
        let [a, b, c] = load_terms(&self.load_inputs(s));
        let (mut w2, mut w2p, mut w3) = (0, 0, 0);
        for i in s.unscheduled {
            let w = self.weights[i];
            w2 += w.w2;
            w2p += w.w2p_halves;
            w3 += w.w3_sixths;
        }
        let (l2, l3) = credits(s.remaining, self.cycle);
        [a, b, c, bound2(w2, w2p, l2), bound3(w3, l3)]
    }
}

impl DpModel for Type1Model<'_> {
    type State = State1;
    type Key = (TaskSet, u16, u16);

    fn target(&self) -> State1 {
        let d = encode(self.pre.dummy());
        State1 {
            unscheduled: self.pre.all_tasks(),
            stations: 0,
            prev: d,
            first: d,
            remaining: 0,
        }
    }

    fn is_base(&self, s: &State1) -> bool {
        s.unscheduled.is_empty() && s.first as usize == self.pre.dummy()
    }

    fn successors(&self, s: &State1, out: &mut Vec<(TransitionRecord, State1)>) {
        let pre = self.pre;
        let dummy = pre.dummy();
        let u = s.unscheduled;
        let (p, f) = (s.prev as usize, s.first as usize);
        if f == dummy {
            for i in u {
                if self.ready(u, i) && pre.task_times[i] <= self.cycle {
                    let rec = TransitionRecord::new(TransitionKind::AssignFirst(i), 1);
                    let next = State1 {
                        unscheduled: u.without(i),
                        stations: s.stations + 1,
                        prev: encode(i),
                        first: encode(i),
                        remaining: self.cycle - pre.task_times[i],
                    };
                    out.push((rec, next));
                }
            }
            return;
        }
        let mut closable = pre.mu(p, f) <= s.remaining;
        for i in u {
            if !self.ready(u, i) {
                continue;
            }
            let need = pre.task_times[i] + pre.tau(p, i);
            if need > s.remaining {
                continue;
            }
            if need + pre.mu(i, f) <= s.remaining {
                closable = false;
            }
            let rec = TransitionRecord::new(TransitionKind::AssignNext(i), 0);
            let next = State1 {
                unscheduled: u.without(i),
                prev: encode(i),
                remaining: s.remaining - need,
                ..*s
            };
            out.push((rec, next));
        }
        if closable {
            let d = encode(dummy);
            let rec = TransitionRecord::new(TransitionKind::CloseStation, 0);
            out.push((
                rec,
                State1 {
                    prev: d,
                    first: d,
                    remaining: 0,
                    ..*s
                },
            ));
        }
    }

    fn path_cost(&self, g: Time, rec: &TransitionRecord) -> Time {
        g + rec.weight
    }

    fn dual_bound(&self, s: &State1) -> Option<Time> {
        let [a, b, c, d, e] = self.terms(s);
        // The setup-aware terms rely on station windows, which only hold for
        // completions within `m_upper` stations; anything beyond needs at
        // least `m_upper + 1 - κ` more.
        let cap = (self.pre.m_upper as i64 + 1 - i64::from(s.stations)).max(0);
        Some(a.max(b).min(cap).max(c).max(d).max(e).max(0))
    }

    fn priority(&self, g: Time, h: Time) -> Time {
        g + h
    }

    fn key(&self, s: &State1) -> Self::Key {
        (s.unscheduled, s.prev, s.first)
    }

    fn dominates(&self, a: &State1, ga: Time, b: &State1, gb: Time) -> bool {
        self.key(a) == self.key(b)
            && a.stations <= b.stations
            && a.remaining >= b.remaining
            && ga <= gb
    }
}
