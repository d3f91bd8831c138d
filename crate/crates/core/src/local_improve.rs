//! Re-sequencing the tasks of each station of an incumbent, keeping the
//! station assignment fixed.

use crate::instance::{Instance, ProblemType, Time};
use crate::model::{encode, DpModel, TransitionKind, TransitionRecord};
use crate::preprocess::transitive_closure;
use crate::search::cabs::{cabs, CabsConfig, PathRecorder};
use crate::solution::Solution;
use crate::taskset::TaskSet;

/// Stations up to this size are sequenced by the exact subset recursion.
pub const DEFAULT_EXACT_LIMIT: usize = 18;

/// The tasks of one station with their setups, re-indexed `0..k`.
#[derive(Debug, Clone)]
pub struct StationSubproblem {
    /// Global ids of the station's tasks.
    pub tasks: Vec<usize>,
    /// Local predecessors inside the station.
    pub within_pred: Vec<TaskSet>,
    pub fwd: Vec<Vec<Time>>,
    pub bwd: Vec<Vec<Time>>,
    /// Smallest forward setup into each task from a task that may precede it.
    pub min_fwd: Vec<Time>,
    /// Smallest backward setup into each task from a task that may end the station.
    pub min_bwd: Vec<Time>,
}

impl StationSubproblem {
    pub fn new(inst: &Instance, pred_star: &[TaskSet], tasks: &[usize]) -> Self {
        let k = tasks.len();
        let within_pred: Vec<TaskSet> = tasks
            .iter()
            .map(|&i| {
                (0..k)
                    .filter(|&a| pred_star[i].contains(tasks[a]))
                    .collect()
            })
            .collect();
        let fwd: Vec<Vec<Time>> = tasks
            .iter()
            .map(|&i| tasks.iter().map(|&j| inst.fwd_setup[i][j]).collect())
            .collect();
        let bwd: Vec<Vec<Time>> = tasks
            .iter()
            .map(|&i| tasks.iter().map(|&j| inst.bwd_setup[i][j]).collect())
            .collect();
        // `a` may directly precede `b` unless `b` must come first.
        let min_fwd = (0..k)
            .map(|b| {
                (0..k)
                    .filter(|&a| a != b && !within_pred[a].contains(b))
                    .map(|a| fwd[a][b])
                    .min()
                    .unwrap_or(0)
            })
            .collect();
        // `l` may end a station started by `f` unless `l` must come before `f`.
        let min_bwd = (0..k)
            .map(|f| {
                (0..k)
                    .filter(|&l| (l != f || k == 1) && !within_pred[f].contains(l))
                    .map(|l| bwd[l][f])
                    .min()
                    .unwrap_or(0)
            })
            .collect();
        StationSubproblem {
            tasks: tasks.to_vec(),
            within_pred,
            fwd,
            bwd,
            min_fwd,
            min_bwd,
        }
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    /// Setup cost of a local order: forward setups plus the closing setup.
    pub fn setup_cost(&self, order: &[usize]) -> Time {
        let (Some(&f), Some(&l)) = (order.first(), order.last()) else {
            return 0;
        };
        order.windows(2).map(|w| self.fwd[w[0]][w[1]]).sum::<Time>() + self.bwd[l][f]
    }
}

/// Cheapest precedence-feasible order of the station's tasks. Returns global
/// task ids and the setup cost (processing excluded).
pub fn resequence_station(sub: &StationSubproblem, exact_limit: usize) -> (Vec<usize>, Time) {
    let k = sub.len();
    let local = match k {
        0 => Vec::new(),
        1 => vec![0],
        _ if k <= exact_limit.min(20) => subset_recursion(sub),
        _ => search_sequence(sub),
    };
    let cost = sub.setup_cost(&local);
    (local.into_iter().map(|a| sub.tasks[a]).collect(), cost)
}

/// Dense recursion over (visited set, last task) for every first task.
#[allow(clippy::needless_range_loop)]
fn subset_recursion(sub: &StationSubproblem) -> Vec<usize> {
    let k = sub.len();
    let full = (1usize << k) - 1;
    let pred: Vec<usize> = sub.within_pred.iter().map(|p| p.bits() as usize).collect();
    let inf = Time::MAX / 4;
    let mut cost = vec![inf; (full + 1) * k];
    let mut from = vec![u8::MAX; (full + 1) * k];
    let mut best: Option<(Time, Vec<usize>)> = None;
    for f in (0..k).filter(|&f| pred[f] == 0) {
        cost.fill(inf);
        let start = 1usize << f;
        cost[start * k + f] = 0;
        for mask in start..=full {
            if mask & start == 0 {
                continue;
            }
            for last in 0..k {
                let here = cost[mask * k + last];
                if here >= inf {
                    continue;
                }
                for next in 0..k {
                    let bit = 1usize << next;
                    if mask & bit != 0 || pred[next] & !mask != 0 {
                        continue;
                    }
                    let idx = (mask | bit) * k + next;
                    let c = here + sub.fwd[last][next];
                    if c < cost[idx] {
                        cost[idx] = c;
                        from[idx] = last as u8;
                    }
                }
            }
        }
        for last in 0..k {
            let c = cost[full * k + last];
            if c >= inf {
                continue;
            }
            let total = c + sub.bwd[last][f];
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                let mut order = vec![last];
                let (mut mask, mut cur) = (full, last);
                while mask != start {
                    let prev = from[mask * k + cur] as usize;
                    mask &= !(1 << cur);
                    cur = prev;
                    order.push(cur);
                }
                order.reverse();
                best = Some((total, order));
            }
        }
    }
    best.expect("acyclic precedence admits an order").1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeqState {
    unscheduled: TaskSet,
    prev: u16,
    first: u16,
}

/// Sequencing one station as a shortest-path model: forward setups on each
/// append, the backward setup on closing.
pub struct SequencingModel<'a> {
    sub: &'a StationSubproblem,
}

impl DpModel for SequencingModel<'_> {
    type State = SeqState;
    type Key = SeqState;

    fn target(&self) -> SeqState {
        let d = encode(self.sub.len());
        SeqState {
            unscheduled: TaskSet::full(self.sub.len()),
            prev: d,
            first: d,
        }
    }

    fn is_base(&self, s: &SeqState) -> bool {
        s.unscheduled.is_empty() && s.first as usize == self.sub.len()
    }

    fn successors(&self, s: &SeqState, out: &mut Vec<(TransitionRecord, SeqState)>) {
        let dummy = self.sub.len();
        let u = s.unscheduled;
        let ready = |i: usize| !self.sub.within_pred[i].intersects(u);
        if s.first as usize == dummy {
            if s.unscheduled.len() == self.sub.len() {
                for i in u.iter().filter(|&i| ready(i)) {
                    let e = encode(i);
                    let rec = TransitionRecord::new(TransitionKind::AssignFirst(i), 0);
                    out.push((
                        rec,
                        SeqState {
                            unscheduled: u.without(i),
                            prev: e,
                            first: e,
                        },
                    ));
                }
            }
            return;
        }
        let p = s.prev as usize;
        if u.is_empty() {
            let d = encode(dummy);
            let rec = TransitionRecord::new(
                TransitionKind::CloseStation,
                self.sub.bwd[p][s.first as usize],
            );
            out.push((
                rec,
                SeqState {
                    unscheduled: u,
                    prev: d,
                    first: d,
                },
            ));
            return;
        }
        for i in u.iter().filter(|&i| ready(i)) {
            let rec = TransitionRecord::new(TransitionKind::AssignNext(i), self.sub.fwd[p][i]);
            out.push((
                rec,
                SeqState {
                    unscheduled: u.without(i),
                    prev: encode(i),
                    ..*s
                },
            ));
        }
    }

    fn path_cost(&self, g: Time, rec: &TransitionRecord) -> Time {
        g + rec.weight
    }

    fn dual_bound(&self, s: &SeqState) -> Option<Time> {
        let fwd: Time = s.unscheduled.iter().map(|i| self.sub.min_fwd[i]).sum();
        if (s.first as usize) < self.sub.len() {
            return Some(fwd + self.sub.min_bwd[s.first as usize]);
        }
        // The first task pays no forward setup.
        let spared = s
            .unscheduled
            .iter()
            .map(|i| self.sub.min_fwd[i])
            .max()
            .unwrap_or(0);
        let close = s
            .unscheduled
            .iter()
            .map(|i| self.sub.min_bwd[i])
            .min()
            .unwrap_or(0);
        Some(fwd - spared + close)
    }

    fn priority(&self, g: Time, h: Time) -> Time {
        g + h
    }

    fn key(&self, s: &SeqState) -> SeqState {
        *s
    }

    fn dominates(&self, a: &SeqState, ga: Time, b: &SeqState, gb: Time) -> bool {
        a == b && ga <= gb
    }
}

fn search_sequence(sub: &StationSubproblem) -> Vec<usize> {
    let model = SequencingModel { sub };
    let mut hooks = PathRecorder::default();
    cabs(&model, &CabsConfig::default(), &mut hooks)
        .expect("sequencing search has no fallible hooks");
    let (_, path) = hooks.best.expect("every station admits an order");
    path.iter()
        .filter_map(|r| match r.kind {
            TransitionKind::AssignFirst(i) | TransitionKind::AssignNext(i) => Some(i),
            TransitionKind::CloseStation => None,
        })
        .collect()
}

/// Re-sequences stations in decreasing order of station time and stops at
/// the first one that neither improves nor falls below the next station.
/// Returns the updated balance when at least one station improved.
pub fn local_improvement(inst: &Instance, sol: &Solution) -> Option<Solution> {
    let (pred_star, _) = transitive_closure(&inst.precedence, inst.n());
    local_improvement_with(inst, &pred_star, sol, DEFAULT_EXACT_LIMIT)
}

pub fn local_improvement_with(
    inst: &Instance,
    pred_star: &[TaskSet],
    sol: &Solution,
    exact_limit: usize,
) -> Option<Solution> {
    let times: Vec<Time> = sol.stations.iter().map(|s| inst.station_time(s)).collect();
    let mut order: Vec<usize> = (0..sol.stations.len()).collect();
    order.sort_by_key(|&k| (std::cmp::Reverse(times[k]), k));
    let mut stations = sol.stations.clone();
    let mut improved = false;
    for (pos, &k) in order.iter().enumerate() {
        let sub = StationSubproblem::new(inst, pred_star, &stations[k]);
        let (seq, setup) = resequence_station(&sub, exact_limit);
        let processing: Time = seq.iter().map(|&i| inst.task_times[i]).sum();
        let time = processing + setup;
        if time < times[k] {
            stations[k] = seq;
            improved = true;
        }
        let next = order.get(pos + 1).map_or(0, |&j| times[j]);
        if time >= times[k] || time >= next {
            break;
        }
    }
    improved.then(|| {
        let mut out = Solution::from_stations(inst, ProblemType::Type2, stations);
        out.provenance = sol.provenance.clone();
        out
    })
}
