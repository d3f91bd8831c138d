//! Exhaustive reference solvers for tiny instances.
//!
//! A line is an ordered partition of the tasks into stations. The best
//! order inside a station is found by enumerating every precedence-feasible
//! permutation; the partition is enumerated with memoization on the set of
//! tasks still to be placed. Nothing here shares code with the search.

use std::collections::HashMap;

use crate::instance::{Instance, ProblemType, Time};
use crate::solution::Solution;
use crate::{Error, Result};

/// Largest instance the oracle accepts.
pub const ORACLE_LIMIT: usize = 10;

const NONE: Time = Time::MAX;

/// A partial line from which completions are enumerated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleStart {
    /// Tasks still to place, as a bit mask.
    pub unscheduled: u32,
    /// Stations opened so far, including an open one.
    pub stations: usize,
    /// The open station, if any.
    pub open: Option<OpenStation>,
    /// Largest station time so far (type-2).
    pub cycle: Time,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenStation {
    pub first: usize,
    pub last: usize,
    /// Processing and forward setups accumulated on the open station.
    pub used: Time,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// `None` when no feasible line exists. From a start state this is the
    /// cost still to come: further stations (type-1) or the final cycle
    /// time (type-2).
    pub objective: Option<Time>,
    pub solution: Option<Solution>,
}

struct Oracle<'a> {
    inst: &'a Instance,
    n: usize,
    preds: Vec<u32>,
    /// Best station time for a set, over all feasible orders.
    station: HashMap<u32, (Time, Vec<usize>)>,
}

impl<'a> Oracle<'a> {
    fn new(inst: &'a Instance) -> Self {
        let n = inst.n();
        let mut preds = vec![0u32; n];
        for &(i, j) in &inst.precedence {
            preds[j] |= 1 << i;
        }
        Oracle {
            inst,
            n,
            preds,
            station: HashMap::new(),
        }
    }

    /// Enumerates orders of `set` that respect precedence, given that
    /// `done` is already placed, and calls `visit` with each complete order.
    fn permutations(
        &self,
        set: u32,
        done: u32,
        prefix: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if set == 0 {
            visit(prefix);
            return;
        }
        for i in 0..self.n {
            let bit = 1u32 << i;
            if set & bit != 0 && self.preds[i] & !(done | (prefix_mask(prefix))) == 0 {
                prefix.push(i);
                self.permutations(set & !bit, done, prefix, visit);
                prefix.pop();
            }
        }
    }

    fn best_station(&mut self, set: u32) -> (Time, Vec<usize>) {
        if let Some(v) = self.station.get(&set) {
            return v.clone();
        }
        let mut best = (NONE, Vec::new());
        let outside = !set;
        let inst = self.inst;
        self.permutations(set, outside, &mut Vec::new(), &mut |order| {
            let t = inst.station_time(order);
            if t < best.0 {
                best = (t, order.to_vec());
            }
        });
        self.station.insert(set, best.clone());
        best
    }

    /// Subsets of `u` whose predecessors all lie in `done` or the subset.
    fn closed_subsets(&self, u: u32, done: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut s = u;
        while s != 0 {
            let ok = (0..self.n).all(|i| s >> i & 1 == 0 || self.preds[i] & !(done | s) == 0);
            if ok {
                out.push(s);
            }
            s = (s - 1) & u;
        }
        out
    }

    fn all(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    /// Fewest stations for `u`, everything else placed. Returns the stations.
    fn type1(
        &mut self,
        u: u32,
        c: Time,
        memo: &mut HashMap<u32, Option<Vec<u32>>>,
    ) -> Option<Vec<u32>> {
        if u == 0 {
            return Some(Vec::new());
        }
        if let Some(v) = memo.get(&u) {
            return v.clone();
        }
        let done = self.all() & !u;
        let mut best: Option<Vec<u32>> = None;
        for s in self.closed_subsets(u, done) {
            if self.best_station(s).0 > c {
                continue;
            }
            if let Some(rest) = self.type1(u & !s, c, memo) {
                if best.as_ref().is_none_or(|b| rest.len() + 1 < b.len()) {
                    let mut line = vec![s];
                    line.extend(rest);
                    best = Some(line);
                }
            }
        }
        memo.insert(u, best.clone());
        best
    }

    /// Smallest cycle time for `u` on at most `left` stations.
    fn type2(
        &mut self,
        u: u32,
        left: usize,
        memo: &mut HashMap<(u32, usize), (Time, Vec<u32>)>,
    ) -> (Time, Vec<u32>) {
        if u == 0 {
            return (0, Vec::new());
        }
        if left == 0 {
            return (NONE, Vec::new());
        }
        if let Some(v) = memo.get(&(u, left)) {
            return v.clone();
        }
        let done = self.all() & !u;
        let mut best = (NONE, Vec::new());
        for s in self.closed_subsets(u, done) {
            let here = self.best_station(s).0;
            let (rest, line) = self.type2(u & !s, left - 1, memo);
            let value = here.max(rest);
            if value < best.0 {
                let mut full = vec![s];
                full.extend(line);
                best = (value, full);
            }
        }
        memo.insert((u, left), best.clone());
        best
    }

    /// Ways to finish an open station: tasks appended after `last`, and the
    /// resulting station time. Includes appending nothing.
    fn finish_open(&self, open: &OpenStation, u: u32) -> Vec<(u32, Time)> {
        let inst = self.inst;
        let done = self.all() & !u;
        let mut out = Vec::new();
        for s in std::iter::once(0).chain(self.closed_subsets(u, done)) {
            let mut best = NONE;
            self.permutations(s, done, &mut Vec::new(), &mut |order| {
                let mut t = open.used;
                let mut prev = open.last;
                for &i in order {
                    t += inst.fwd_setup[prev][i] + inst.task_times[i];
                    prev = i;
                }
                t += inst.bwd_setup[prev][open.first];
                best = best.min(t);
            });
            out.push((s, best));
        }
        out
    }
}

fn prefix_mask(prefix: &[usize]) -> u32 {
    prefix.iter().fold(0, |m, &i| m | 1 << i)
}

fn decode(
    oracle: &mut Oracle<'_>,
    inst: &Instance,
    problem: ProblemType,
    line: &[u32],
) -> Solution {
    let stations = line.iter().map(|&s| oracle.best_station(s).1).collect();
    Solution::from_stations(inst, problem, stations)
}

/// Reference solver for one instance. Memo tables persist between
/// queries, so many start states can be evaluated cheaply.
pub struct Enumerator<'a> {
    inst: &'a Instance,
    oracle: Oracle<'a>,
    memo1: HashMap<u32, Option<Vec<u32>>>,
    memo2: HashMap<(u32, usize), (Time, Vec<u32>)>,
}

impl<'a> Enumerator<'a> {
    pub fn new(inst: &'a Instance) -> Result<Self> {
        let n = inst.n();
        if n > ORACLE_LIMIT {
            return Err(Error::OracleGuard {
                n,
                limit: ORACLE_LIMIT,
            });
        }
        Ok(Enumerator {
            inst,
            oracle: Oracle::new(inst),
            memo1: HashMap::new(),
            memo2: HashMap::new(),
        })
    }

    /// Optimal objective, or the cost still to come from `start`.
    pub fn solve(
        &mut self,
        problem: ProblemType,
        start: Option<&OracleStart>,
    ) -> Result<OracleResult> {
        let inst = self.inst;
        match problem {
            ProblemType::Type1 => {
                let c = inst.cycle_time()?;
                match start {
                    None => {
                        let line = self.oracle.type1(self.oracle.all(), c, &mut self.memo1);
                        Ok(match line {
                            Some(line) => OracleResult {
                                objective: Some(line.len() as Time),
                                solution: Some(decode(&mut self.oracle, inst, problem, &line)),
                            },
                            None => OracleResult {
                                objective: None,
                                solution: None,
                            },
                        })
                    }
                    Some(st) => {
                        let u = st.unscheduled;
                        let options = match &st.open {
                            None => vec![(0, 0)],
                            Some(open) => self.oracle.finish_open(open, u),
                        };
                        let mut best: Option<Time> = None;
                        for (s, time) in options {
                            if time > c {
                                continue;
                            }
                            if let Some(rest) = self.oracle.type1(u & !s, c, &mut self.memo1) {
                                let v = rest.len() as Time;
                                best = Some(best.map_or(v, |b| b.min(v)));
                            }
                        }
                        Ok(OracleResult {
                            objective: best,
                            solution: None,
                        })
                    }
                }
            }
            ProblemType::Type2 => {
                let m = inst.station_count()?;
                match start {
                    None => {
                        let (value, line) =
                            self.oracle.type2(self.oracle.all(), m, &mut self.memo2);
                        Ok(if value == NONE {
                            OracleResult {
                                objective: None,
                                solution: None,
                            }
                        } else {
                            OracleResult {
                                objective: Some(value),
                                solution: Some(decode(&mut self.oracle, inst, problem, &line)),
                            }
                        })
                    }
                    Some(st) => {
                        let u = st.unscheduled;
                        let left = m.saturating_sub(st.stations);
                        let options = match &st.open {
                            None => vec![(0, 0)],
                            Some(open) => self.oracle.finish_open(open, u),
                        };
                        let mut best = NONE;
                        for (s, time) in options {
                            let (rest, _) = self.oracle.type2(u & !s, left, &mut self.memo2);
                            if rest == NONE {
                                continue;
                            }
                            best = best.min(st.cycle.max(time).max(rest));
                        }
                        Ok(OracleResult {
                            objective: (best != NONE).then_some(best),
                            solution: None,
                        })
                    }
                }
            }
        }
    }
}

/// Optimal objective by complete enumeration, optionally from a partial line.
pub fn brute_force(
    inst: &Instance,
    problem: ProblemType,
    start: Option<&OracleStart>,
) -> Result<OracleResult> {
    Enumerator::new(inst)?.solve(problem, start)
}

/// Independent check for instances without setups: assigns every task a
/// station label directly and enumerates all label vectors.
pub fn salbp_brute_force(inst: &Instance, problem: ProblemType) -> Result<Option<Time>> {
    let n = inst.n();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleGuard {
            n,
            limit: ORACLE_LIMIT,
        });
    }
    let labels = match problem {
        ProblemType::Type1 => n,
        ProblemType::Type2 => inst.station_count()?,
    };
    let cap = match problem {
        ProblemType::Type1 => inst.cycle_time()?,
        ProblemType::Type2 => Time::MAX,
    };
    let mut assign = vec![usize::MAX; n];
    let mut loads = vec![0 as Time; labels];
    let mut best: Option<Time> = None;
    label_tasks(inst, problem, 0, cap, &mut assign, &mut loads, &mut best);
    Ok(best)
}

fn label_tasks(
    inst: &Instance,
    problem: ProblemType,
    i: usize,
    cap: Time,
    assign: &mut [usize],
    loads: &mut [Time],
    best: &mut Option<Time>,
) {
    if i == inst.n() {
        let ok = inst.precedence.iter().all(|&(a, b)| assign[a] <= assign[b]);
        if ok {
            let value = match problem {
                ProblemType::Type1 => loads.iter().filter(|&&l| l > 0).count() as Time,
                ProblemType::Type2 => loads.iter().copied().max().unwrap_or(0),
            };
            *best = Some(best.map_or(value, |b| b.min(value)));
        }
        return;
    }
    for k in 0..loads.len() {
        if loads[k] + inst.task_times[i] > cap {
            continue;
        }
        assign[i] = k;
        loads[k] += inst.task_times[i];
        label_tasks(inst, problem, i + 1, cap, assign, loads, best);
        loads[k] -= inst.task_times[i];
    }
    assign[i] = usize::MAX;
}
