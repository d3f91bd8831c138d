//! Derived data shared by the models: precedence closure, station windows,
//! allowed neighbour sets, setup minima and objective bounds.

use crate::instance::{topological_order, validate_for, Instance, ProblemType, Time};
use crate::taskset::TaskSet;
use crate::{Error, Result};

/// Ceiling division for a positive divisor.
#[inline]
pub fn div_ceil(a: Time, b: Time) -> Time {
    debug_assert!(b > 0);
    a.div_euclid(b) + Time::from(a.rem_euclid(b) != 0)
}

/// Station windows and the sets derived from them. Stations are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Windows {
    pub earliest: Vec<usize>,
    pub latest: Vec<usize>,
    /// `feasible_tasks[k - 1]` holds the tasks whose window contains `k`.
    pub feasible_tasks: Vec<TaskSet>,
    pub incompatible: Vec<TaskSet>,
}

#[derive(Debug, Clone)]
pub struct DerivedData {
    pub n: usize,
    pub problem: ProblemType,
    pub task_times: Vec<Time>,
    pub total_time: Time,
    /// Fixed cycle time (type-1) or `None`.
    pub cycle_time: Option<Time>,
    /// Fixed station count (type-2) or `None`.
    pub station_count: Option<usize>,
    pub pred_direct: Vec<TaskSet>,
    pub succ_direct: Vec<TaskSet>,
    pub pred_star: Vec<TaskSet>,
    pub succ_star: Vec<TaskSet>,
    pub windows: Windows,
    pub fwd_followers: Vec<TaskSet>,
    pub fwd_preds: Vec<TaskSet>,
    pub bwd_followers: Vec<TaskSet>,
    pub bwd_preds: Vec<TaskSet>,
    pub min_fwd_setup: Vec<Time>,
    pub min_bwd_setup: Vec<Time>,
    pub m_lower: usize,
    pub m_upper: usize,
    pub c_lower: Time,
    pub c_upper: Time,
    /// Forward setups with a zero row and column appended for the dummy task.
    tau: Vec<Time>,
    /// Backward setups, extended the same way.
    mu: Vec<Time>,
}

impl DerivedData {
    /// Index of the dummy task that marks "no open station".
    #[inline]
    pub fn dummy(&self) -> usize {
        self.n
    }

    /// Forward setup; either index may be the dummy.
    #[inline]
    pub fn tau(&self, i: usize, j: usize) -> Time {
        self.tau[i * (self.n + 1) + j]
    }

    /// Backward setup; either index may be the dummy.
    #[inline]
    pub fn mu(&self, i: usize, j: usize) -> Time {
        self.mu[i * (self.n + 1) + j]
    }

    /// Processing time; zero for the dummy.
    #[inline]
    pub fn t(&self, i: usize) -> Time {
        if i == self.n {
            0
        } else {
            self.task_times[i]
        }
    }

    /// Lower bound on the forward setup into `i`; zero for the dummy.
    #[inline]
    pub fn tau_min(&self, i: usize) -> Time {
        if i == self.n {
            0
        } else {
            self.min_fwd_setup[i]
        }
    }

    /// Lower bound on the backward setup into `i`; zero for the dummy.
    #[inline]
    pub fn mu_min(&self, i: usize) -> Time {
        if i == self.n {
            0
        } else {
            self.min_bwd_setup[i]
        }
    }

    pub fn all_tasks(&self) -> TaskSet {
        TaskSet::full(self.n)
    }

    /// Stations that every solution must open: `1..=m_lower`.
    pub fn definite_stations(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.m_lower
    }

    /// Stations that a solution may open: `m_lower+1..=m_upper`.
    pub fn possible_stations(&self) -> std::ops::RangeInclusive<usize> {
        self.m_lower + 1..=self.m_upper
    }

    pub fn all_stations(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.m_upper
    }

    /// Computes everything for `problem`. Fails on invalid or provably
    /// infeasible instances.
    pub fn new(inst: &Instance, problem: ProblemType) -> Result<Self> {
        let diag = validate_for(inst, problem);
        if !diag.is_ok() {
            let joined = diag.errors.join("; ");
            return Err(if joined.contains("infeasible") {
                Error::Infeasible(joined)
            } else {
                Error::Invalid(joined)
            });
        }
        let n = inst.n();
        let (pred_star, succ_star) = transitive_closure(&inst.precedence, n);
        let mut pred_direct = vec![TaskSet::EMPTY; n];
        let mut succ_direct = vec![TaskSet::EMPTY; n];
        for &(i, j) in &inst.precedence {
            succ_direct[i].insert(j);
            pred_direct[j].insert(i);
        }
        let (m_lower, m_upper, c_lower, c_upper, cycle_time, station_count) = match problem {
            ProblemType::Type1 => {
                let c = inst.cycle_time()?;
                let (lo, hi) = compute_bounds_type1(inst)?;
                (lo, hi, c, c, Some(c), None)
            }
            ProblemType::Type2 => {
                let m = inst.station_count()?;
                let (lo, hi) = compute_bounds_type2(inst)?;
                (m, m, lo, hi, None, Some(m))
            }
        };
        let windows = compute_windows(inst, &pred_star, &succ_star, c_upper, m_upper)?;

        let all = TaskSet::full(n);
        let mut fwd_followers = vec![TaskSet::EMPTY; n];
        let mut bwd_followers = vec![TaskSet::EMPTY; n];
        for i in 0..n {
            let indirect = succ_star[i].difference(succ_direct[i]);
            fwd_followers[i] = all
                .difference(indirect)
                .difference(pred_star[i])
                .difference(windows.incompatible[i])
                .without(i);
            bwd_followers[i] = all
                .difference(succ_star[i])
                .difference(windows.incompatible[i]);
        }
        let invert = |sets: &[TaskSet]| {
            let mut inv = vec![TaskSet::EMPTY; n];
            for (i, s) in sets.iter().enumerate() {
                for j in s.iter() {
                    inv[j].insert(i);
                }
            }
            inv
        };
        let fwd_preds = invert(&fwd_followers);
        let bwd_preds = invert(&bwd_followers);
        let (min_fwd_setup, min_bwd_setup) = compute_setup_minima(inst, &fwd_preds, &bwd_preds);

        let stride = n + 1;
        let mut tau = vec![0; stride * stride];
        let mut mu = vec![0; stride * stride];
        for i in 0..n {
            for j in 0..n {
                tau[i * stride + j] = inst.fwd_setup[i][j];
                mu[i * stride + j] = inst.bwd_setup[i][j];
            }
        }

        Ok(DerivedData {
            n,
            problem,
            task_times: inst.task_times.clone(),
            total_time: inst.total_time(),
            cycle_time,
            station_count,
            pred_direct,
            succ_direct,
            pred_star,
            succ_star,
            windows,
            fwd_followers,
            fwd_preds,
            bwd_followers,
            bwd_preds,
            min_fwd_setup,
            min_bwd_setup,
            m_lower,
            m_upper,
            c_lower,
            c_upper,
            tau,
            mu,
        })
    }
}

/// All predecessors and all followers of every task. The input must be acyclic.
pub fn transitive_closure(precedence: &[(usize, usize)], n: usize) -> (Vec<TaskSet>, Vec<TaskSet>) {
    let order = topological_order(n, precedence).expect("precedence relation must be acyclic");
    let mut direct_preds = vec![Vec::new(); n];
    for &(i, j) in precedence {
        direct_preds[j].push(i);
    }
    let mut pred_star = vec![TaskSet::EMPTY; n];
    for &j in &order {
        let mut set = TaskSet::EMPTY;
        for &i in &direct_preds[j] {
            set = set.union(pred_star[i]).with(i);
        }
        pred_star[j] = set;
    }
    let mut succ_star = vec![TaskSet::EMPTY; n];
    for (j, preds) in pred_star.iter().enumerate() {
        for i in preds.iter() {
            succ_star[i].insert(j);
        }
    }
    (pred_star, succ_star)
}

/// Earliest and latest stations of every task for solutions with cycle time
/// at most `c_upper` on at most `m_upper` stations.
pub fn compute_windows(
    inst: &Instance,
    pred_star: &[TaskSet],
    succ_star: &[TaskSet],
    c_upper: Time,
    m_upper: usize,
) -> Result<Windows> {
    let n = inst.n();
    let t = &inst.task_times;
    let sum = |s: TaskSet| s.iter().map(|j| t[j]).sum::<Time>();
    let mut earliest = Vec::with_capacity(n);
    let mut latest = Vec::with_capacity(n);
    for i in 0..n {
        let e = div_ceil(t[i] + sum(pred_star[i]), c_upper);
        let l = m_upper as Time + 1 - div_ceil(t[i] + sum(succ_star[i]), c_upper);
        if e > l {
            return Err(Error::Infeasible(format!(
                "task {} has empty station window [{e}, {l}]",
                i + 1
            )));
        }
        earliest.push(e as usize);
        latest.push(l as usize);
    }
    let mut feasible_tasks = vec![TaskSet::EMPTY; m_upper];
    for i in 0..n {
        for k in earliest[i]..=latest[i] {
            feasible_tasks[k - 1].insert(i);
        }
    }
    let incompatible = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| latest[j] < earliest[i] || latest[i] < earliest[j])
                .collect()
        })
        .collect();
    Ok(Windows {
        earliest,
        latest,
        feasible_tasks,
        incompatible,
    })
}

/// Smallest forward and backward setup into each task over its allowed
/// predecessors; zero when there is none.
pub fn compute_setup_minima(
    inst: &Instance,
    fwd_preds: &[TaskSet],
    bwd_preds: &[TaskSet],
) -> (Vec<Time>, Vec<Time>) {
    let n = inst.n();
    let fwd = (0..n)
        .map(|i| {
            fwd_preds[i]
                .iter()
                .map(|j| inst.fwd_setup[j][i])
                .min()
                .unwrap_or(0)
        })
        .collect();
    let bwd = (0..n)
        .map(|i| {
            bwd_preds[i]
                .iter()
                .map(|j| inst.bwd_setup[j][i])
                .min()
                .unwrap_or(0)
        })
        .collect();
    (fwd, bwd)
}

/// Greedy first-fit line: repeatedly appends the lowest-index available task
/// that still fits (including the setup back to the first task), opening a
/// new station when none does. Returns the stations or `None` if some task
/// cannot fit even alone.
pub fn greedy_stations(inst: &Instance, c: Time) -> Option<Vec<Vec<usize>>> {
    let n = inst.n();
    let (pred_star, _) = transitive_closure(&inst.precedence, n);
    let mut remaining = TaskSet::full(n);
    let mut stations: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut load: Time = 0;
    while !remaining.is_empty() {
        let ready = remaining
            .iter()
            .filter(|&i| !pred_star[i].intersects(remaining));
        let pick = ready
            .into_iter()
            .find(|&i| match (current.first(), current.last()) {
                (Some(&f), Some(&p)) => {
                    load + inst.fwd_setup[p][i] + inst.task_times[i] + inst.bwd_setup[i][f] <= c
                }
                _ => inst.task_times[i] + inst.bwd_setup[i][i] <= c,
            });
        match pick {
            Some(i) => {
                load += inst.task_times[i] + current.last().map_or(0, |&p| inst.fwd_setup[p][i]);
                current.push(i);
                remaining.remove(i);
            }
            None if current.is_empty() => return None,
            None => {
                stations.push(std::mem::take(&mut current));
                load = 0;
            }
        }
    }
    if !current.is_empty() {
        stations.push(current);
    }
    Some(stations)
}

/// `(m_lower, m_upper)` for a type-1 instance.
pub fn compute_bounds_type1(inst: &Instance) -> Result<(usize, usize)> {
    let c = inst.cycle_time()?;
    let lower = div_ceil(inst.total_time(), c).max(1) as usize;
    let stations = greedy_stations(inst, c).ok_or_else(|| {
        Error::Infeasible(format!("some task does not fit cycle time {c} even alone"))
    })?;
    Ok((lower, stations.len().max(lower)))
}

/// `(c_lower, c_upper)` for a type-2 instance.
pub fn compute_bounds_type2(inst: &Instance) -> Result<(Time, Time)> {
    let m = inst.station_count()? as Time;
    let max_t = inst.task_times.iter().copied().max().unwrap_or(0);
    let lower = max_t.max(div_ceil(inst.total_time(), m));
    let n = inst.n();
    let max_row = |mat: &Vec<Vec<Time>>, i: usize| (0..n).map(|j| mat[i][j]).max().unwrap_or(0);
    let max_mu = (0..n)
        .map(|i| max_row(&inst.bwd_setup, i))
        .max()
        .unwrap_or(0);
    let fallback: Time = (0..n)
        .map(|i| inst.task_times[i] + max_row(&inst.fwd_setup, i))
        .sum::<Time>()
        + max_mu;

    let cycle_of = |stations: &[Vec<usize>]| {
        stations
            .iter()
            .map(|s| inst.station_time(s))
            .max()
            .unwrap_or(0)
    };
    let fits = |c: Time| greedy_stations(inst, c).filter(|s| s.len() as Time <= m);
    // Binary search on the greedy's capacity; `hi` always holds a verified capacity.
    let (mut lo, mut hi) = (lower, fallback.max(lower));
    let mut best = fits(hi).map(|s| cycle_of(&s)).unwrap_or(fallback);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match fits(mid) {
            Some(s) => {
                best = best.min(cycle_of(&s));
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let upper = best.min(fallback).max(lower);
    Ok((lower, upper))
}
