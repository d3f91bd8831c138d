//! Line balances, their decoding from transition paths, and validation.

use serde::Serialize;

use crate::instance::{Diagnostics, Instance, ProblemType, Time};
use crate::model::TransitionKind;
use crate::{Error, Result};

/// A line balance: ordered stations, each an ordered task sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub stations: Vec<Vec<usize>>,
    pub station_times: Vec<Time>,
    /// Station count (type-1) or cycle time (type-2).
    pub objective: Time,
    /// Transition path that produced this balance; empty when built directly.
    #[serde(skip)]
    pub provenance: Vec<TransitionKind>,
}

pub fn objective_of(problem: ProblemType, station_times: &[Time]) -> Time {
    match problem {
        ProblemType::Type1 => station_times.len() as Time,
        ProblemType::Type2 => station_times.iter().copied().max().unwrap_or(0),
    }
}

impl Solution {
    pub fn from_stations(inst: &Instance, problem: ProblemType, stations: Vec<Vec<usize>>) -> Self {
        let station_times: Vec<Time> = stations.iter().map(|s| inst.station_time(s)).collect();
        Solution {
            objective: objective_of(problem, &station_times),
            stations,
            station_times,
            provenance: Vec::new(),
        }
    }

    pub fn cycle_time(&self) -> Time {
        self.station_times.iter().copied().max().unwrap_or(0)
    }

    /// Stations with 1-based task ids, as written to reports.
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.stations
            .iter()
            .map(|s| s.iter().map(|&i| i + 1).collect())
            .collect()
    }
}

/// Decodes a transition path from the target state and checks that the
/// recomputed objective equals the search cost `expected`.
pub fn reconstruct(
    inst: &Instance,
    problem: ProblemType,
    path: &[TransitionKind],
    expected: Time,
) -> Result<Solution> {
    let mut stations: Vec<Vec<usize>> = Vec::new();
    let mut open = false;
    for kind in path {
        match *kind {
            TransitionKind::AssignFirst(i) => {
                if open {
                    return Err(Error::Internal(
                        "station opened while another is open".into(),
                    ));
                }
                stations.push(vec![i]);
                open = true;
            }
            TransitionKind::AssignNext(i) => match stations.last_mut() {
                Some(s) if open => s.push(i),
                _ => {
                    return Err(Error::Internal(
                        "task appended without an open station".into(),
                    ))
                }
            },
            TransitionKind::CloseStation => {
                if !open {
                    return Err(Error::Internal("close without an open station".into()));
                }
                open = false;
            }
        }
    }
    if open {
        return Err(Error::Internal("path ends with an open station".into()));
    }
    let mut sol = Solution::from_stations(inst, problem, stations);
    sol.provenance = path.to_vec();
    if sol.objective != expected {
        return Err(Error::Internal(format!(
            "decoded objective {} differs from search cost {expected}",
            sol.objective
        )));
    }
    Ok(sol)
}

/// Checks partition, precedence, station times and the type-specific limit.
pub fn validate_solution(inst: &Instance, sol: &Solution, problem: ProblemType) -> Diagnostics {
    let mut d = Diagnostics::default();
    let n = inst.n();
    let mut position = vec![None; n];
    for (k, station) in sol.stations.iter().enumerate() {
        if station.is_empty() {
            d.errors.push(format!("station {} is empty", k + 1));
        }
        for (pos, &i) in station.iter().enumerate() {
            if i >= n {
                d.errors
                    .push(format!("station {} holds unknown task {}", k + 1, i + 1));
            } else if position[i].is_some() {
                d.errors
                    .push(format!("task {} assigned more than once", i + 1));
            } else {
                position[i] = Some((k, pos));
            }
        }
    }
    for (i, p) in position.iter().enumerate() {
        if p.is_none() {
            d.errors.push(format!("task {} is not assigned", i + 1));
        }
    }
    for &(i, j) in &inst.precedence {
        if let (Some(a), Some(b)) = (position[i], position[j]) {
            if a >= b {
                d.errors
                    .push(format!("precedence ({}, {}) violated", i + 1, j + 1));
            }
        }
    }
    if !d.is_ok() {
        return d;
    }
    if sol.station_times.len() != sol.stations.len() {
        d.errors
            .push("station time list does not match station list".into());
        return d;
    }
    for (k, station) in sol.stations.iter().enumerate() {
        let actual = inst.station_time(station);
        if actual != sol.station_times[k] {
            d.errors.push(format!(
                "station {} time is {actual}, recorded {}",
                k + 1,
                sol.station_times[k]
            ));
        }
    }
    match problem {
        ProblemType::Type1 => match inst.cycle_time {
            Some(c) => {
                for (k, station) in sol.stations.iter().enumerate() {
                    let time = inst.station_time(station);
                    if time > c {
                        d.errors.push(format!(
                            "station {} time {time} exceeds cycle time {c}",
                            k + 1
                        ));
                    }
                }
            }
            None => d.errors.push("type-1 check needs a cycle time".into()),
        },
        ProblemType::Type2 => match inst.station_count {
            Some(m) if sol.stations.len() > m => d.errors.push(format!(
                "{} stations exceed the limit {m}",
                sol.stations.len()
            )),
            Some(_) => {}
            None => d.errors.push("type-2 check needs a station count".into()),
        },
    }
    let times: Vec<Time> = sol.stations.iter().map(|s| inst.station_time(s)).collect();
    let objective = objective_of(problem, &times);
    if objective != sol.objective {
        d.errors.push(format!(
            "objective is {objective}, recorded {}",
            sol.objective
        ));
    }
    d
}
