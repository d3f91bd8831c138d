//! Solver entry points for both problem types.

pub mod cabs;

use std::time::{Duration, Instant};

use crate::instance::{Instance, ProblemType, Time};
use crate::local_improve::{local_improvement_with, DEFAULT_EXACT_LIMIT};
use crate::metrics::IncumbentTrace;
use crate::model::{TransitionRecord, Type1Model, Type2Model};
use crate::preprocess::DerivedData;
use crate::solution::{reconstruct, Solution};
use crate::taskset::TaskSet;
use crate::{Error, Result};

pub use cabs::{cabs, CabsConfig, CabsOutcome, SearchHooks, SearchStats, Status};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub cabs: CabsConfig,
    /// Re-sequence every new type-2 incumbent.
    pub local_improve: bool,
    pub exact_resequence_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cabs: CabsConfig::default(),
            local_improve: false,
            exact_resequence_limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

impl SearchConfig {
    pub fn with_time_limit(mut self, limit: Option<Duration>) -> Self {
        self.cabs.time_limit = limit;
        self
    }

    pub fn with_local_improve(mut self, on: bool) -> Self {
        self.local_improve = on;
        self
    }
}

/// How often local improvement found something.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct ImprovementStats {
    /// Incumbents handed to local improvement.
    pub incumbents: u32,
    /// Incumbents whose objective it reduced.
    pub improved: u32,
}

impl ImprovementStats {
    pub fn proportion(&self) -> f64 {
        if self.incumbents == 0 {
            0.0
        } else {
            f64::from(self.improved) / f64::from(self.incumbents)
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub problem: ProblemType,
    pub best: Option<Solution>,
    pub lower_bound: Time,
    pub status: Status,
    pub trace: IncumbentTrace,
    pub stats: SearchStats,
    pub improvement: ImprovementStats,
    pub elapsed: Duration,
}

impl SolveResult {
    pub fn objective(&self) -> Option<Time> {
        self.best.as_ref().map(|s| s.objective)
    }
}

struct Recorder<'a> {
    inst: &'a Instance,
    problem: ProblemType,
    start: Instant,
    pred_star: &'a [TaskSet],
    local_improve: bool,
    exact_limit: usize,
    best: Option<Solution>,
    trace: IncumbentTrace,
    improvement: ImprovementStats,
}

impl<S> SearchHooks<S> for Recorder<'_> {
    fn on_incumbent(
        &mut self,
        cost: Time,
        path: &[TransitionRecord],
        _elapsed: Duration,
    ) -> Result<Option<Time>> {
        let kinds: Vec<_> = path.iter().map(|r| r.kind).collect();
        let mut sol = reconstruct(self.inst, self.problem, &kinds, cost)?;
        self.trace.push(micros(self.start.elapsed()), cost);
        let mut improved = None;
        if self.local_improve {
            self.improvement.incumbents += 1;
            if let Some(better) =
                local_improvement_with(self.inst, self.pred_star, &sol, self.exact_limit)
            {
                if better.objective < cost {
                    self.improvement.improved += 1;
                    self.trace
                        .push(micros(self.start.elapsed()), better.objective);
                    improved = Some(better.objective);
                    sol = better;
                }
            }
        }
        self.best = Some(sol);
        Ok(improved)
    }
}

fn micros(d: Duration) -> u64 {
    u64::try_from(d.as_micros()).unwrap_or(u64::MAX)
}

/// Minimizes the number of stations for the instance's cycle time.
pub fn solve_type1(inst: &Instance, config: &SearchConfig) -> Result<SolveResult> {
    solve(inst, ProblemType::Type1, config)
}

/// Minimizes the cycle time for the instance's station count.
pub fn solve_type2(inst: &Instance, config: &SearchConfig) -> Result<SolveResult> {
    solve(inst, ProblemType::Type2, config)
}

pub fn solve(inst: &Instance, problem: ProblemType, config: &SearchConfig) -> Result<SolveResult> {
    let start = Instant::now();
    let pre = match DerivedData::new(inst, problem) {
        Ok(pre) => pre,
        Err(Error::Infeasible(_)) => {
            let elapsed = start.elapsed();
            let trace = IncumbentTrace {
                horizon_micros: micros(elapsed),
                infeasible_at: Some(micros(elapsed)),
                ..Default::default()
            };
            return Ok(SolveResult {
                problem,
                best: None,
                lower_bound: 0,
                status: Status::Infeasible,
                trace,
                stats: SearchStats::default(),
                improvement: ImprovementStats::default(),
                elapsed,
            });
        }
        Err(e) => return Err(e),
    };
    let mut recorder = Recorder {
        inst,
        problem,
        start,
        pred_star: &pre.pred_star,
        local_improve: config.local_improve && problem == ProblemType::Type2,
        exact_limit: config.exact_resequence_limit,
        best: None,
        trace: IncumbentTrace::default(),
        improvement: ImprovementStats::default(),
    };
    let outcome = match problem {
        ProblemType::Type1 => cabs(&Type1Model::new(&pre), &config.cabs, &mut recorder)?,
        ProblemType::Type2 => cabs(&Type2Model::new(&pre), &config.cabs, &mut recorder)?,
    };
    let elapsed = start.elapsed();
    let mut trace = recorder.trace;
    trace.horizon_micros = config
        .cabs
        .time_limit
        .map_or(micros(elapsed), micros)
        .max(micros(elapsed));
    if outcome.status == Status::Infeasible {
        trace.infeasible_at = Some(micros(elapsed));
    }
    if let Some(best) = &recorder.best {
        if Some(best.objective) != outcome.best_cost {
            return Err(Error::Internal(
                "incumbent and search bound disagree".into(),
            ));
        }
    }
    Ok(SolveResult {
        problem,
        best: recorder.best,
        lower_bound: outcome.lower_bound,
        status: outcome.status,
        trace,
        stats: outcome.stats,
        improvement: recorder.improvement,
        elapsed,
    })
}
