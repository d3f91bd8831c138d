//! Complete anytime beam search.
//!
//! Beam searches with doubling width are run from the target state. Each
//! iteration keeps the best `width` nodes of every layer; an iteration that
//! never drops a node for lack of width has explored the whole pruned space
//! and therefore proves the incumbent optimal.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::instance::Time;
use crate::model::{DpModel, TransitionRecord};
use crate::Result;

/// Expansions between clock reads.
const CLOCK_INTERVAL: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CabsConfig {
    pub time_limit: Option<Duration>,
    pub initial_width: usize,
    /// CABS stops instead of doubling past this width.
    pub max_width: usize,
    /// Upper limit on live candidates plus registry entries in one iteration.
    pub node_cap: usize,
    pub use_dual_bounds: bool,
    pub use_dominance: bool,
}

impl Default for CabsConfig {
    fn default() -> Self {
        CabsConfig {
            time_limit: None,
            initial_width: 1,
            max_width: 1 << 30,
            node_cap: 4_000_000,
            use_dual_bounds: true,
            use_dominance: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Status {
    Optimal,
    Feasible,
    Infeasible,
    TimeoutNoSolution,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::TimeoutNoSolution => "timeout-no-solution",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct SearchStats {
    pub expanded: u64,
    pub generated: u64,
    pub pruned_by_bound: u64,
    pub pruned_by_dominance: u64,
    pub pruned_by_duplicate: u64,
    pub iterations: u32,
    pub final_width: usize,
}

/// Callbacks fired on the search thread.
pub trait SearchHooks<S> {
    /// A base state better than the incumbent was reached through `path`.
    /// Returning a smaller objective tightens the incumbent further (the
    /// caller must hold a solution with that objective).
    fn on_incumbent(
        &mut self,
        cost: Time,
        path: &[TransitionRecord],
        elapsed: Duration,
    ) -> Result<Option<Time>>;

    fn on_expand(&mut self, _state: &S, _g: Time, _h: Time) {}
}

/// Hooks that only collect the best path.
#[derive(Debug, Default)]
pub struct PathRecorder {
    pub best: Option<(Time, Vec<TransitionRecord>)>,
}

impl<S> SearchHooks<S> for PathRecorder {
    fn on_incumbent(
        &mut self,
        cost: Time,
        path: &[TransitionRecord],
        _elapsed: Duration,
    ) -> Result<Option<Time>> {
        self.best = Some((cost, path.to_vec()));
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CabsOutcome {
    pub best_cost: Option<Time>,
    pub lower_bound: Time,
    pub status: Status,
    pub stats: SearchStats,
}

struct Candidate<S> {
    state: S,
    g: Time,
    h: Time,
    f: Time,
    parent: u32,
    via: Option<TransitionRecord>,
    seq: u64,
    alive: bool,
}

struct Entry<S> {
    state: S,
    g: Time,
    layer: u32,
    slot: usize,
}

enum Stop {
    Time,
    Optimal,
}

struct IterationEnd {
    exhaustive: bool,
    /// Smallest priority among nodes dropped for lack of width or memory.
    dropped_min: Option<Time>,
    cap_hit: bool,
}

struct Search<'m, 'h, M: DpModel, H> {
    model: &'m M,
    config: &'m CabsConfig,
    hooks: &'h mut H,
    start: Instant,
    upper: Option<Time>,
    lower: Time,
    stats: SearchStats,
    seq: u64,
    succ: Vec<(TransitionRecord, M::State)>,
}

/// Runs CABS until optimality, infeasibility, or a limit.
pub fn cabs<M: DpModel, H: SearchHooks<M::State>>(
    model: &M,
    config: &CabsConfig,
    hooks: &mut H,
) -> Result<CabsOutcome> {
    let mut search = Search {
        model,
        config,
        hooks,
        start: Instant::now(),
        upper: None,
        lower: 0,
        stats: SearchStats::default(),
        seq: 0,
        succ: Vec::new(),
    };
    search.run()
}

impl<M: DpModel, H: SearchHooks<M::State>> Search<'_, '_, M, H> {
    fn run(&mut self) -> Result<CabsOutcome> {
        let root = self.model.target();
        let root_h = if self.config.use_dual_bounds {
            match self.model.dual_bound(&root) {
                Some(h) => h,
                None => return Ok(self.finish(Status::Infeasible)),
            }
        } else {
            0
        };
        self.lower = self.model.priority(0, root_h);
        let mut width = self.config.initial_width.max(1);
        loop {
            if self.timed_out() {
                return Ok(self.finish_limited());
            }
            self.stats.iterations += 1;
            self.stats.final_width = width;
            let end = match self.beam(&root, root_h, width)? {
                Ok(end) => end,
                Err(Stop::Optimal) => return Ok(self.finish(Status::Optimal)),
                Err(Stop::Time) => return Ok(self.finish_limited()),
            };
            if end.exhaustive {
                return Ok(match self.upper {
                    Some(_) => self.finish(Status::Optimal),
                    None => self.finish(Status::Infeasible),
                });
            }
            let bound = match (end.dropped_min, self.upper) {
                (Some(d), Some(u)) => d.min(u),
                (Some(d), None) => d,
                (None, Some(u)) => u,
                (None, None) => self.lower,
            };
            self.lower = self.lower.max(bound);
            if self.proven() {
                return Ok(self.finish(Status::Optimal));
            }
            if end.cap_hit || width >= self.config.max_width {
                return Ok(self.finish_limited());
            }
            width = width.saturating_mul(2).min(self.config.max_width);
        }
    }

    fn proven(&self) -> bool {
        self.upper.is_some_and(|u| u <= self.lower)
    }

    fn timed_out(&self) -> bool {
        self.config
            .time_limit
            .is_some_and(|limit| self.start.elapsed() >= limit)
    }

    fn finish(&self, status: Status) -> CabsOutcome {
        let lower_bound = match (status, self.upper) {
            (Status::Optimal, Some(u)) => u,
            _ => self.lower,
        };
        CabsOutcome {
            best_cost: self.upper,
            lower_bound,
            status,
            stats: self.stats,
        }
    }

    fn finish_limited(&self) -> CabsOutcome {
        if self.proven() {
            return self.finish(Status::Optimal);
        }
        self.finish(if self.upper.is_some() {
            Status::Feasible
        } else {
            Status::TimeoutNoSolution
        })
    }

    fn prunable(&self, f: Time) -> bool {
        self.upper.is_some_and(|u| f >= u)
    }

    fn is_better(&self, a: &M::State, ga: Time, b: &M::State, gb: Time) -> bool {
        if self.config.use_dominance {
            self.model.dominates(a, ga, b, gb)
        } else {
            a == b && ga <= gb
        }
    }

    fn beam(
        &mut self,
        root: &M::State,
        root_h: Time,
        width: usize,
    ) -> Result<std::result::Result<IterationEnd, Stop>> {
        // Expanded nodes: (parent, transition that reached them).
        let mut arena: Vec<(u32, Option<TransitionRecord>)> = Vec::new();
        let mut registry: HashMap<M::Key, Vec<Entry<M::State>>> = HashMap::new();
        let mut registry_len = 0usize;
        let mut layer = vec![Candidate {
            state: root.clone(),
            g: 0,
            h: root_h,
            f: self.model.priority(0, root_h),
            parent: u32::MAX,
            via: None,
            seq: 0,
            alive: true,
        }];
        let mut end = IterationEnd {
            exhaustive: true,
            dropped_min: None,
            cap_hit: false,
        };
        let mut depth: u32 = 0;
        while !layer.is_empty() {
            let building = depth + 1;
            let mut next: Vec<Candidate<M::State>> = Vec::new();
            let mut current = layer.into_iter();
            while let Some(node) = current.next() {
                if self.prunable(node.f) {
                    self.stats.pruned_by_bound += 1;
                    continue;
                }
                if self.stats.expanded.is_multiple_of(CLOCK_INTERVAL) && self.timed_out() {
                    return Ok(Err(Stop::Time));
                }
                self.stats.expanded += 1;
                self.hooks.on_expand(&node.state, node.g, node.h);
                arena.push((node.parent, node.via));
                let index = (arena.len() - 1) as u32;

                let mut succ = std::mem::take(&mut self.succ);
                succ.clear();
                self.model.successors(&node.state, &mut succ);
                for (rec, state) in succ.drain(..) {
                    self.stats.generated += 1;
                    let g = self.model.path_cost(node.g, &rec);
                    if self.model.is_base(&state) {
                        if self.prunable(g) {
                            self.stats.pruned_by_bound += 1;
                            continue;
                        }
                        let path = path_to(&arena, index, rec);
                        self.new_incumbent(g, &path)?;
                        if self.proven() {
                            return Ok(Err(Stop::Optimal));
                        }
                        continue;
                    }
                    let h = if self.config.use_dual_bounds {
                        match self.model.dual_bound(&state) {
                            Some(h) => h,
                            None => {
                                self.stats.pruned_by_bound += 1;
                                continue;
                            }
                        }
                    } else {
                        0
                    };
                    let f = self.model.priority(g, h);
                    if self.prunable(f) {
                        self.stats.pruned_by_bound += 1;
                        continue;
                    }
                    let entries = registry.entry(self.model.key(&state)).or_default();
                    if let Some(e) = entries
                        .iter()
                        .find(|e| self.is_better(&e.state, e.g, &state, g))
                    {
                        if e.state == state {
                            self.stats.pruned_by_duplicate += 1;
                        } else {
                            self.stats.pruned_by_dominance += 1;
                        }
                        continue;
                    }
                    let before = entries.len();
                    let mut k = 0;
                    while k < entries.len() {
                        let e = &entries[k];
                        if self.is_better(&state, g, &e.state, e.g) {
                            if e.layer == building && next[e.slot].alive {
                                next[e.slot].alive = false;
                                if e.state == state {
                                    self.stats.pruned_by_duplicate += 1;
                                } else {
                                    self.stats.pruned_by_dominance += 1;
                                }
                            }
                            entries.swap_remove(k);
                        } else {
                            k += 1;
                        }
                    }
                    registry_len = registry_len + entries.len() + 1 - before;
                    entries.push(Entry {
                        state: state.clone(),
                        g,
                        layer: building,
                        slot: next.len(),
                    });
                    self.seq += 1;
                    next.push(Candidate {
                        state,
                        g,
                        h,
                        f,
                        parent: index,
                        via: Some(rec),
                        seq: self.seq,
                        alive: true,
                    });
                }
                self.succ = succ;

                if registry_len + next.len() > self.config.node_cap {
                    end.cap_hit = true;
                    end.exhaustive = false;
                    for rest in current.by_ref() {
                        if !self.prunable(rest.f) {
                            end.dropped_min =
                                Some(end.dropped_min.map_or(rest.f, |d| d.min(rest.f)));
                        }
                    }
                }
            }

            let upper = self.upper;
            next.retain(|c| c.alive && upper.is_none_or(|u| c.f < u));
            next.sort_unstable_by_key(|c| (c.f, c.h, c.seq));
            if next.len() > width {
                end.exhaustive = false;
                let dropped = next[width..].iter().map(|c| c.f).min();
                end.dropped_min = match (end.dropped_min, dropped) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
                next.truncate(width);
            }
            layer = next;
            depth = building;
        }
        Ok(Ok(end))
    }

    fn new_incumbent(&mut self, cost: Time, path: &[TransitionRecord]) -> Result<()> {
        self.upper = Some(cost);
        if let Some(better) = self.hooks.on_incumbent(cost, path, self.start.elapsed())? {
            if better < cost {
                self.upper = Some(better);
            }
        }
        Ok(())
    }
}

fn path_to(
    arena: &[(u32, Option<TransitionRecord>)],
    mut index: u32,
    last: TransitionRecord,
) -> Vec<TransitionRecord> {
    let mut path = vec![last];
    while index != u32::MAX {
        let (parent, via) = arena[index as usize];
        if let Some(rec) = via {
            path.push(rec);
        }
        index = parent;
    }
    path.reverse();
    path
}
