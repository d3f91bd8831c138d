//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::time::Duration;

use sualbp::generate::{random_instance, GeneratorConfig};
use sualbp::model::{DpModel, State1, State2, TransitionRecord};
use sualbp::oracle::{OpenStation, OracleStart};
use sualbp::search::SearchHooks;
use sualbp::{DerivedData, Instance, Time};

/// Instances with 3 to `max_n` tasks, times 1-10, setups 0-5.
pub fn suite(count: u64, max_n: usize) -> Vec<Instance> {
    (0..count)
        .map(|seed| {
            let config = GeneratorConfig {
                tasks: 3 + (seed as usize) % (max_n - 2),
                ..Default::default()
            };
            random_instance(seed, &config)
        })
        .collect()
}

fn mask(u: sualbp::TaskSet) -> u32 {
    u32::try_from(u.bits()).expect("oracle instances fit 32 tasks")
}

pub fn start1(pre: &DerivedData, s: &State1) -> OracleStart {
    let c = pre.cycle_time.unwrap();
    let open = (s.first as usize != pre.dummy()).then(|| OpenStation {
        first: s.first as usize,
        last: s.prev as usize,
        used: c - s.remaining,
    });
    OracleStart {
        unscheduled: mask(s.unscheduled),
        stations: s.stations as usize,
        open,
        cycle: 0,
    }
}

pub fn start2(pre: &DerivedData, s: &State2) -> OracleStart {
    let open = (s.first as usize != pre.dummy()).then_some(OpenStation {
        first: s.first as usize,
        last: s.prev as usize,
        used: s.used,
    });
    OracleStart {
        unscheduled: mask(s.unscheduled),
        stations: s.stations as usize,
        open,
        cycle: s.cycle,
    }
}

/// Keeps every expanded state.
pub struct Expanded<S> {
    pub states: Vec<S>,
}

impl<S> Default for Expanded<S> {
    fn default() -> Self {
        Expanded { states: Vec::new() }
    }
}

impl<S: Clone> SearchHooks<S> for Expanded<S> {
    fn on_incumbent(
        &mut self,
        _cost: Time,
        _path: &[TransitionRecord],
        _elapsed: Duration,
    ) -> sualbp::Result<Option<Time>> {
        Ok(None)
    }

    fn on_expand(&mut self, state: &S, _g: Time, _h: Time) {
        self.states.push(state.clone());
    }
}

/// Every state reachable from the target.
pub fn reachable<M: DpModel>(model: &M) -> Vec<M::State> {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![model.target()];
    let mut out = Vec::new();
    let mut succ = Vec::new();
    while let Some(s) = stack.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        succ.clear();
        model.successors(&s, &mut succ);
        stack.extend(succ.drain(..).map(|(_, t)| t));
        out.push(s);
    }
    out
}
