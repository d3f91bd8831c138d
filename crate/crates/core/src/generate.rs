//! Seeded random instances for tests and experiments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, Time};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub tasks: usize,
    pub max_time: Time,
    pub max_setup: Time,
    /// Probability of an arc between two tasks in topological order.
    pub arc_probability: f64,
    /// Lower setups until removing a task from a station never lengthens it.
    pub triangle: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            tasks: 8,
            max_time: 10,
            max_setup: 5,
            arc_probability: 0.25,
            triangle: true,
        }
    }
}

/// Random DAG, times and setups. Cycle time and station count are both set:
/// the cycle time admits every task alone, the station count is in `1..=n/2+1`.
pub fn random_instance(seed: u64, config: &GeneratorConfig) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = config.tasks;
    let times: Vec<Time> = (0..n).map(|_| rng.gen_range(1..=config.max_time)).collect();
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut precedence = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(config.arc_probability) {
                precedence.push((labels[a], labels[b]));
            }
        }
    }
    let mut inst = Instance::new(format!("random-{seed}"), times);
    inst.precedence = precedence;
    for i in 0..n {
        for j in 0..n {
            inst.fwd_setup[i][j] = rng.gen_range(0..=config.max_setup);
            inst.bwd_setup[i][j] = rng.gen_range(0..=config.max_setup);
        }
    }
    if config.triangle {
        repair_triangles(&mut inst);
    }
    let alone = (0..n)
        .map(|i| inst.task_times[i] + inst.bwd_setup[i][i])
        .max()
        .unwrap_or(1);
    let total = inst.total_time();
    let c = rng.gen_range(alone..=alone.max(total / 2 + config.max_setup));
    inst.cycle_time = Some(c);
    inst.station_count = Some(rng.gen_range(1..=n / 2 + 1));
    inst
}

/// Lowers setups to a fixed point where dropping a task `i` from a station
/// never increases its time: between two tasks, at the end, or at the front.
#[allow(clippy::needless_range_loop)]
pub fn repair_triangles(inst: &mut Instance) {
    let n = inst.n();
    let t = inst.task_times.clone();
    loop {
        let mut changed = false;
        for i in 0..n {
            for a in (0..n).filter(|&a| a != i) {
                for b in (0..n).filter(|&b| b != i) {
                    let via = inst.fwd_setup[a][i] + t[i] + inst.fwd_setup[i][b];
                    if a != b && inst.fwd_setup[a][b] > via {
                        inst.fwd_setup[a][b] = via;
                        changed = true;
                    }
                    // `a` last, `b` first, `i` removed from the end.
                    let end = inst.fwd_setup[a][i] + t[i] + inst.bwd_setup[i][b];
                    if inst.bwd_setup[a][b] > end {
                        inst.bwd_setup[a][b] = end;
                        changed = true;
                    }
                    // `i` removed from the front.
                    let front = inst.bwd_setup[a][i] + t[i] + inst.fwd_setup[i][b];
                    if inst.bwd_setup[a][b] > front {
                        inst.bwd_setup[a][b] = front;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Whether [`repair_triangles`] would change nothing.
pub fn satisfies_triangles(inst: &Instance) -> bool {
    let mut copy = inst.clone();
    repair_triangles(&mut copy);
    copy == *inst
}
