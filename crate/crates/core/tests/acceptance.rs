//! Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//!
//! Criteria that need the SBF2 benchmark files read them from the directory
//! named by `SUALBP_SBF2_DIR` and are skipped when it is unset.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{start1, start2, suite, Expanded};
use sualbp::generate::{random_instance, GeneratorConfig};
use sualbp::harness::{collect_instances, prepare, BEST_KNOWN_TYPE2};
use sualbp::instance::{alpha_from_path, Time};
use sualbp::local_improve::{resequence_station, StationSubproblem};
use sualbp::metrics::{primal_gap, primal_integral, IncumbentTrace};
use sualbp::model::type1::{load_terms, LoadInputs};
use sualbp::model::type2::{cycle_terms, CycleInputs};
use sualbp::model::{DpModel, Type1Model, Type2Model};
use sualbp::oracle::{brute_force, Enumerator};
use sualbp::preprocess::transitive_closure;
use sualbp::search::{cabs, solve, CabsConfig};
use sualbp::{DerivedData, Instance, ProblemType, RoundingPolicy, SearchConfig, Status};

const DATA_ENV: &str = "SUALBP_SBF2_DIR";

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn pass_if(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn data_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_ENV)
        .map(PathBuf::from)
        .filter(|p| p.is_dir())
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let instances = suite(200, 8);
    let mut disagreements = Vec::new();
    for inst in &instances {
        for problem in [ProblemType::Type1, ProblemType::Type2] {
            let truth = brute_force(inst, problem, None).unwrap().objective;
            let res = solve(inst, problem, &SearchConfig::default()).unwrap();
            let proven = match truth {
                Some(v) => res.status == Status::Optimal && res.objective() == Some(v),
                None => res.status == Status::Infeasible,
            };
            if !proven {
                disagreements.push(format!("{} {problem}", inst.name));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    pass_if(
        disagreements.is_empty() && secs < 120.0,
        format!(
            "{} instances x 2 types, {} disagreements {:?}, {secs:.2}s",
            instances.len(),
            disagreements.len(),
            disagreements.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn admissibility() -> Verdict {
    let (mut checked, mut violations) = (0usize, Vec::new());
    for inst in suite(50, 7) {
        let mut oracle = Enumerator::new(&inst).unwrap();

        let pre = DerivedData::new(&inst, ProblemType::Type1).unwrap();
        let model = Type1Model::new(&pre);
        let mut hooks = Expanded::default();
        cabs(&model, &CabsConfig::default(), &mut hooks).unwrap();
        for s in &hooks.states {
            checked += 1;
            let truth = oracle
                .solve(ProblemType::Type1, Some(&start1(&pre, s)))
                .unwrap()
                .objective;
            if let Some(v) = truth {
                if model.dual_bound(s).is_none_or(|h| h > v) {
                    violations.push(format!("{} type-1 {s:?}", inst.name));
                }
            }
        }

        let pre = DerivedData::new(&inst, ProblemType::Type2).unwrap();
        let model = Type2Model::new(&pre);
        let mut hooks = Expanded::default();
        cabs(&model, &CabsConfig::default(), &mut hooks).unwrap();
        for s in &hooks.states {
            checked += 1;
            let truth = oracle
                .solve(ProblemType::Type2, Some(&start2(&pre, s)))
                .unwrap()
                .objective;
            if let Some(v) = truth {
                if model.dual_bound(s).is_none_or(|h| h > v) {
                    violations.push(format!("{} type-2 {s:?}", inst.name));
                }
            }
        }
    }
    pass_if(
        violations.is_empty() && checked > 0,
        format!(
            "{checked} expanded states, {} violations {:?}",
            violations.len(),
            violations.first()
        ),
    )
}

fn bound_construction_fixtures() -> Verdict {
    let x1 = LoadInputs {
        sum_t: 50,
        sum_tau: 2 + 12,
        max_tau: 12,
        min_mu: 1,
        mu_first: 1,
        remaining: 1,
        cycle: 10,
        stations: 3,
        m_lower: 2,
        m_upper: 3 + 2,
    };
    let terms1 = load_terms(&x1);
    let bound1 = terms1.into_iter().max().unwrap();
    let x2 = CycleInputs {
        sum_t: 30,
        sum_tau: 2 + 12,
        max_tau: 12,
        min_mu: 1,
        mu_first: 1,
        used: 1,
        m: 5,
        stations: 3,
    };
    let cycle = 5;
    let (a, b) = cycle_terms(&x2);
    let h2 = cycle.max(a).max(b);
    pass_if(
        terms1[0] == 4
            && terms1[1] == 5
            && bound1 >= 5
            && a - cycle == 3
            && b - cycle == 6
            && h2 == 11,
        format!(
            "type-1 terms ({}, {}) bound {bound1}; type-2 increments ({}, {}) h {h2}",
            terms1[0],
            terms1[1],
            a - cycle,
            b - cycle
        ),
    )
}

fn find_instance(files: &[PathBuf], name: &str, alpha: &str) -> Option<PathBuf> {
    files
        .iter()
        .find(|p| {
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().to_ascii_lowercase().replace(' ', ""));
            stem.as_deref() == Some(name) && alpha_from_path(p).as_deref() == Some(alpha)
        })
        .cloned()
}

fn table_reproduction() -> Verdict {
    let Some(dir) = data_dir() else {
        return Verdict::Skip(format!("benchmark data not found; set {DATA_ENV}"));
    };
    let files = collect_instances(&dir).unwrap();
    let config = SearchConfig::default().with_time_limit(Some(Duration::from_secs(600)));
    let mut report = Vec::new();
    let mut ok = true;
    for &(name, alpha, expected) in BEST_KNOWN_TYPE2 {
        let Some(path) = find_instance(&files, name, alpha) else {
            ok = false;
            report.push(format!("{name}@{alpha} missing"));
            continue;
        };
        let outcome = prepare(&path, ProblemType::Type2, RoundingPolicy::Ceil)
            .and_then(|inst| solve(&inst, ProblemType::Type2, &config));
        match outcome {
            Ok(res) => {
                let good = res.status == Status::Optimal && res.objective() == Some(expected);
                ok &= good;
                report.push(format!(
                    "{name}@{alpha} {:?}/{expected} {:.1}s",
                    res.objective(),
                    res.elapsed.as_secs_f64()
                ));
            }
            Err(e) => {
                ok = false;
                report.push(format!("{name}@{alpha} error {e}"));
            }
        }
    }
    pass_if(ok, report.join("; "))
}

fn class_a_speed() -> Verdict {
    let Some(dir) = data_dir() else {
        return Verdict::Skip(format!("benchmark data not found; set {DATA_ENV}"));
    };
    let files = collect_instances(&dir).unwrap();
    let config = SearchConfig::default().with_time_limit(Some(Duration::from_secs(10)));
    let (mut count, mut failures, mut worst) = (0, Vec::new(), 0.0f64);
    for path in files {
        let Ok(inst) = prepare(&path, ProblemType::Type2, RoundingPolicy::Ceil) else {
            continue;
        };
        if inst.n() > 25 {
            continue;
        }
        count += 1;
        match solve(&inst, ProblemType::Type2, &config) {
            Ok(res) if res.status == Status::Optimal => {
                worst = worst.max(res.elapsed.as_secs_f64())
            }
            Ok(res) => failures.push(format!("{} {}", path.display(), res.status)),
            Err(e) => failures.push(format!("{} {e}", path.display())),
        }
    }
    pass_if(
        count > 0 && failures.is_empty(),
        format!(
            "{count} class-A instances, slowest {worst:.3}s, {} not proven {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

/// Shuffled topological order cut into stations of at most eight tasks.
fn random_line(inst: &Instance, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let n = inst.n();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let mut ready: Vec<usize> = (0..n)
            .filter(|&i| !placed[i] && inst.precedence.iter().all(|&(a, b)| b != i || placed[a]))
            .collect();
        ready.shuffle(rng);
        placed[ready[0]] = true;
        order.push(ready[0]);
    }
    let mut out = Vec::new();
    let mut rest = &order[..];
    while !rest.is_empty() {
        let k = rng.gen_range(1..=rest.len().min(8));
        out.push(rest[..k].to_vec());
        rest = &rest[k..];
    }
    out
}

fn permutation_minimum(inst: &Instance, left: &mut Vec<usize>, seq: &mut Vec<usize>) -> Time {
    if left.is_empty() {
        return inst.station_time(seq);
    }
    let mut best = Time::MAX;
    for k in 0..left.len() {
        let i = left[k];
        if inst
            .precedence
            .iter()
            .any(|&(a, b)| b == i && left.contains(&a))
        {
            continue;
        }
        left.remove(k);
        seq.push(i);
        best = best.min(permutation_minimum(inst, left, seq));
        seq.pop();
        left.insert(k, i);
    }
    best
}

fn local_improvement() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut stations, mut mismatches) = (0, 0);
    for seed in 0..100u64 {
        let config = GeneratorConfig {
            tasks: 8 + (seed as usize) % 5,
            arc_probability: 0.15,
            ..Default::default()
        };
        let inst = random_instance(seed, &config);
        let (pred_star, _) = transitive_closure(&inst.precedence, inst.n());
        for tasks in random_line(&inst, &mut rng) {
            stations += 1;
            let expected = permutation_minimum(&inst, &mut tasks.clone(), &mut Vec::new());
            let sub = StationSubproblem::new(&inst, &pred_star, &tasks);
            for limit in [usize::MAX, 0] {
                let (seq, _) = resequence_station(&sub, limit);
                if inst.station_time(&seq) != expected {
                    mismatches += 1;
                }
            }
        }
    }
    let mut differing = 0;
    let suite = suite(200, 8);
    for inst in &suite {
        let plain = solve(inst, ProblemType::Type2, &SearchConfig::default()).unwrap();
        let li = solve(
            inst,
            ProblemType::Type2,
            &SearchConfig::default().with_local_improve(true),
        )
        .unwrap();
        if plain.status != Status::Optimal
            || li.status != Status::Optimal
            || plain.objective() != li.objective()
        {
            differing += 1;
        }
    }
    pass_if(
        mismatches == 0 && differing == 0,
        format!(
            "{stations} stations, {mismatches} sequencing mismatches; {} instances, {differing} optimum differences with improvement on",
            suite.len()
        ),
    )
}

fn metrics() -> Verdict {
    let secs = |s: u64| s * 1_000_000;
    let gaps = primal_gap(None, 10) == Ratio::from_integer(1)
        && primal_gap(Some(0), 0) == Ratio::from_integer(0)
        && primal_gap(Some(12), 10) == Ratio::new(2, 12);
    let never = IncumbentTrace {
        horizon_micros: secs(10),
        ..Default::default()
    };
    let mut at_once = IncumbentTrace {
        horizon_micros: secs(10),
        reference: Some(4),
        ..Default::default()
    };
    at_once.push(0, 4);
    let mut stepped = IncumbentTrace {
        horizon_micros: secs(10),
        reference: Some(10),
        ..Default::default()
    };
    stepped.push(secs(2), 20);
    stepped.push(secs(5), 10);
    let values = [
        primal_integral(&never),
        primal_integral(&at_once),
        primal_integral(&stepped),
    ];
    pass_if(
        gaps && values
            == [
                Ratio::from_integer(10),
                Ratio::from_integer(0),
                Ratio::new(7, 2),
            ],
        format!(
            "gaps exact: {gaps}; integrals {} {} {}",
            values[0], values[1], values[2]
        ),
    )
}

fn toggles() -> Verdict {
    let (mut changed, mut by_bound, mut by_dominance, mut node_diff) = (0, 0u64, 0u64, 0);
    let suite = suite(200, 8);
    for inst in &suite {
        for problem in [ProblemType::Type1, ProblemType::Type2] {
            let base = solve(inst, problem, &SearchConfig::default()).unwrap();
            by_bound += base.stats.pruned_by_bound;
            by_dominance += base.stats.pruned_by_dominance;
            for (bounds, dominance) in [(false, true), (true, false), (false, false)] {
                let mut config = SearchConfig::default();
                config.cabs.use_dual_bounds = bounds;
                config.cabs.use_dominance = dominance;
                let res = solve(inst, problem, &config).unwrap();
                if res.status != base.status || res.objective() != base.objective() {
                    changed += 1;
                }
                if res.stats.generated != base.stats.generated {
                    node_diff += 1;
                }
            }
        }
    }
    pass_if(
        changed == 0 && by_bound > 0 && by_dominance > 0,
        format!(
            "{} runs per toggle, {changed} changed optima, {node_diff} changed node counts; pruned by bound {by_bound}, by dominance {by_dominance}",
            suite.len() * 2
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("dual-bound admissibility", admissibility),
        ("bound construction fixtures", bound_construction_fixtures),
        ("best-known type-2 optima", table_reproduction),
        ("class-A speed", class_a_speed),
        ("local improvement", local_improvement),
        ("anytime metrics", metrics),
        ("pruning toggles", toggles),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Verdict::Fail(format!("panicked: {msg}"))
        });
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::Skip(d) => ("SKIP", d),
        };
        println!("{tag} criterion {} ({name}): {detail}", k + 1);
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
