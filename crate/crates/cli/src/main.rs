use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::json;

use sualbp::generate::{random_instance, GeneratorConfig};
use sualbp::harness::{
    collect_instances, run_benchmark, write_outputs, BenchConfig, TIME_LIMIT_ENV,
};
use sualbp::instance::{
    alpha_from_path, derive_station_count, to_json, validate_for, validate_instance,
};
use sualbp::oracle::{brute_force, ORACLE_LIMIT};
use sualbp::search::solve;
use sualbp::{
    DerivedData, Instance, ProblemType, RoundingPolicy, SearchConfig, SolveResult, Status,
};

#[derive(Parser)]
#[command(
    name = "sualbp",
    version,
    about = "Assembly line balancing with sequence-dependent setup times"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct SearchArgs {
    /// Wall-clock limit in seconds; unlimited when absent.
    #[arg(long, env = TIME_LIMIT_ENV)]
    time_limit: Option<f64>,
    /// Order and prune by path cost alone.
    #[arg(long)]
    no_dual_bounds: bool,
    /// Drop only exact duplicate states.
    #[arg(long)]
    no_dominance: bool,
    /// Stop after this many stored states.
    #[arg(long)]
    node_cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize the number of stations for the file's cycle time.
    Solve1 {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Cycle time, overriding the file.
        #[arg(long)]
        cycle: Option<i64>,
    },
    /// Minimize the cycle time for a station count.
    Solve2 {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Station count; derived from the file's cycle time when absent.
        #[arg(long, conflicts_with = "round")]
        m: Option<usize>,
        /// Rounding for the derived station count: floor, half or ceil.
        #[arg(long)]
        round: Option<RoundingPolicy>,
        /// Re-sequence tasks within stations for every new incumbent.
        #[arg(long)]
        local_improve: bool,
    },
    /// Solve every instance in a directory or list file and write result tables.
    Bench {
        source: PathBuf,
        #[arg(long = "type", value_parser = ["1", "2"])]
        problem: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value = "ceil")]
        round: RoundingPolicy,
        #[arg(long)]
        local_improve: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check an instance and print its derived data.
    Validate {
        file: PathBuf,
        /// Also solve exactly by enumeration (small instances only).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value = "ceil")]
        round: RoundingPolicy,
    },
    /// Write a seeded random instance as JSON.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        tasks: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn search_config(args: &SearchArgs, local_improve: bool) -> anyhow::Result<SearchConfig> {
    let mut config = SearchConfig::default().with_local_improve(local_improve);
    if let Some(s) = args.time_limit {
        if !(s.is_finite() && s >= 0.0) {
            bail!("--time-limit must be a non-negative number of seconds");
        }
        config.cabs.time_limit = Some(Duration::from_secs_f64(s));
    }
    config.cabs.use_dual_bounds = !args.no_dual_bounds;
    config.cabs.use_dominance = !args.no_dominance;
    if let Some(cap) = args.node_cap {
        config.cabs.node_cap = cap;
    }
    Ok(config)
}

fn load(path: &Path) -> anyhow::Result<Instance> {
    let (mut inst, warnings) =
        Instance::load(path).with_context(|| format!("loading {}", path.display()))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    if inst.alpha.is_none() {
        inst.alpha = alpha_from_path(path);
    }
    Ok(inst)
}

fn exit_for(status: Status) -> ExitCode {
    match status {
        Status::Optimal | Status::Feasible => ExitCode::SUCCESS,
        Status::Infeasible => ExitCode::from(2),
        Status::TimeoutNoSolution => ExitCode::from(3),
    }
}

fn report(inst: &Instance, res: &SolveResult) -> serde_json::Value {
    json!({
        "instance": inst.name,
        "problem": res.problem.to_string(),
        "status": res.status.as_str(),
        "objective": res.objective(),
        "lower_bound": res.lower_bound,
        "stations": res.best.as_ref().map(|s| s.one_based()),
        "station_times": res.best.as_ref().map(|s| s.station_times.clone()),
        "seconds": res.elapsed.as_secs_f64(),
        "expanded": res.stats.expanded,
        "iterations": res.stats.iterations,
        "local_improvement": res.improvement,
    })
}

fn run_solve(
    inst: &Instance,
    problem: ProblemType,
    config: &SearchConfig,
) -> anyhow::Result<ExitCode> {
    let res = solve(inst, problem, config)?;
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&report(inst, &res))?
    )?;
    Ok(exit_for(res.status))
}

fn validate(path: &Path, oracle: bool, round: RoundingPolicy) -> anyhow::Result<ExitCode> {
    let inst = load(path)?;
    let diag = validate_instance(&inst);
    print!("{diag}");
    if !diag.is_ok() {
        return Ok(ExitCode::from(1));
    }
    println!("tasks: {}  total time: {}", inst.n(), inst.total_time());
    let mut problems = Vec::new();
    if inst.cycle_time.is_some() {
        problems.push((ProblemType::Type1, inst.clone()));
    }
    let mut as_type2 = inst.clone();
    if as_type2.station_count.is_none() && as_type2.cycle_time.is_some() {
        as_type2.station_count = Some(derive_station_count(&inst, round)?);
    }
    if as_type2.station_count.is_some() {
        problems.push((ProblemType::Type2, as_type2));
    }
    for (problem, inst) in problems {
        println!("[{problem}]");
        let d = validate_for(&inst, problem);
        print!("{d}");
        match DerivedData::new(&inst, problem) {
            Ok(pre) => {
                println!(
                    "  stations: {}..={}  cycle: {}..={}",
                    pre.m_lower, pre.m_upper, pre.c_lower, pre.c_upper
                );
                println!(
                    "  precedence arcs (closure): {}",
                    pre.pred_star.iter().map(|s| s.len()).sum::<usize>()
                );
                let widths: Vec<usize> = (0..pre.n)
                    .map(|i| pre.windows.latest[i] + 1 - pre.windows.earliest[i])
                    .collect();
                println!("  window widths: {widths:?}");
            }
            Err(e) => println!("  {e}"),
        }
        if oracle {
            if inst.n() > ORACLE_LIMIT {
                println!(
                    "  oracle: skipped ({} tasks, limit {ORACLE_LIMIT})",
                    inst.n()
                );
            } else {
                match brute_force(&inst, problem, None)?.objective {
                    Some(v) => println!("  oracle optimum: {v}"),
                    None => println!("  oracle: infeasible"),
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve1 {
            file,
            search,
            cycle,
        } => {
            let mut inst = load(&file)?;
            if let Some(c) = cycle {
                inst.cycle_time = Some(c);
            }
            inst.cycle_time()?;
            run_solve(&inst, ProblemType::Type1, &search_config(&search, false)?)
        }
        Command::Solve2 {
            file,
            search,
            m,
            round,
            local_improve,
        } => {
            let mut inst = load(&file)?;
            if let Some(m) = m {
                inst.station_count = Some(m);
            } else if inst.station_count.is_none() || round.is_some() {
                inst.station_count = Some(derive_station_count(&inst, round.unwrap_or_default())?);
            }
            run_solve(
                &inst,
                ProblemType::Type2,
                &search_config(&search, local_improve)?,
            )
        }
        Command::Bench {
            source,
            problem,
            out,
            search,
            round,
            local_improve,
            threads,
        } => {
            let problem = if problem == "1" {
                ProblemType::Type1
            } else {
                ProblemType::Type2
            };
            let config = BenchConfig {
                problem,
                search: search_config(&search, local_improve)?,
                rounding: round,
                threads,
            };
            let paths = collect_instances(&source)?;
            let run = run_benchmark(&paths, &config)?;
            write_outputs(&run, &out, config.search.cabs.time_limit)?;
            let failed = run.rows.iter().filter(|r| !r.error.is_empty()).count();
            eprintln!(
                "{} instances, {} optimal, {} failed; tables in {}",
                run.rows.len(),
                run.rows.iter().filter(|r| r.is_optimal()).count(),
                failed,
                out.display()
            );
            Ok(if failed > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Validate {
            file,
            oracle,
            round,
        } => validate(&file, oracle, round),
        Command::Generate { seed, tasks, out } => {
            let inst = random_instance(
                seed,
                &GeneratorConfig {
                    tasks,
                    ..Default::default()
                },
            );
            let text = to_json(&inst);
            match out {
                Some(p) => {
                    std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?
                }
                None => writeln!(std::io::stdout().lock(), "{text}")?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let closed = e
                .downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe);
            if !closed {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(1)
        }
    }
}
