//! Batch runs over instance sets and the result tables they produce.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;
use walkdir::WalkDir;

use crate::instance::{
    alpha_from_path, derive_station_count, Instance, ProblemType, RoundingPolicy, Time,
};
use crate::metrics::{primal_gap, primal_integral, ratio_to_f64, IncumbentTrace};
use crate::search::{solve, SearchConfig, SolveResult, Status};
use crate::Result;

/// Environment variable holding the default per-instance time limit in seconds.
pub const TIME_LIMIT_ENV: &str = "SUALBP_TIME_LIMIT";

/// Best-known type-2 objectives: (instance, setup ratio, cycle time).
pub const BEST_KNOWN_TYPE2: &[(&str, &str, Time)] = &[
    ("jackson_c=7", "0.75", 9),
    ("jackson_c=14", "0.50", 12),
    ("lutz1_c=2357b", "0.25", 2475),
    ("sawyer30_c=54", "0.75", 58),
    ("hahn_c=1806", "0.25", 2830),
    ("hahn_c=4676", "0.25", 4847),
];

pub fn best_known(problem: ProblemType, name: &str, alpha: Option<&str>) -> Option<Time> {
    if problem != ProblemType::Type2 {
        return None;
    }
    let name = name.to_ascii_lowercase();
    BEST_KNOWN_TYPE2
        .iter()
        .find(|(n, a, _)| *n == name && alpha == Some(*a))
        .map(|&(_, _, v)| v)
}

/// Size class: A up to 25 tasks, B up to 35, C up to 70, D above.
pub fn size_class(n: usize) -> &'static str {
    match n {
        0..=25 => "A",
        26..=35 => "B",
        36..=70 => "C",
        _ => "D",
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub problem: ProblemType,
    pub search: SearchConfig,
    /// Used for type-2 runs on files without a station count.
    pub rounding: RoundingPolicy,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub class: String,
    pub alpha: String,
    pub tasks: usize,
    pub status: String,
    pub objective: Option<Time>,
    pub bound: Option<Time>,
    pub reference: Option<Time>,
    pub gap_percent: f64,
    pub runtime_s: f64,
    pub primal_integral: f64,
    pub expanded: u64,
    pub li_incumbents: u32,
    pub li_improved: u32,
    pub error: String,
}

impl BenchRow {
    pub fn is_feasible(&self) -> bool {
        self.objective.is_some()
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal.as_str() || self.status == Status::Infeasible.as_str()
    }
}

/// `.alb` and `.json` files under a directory (sorted), or the paths listed
/// one per line in a text file.
pub fn collect_instances(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_dir() {
        let mut out: Vec<PathBuf> = WalkDir::new(path)
            .into_iter()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_type().is_file())
            .map(|e| e.into_path())
            .filter(|p| {
                p.extension().is_some_and(|x| {
                    x.eq_ignore_ascii_case("alb") || x.eq_ignore_ascii_case("json")
                })
            })
            .collect();
        out.sort();
        return Ok(out);
    }
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(fs::read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let p = PathBuf::from(l);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        })
        .collect())
}

/// Loads an instance and fills in the data the chosen problem needs.
pub fn prepare(path: &Path, problem: ProblemType, rounding: RoundingPolicy) -> Result<Instance> {
    let (mut inst, _warnings) = Instance::load(path)?;
    if inst.alpha.is_none() {
        inst.alpha = alpha_from_path(path);
    }
    if problem == ProblemType::Type2 && inst.station_count.is_none() {
        inst.station_count = Some(derive_station_count(&inst, rounding)?);
    }
    Ok(inst)
}

pub struct BenchRun {
    pub rows: Vec<BenchRow>,
    pub traces: Vec<(String, IncumbentTrace)>,
}

fn run_one(path: &Path, config: &BenchConfig) -> (BenchRow, IncumbentTrace) {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut row = BenchRow {
        instance: stem.clone(),
        class: String::new(),
        alpha: alpha_from_path(path).unwrap_or_default(),
        tasks: 0,
        status: "error".into(),
        objective: None,
        bound: None,
        reference: None,
        gap_percent: 100.0,
        runtime_s: 0.0,
        primal_integral: 0.0,
        expanded: 0,
        li_incumbents: 0,
        li_improved: 0,
        error: String::new(),
    };
    let inst = match prepare(path, config.problem, config.rounding) {
        Ok(inst) => inst,
        Err(e) => {
            row.error = e.to_string();
            return (row, IncumbentTrace::default());
        }
    };
    row.tasks = inst.n();
    row.class = size_class(inst.n()).into();
    row.alpha = inst.alpha.clone().unwrap_or_default();
    match solve(&inst, config.problem, &config.search) {
        Ok(res) => {
            let trace = fill_row(&mut row, &res, config.problem);
            (row, trace)
        }
        Err(e) => {
            row.error = e.to_string();
            (row, IncumbentTrace::default())
        }
    }
}

fn fill_row(row: &mut BenchRow, res: &SolveResult, problem: ProblemType) -> IncumbentTrace {
    row.status = res.status.as_str().into();
    row.objective = res.objective();
    row.bound = Some(res.lower_bound);
    row.expanded = res.stats.expanded;
    row.runtime_s = res.elapsed.as_secs_f64();
    row.li_incumbents = res.improvement.incumbents;
    row.li_improved = res.improvement.improved;
    let reference = match res.status {
        Status::Optimal => res.objective(),
        _ => best_known(problem, &row.instance, Some(&row.alpha))
            .map(|b| res.objective().map_or(b, |o| o.min(b)))
            .or(res.objective()),
    };
    row.reference = reference;
    let mut trace = res.trace.clone();
    trace.reference = reference;
    row.gap_percent = match (res.status, reference) {
        (Status::Infeasible, _) => 0.0,
        (_, Some(r)) => 100.0 * ratio_to_f64(&primal_gap(res.objective(), r)),
        (_, None) => 100.0,
    };
    row.primal_integral = ratio_to_f64(&primal_integral(&trace));
    trace
}

/// Solves every instance; rows keep the input order.
pub fn run_benchmark(paths: &[PathBuf], config: &BenchConfig) -> Result<BenchRun> {
    let work = || -> Vec<(BenchRow, IncumbentTrace)> {
        paths.par_iter().map(|p| run_one(p, config)).collect()
    };
    let results = match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| crate::Error::Internal(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut rows = Vec::with_capacity(results.len());
    let mut traces = Vec::with_capacity(results.len());
    for (row, trace) in results {
        traces.push((row.instance.clone(), trace));
        rows.push(row);
    }
    Ok(BenchRun { rows, traces })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub class: String,
    pub alpha: String,
    pub count: usize,
    pub gap_percent: f64,
    pub time_s: f64,
    pub feasible: usize,
    pub optimal: usize,
}

/// Mean gap and time plus feasible/optimal counts per (class, setup ratio).
pub fn summarize(rows: &[BenchRow]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, String), Vec<&BenchRow>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.class.clone(), r.alpha.clone()))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((class, alpha), rs)| {
            let count = rs.len();
            let mean =
                |f: &dyn Fn(&BenchRow) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / count as f64;
            SummaryRow {
                class,
                alpha,
                count,
                gap_percent: mean(&|r| r.gap_percent),
                time_s: mean(&|r| r.runtime_s),
                feasible: rs.iter().filter(|r| r.is_feasible()).count(),
                optimal: rs.iter().filter(|r| r.is_optimal()).count(),
            }
        })
        .collect()
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(!rows.is_empty())
        .from_path(path)?;
    if rows.is_empty() {
        w.write_record(header)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

const ROW_HEADER: &[&str] = &[
    "instance",
    "class",
    "alpha",
    "tasks",
    "status",
    "objective",
    "bound",
    "reference",
    "gap_percent",
    "runtime_s",
    "primal_integral",
    "expanded",
    "li_incumbents",
    "li_improved",
    "error",
];

/// Writes `results.csv`, `summary.csv`, `solved_over_time.csv`,
/// `primal_integral_ratio.csv` and one trace per instance under `traces/`.
pub fn write_outputs(run: &BenchRun, out: &Path, horizon: Option<Duration>) -> Result<()> {
    fs::create_dir_all(out.join("traces"))?;
    write_csv(&out.join("results.csv"), &run.rows, ROW_HEADER)?;
    write_csv(
        &out.join("summary.csv"),
        &summarize(&run.rows),
        &[
            "class",
            "alpha",
            "count",
            "gap_percent",
            "time_s",
            "feasible",
            "optimal",
        ],
    )?;
    for (name, trace) in &run.traces {
        fs::write(
            out.join("traces").join(format!("{name}.csv")),
            trace.to_csv(),
        )?;
    }

    let total = run.rows.len().max(1) as f64;
    let mut solved: Vec<f64> = run
        .rows
        .iter()
        .filter(|r| r.is_optimal())
        .map(|r| r.runtime_s)
        .collect();
    solved.sort_by(f64::total_cmp);
    let mut text = String::from("seconds,ratio_solved\n");
    for (k, s) in solved.iter().enumerate() {
        text.push_str(&format!("{s:.6},{:.6}\n", (k + 1) as f64 / total));
    }
    if let Some(h) = horizon {
        text.push_str(&format!(
            "{:.6},{:.6}\n",
            h.as_secs_f64(),
            solved.len() as f64 / total
        ));
    }
    fs::write(out.join("solved_over_time.csv"), text)?;

    let mut integrals: Vec<f64> = run.rows.iter().map(|r| r.primal_integral).collect();
    integrals.sort_by(f64::total_cmp);
    let mut text = String::from("primal_integral,ratio\n");
    for (k, p) in integrals.iter().enumerate() {
        text.push_str(&format!("{p:.6},{:.6}\n", (k + 1) as f64 / total));
    }
    fs::write(out.join("primal_integral_ratio.csv"), text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(size_class(11), "A");
        assert_eq!(size_class(25), "A");
        assert_eq!(size_class(26), "B");
        assert_eq!(size_class(53), "C");
        assert_eq!(size_class(111), "D");
    }

    #[test]
    fn fixtures_lookup() {
        assert_eq!(
            best_known(ProblemType::Type2, "JACKSON_c=14", Some("0.50")),
            Some(12)
        );
        assert_eq!(
            best_known(ProblemType::Type2, "jackson_c=14", Some("0.25")),
            None
        );
        assert_eq!(
            best_known(ProblemType::Type1, "jackson_c=14", Some("0.50")),
            None
        );
    }

    #[test]
    fn summary_counts_match_rows() {
        let row = |status: &str, obj: Option<Time>| BenchRow {
            instance: "x".into(),
            class: "A".into(),
            alpha: "0.25".into(),
            tasks: 5,
            status: status.into(),
            objective: obj,
            bound: None,
            reference: None,
            gap_percent: 0.0,
            runtime_s: 1.0,
            primal_integral: 0.0,
            expanded: 0,
            li_incumbents: 0,
            li_improved: 0,
            error: String::new(),
        };
        let rows = vec![
            row("optimal", Some(3)),
            row("feasible", Some(4)),
            row("timeout-no-solution", None),
        ];
        let s = summarize(&rows);
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].count, s[0].feasible, s[0].optimal), (3, 2, 1));
    }
}
