//! Problem instances: representation, `.alb` and JSON I/O, validation.
//!
//! Tasks are 0-based inside the crate and 1-based in every file format.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::taskset::MAX_TASKS;

/// Durations and setup times. All arithmetic is integral.
pub type Time = i64;

/// Cap on reported triangle-inequality violations.
pub const TRIANGLE_WARNING_CAP: usize = 100;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}, section <{tag}>: {message}")]
    Parse {
        line: usize,
        tag: String,
        message: String,
    },
    #[error("invalid instance document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("instance has no cycle time")]
    MissingCycleTime,
    #[error("instance has no station count")]
    MissingStationCount,
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// Which of the two balancing problems is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemType {
    /// Minimize the number of stations for a fixed cycle time.
    Type1,
    /// Minimize the cycle time for a fixed number of stations.
    Type2,
}

impl fmt::Display for ProblemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemType::Type1 => f.write_str("type-1"),
            ProblemType::Type2 => f.write_str("type-2"),
        }
    }
}

/// Rounding applied when converting `Σt / c` into a station count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoundingPolicy {
    Floor,
    HalfUp,
    #[default]
    Ceil,
}

impl FromStr for RoundingPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "floor" => Ok(RoundingPolicy::Floor),
            "half" | "half-up" | "round" => Ok(RoundingPolicy::HalfUp),
            "ceil" => Ok(RoundingPolicy::Ceil),
            other => Err(format!(
                "unknown rounding policy `{other}` (floor|half|ceil)"
            )),
        }
    }
}

/// Immutable problem data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    /// Setup-ratio label of the data set the instance came from, if known.
    pub alpha: Option<String>,
    pub task_times: Vec<Time>,
    /// Pairs `(i, j)`: task `i` must precede task `j`.
    pub precedence: Vec<(usize, usize)>,
    /// `fwd_setup[i][j]`: setup when `j` directly follows `i` on a station.
    pub fwd_setup: Vec<Vec<Time>>,
    /// `bwd_setup[i][j]`: setup from last task `i` to first task `j` of the next cycle.
    pub bwd_setup: Vec<Vec<Time>>,
    pub cycle_time: Option<Time>,
    pub station_count: Option<usize>,
}

impl Instance {
    /// Instance with zero setups and no precedence.
    pub fn new(name: impl Into<String>, task_times: Vec<Time>) -> Self {
        let n = task_times.len();
        Instance {
            name: name.into(),
            alpha: None,
            task_times,
            precedence: Vec::new(),
            fwd_setup: vec![vec![0; n]; n],
            bwd_setup: vec![vec![0; n]; n],
            cycle_time: None,
            station_count: None,
        }
    }

    pub fn n(&self) -> usize {
        self.task_times.len()
    }

    pub fn total_time(&self) -> Time {
        self.task_times.iter().sum()
    }

    pub fn with_cycle_time(mut self, c: Time) -> Self {
        self.cycle_time = Some(c);
        self
    }

    pub fn with_station_count(mut self, m: usize) -> Self {
        self.station_count = Some(m);
        self
    }

    pub fn with_precedence(mut self, pairs: &[(usize, usize)]) -> Self {
        self.precedence = pairs.to_vec();
        self
    }

    pub fn with_uniform_setups(mut self, fwd: Time, bwd: Time) -> Self {
        let n = self.n();
        self.fwd_setup = vec![vec![fwd; n]; n];
        self.bwd_setup = vec![vec![bwd; n]; n];
        self
    }

    /// Station time of an ordered task sequence: processing, forward setups
    /// between consecutive tasks, and the backward setup from last to first.
    pub fn station_time(&self, seq: &[usize]) -> Time {
        let (Some(&first), Some(&last)) = (seq.first(), seq.last()) else {
            return 0;
        };
        let processing: Time = seq.iter().map(|&i| self.task_times[i]).sum();
        let forward: Time = seq.windows(2).map(|w| self.fwd_setup[w[0]][w[1]]).sum();
        processing + forward + self.bwd_setup[last][first]
    }

    pub fn cycle_time(&self) -> Result<Time, InstanceError> {
        self.cycle_time.ok_or(InstanceError::MissingCycleTime)
    }

    pub fn station_count(&self) -> Result<usize, InstanceError> {
        self.station_count.ok_or(InstanceError::MissingStationCount)
    }

    /// Reads a file, choosing the format by extension (`.json` is the
    /// canonical document, anything else is treated as `.alb`).
    pub fn load(path: &Path) -> Result<(Instance, Vec<String>), InstanceError> {
        let text = std::fs::read_to_string(path)?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let (mut inst, warnings) = if is_json {
            (from_json(&text)?, Vec::new())
        } else {
            parse_alb(&text)?
        };
        if inst.name.is_empty() {
            if let Some(stem) = path.file_stem() {
                inst.name = stem.to_string_lossy().into_owned();
            }
        }
        Ok((inst, warnings))
    }
}

/// Findings of [`validate_instance`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl Diagnostics {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    fn error(&mut self, msg: impl Into<String>) {
        self.errors.push(msg.into());
    }

    fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn extend(&mut self, other: Diagnostics) {
        self.errors.extend(other.errors);
        self.warnings.extend(other.warnings);
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Kahn's algorithm. Returns `None` when the relation has a cycle.
pub fn topological_order(n: usize, precedence: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indegree = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for &(i, j) in precedence {
        if i >= n || j >= n {
            return None;
        }
        succ[i].push(j);
        indegree[j] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).rev().collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop() {
        order.push(i);
        for &j in succ[i].iter().rev() {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push(j);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Checks every structural invariant. Triangle-inequality violations of the
/// forward setups are reported as warnings.
pub fn validate_instance(inst: &Instance) -> Diagnostics {
    let mut d = Diagnostics::default();
    let n = inst.n();
    if n == 0 {
        d.error("instance has no tasks");
    }
    if n > MAX_TASKS {
        d.error(format!(
            "{n} tasks exceed the supported maximum of {MAX_TASKS}"
        ));
    }
    for (i, &t) in inst.task_times.iter().enumerate() {
        if t < 1 {
            d.error(format!("task {} has non-positive time {t}", i + 1));
        }
    }
    let square = |m: &Vec<Vec<Time>>| m.len() == n && m.iter().all(|row| row.len() == n);
    let matrices_ok = square(&inst.fwd_setup) && square(&inst.bwd_setup);
    if !matrices_ok {
        d.error(format!("setup matrices must be {n}x{n}"));
    } else {
        for (label, m) in [("forward", &inst.fwd_setup), ("backward", &inst.bwd_setup)] {
            for (i, row) in m.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if v < 0 {
                        d.error(format!(
                            "negative {label} setup {v} for ({}, {})",
                            i + 1,
                            j + 1
                        ));
                    }
                }
            }
        }
    }
    let mut range_ok = true;
    for &(i, j) in &inst.precedence {
        if i >= n || j >= n {
            d.error(format!(
                "precedence ({}, {}) references a missing task",
                i + 1,
                j + 1
            ));
            range_ok = false;
        } else if i == j {
            d.error(format!(
                "precedence ({}, {}) is a self-loop (cycle)",
                i + 1,
                j + 1
            ));
        }
    }
    if range_ok && topological_order(n, &inst.precedence).is_none() {
        d.error("precedence relation contains a cycle");
    }
    if let Some(c) = inst.cycle_time {
        if c < 1 {
            d.error(format!("cycle time {c} must be positive"));
        }
    }
    if inst.station_count == Some(0) {
        d.error("station count must be positive");
    }
    if matrices_ok {
        let tau = &inst.fwd_setup;
        let mut violations = 0usize;
        'outer: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    if tau[i][k] > tau[i][j] + inst.task_times[j] + tau[j][k] {
                        if violations == TRIANGLE_WARNING_CAP {
                            d.warn("further triangle violations suppressed");
                            break 'outer;
                        }
                        violations += 1;
                        d.warn(format!(
                            "triangle violation ({}, {}, {}): tau {} > {} + {} + {}",
                            i + 1,
                            j + 1,
                            k + 1,
                            tau[i][k],
                            tau[i][j],
                            inst.task_times[j],
                            tau[j][k]
                        ));
                    }
                }
            }
        }
    }
    d
}

/// [`validate_instance`] plus the requirements of one problem type.
pub fn validate_for(inst: &Instance, problem: ProblemType) -> Diagnostics {
    let mut d = validate_instance(inst);
    if !d.is_ok() {
        return d;
    }
    match problem {
        ProblemType::Type1 => match inst.cycle_time {
            None => d.error("type-1 requires a cycle time"),
            Some(c) => {
                for i in 0..inst.n() {
                    let alone = inst.task_times[i] + inst.bwd_setup[i][i];
                    if alone > c {
                        d.error(format!(
                            "task {} needs {alone} > cycle time {c} even alone; infeasible",
                            i + 1
                        ));
                    }
                }
            }
        },
        ProblemType::Type2 => {
            if inst.station_count.is_none() {
                d.error("type-2 requires a station count");
            }
        }
    }
    d
}

/// Station count for running a type-1 instance as type-2: `Σt / c` rounded.
pub fn derive_station_count(
    inst: &Instance,
    policy: RoundingPolicy,
) -> Result<usize, InstanceError> {
    let c = inst.cycle_time()?;
    if c < 1 {
        return Err(InstanceError::Invalid(format!(
            "cycle time {c} must be positive"
        )));
    }
    let total = inst.total_time();
    let m = match policy {
        RoundingPolicy::Floor => total / c,
        RoundingPolicy::HalfUp => (2 * total + c) / (2 * c),
        RoundingPolicy::Ceil => (total + c - 1) / c,
    };
    Ok(m.max(1) as usize)
}

// ---------------------------------------------------------------------------
// .alb
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    NumberOfTasks,
    CycleTime,
    NumberOfStations,
    Ignored,
    TaskTimes,
    Precedence,
    Forward,
    Backward,
    Unknown,
    End,
}

fn classify(tag: &str) -> Section {
    let t: String = tag
        .to_ascii_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ");
    match t.as_str() {
        "number of tasks" => Section::NumberOfTasks,
        "cycle time" => Section::CycleTime,
        "number of stations" => Section::NumberOfStations,
        "order strength" => Section::Ignored,
        "task times" => Section::TaskTimes,
        "precedence relations" => Section::Precedence,
        "end" => Section::End,
        _ if t.contains("backward") => Section::Backward,
        "sequence dependent time increments"
        | "setup times forward"
        | "forward setup times"
        | "forward setups"
        | "setup times" => Section::Forward,
        _ if t.contains("forward") => Section::Forward,
        _ => Section::Unknown,
    }
}

struct AlbParser<'a> {
    line: usize,
    tag: &'a str,
}

impl AlbParser<'_> {
    fn err(&self, message: impl Into<String>) -> InstanceError {
        InstanceError::Parse {
            line: self.line,
            tag: self.tag.to_string(),
            message: message.into(),
        }
    }

    fn int(&self, tok: &str) -> Result<Time, InstanceError> {
        tok.parse::<Time>().map_err(|_| {
            if tok.contains('.') {
                self.err(format!(
                    "fractional value `{tok}`; only integers are accepted"
                ))
            } else {
                self.err(format!("expected an integer, found `{tok}`"))
            }
        })
    }

    fn task(&self, tok: &str, n: usize) -> Result<usize, InstanceError> {
        let v = self.int(tok)?;
        if v < 1 || v as usize > n {
            return Err(self.err(format!("task {v} out of range 1..={n}")));
        }
        Ok(v as usize - 1)
    }

    fn nonneg(&self, tok: &str) -> Result<Time, InstanceError> {
        let v = self.int(tok)?;
        if v < 0 {
            return Err(self.err(format!("negative value {v}")));
        }
        Ok(v)
    }
}

fn tokens(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Parses the tag-delimited `.alb` format. Returns the instance together with
/// non-fatal warnings (unknown sections, missing setups).
pub fn parse_alb(text: &str) -> Result<(Instance, Vec<String>), InstanceError> {
    let mut warnings = Vec::new();
    let mut section = Section::Unknown;
    let mut p = AlbParser { line: 0, tag: "" };
    let mut n: Option<usize> = None;
    let mut cycle_time = None;
    let mut station_count = None;
    let mut times: Vec<Option<Time>> = Vec::new();
    let mut precedence = Vec::new();
    let mut seen_pairs = HashSet::new();
    let mut fwd: Option<Vec<Vec<Time>>> = None;
    let mut bwd: Option<Vec<Vec<Time>>> = None;
    let mut matrix_row = 0usize;
    let mut seen_end = false;

    for (idx, raw) in text.lines().enumerate() {
        p.line = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('<') {
            if !line.ends_with('>') || line.len() < 3 {
                return Err(p.err(format!("malformed tag `{line}`")));
            }
            p.tag = &line[1..line.len() - 1];
            section = classify(p.tag);
            matrix_row = 0;
            match section {
                Section::Unknown => warnings.push(format!(
                    "line {}: skipping unknown section <{}>",
                    p.line, p.tag
                )),
                Section::End => {
                    seen_end = true;
                    break;
                }
                Section::TaskTimes | Section::Precedence | Section::Forward | Section::Backward => {
                    let Some(n) = n else {
                        return Err(p.err("section appears before <number of tasks>"));
                    };
                    if times.is_empty() {
                        times = vec![None; n];
                    }
                    let target = if section == Section::Forward {
                        &mut fwd
                    } else {
                        &mut bwd
                    };
                    if matches!(section, Section::Forward | Section::Backward) {
                        if target.is_some() {
                            return Err(p.err("duplicate setup section"));
                        }
                        *target = Some(vec![vec![0; n]; n]);
                    }
                }
                _ => {}
            }
            continue;
        }
        let toks = tokens(line);
        match section {
            Section::NumberOfTasks => {
                if n.is_some() {
                    return Err(p.err("number of tasks given twice"));
                }
                let v = p.int(toks[0])?;
                if v < 1 || v as usize > MAX_TASKS {
                    return Err(p.err(format!("task count {v} outside 1..={MAX_TASKS}")));
                }
                n = Some(v as usize);
            }
            Section::CycleTime => {
                let v = p.int(toks[0])?;
                if v < 1 {
                    return Err(p.err(format!("cycle time {v} must be positive")));
                }
                cycle_time = Some(v);
            }
            Section::NumberOfStations => {
                let v = p.int(toks[0])?;
                if v < 1 {
                    return Err(p.err(format!("station count {v} must be positive")));
                }
                station_count = Some(v as usize);
            }
            Section::TaskTimes => {
                let n = n.expect("checked at tag");
                if toks.len() != 2 {
                    return Err(p.err("expected `task time`"));
                }
                let i = p.task(toks[0], n)?;
                if times[i].is_some() {
                    return Err(p.err(format!("duplicate task id {}", i + 1)));
                }
                let t = p.int(toks[1])?;
                if t < 1 {
                    return Err(p.err(format!("task {} has non-positive time {t}", i + 1)));
                }
                times[i] = Some(t);
            }
            Section::Precedence => {
                let n = n.expect("checked at tag");
                if toks.len() != 2 {
                    return Err(p.err("expected `predecessor,successor`"));
                }
                let i = p.task(toks[0], n)?;
                let j = p.task(toks[1], n)?;
                if i == j {
                    return Err(p.err(format!("cycle in precedence: self-loop on task {}", i + 1)));
                }
                if seen_pairs.insert((i, j)) {
                    precedence.push((i, j));
                } else {
                    warnings.push(format!(
                        "line {}: duplicate precedence ({}, {})",
                        p.line,
                        i + 1,
                        j + 1
                    ));
                }
            }
            Section::Forward | Section::Backward => {
                let n = n.expect("checked at tag");
                let matrix = if section == Section::Forward {
                    fwd.as_mut()
                } else {
                    bwd.as_mut()
                }
                .expect("allocated at tag");
                if toks.len() == 3 {
                    let i = p.task(toks[0], n)?;
                    let j = p.task(toks[1], n)?;
                    matrix[i][j] = p.nonneg(toks[2])?;
                } else if toks.len() == n {
                    if matrix_row >= n {
                        return Err(p.err("too many matrix rows"));
                    }
                    for (j, tok) in toks.iter().enumerate() {
                        matrix[matrix_row][j] = p.nonneg(tok)?;
                    }
                    matrix_row += 1;
                } else {
                    return Err(p.err("expected `i,j,value` triplets or full matrix rows"));
                }
            }
            Section::Ignored | Section::Unknown => {}
            Section::End => unreachable!(),
        }
    }

    p.tag = "end";
    let Some(n) = n else {
        return Err(p.err("missing <number of tasks>"));
    };
    if !seen_end {
        warnings.push("missing <end> tag".to_string());
    }
    if times.is_empty() {
        return Err(p.err("missing <task times>"));
    }
    let task_times = times
        .iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| p.err(format!("no time given for task {}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    if topological_order(n, &precedence).is_none() {
        return Err(p.err("cycle in precedence relations"));
    }
    if fwd.is_none() {
        warnings.push("no forward setup section; forward setups default to 0".to_string());
    }
    if bwd.is_none() {
        warnings.push("no backward setup section; backward setups default to 0".to_string());
    }
    Ok((
        Instance {
            name: String::new(),
            alpha: None,
            task_times,
            precedence,
            fwd_setup: fwd.unwrap_or_else(|| vec![vec![0; n]; n]),
            bwd_setup: bwd.unwrap_or_else(|| vec![vec![0; n]; n]),
            cycle_time,
            station_count,
        },
        warnings,
    ))
}

/// Writes the `.alb` dialect read by [`parse_alb`]. Zero setups are omitted.
pub fn to_alb(inst: &Instance) -> String {
    let n = inst.n();
    let mut out = String::new();
    let _ = writeln!(out, "<number of tasks>\n{n}\n");
    if let Some(c) = inst.cycle_time {
        let _ = writeln!(out, "<cycle time>\n{c}\n");
    }
    if let Some(m) = inst.station_count {
        let _ = writeln!(out, "<number of stations>\n{m}\n");
    }
    out.push_str("<task times>\n");
    for (i, t) in inst.task_times.iter().enumerate() {
        let _ = writeln!(out, "{} {t}", i + 1);
    }
    out.push_str("\n<precedence relations>\n");
    for &(i, j) in &inst.precedence {
        let _ = writeln!(out, "{},{}", i + 1, j + 1);
    }
    for (tag, m) in [
        ("setup times forward", &inst.fwd_setup),
        ("setup times backward", &inst.bwd_setup),
    ] {
        let _ = writeln!(out, "\n<{tag}>");
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    let _ = writeln!(out, "{},{},{v}", i + 1, j + 1);
                }
            }
        }
    }
    out.push_str("\n<end>\n");
    out
}

// ---------------------------------------------------------------------------
// Canonical JSON document
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDocument {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<String>,
    tasks: usize,
    task_times: Vec<Time>,
    #[serde(default)]
    precedence: Vec<(usize, usize)>,
    #[serde(default)]
    forward_setups: Option<Vec<Vec<Time>>>,
    #[serde(default)]
    backward_setups: Option<Vec<Vec<Time>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cycle_time: Option<Time>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    station_count: Option<usize>,
}

/// Serializes to the canonical self-contained document (1-based task ids).
pub fn to_json(inst: &Instance) -> String {
    let doc = InstanceDocument {
        name: inst.name.clone(),
        alpha: inst.alpha.clone(),
        tasks: inst.n(),
        task_times: inst.task_times.clone(),
        precedence: inst
            .precedence
            .iter()
            .map(|&(i, j)| (i + 1, j + 1))
            .collect(),
        forward_setups: Some(inst.fwd_setup.clone()),
        backward_setups: Some(inst.bwd_setup.clone()),
        cycle_time: inst.cycle_time,
        station_count: inst.station_count,
    };
    serde_json::to_string_pretty(&doc).expect("instance document serializes")
}

/// Reads the canonical document; structural errors are rejected.
pub fn from_json(text: &str) -> Result<Instance, InstanceError> {
    let doc: InstanceDocument = serde_json::from_str(text)?;
    let n = doc.tasks;
    if doc.task_times.len() != n {
        return Err(InstanceError::Invalid(format!(
            "`tasks` is {n} but {} task times were given",
            doc.task_times.len()
        )));
    }
    let mut precedence = Vec::with_capacity(doc.precedence.len());
    for (i, j) in doc.precedence {
        if i < 1 || j < 1 || i > n || j > n {
            return Err(InstanceError::Invalid(format!(
                "precedence ({i}, {j}) out of range"
            )));
        }
        precedence.push((i - 1, j - 1));
    }
    let inst = Instance {
        name: doc.name,
        alpha: doc.alpha,
        task_times: doc.task_times,
        precedence,
        fwd_setup: doc.forward_setups.unwrap_or_else(|| vec![vec![0; n]; n]),
        bwd_setup: doc.backward_setups.unwrap_or_else(|| vec![vec![0; n]; n]),
        cycle_time: doc.cycle_time,
        station_count: doc.station_count,
    };
    let diag = validate_instance(&inst);
    if !diag.is_ok() {
        return Err(InstanceError::Invalid(diag.errors.join("; ")));
    }
    Ok(inst)
}

/// Semantic equality used by the round-trip checks: same data, precedence
/// compared as a set, name and label ignored.
pub fn same_problem(a: &Instance, b: &Instance) -> bool {
    let pa: HashSet<_> = a.precedence.iter().collect();
    let pb: HashSet<_> = b.precedence.iter().collect();
    a.task_times == b.task_times
        && pa == pb
        && a.fwd_setup == b.fwd_setup
        && a.bwd_setup == b.bwd_setup
        && a.cycle_time == b.cycle_time
        && a.station_count == b.station_count
}

/// Finds the setup-ratio label (`0.25`, `0.50`, `0.75`, `1.00`) encoded in a
/// path, e.g. `sbf2/alpha_0.50/jackson_c=14.alb` or `.../050/...`. Only the
/// two nearest directories are read.
pub fn alpha_from_path(path: &Path) -> Option<String> {
    let known: HashMap<&str, &str> = [
        ("0.25", "0.25"),
        ("0,25", "0.25"),
        ("025", "0.25"),
        ("0.5", "0.50"),
        ("0.50", "0.50"),
        ("0,50", "0.50"),
        ("050", "0.50"),
        ("0.75", "0.75"),
        ("0,75", "0.75"),
        ("075", "0.75"),
        ("1.00", "1.00"),
        ("1,00", "1.00"),
        ("1.0", "1.00"),
        ("100", "1.00"),
    ]
    .into_iter()
    .collect();
    for comp in path.parent()?.components().rev().take(2) {
        let s = comp.as_os_str().to_string_lossy();
        for piece in s.split(|c: char| !(c.is_ascii_digit() || c == '.' || c == ',')) {
            if let Some(label) = known.get(piece) {
                return Some(label.to_string());
            }
        }
    }
    None
}
