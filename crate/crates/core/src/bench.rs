//! Benchmark harness: method dispatch, result records, gap metrics and the
//! CSV table written by `mfpc bench`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bnb::{solve_bnb_with, solve_bruteforce, solve_relaxation, BnbOptions, SolveOutcome, SolveStatus};
use crate::greedy::{solve_greedy_detailed, DEFAULT_RESTARTS};
use crate::instance::{
    check_feasible, parse_instance, parse_solution, FlowAssignment, Instance, InstanceError, SolutionError, Verdict,
};
use crate::maxflow::max_flow;

pub const CSV_HEADER: [&str; 11] = [
    "instance_id",
    "n",
    "m",
    "w",
    "method",
    "lower",
    "upper",
    "status",
    "time_total_ms",
    "time_first_best_ms",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Bnb,
    Brute,
    Greedy,
    MaxflowRelax,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Bnb, Method::Brute, Method::Greedy, Method::MaxflowRelax];

    pub fn name(self) -> &'static str {
        match self {
            Method::Bnb => "bnb",
            Method::Brute => "brute",
            Method::Greedy => "greedy",
            Method::MaxflowRelax => "maxflow-relax",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| BenchError::UnknownMethod(s.to_string()))
    }
}

/// Parses a comma-separated method list. An empty list is rejected.
pub fn parse_methods(list: &str) -> Result<Vec<Method>, BenchError> {
    let methods = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Method::from_str)
        .collect::<Result<Vec<_>, _>>()?;
    if methods.is_empty() {
        return Err(BenchError::UnknownMethod(String::new()));
    }
    Ok(methods)
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown method `{0}` (expected bnb, brute, greedy or maxflow-relax)")]
    UnknownMethod(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Instance { path: PathBuf, source: InstanceError },
    #[error("{path}: {source}")]
    Solution { path: PathBuf, source: SolutionError },
    #[error("{instance}/{method}: solver returned an assignment rejected by the checker")]
    UnverifiedWitness { instance: String, method: Method },
    #[error("gap undefined for a best-known bound of 0")]
    ZeroBestKnown,
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub fn gap_lb(bk_lb: u64, lb: u64) -> Result<f64, BenchError> {
    if bk_lb == 0 {
        return Err(BenchError::ZeroBestKnown);
    }
    Ok(100.0 * (bk_lb as f64 - lb as f64) / bk_lb as f64)
}

pub fn gap_ub(bk_ub: u64, ub: u64) -> Result<f64, BenchError> {
    if bk_ub == 0 {
        return Err(BenchError::ZeroBestKnown);
    }
    Ok(100.0 * (ub as f64 - bk_ub as f64) / bk_ub as f64)
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub time_limit: Duration,
    pub node_limit: Option<u64>,
    pub seed: u64,
    pub restarts: u32,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { time_limit: Duration::from_secs(60), node_limit: None, seed: 0, restarts: DEFAULT_RESTARTS }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub instance_id: String,
    pub n: usize,
    pub m: usize,
    pub w: usize,
    pub method: Method,
    pub lower: u64,
    pub upper: u64,
    pub status: String,
    pub time_total_ms: f64,
    pub time_first_best_ms: f64,
    pub seed: u64,
}

impl BenchRecord {
    fn fields(&self) -> [String; 11] {
        [
            self.instance_id.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.w.to_string(),
            self.method.to_string(),
            self.lower.to_string(),
            self.upper.to_string(),
            self.status.clone(),
            format!("{:.3}", self.time_total_ms),
            format!("{:.3}", self.time_first_best_ms),
            self.seed.to_string(),
        ]
    }
}

/// A record together with the assignment that witnesses its lower bound.
#[derive(Debug, Clone)]
pub struct BenchRun {
    pub record: BenchRecord,
    pub witness: FlowAssignment,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Runs one method. Greedy reports the relaxation value as its upper bound;
/// brute force on instances beyond its enumeration limit is reported as
/// `skipped` with the zero flow and the relaxation bound.
pub fn solve_method(inst: &Instance, method: Method, config: &BenchConfig) -> SolveOutcome {
    match method {
        Method::Bnb => solve_bnb_with(
            inst,
            &BnbOptions {
                time_limit: config.time_limit,
                node_limit: config.node_limit,
                greedy_restarts: config.restarts,
                greedy_seed: config.seed,
                ..BnbOptions::default()
            },
        ),
        Method::Brute => solve_bruteforce(inst).unwrap_or_else(|_| {
            let mut out = solve_relaxation(inst);
            out.best = FlowAssignment::zero(inst.arc_count());
            out.lower = 0;
            out.status = if out.upper == 0 { SolveStatus::Optimal } else { SolveStatus::InfeasibleNonzero };
            out
        }),
        Method::Greedy => {
            let start = Instant::now();
            let outcome = solve_greedy_detailed(inst, config.seed, config.restarts);
            let elapsed = start.elapsed();
            let upper = max_flow(inst, &[]).total;
            let lower = outcome.best.total;
            let status = match (lower == upper, lower) {
                (true, _) => SolveStatus::Optimal,
                (false, 0) => SolveStatus::InfeasibleNonzero,
                (false, _) => SolveStatus::Feasible,
            };
            // restarts are equally expensive; attribute the best proportionally
            let runs = outcome.restart_values.len().max(1) as u32;
            let time_to_best = elapsed * (outcome.best_restart + 1) / runs;
            SolveOutcome {
                best: outcome.best,
                lower,
                upper,
                status,
                nodes_explored: outcome.restart_values.len() as u64,
                elapsed,
                time_to_best: time_to_best.min(elapsed),
                incumbent_trace: vec![(outcome.best_restart as u64, lower)],
            }
        }
        Method::MaxflowRelax => solve_relaxation(inst),
    }
}

fn status_label(method: Method, inst: &Instance, out: &SolveOutcome) -> String {
    if method == Method::Brute && inst.conflicted_arcs().len() > crate::bnb::BRUTEFORCE_MAX_CONFLICTED_ARCS {
        "skipped".into()
    } else {
        out.status.to_string()
    }
}

/// Runs one instance under every method, verifying each witness with the
/// checker before its record is produced.
pub fn bench_instance(
    instance_id: &str,
    inst: &Instance,
    methods: &[Method],
    config: &BenchConfig,
) -> Result<Vec<BenchRun>, BenchError> {
    let mut runs = Vec::with_capacity(methods.len());
    for &method in methods {
        let out = solve_method(inst, method, config);
        let verdict = check_feasible(inst, &out.best).map_err(|_| BenchError::UnverifiedWitness {
            instance: instance_id.to_string(),
            method,
        })?;
        if !verdict.is_ok() || out.best.total != out.lower || out.lower > out.upper {
            return Err(BenchError::UnverifiedWitness { instance: instance_id.to_string(), method });
        }
        let record = BenchRecord {
            instance_id: instance_id.to_string(),
            n: inst.node_count(),
            m: inst.arc_count(),
            w: inst.conflict_count(),
            method,
            lower: out.lower,
            upper: out.upper,
            status: status_label(method, inst, &out),
            time_total_ms: ms(out.elapsed),
            time_first_best_ms: ms(out.time_to_best.min(out.elapsed)),
            seed: config.seed,
        };
        runs.push(BenchRun { record, witness: out.best });
    }
    Ok(runs)
}

pub fn instance_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

pub fn read_instance(path: &Path) -> Result<Instance, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })?;
    parse_instance(&text).map_err(|source| BenchError::Instance { path: path.to_path_buf(), source })
}

/// Runs every method on every instance, in (instance, method) order.
pub fn run_bench(paths: &[PathBuf], methods: &[Method], config: &BenchConfig) -> Result<Vec<BenchRun>, BenchError> {
    if methods.is_empty() {
        return Err(BenchError::UnknownMethod(String::new()));
    }
    let mut runs = Vec::new();
    for path in paths {
        let inst = read_instance(path)?;
        runs.extend(bench_instance(&instance_id(path), &inst, methods, config)?);
    }
    Ok(runs)
}

pub fn write_csv<W: Write>(records: impl IntoIterator<Item = impl std::borrow::Borrow<BenchRecord>>, out: W) -> Result<(), BenchError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for r in records {
        writer.write_record(r.borrow().fields())?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Best-known bounds per instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BestKnown {
    pub lower: u64,
    pub upper: u64,
}

/// Best bounds across all records of the same instance.
pub fn best_known_from(records: &[BenchRecord]) -> BTreeMap<String, BestKnown> {
    let mut out: BTreeMap<String, BestKnown> = BTreeMap::new();
    for r in records {
        out.entry(r.instance_id.clone())
            .and_modify(|bk| {
                bk.lower = bk.lower.max(r.lower);
                bk.upper = bk.upper.min(r.upper);
            })
            .or_insert(BestKnown { lower: r.lower, upper: r.upper });
    }
    out
}

/// Reads `instance_id,bk_lb,bk_ub` rows.
pub fn read_best_known(path: &Path) -> Result<BTreeMap<String, BestKnown>, BenchError> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut out = BTreeMap::new();
    for row in reader.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or_default().trim().to_string();
        let parse = |i: usize| {
            field(i).parse::<u64>().map_err(|e| BenchError::Io {
                path: path.to_path_buf(),
                source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
            })
        };
        out.insert(field(0), BestKnown { lower: parse(1)?, upper: parse(2)? });
    }
    Ok(out)
}

/// Writes `instance_id,method,bk_lb,bk_ub,gap_lb,gap_ub`; a gap against a
/// zero best-known bound is left empty.
pub fn write_gaps<W: Write>(
    records: &[BenchRecord],
    best_known: &BTreeMap<String, BestKnown>,
    out: W,
) -> Result<(), BenchError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["instance_id", "method", "bk_lb", "bk_ub", "gap_lb", "gap_ub"])?;
    for r in records {
        let Some(bk) = best_known.get(&r.instance_id) else { continue };
        let fmt_gap = |g: Result<f64, BenchError>| g.map(|v| format!("{v:.4}")).unwrap_or_default();
        writer.write_record([
            r.instance_id.clone(),
            r.method.to_string(),
            bk.lower.to_string(),
            bk.upper.to_string(),
            fmt_gap(gap_lb(bk.lower, r.lower)),
            fmt_gap(gap_ub(bk.upper, r.upper)),
        ])?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub total: u64,
    pub verdict: Verdict,
}

pub fn verify(instance: &Path, solution: &Path) -> Result<VerifyReport, BenchError> {
    let inst = read_instance(instance)?;
    let text =
        std::fs::read_to_string(solution).map_err(|source| BenchError::Io { path: solution.to_path_buf(), source })?;
    let sol = parse_solution(&text, inst.arc_count())
        .map_err(|source| BenchError::Solution { path: solution.to_path_buf(), source })?;
    let verdict = check_feasible(&inst, &sol).expect("parsed solutions have one entry per arc");
    Ok(VerifyReport { total: sol.total, verdict })
}
