//! Exact solvers: branch-and-bound over conflict resolutions with the
//! classical max-flow value as node bound, and an exhaustive enumeration of
//! conflict-graph independent sets used as an oracle.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::greedy::{solve_greedy, DEFAULT_RESTARTS};
use crate::instance::{check_feasible, ArcId, ConflictIndex, FlowAssignment, Instance};
use crate::maxflow::max_flow_masked;

/// Enumeration limit for [`solve_bruteforce`].
pub const BRUTEFORCE_MAX_CONFLICTED_ARCS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// Stopped by a limit with `lower < upper`.
    Feasible,
    /// Stopped by a limit before any non-zero conflict-feasible flow was found.
    InfeasibleNonzero,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::InfeasibleNonzero => "infeasible-nonzero",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub best: FlowAssignment,
    pub lower: u64,
    pub upper: u64,
    pub status: SolveStatus,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    /// When the final incumbent was first recorded.
    pub time_to_best: Duration,
    /// `(nodes_explored, value)` at every incumbent improvement.
    pub incumbent_trace: Vec<(u64, u64)>,
}

/// How a node splits on a violated pair `{a, b}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    /// Children forbid `a` and `b` respectively.
    Pair,
    /// With `a` the pair arc of larger relaxed flow (ties: smaller index):
    /// children forbid `a`, and every conflict partner of `a` (including `b`).
    Activation,
}

#[derive(Debug, Clone)]
pub struct BnbOptions {
    pub time_limit: Duration,
    pub node_limit: Option<u64>,
    /// Greedy restarts used to seed the incumbent; 0 disables seeding.
    pub greedy_restarts: u32,
    pub greedy_seed: u64,
    pub branching: Branching,
}

impl Default for BnbOptions {
    fn default() -> Self {
        Self {
            time_limit: Duration::from_secs(60),
            node_limit: None,
            greedy_restarts: DEFAULT_RESTARTS,
            greedy_seed: 0,
            branching: Branching::Activation,
        }
    }
}

impl BnbOptions {
    pub fn with_limits(time_limit: Duration, node_limit: Option<u64>) -> Self {
        Self { time_limit, node_limit, ..Self::default() }
    }
}

/// Open node of the search tree. `bound` is the relaxation value of the
/// parent until the node itself is evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchNode {
    pub forbidden: Vec<ArcId>,
    pub bound: u64,
    pub depth: u32,
}

struct Queued {
    node: SearchNode,
    seq: u64,
}

impl Queued {
    fn key(&self) -> (u64, u32, Reverse<u64>) {
        (self.node.bound, self.node.depth, Reverse(self.seq))
    }
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Observer hook for tests and tracing.
pub trait SearchObserver {
    /// A node was evaluated; `parent_bound` is `None` at the root.
    fn evaluated(&mut self, _node: &SearchNode, _parent_bound: Option<u64>, _relaxed: &FlowAssignment) {}
    fn incumbent(&mut self, _sol: &FlowAssignment) {}
}

struct NoObserver;

impl SearchObserver for NoObserver {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no conflict pair has positive flow on both arcs outside the forbidden set")]
pub struct NoViolatedPair;

/// Picks the violated pair with the largest smaller flow, ties by pair index.
pub fn select_branch_pair(inst: &Instance, relaxed: &FlowAssignment, forbidden: &[bool]) -> Result<usize, NoViolatedPair> {
    let mut chosen: Option<(u64, usize)> = None;
    for (idx, pair) in inst.conflicts().iter().enumerate() {
        let [a, b] = pair.arcs();
        if forbidden[a] || forbidden[b] {
            continue;
        }
        let weight = relaxed.flow[a].min(relaxed.flow[b]);
        if weight == 0 {
            continue;
        }
        if chosen.is_none_or(|(w, _)| weight > w) {
            chosen = Some((weight, idx));
        }
    }
    chosen.map(|(_, idx)| idx).ok_or(NoViolatedPair)
}

fn conflict_free(inst: &Instance, sol: &FlowAssignment) -> bool {
    inst.conflicts().iter().all(|p| sol.flow[p.first()] == 0 || sol.flow[p.second()] == 0)
}

struct Search<'a, O: SearchObserver> {
    inst: &'a Instance,
    observer: &'a mut O,
    start: Instant,
    best: FlowAssignment,
    time_to_best: Duration,
    trace: Vec<(u64, u64)>,
    nodes: u64,
    seq: u64,
    open: BinaryHeap<Queued>,
    mask: Vec<bool>,
    conflicts: ConflictIndex,
    branching: Branching,
}

impl<O: SearchObserver> Search<'_, O> {
    fn record(&mut self, sol: FlowAssignment) {
        if sol.total <= self.best.total && !self.trace.is_empty() {
            return;
        }
        debug_assert!(check_feasible(self.inst, &sol).map(|v| v.is_ok()).unwrap_or(false));
        self.time_to_best = self.start.elapsed();
        self.trace.push((self.nodes, sol.total));
        self.observer.incumbent(&sol);
        self.best = sol;
    }

    fn push(&mut self, node: SearchNode) {
        self.open.push(Queued { node, seq: self.seq });
        self.seq += 1;
    }

    /// Evaluates one node: closes it when its relaxation is conflict-free or
    /// cannot beat the incumbent, otherwise branches on a violated pair.
    fn evaluate(&mut self, mut node: SearchNode, parent_bound: Option<u64>) {
        self.mask.iter_mut().for_each(|m| *m = false);
        for &a in &node.forbidden {
            self.mask[a] = true;
        }
        let relaxed = max_flow_masked(self.inst, &self.mask);
        self.nodes += 1;
        node.bound = relaxed.total;
        self.observer.evaluated(&node, parent_bound, &relaxed);

        if conflict_free(self.inst, &relaxed) {
            if relaxed.total > self.best.total {
                self.record(relaxed);
            }
            return;
        }
        if node.bound <= self.best.total {
            return;
        }
        let pair = select_branch_pair(self.inst, &relaxed, &self.mask)
            .expect("a flow violating some conflict has a violated unforbidden pair");
        let [a, b] = self.inst.conflicts()[pair].arcs();
        let children: [Vec<ArcId>; 2] = match self.branching {
            Branching::Pair => [vec![a], vec![b]],
            Branching::Activation => {
                let keep = if relaxed.flow[b] > relaxed.flow[a] { b } else { a };
                let partners = self.conflicts.partners(keep).iter().copied().filter(|&p| !self.mask[p]).collect();
                [vec![keep], partners]
            }
        };
        for extra in children {
            let mut forbidden = node.forbidden.clone();
            forbidden.extend(extra);
            forbidden.sort_unstable();
            self.push(SearchNode { forbidden, bound: node.bound, depth: node.depth + 1 });
        }
    }
}

/// Best-first branch-and-bound with default options and the given limits.
pub fn solve_bnb(inst: &Instance, time_limit: Duration, node_limit: Option<u64>) -> SolveOutcome {
    solve_bnb_with(inst, &BnbOptions::with_limits(time_limit, node_limit))
}

pub fn solve_bnb_with(inst: &Instance, options: &BnbOptions) -> SolveOutcome {
    solve_bnb_observed(inst, options, &mut NoObserver)
}

/// Runs the search, reporting every evaluated node and incumbent to `observer`.
pub fn solve_bnb_observed<O: SearchObserver>(inst: &Instance, options: &BnbOptions, observer: &mut O) -> SolveOutcome {
    let mut search = Search {
        inst,
        observer,
        start: Instant::now(),
        best: FlowAssignment::zero(inst.arc_count()),
        time_to_best: Duration::ZERO,
        trace: Vec::new(),
        nodes: 0,
        seq: 0,
        open: BinaryHeap::new(),
        mask: vec![false; inst.arc_count()],
        conflicts: ConflictIndex::new(inst),
        branching: options.branching,
    };
    // the zero flow is the initial incumbent
    search.record(FlowAssignment::zero(inst.arc_count()));
    if options.greedy_restarts > 0 {
        let seed = solve_greedy(inst, options.greedy_seed, options.greedy_restarts);
        search.record(seed);
    }

    search.evaluate(SearchNode { forbidden: Vec::new(), bound: u64::MAX, depth: 0 }, None);

    let mut stopped = false;
    loop {
        // drop nodes that can no longer improve on the incumbent
        while search.open.peek().is_some_and(|q| q.node.bound <= search.best.total) {
            search.open.pop();
        }
        if search.open.is_empty() {
            break;
        }
        let out_of_nodes = options.node_limit.is_some_and(|limit| search.nodes >= limit);
        if out_of_nodes || search.start.elapsed() >= options.time_limit {
            stopped = true;
            break;
        }
        let Queued { node, .. } = search.open.pop().expect("checked non-empty");
        let parent_bound = node.bound;
        search.evaluate(node, Some(parent_bound));
    }

    let lower = search.best.total;
    let upper = if stopped {
        search.open.peek().map_or(lower, |q| q.node.bound.max(lower))
    } else {
        lower
    };
    let status = match (stopped, lower) {
        (false, _) => SolveStatus::Optimal,
        (true, 0) => SolveStatus::InfeasibleNonzero,
        (true, _) => SolveStatus::Feasible,
    };
    SolveOutcome {
        best: search.best,
        lower,
        upper,
        status,
        nodes_explored: search.nodes,
        elapsed: search.start.elapsed(),
        time_to_best: search.time_to_best,
        incumbent_trace: search.trace,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{found} arcs take part in conflicts; enumeration is limited to {limit}")]
pub struct TooManyConflictedArcs {
    pub found: usize,
    pub limit: usize,
}

/// Exhaustive optimum: for every independent set `T` of the conflict graph
/// over the conflicted arcs `S`, solve max flow with `S \ T` removed.
pub fn solve_bruteforce(inst: &Instance) -> Result<SolveOutcome, TooManyConflictedArcs> {
    let start = Instant::now();
    let involved = inst.conflicted_arcs();
    if involved.len() > BRUTEFORCE_MAX_CONFLICTED_ARCS {
        return Err(TooManyConflictedArcs { found: involved.len(), limit: BRUTEFORCE_MAX_CONFLICTED_ARCS });
    }
    let conflicts = ConflictIndex::new(inst);
    let mut enumerator = Enumerator {
        inst,
        conflicts: &conflicts,
        involved: &involved,
        chosen: Vec::with_capacity(involved.len()),
        disabled: vec![false; inst.arc_count()],
        best: None,
        best_at: Duration::ZERO,
        evaluated: 0,
        start,
    };
    for &a in &involved {
        enumerator.disabled[a] = true;
    }
    enumerator.visit(0);
    let best = enumerator.best.expect("the empty set is always independent");
    Ok(SolveOutcome {
        lower: best.total,
        upper: best.total,
        status: SolveStatus::Optimal,
        nodes_explored: enumerator.evaluated,
        elapsed: start.elapsed(),
        time_to_best: enumerator.best_at,
        incumbent_trace: vec![(enumerator.evaluated, best.total)],
        best,
    })
}

struct Enumerator<'a> {
    inst: &'a Instance,
    conflicts: &'a ConflictIndex,
    involved: &'a [ArcId],
    chosen: Vec<ArcId>,
    disabled: Vec<bool>,
    best: Option<FlowAssignment>,
    best_at: Duration,
    evaluated: u64,
    start: Instant,
}

impl Enumerator<'_> {
    fn visit(&mut self, depth: usize) {
        if depth == self.involved.len() {
            let sol = max_flow_masked(self.inst, &self.disabled);
            self.evaluated += 1;
            if self.best.as_ref().is_none_or(|b| sol.total > b.total) {
                self.best = Some(sol);
                self.best_at = self.start.elapsed();
            }
            return;
        }
        // exclude first so the empty set is evaluated before anything else
        self.visit(depth + 1);
        let arc = self.involved[depth];
        if self.chosen.iter().all(|&c| !self.conflicts.in_conflict(c, arc)) {
            self.chosen.push(arc);
            self.disabled[arc] = false;
            self.visit(depth + 1);
            self.disabled[arc] = true;
            self.chosen.pop();
        }
    }
}

/// Relaxation used by the `maxflow-relax` method: the classical max flow
/// ignoring conflicts, reported as an upper bound. The lower bound is the
/// relaxed value when that flow happens to be conflict-free and 0 otherwise.
pub fn solve_relaxation(inst: &Instance) -> SolveOutcome {
    let start = Instant::now();
    let relaxed = max_flow_masked(inst, &vec![false; inst.arc_count()]);
    let upper = relaxed.total;
    let feasible = conflict_free(inst, &relaxed);
    let best = if feasible { relaxed } else { FlowAssignment::zero(inst.arc_count()) };
    let lower = best.total;
    let status = match (lower == upper, lower) {
        (true, _) => SolveStatus::Optimal,
        (false, 0) => SolveStatus::InfeasibleNonzero,
        (false, _) => SolveStatus::Feasible,
    };
    let elapsed = start.elapsed();
    SolveOutcome {
        best,
        lower,
        upper,
        status,
        nodes_explored: 1,
        elapsed,
        time_to_best: elapsed,
        incumbent_trace: vec![(1, lower)],
    }
}

impl SolveOutcome {
    /// Bound ordering, status/bound agreement and a checker-approved incumbent.
    pub fn is_consistent(&self, inst: &Instance) -> bool {
        self.lower <= self.upper
            && (self.status == SolveStatus::Optimal) == (self.lower == self.upper)
            && self.best.total == self.lower
            && check_feasible(inst, &self.best).map(|v| v.is_ok()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{parse_instance, Arc};
    use crate::maxflow::max_flow;

    fn example7() -> Instance {
        parse_instance(include_str!("../fixtures/example7.txt")).unwrap()
    }

    fn instance(n: usize, arcs: &[(usize, usize, u64)], conflicts: Vec<(usize, usize)>) -> Instance {
        let arcs = arcs.iter().map(|&(tail, head, capacity)| Arc { tail, head, capacity }).collect();
        Instance::new(n, 0, n - 1, arcs, conflicts).unwrap()
    }

    fn unseeded(time: u64) -> BnbOptions {
        BnbOptions { greedy_restarts: 0, ..BnbOptions::with_limits(Duration::from_secs(time), None) }
    }

    #[test]
    fn example7_optimum_is_five() {
        let inst = example7();
        for options in [BnbOptions::default(), unseeded(10)] {
            let out = solve_bnb_with(&inst, &options);
            assert_eq!(out.status, SolveStatus::Optimal);
            assert_eq!((out.lower, out.upper), (5, 5));
            assert!(out.is_consistent(&inst));
        }
        let brute = solve_bruteforce(&inst).unwrap();
        assert_eq!(brute.lower, 5);
        assert!(brute.is_consistent(&inst));
    }

    #[test]
    fn conflict_free_needs_one_node() {
        let inst = instance(4, &[(0, 1, 3), (1, 3, 2), (0, 2, 4), (2, 3, 5), (1, 2, 1)], vec![]);
        let out = solve_bnb(&inst, Duration::from_secs(1), None);
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.lower, max_flow(&inst, &[]).total);
        assert_eq!(out.nodes_explored, 1);
        let brute = solve_bruteforce(&inst).unwrap();
        assert_eq!(brute.nodes_explored, 1);
        assert_eq!(brute.lower, 7);
    }

    #[test]
    fn fully_conflicting_source_and_sink_arcs_give_zero() {
        // every arc out of s conflicts with every arc into t
        let arcs = [(0, 1, 3), (0, 2, 3), (1, 3, 3), (2, 3, 3)];
        let inst = instance(4, &arcs, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        let brute = solve_bruteforce(&inst).unwrap();
        assert_eq!(brute.lower, 0);
        assert_eq!(brute.status, SolveStatus::Optimal);
        let out = solve_bnb(&inst, Duration::from_secs(1), None);
        assert_eq!((out.lower, out.upper, out.status), (0, 0, SolveStatus::Optimal));
    }

    #[test]
    fn bruteforce_rejects_large_conflict_sets() {
        let n = 23;
        let arcs: Vec<_> = (1..n - 1).map(|v| (0, v, 1)).chain((1..n - 1).map(|v| (v, n - 1, 1))).collect();
        // 21 first-layer arcs, each conflicting with the next
        let conflicts = (0..21).map(|i| (i, i + 1)).collect();
        let inst = instance(n, &arcs, conflicts);
        assert_eq!(solve_bruteforce(&inst).unwrap_err(), TooManyConflictedArcs { found: 22, limit: 20 });
    }

    #[test]
    fn branch_pair_selection() {
        let inst = instance(
            5,
            &[(0, 1, 9), (0, 2, 9), (0, 3, 9), (1, 4, 9), (2, 4, 9), (3, 4, 9)],
            vec![(0, 1), (1, 2), (0, 2)],
        );
        let flow = |f: [u64; 6]| FlowAssignment { flow: f.to_vec(), total: 0 };
        let none = vec![false; 6];
        // min-flows: pair0 = 1, pair1 = 3, pair2 = 1
        assert_eq!(select_branch_pair(&inst, &flow([1, 5, 3, 0, 0, 0]), &none), Ok(1));
        // only pair 2 violated
        assert_eq!(select_branch_pair(&inst, &flow([2, 0, 4, 0, 0, 0]), &none), Ok(2));
        // pairs 0 and 2 tie at 2
        assert_eq!(select_branch_pair(&inst, &flow([2, 2, 2, 0, 0, 0]), &none), Ok(0));
        let mut forbidden = none.clone();
        forbidden[1] = true;
        assert_eq!(select_branch_pair(&inst, &flow([2, 2, 2, 0, 0, 0]), &forbidden), Ok(2));
        assert_eq!(select_branch_pair(&inst, &flow([2, 0, 0, 0, 0, 0]), &none), Err(NoViolatedPair));
    }

    #[test]
    fn node_limit_reports_valid_bounds() {
        let inst = example7();
        let out = solve_bnb_with(&inst, &BnbOptions { node_limit: Some(1), ..unseeded(10) });
        assert_eq!(out.nodes_explored, 1);
        assert_eq!(out.status, SolveStatus::InfeasibleNonzero);
        assert_eq!((out.lower, out.upper), (0, 9));
        assert!(out.is_consistent(&inst));
    }

    #[test]
    fn relaxation_method_bounds() {
        let out = solve_relaxation(&example7());
        assert_eq!((out.lower, out.upper), (0, 9));
        let inst = instance(2, &[(0, 1, 5)], vec![]);
        let out = solve_relaxation(&inst);
        assert_eq!((out.lower, out.upper, out.status), (5, 5, SolveStatus::Optimal));
    }

    #[test]
    fn deterministic_trace() {
        let inst = example7();
        let a = solve_bnb_with(&inst, &unseeded(10));
        let b = solve_bnb_with(&inst, &unseeded(10));
        assert_eq!(a.nodes_explored, b.nodes_explored);
        assert_eq!(a.incumbent_trace, b.incumbent_trace);
        assert_eq!(a.best, b.best);
    }
}
