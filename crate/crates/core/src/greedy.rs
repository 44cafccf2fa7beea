//! Conflict-aware augmenting-path heuristic.
//!
//! Each restart repeatedly augments along a fewest-arc residual path that
//! avoids blocked arcs. An arc that first receives flow is committed: its
//! conflict partners are blocked for the rest of the restart, even if its flow
//! later drops back to zero. Restart 0 prefers the largest bottleneck among
//! shortest paths and then the lexicographically smallest arc-index sequence;
//! later restarts replace arc indices with a seeded random ranking.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::{ArcId, ConflictIndex, FlowAssignment, Instance};
use crate::maxflow::{ResidualId, ResidualNetwork};

pub const DEFAULT_RESTARTS: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub best: FlowAssignment,
    /// Index of the first restart that reached the best value.
    pub best_restart: u32,
    pub restart_values: Vec<u64>,
}

/// Best conflict-feasible flow over `restarts` runs. Zero restarts yield the
/// zero flow.
pub fn solve_greedy(inst: &Instance, seed: u64, restarts: u32) -> FlowAssignment {
    solve_greedy_detailed(inst, seed, restarts).best
}

pub fn solve_greedy_detailed(inst: &Instance, seed: u64, restarts: u32) -> GreedyOutcome {
    let conflicts = ConflictIndex::new(inst);
    let mut best = FlowAssignment::zero(inst.arc_count());
    let mut best_restart = 0;
    let mut restart_values = Vec::with_capacity(restarts as usize);
    for r in 0..restarts {
        let sol = run_restart(inst, &conflicts, &restart_ranking(inst.arc_count(), seed, r), r == 0);
        restart_values.push(sol.total);
        if sol.total > best.total {
            best = sol;
            best_restart = r;
        }
    }
    GreedyOutcome { best, best_restart, restart_values }
}

/// Tie-break ranking of arcs for one restart: identity for restart 0, a
/// ChaCha8 shuffle on stream `restart` of `seed` otherwise.
fn restart_ranking(arc_count: usize, seed: u64, restart: u32) -> Vec<u32> {
    let mut order: Vec<u32> = (0..arc_count as u32).collect();
    if restart > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64);
        order.shuffle(&mut rng);
    }
    let mut rank = vec![0u32; arc_count];
    for (pos, &a) in order.iter().enumerate() {
        rank[a as usize] = pos as u32;
    }
    rank
}

struct HeuristicState<'a> {
    net: ResidualNetwork<'a>,
    conflicts: &'a ConflictIndex,
    active: Vec<bool>,
    blocked: Vec<bool>,
    /// Arcs dropped because they conflicted with an earlier arc of a path.
    discarded: Vec<bool>,
}

impl<'a> HeuristicState<'a> {
    fn usable(&self, r: ResidualId) -> bool {
        if self.net.residual(r) == 0 {
            return false;
        }
        let a = ResidualNetwork::arc_of(r);
        !ResidualNetwork::is_forward(r) || !(self.blocked[a] || self.discarded[a])
    }

    fn activate(&mut self, a: ArcId) {
        self.active[a] = true;
        self.blocked[a] = false;
        for &p in self.conflicts.partners(a) {
            if !self.active[p] {
                self.blocked[p] = true;
            }
        }
    }
}

fn run_restart(inst: &Instance, conflicts: &ConflictIndex, rank: &[u32], prefer_bottleneck: bool) -> FlowAssignment {
    let m = inst.arc_count();
    let mut state = HeuristicState {
        net: ResidualNetwork::new(inst, &vec![false; m]),
        conflicts,
        active: vec![false; m],
        blocked: vec![false; m],
        discarded: vec![false; m],
    };
    let n = inst.node_count();
    let mut from_s = vec![usize::MAX; n];
    let mut to_t = vec![usize::MAX; n];
    let mut best = vec![0u64; n];
    let mut order = Vec::with_capacity(n);

    while let Some(path) =
        shortest_path(&state, rank, prefer_bottleneck, &mut from_s, &mut to_t, &mut best, &mut order)
    {
        let fresh: Vec<ArcId> = path
            .iter()
            .filter(|&&r| ResidualNetwork::is_forward(r) && !state.active[ResidualNetwork::arc_of(r)])
            .map(|&r| ResidualNetwork::arc_of(r))
            .collect();
        if let Some(late) = first_internal_conflict(conflicts, &fresh) {
            state.discarded[late] = true;
            continue;
        }
        let bottleneck = path.iter().map(|&r| state.net.residual(r)).min().unwrap_or(0);
        for &r in &path {
            state.net.push(r, bottleneck);
        }
        for a in fresh {
            state.activate(a);
        }
    }
    debug_assert!(inst.conflicts().iter().all(|p| !(state.active[p.first()] && state.active[p.second()])));
    state.net.assignment()
}

/// The later arc of the first conflicting pair among `arcs`, in path order.
fn first_internal_conflict(conflicts: &ConflictIndex, arcs: &[ArcId]) -> Option<ArcId> {
    for (j, &b) in arcs.iter().enumerate() {
        if arcs[..j].iter().any(|&a| conflicts.in_conflict(a, b)) {
            return Some(b);
        }
    }
    None
}

fn tie_key(rank: &[u32], r: ResidualId) -> (u32, bool) {
    (rank[ResidualNetwork::arc_of(r)], !ResidualNetwork::is_forward(r))
}

#[allow(clippy::too_many_arguments)]
fn shortest_path(
    state: &HeuristicState<'_>,
    rank: &[u32],
    prefer_bottleneck: bool,
    from_s: &mut [usize],
    to_t: &mut [usize],
    best: &mut [u64],
    order: &mut Vec<usize>,
) -> Option<Vec<ResidualId>> {
    let net = &state.net;
    let inst = net.instance();
    let (s, t) = (inst.source(), inst.sink());

    from_s.iter_mut().for_each(|d| *d = usize::MAX);
    from_s[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &r in net.adjacency(v) {
            let w = net.head(r);
            if from_s[w] == usize::MAX && state.usable(r) {
                from_s[w] = from_s[v] + 1;
                queue.push_back(w);
            }
        }
    }
    if from_s[t] == usize::MAX {
        return None;
    }
    let length = from_s[t];

    // backward search: for each r leaving w, r ^ 1 enters w
    to_t.iter_mut().for_each(|d| *d = usize::MAX);
    to_t[t] = 0;
    order.clear();
    order.push(t);
    queue.push_back(t);
    while let Some(w) = queue.pop_front() {
        for &back in net.adjacency(w) {
            let r = back ^ 1;
            let v = net.tail(r);
            if to_t[v] == usize::MAX && state.usable(r) {
                to_t[v] = to_t[w] + 1;
                order.push(v);
                queue.push_back(v);
            }
        }
    }
    let admissible = |r: ResidualId, from: &[usize], to: &[usize]| {
        let (v, w) = (net.tail(r), net.head(r));
        from[v] != usize::MAX
            && to[w] != usize::MAX
            && from[v] + 1 + to[w] == length
            && to[w] + 1 == to[v]
            && state.usable(r)
    };

    let threshold = if prefer_bottleneck {
        best.iter_mut().for_each(|b| *b = 0);
        best[t] = u64::MAX;
        for &v in order.iter().skip(1) {
            if from_s[v] == usize::MAX || from_s[v] + to_t[v] != length {
                continue;
            }
            best[v] = net
                .adjacency(v)
                .iter()
                .filter(|&&r| admissible(r, from_s, to_t))
                .map(|&r| net.residual(r).min(best[net.head(r)]))
                .max()
                .unwrap_or(0);
        }
        best[s]
    } else {
        1
    };

    let mut path = Vec::with_capacity(length);
    let mut v = s;
    while v != t {
        let next = net
            .adjacency(v)
            .iter()
            .copied()
            .filter(|&r| admissible(r, from_s, to_t))
            .filter(|&r| !prefer_bottleneck || net.residual(r).min(best[net.head(r)]) >= threshold)
            .min_by_key(|&r| tie_key(rank, r))?;
        path.push(next);
        v = net.head(next);
    }
    Some(path)
}
