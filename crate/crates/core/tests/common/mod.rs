#![allow(dead_code)]

use mfpc::instance::{Arc, ArcId, FlowAssignment, Instance};
use mfpc::{build_model, validate_against_model, ActivationPattern};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE7: &str = include_str!("../../fixtures/example7.txt");
pub const EXAMPLE7_SOLUTION: &str = include_str!("../../fixtures/example7.sol");

pub fn example7() -> Instance {
    mfpc::parse_instance(EXAMPLE7).unwrap()
}

/// Random instance with `n <= max_nodes`, `m <= max_arcs`, `w <= max_conflicts`.
/// Source 0, sink n-1; roughly a third of the arcs touch the source or sink
/// so that most instances carry flow.
pub fn random_small(seed: u64, max_nodes: usize, max_arcs: usize, max_conflicts: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_nodes);
    let mut pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
    pairs.shuffle(&mut rng);
    let t = n - 1;
    let mut keyed: Vec<(u8, (usize, usize))> =
        pairs.into_iter().map(|(u, v)| (!(u == 0 || v == t) as u8 * rng.gen_range(0..3u8), (u, v))).collect();
    keyed.sort_by_key(|&(k, _)| k);
    let pairs: Vec<(usize, usize)> = keyed.into_iter().map(|(_, p)| p).collect();
    let m = rng.gen_range(1..=max_arcs.min(pairs.len()));
    let arcs: Vec<Arc> =
        pairs[..m].iter().map(|&(tail, head)| Arc { tail, head, capacity: rng.gen_range(1..=9) }).collect();
    let mut candidates: Vec<(ArcId, ArcId)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    candidates.shuffle(&mut rng);
    let w = rng.gen_range(0..=max_conflicts.min(candidates.len()));
    candidates.truncate(w);
    Instance::new(n, 0, t, arcs, candidates).unwrap()
}

/// Oracle-scale draw: n <= 10, m <= 30, w <= 8.
pub fn oracle_instance(seed: u64) -> Instance {
    random_small(seed, 10, 30, 8)
}

/// Minimum s-t cut by enumerating every node subset containing the source
/// and not the sink, over the arcs not disabled. Independent of any
/// augmenting-path code.
pub fn min_cut_by_enumeration(inst: &Instance, disabled: &[ArcId]) -> u64 {
    let n = inst.node_count();
    assert!(n <= 16, "enumeration oracle is for small instances");
    let (s, t) = (inst.source(), inst.sink());
    let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best = u64::MAX;
    for mask in 0u32..(1 << others.len()) {
        let mut side = vec![false; n];
        side[s] = true;
        for (i, &v) in others.iter().enumerate() {
            side[v] = mask >> i & 1 == 1;
        }
        let cap: u64 = inst
            .arcs()
            .iter()
            .enumerate()
            .filter(|(a, arc)| !disabled.contains(a) && side[arc.tail] && !side[arc.head])
            .map(|(_, arc)| arc.capacity)
            .sum();
        best = best.min(cap);
    }
    best
}

/// Optimum of the MILP model by enumerating every binary activation vector
/// that satisfies the conflict rows; for each, the flow part is filled by
/// classical max flow on the active arcs and the full assignment must pass
/// the model validator before its objective counts.
pub fn model_optimum_by_enumeration(inst: &Instance) -> u64 {
    let m = inst.arc_count();
    assert!(m <= 20);
    let model = build_model(inst);
    let mut best = 0;
    for bits in 0u32..(1 << m) {
        let active: Vec<bool> = (0..m).map(|a| bits >> a & 1 == 1).collect();
        if inst.conflicts().iter().any(|p| active[p.first()] && active[p.second()]) {
            continue;
        }
        let disabled: Vec<ArcId> = (0..m).filter(|&a| !active[a]).collect();
        let f = mfpc::max_flow(inst, &disabled);
        let x = ActivationPattern { active };
        let violations = validate_against_model(&model, &f, &x, f.total).unwrap();
        assert!(violations.is_empty(), "{violations:?}");
        best = best.max(f.total);
    }
    best
}

/// Assignments of mixed quality for checker cross-validation.
pub fn assignment_draws(inst: &Instance, seed: u64) -> Vec<FlowAssignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = inst.arc_count();
    let mut out = vec![FlowAssignment::zero(m)];
    let relaxed = mfpc::max_flow(inst, &[]);
    out.push(relaxed.clone());
    out.push(mfpc::solve_greedy(inst, seed, 4));
    // perturb one arc of the relaxed flow
    let mut bumped = relaxed.clone();
    let a = rng.gen_range(0..m);
    bumped.flow[a] += 1;
    out.push(bumped);
    // wrong declared total
    let mut mislabeled = relaxed.clone();
    mislabeled.total += 1;
    out.push(mislabeled);
    // random sparse vector
    let flow = (0..m).map(|_| if rng.gen_bool(0.3) { rng.gen_range(0..=10) } else { 0 }).collect();
    out.push(FlowAssignment { flow, total: rng.gen_range(0..=3) });
    out
}
