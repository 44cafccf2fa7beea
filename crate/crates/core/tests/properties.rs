mod common;

use std::time::Duration;

use common::{min_cut_by_enumeration, oracle_instance, random_small};
use mfpc::bnb::{solve_bnb_observed, Branching, SearchNode, SearchObserver};
use mfpc::instance::{ConflictPair, FlowAssignment};
use mfpc::maxflow::cut_capacity;
use mfpc::{
    build_model, check_feasible, max_flow, min_cut, parse_instance, parse_solution, serialize_instance,
    serialize_solution, solve_bnb_with, solve_bruteforce, solve_greedy, validate_against_model, ActivationPattern,
    BnbOptions, Instance, SolveStatus,
};
use proptest::prelude::*;

fn long_run(branching: Branching) -> BnbOptions {
    BnbOptions { time_limit: Duration::from_secs(30), branching, ..BnbOptions::default() }
}

fn reversed_conflicts(inst: &Instance) -> Instance {
    let arcs = inst.arcs().to_vec();
    let pairs = inst.conflicts().iter().rev().map(|p| (p.second(), p.first())).collect();
    Instance::new(inst.node_count(), inst.source(), inst.sink(), arcs, pairs).unwrap()
}

#[derive(Default)]
struct Recorder {
    evaluated: u64,
    bound_increase: Option<(u64, u64)>,
}

impl SearchObserver for Recorder {
    fn evaluated(&mut self, _node: &SearchNode, parent_bound: Option<u64>, relaxed: &FlowAssignment) {
        self.evaluated += 1;
        if let Some(parent) = parent_bound {
            if relaxed.total > parent && self.bound_increase.is_none() {
                self.bound_increase = Some((parent, relaxed.total));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn instance_text_round_trips(seed in any::<u64>()) {
        let inst = random_small(seed, 12, 40, 20);
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn solution_text_round_trips(seed in any::<u64>()) {
        let inst = oracle_instance(seed);
        let sol = solve_greedy(&inst, seed, 3);
        let back = parse_solution(&serialize_solution(&sol), inst.arc_count()).unwrap();
        prop_assert_eq!(back, sol);
    }

    #[test]
    fn checker_ignores_pair_order(seed in any::<u64>()) {
        let inst = oracle_instance(seed);
        let flipped = reversed_conflicts(&inst);
        for f in common::assignment_draws(&inst, seed) {
            let a = check_feasible(&inst, &f).unwrap().is_ok();
            let b = check_feasible(&flipped, &f).unwrap().is_ok();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn zero_flow_is_always_feasible(seed in any::<u64>()) {
        let inst = random_small(seed, 12, 40, 30);
        prop_assert!(check_feasible(&inst, &FlowAssignment::zero(inst.arc_count())).unwrap().is_ok());
    }

    #[test]
    fn activation_pattern_marks_positive_arcs(seed in any::<u64>()) {
        let inst = oracle_instance(seed);
        let f = max_flow(&inst, &[]);
        let x = ActivationPattern::from_flow(&f);
        for a in 0..inst.arc_count() {
            prop_assert_eq!(x.active[a], f.flow[a] > 0);
        }
    }

    #[test]
    fn max_flow_equals_min_cut(seed in any::<u64>(), drop in any::<u64>()) {
        let inst = oracle_instance(seed);
        let m = inst.arc_count();
        let disabled: Vec<usize> = (0..m).filter(|a| (drop >> (a % 64)) & 3 == 0).collect();
        let f = max_flow(&inst, &disabled);
        let verdict = check_feasible(&inst, &f).unwrap();
        let flow_only = verdict.violations.iter().all(|v| matches!(v, mfpc::Violation::Conflict { .. }));
        prop_assert!(flow_only, "{:?}", verdict);
        for &a in &disabled {
            prop_assert_eq!(f.flow[a], 0);
        }
        let cut = min_cut(&inst, &disabled);
        prop_assert!(cut.iter().all(|a| !disabled.contains(a)));
        prop_assert_eq!(cut_capacity(&inst, &cut), f.total);
        prop_assert_eq!(min_cut_by_enumeration(&inst, &disabled), f.total);
    }

    #[test]
    fn disabling_arcs_never_increases_max_flow(seed in any::<u64>(), extra in 0usize..30) {
        let inst = oracle_instance(seed);
        let a = extra % inst.arc_count();
        prop_assert!(max_flow(&inst, &[a]).total <= max_flow(&inst, &[]).total);
    }

    #[test]
    fn greedy_is_feasible_and_bounded(seed in any::<u64>(), restarts in 0u32..6) {
        let inst = oracle_instance(seed);
        let g = solve_greedy(&inst, seed, restarts);
        prop_assert!(check_feasible(&inst, &g).unwrap().is_ok());
        let exact = solve_bruteforce(&inst).unwrap().lower;
        prop_assert!(g.total <= exact);
        prop_assert!(exact <= max_flow(&inst, &[]).total);
    }

    #[test]
    fn greedy_restarts_are_monotone(seed in any::<u64>()) {
        let inst = oracle_instance(seed);
        let mut last = 0;
        for r in 0..5 {
            let v = solve_greedy(&inst, seed, r).total;
            prop_assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn checker_agrees_with_model(seed in any::<u64>()) {
        let inst = oracle_instance(seed);
        let model = build_model(&inst);
        for f in common::assignment_draws(&inst, seed) {
            let x = ActivationPattern::from_flow(&f);
            let checker = check_feasible(&inst, &f).unwrap().is_ok();
            let by_model = validate_against_model(&model, &f, &x, f.total).unwrap().is_empty();
            prop_assert_eq!(checker, by_model, "flow {:?}", f);
        }
    }

    #[test]
    fn adding_a_conflict_never_helps(seed in any::<u64>(), pick in any::<u64>()) {
        let inst = oracle_instance(seed);
        let m = inst.arc_count();
        prop_assume!(m >= 2);
        let a = (pick % m as u64) as usize;
        let b = ((pick >> 20) % m as u64) as usize;
        prop_assume!(a != b);
        let pair = ConflictPair::new(a, b).unwrap();
        prop_assume!(!inst.conflicts().contains(&pair));
        let tighter = inst.with_conflict(a, b).unwrap();
        let before = solve_bruteforce(&inst).unwrap().lower;
        let after = solve_bruteforce(&tighter).unwrap().lower;
        prop_assert!(after <= before);
    }

    #[test]
    fn bnb_matches_oracle_with_both_branching_rules(seed in any::<u64>()) {
        let inst = oracle_instance(seed);
        let exact = solve_bruteforce(&inst).unwrap();
        for branching in [Branching::Activation, Branching::Pair] {
            let out = solve_bnb_with(&inst, &long_run(branching));
            prop_assert_eq!(out.status, SolveStatus::Optimal);
            prop_assert_eq!(out.lower, exact.lower);
            prop_assert!(out.is_consistent(&inst));
        }
    }

    #[test]
    fn child_bounds_never_exceed_parent(seed in any::<u64>()) {
        let inst = oracle_instance(seed);
        for branching in [Branching::Activation, Branching::Pair] {
            // unseeded, so the tree is not pruned by a good incumbent
            let options = BnbOptions { greedy_restarts: 0, ..long_run(branching) };
            let mut rec = Recorder::default();
            let out = solve_bnb_observed(&inst, &options, &mut rec);
            prop_assert_eq!(rec.bound_increase, None);
            prop_assert_eq!(rec.evaluated, out.nodes_explored);
            let w = inst.conflict_count() as u32;
            prop_assert!(out.nodes_explored < 1u64 << (w + 1), "w={} nodes={}", w, out.nodes_explored);
        }
    }

    #[test]
    fn bnb_is_deterministic(seed in any::<u64>()) {
        let inst = oracle_instance(seed);
        let options = BnbOptions { time_limit: Duration::from_secs(30), node_limit: Some(7), ..BnbOptions::default() };
        let a = solve_bnb_with(&inst, &options);
        let b = solve_bnb_with(&inst, &options);
        prop_assert_eq!(&a.best, &b.best);
        prop_assert_eq!((a.lower, a.upper, a.status, a.nodes_explored), (b.lower, b.upper, b.status, b.nodes_explored));
        prop_assert_eq!(a.incumbent_trace, b.incumbent_trace);
    }

    #[test]
    fn limited_bnb_bounds_bracket_the_optimum(seed in any::<u64>(), limit in 1u64..6, seeded in any::<bool>()) {
        let inst = oracle_instance(seed);
        let exact = solve_bruteforce(&inst).unwrap().lower;
        let options = BnbOptions {
            node_limit: Some(limit),
            greedy_restarts: if seeded { 4 } else { 0 },
            ..long_run(Branching::Activation)
        };
        let out = solve_bnb_with(&inst, &options);
        prop_assert!(out.lower <= exact && exact <= out.upper, "{} <= {} <= {}", out.lower, exact, out.upper);
        prop_assert!(out.is_consistent(&inst));
        let trace_values: Vec<u64> = out.incumbent_trace.iter().map(|&(_, v)| v).collect();
        prop_assert!(trace_values.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn greedy_is_deterministic(seed in any::<u64>()) {
        let inst = oracle_instance(seed);
        prop_assert_eq!(solve_greedy(&inst, seed, 4), solve_greedy(&inst, seed, 4));
    }
}

#[test]
fn bnb_respects_tiny_time_limit() {
    let inst = mfpc::generate(&mfpc::GenParams {
        nodes: 60,
        arc_density: 0.5,
        conflict_density: 0.5,
        regime: mfpc::CapacityRegime::Wide,
        seed: 3,
    })
    .unwrap();
    let options = BnbOptions { time_limit: Duration::from_millis(200), ..BnbOptions::default() };
    let out = solve_bnb_with(&inst, &options);
    assert!(out.elapsed < Duration::from_secs(5), "{:?}", out.elapsed);
    assert!(out.is_consistent(&inst));
    assert!(out.upper <= max_flow(&inst, &[]).total);
}
