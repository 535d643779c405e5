use edgealloc::analysis::{beta, lemma3_condition, lemma3_uniform_condition};
use edgealloc::model::{
    channel_gain, compute_rate, generate_scenario, ChannelParams, EdgeNode, Scenario, ScenarioConfig, UniformRange,
};
use edgealloc::online::{primal_value, run_online, AlgoConfig, Decision, OnlineAllocator};
use edgealloc::oracle::offline_optimal;
use proptest::prelude::*;

fn unit_channel() -> ChannelParams {
    ChannelParams::new(1.0, 1.0, 30.0, 1e9, 2.0).unwrap()
}

fn node(id: usize, rate: f64, cpu: f64) -> EdgeNode {
    EdgeNode::with_rate(id, rate, cpu, &unit_channel()).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + b.abs())
}

/// Four tasks, three nodes with latency coefficients 0.5, 1 and 2 s/bit,
/// alpha = 1, delta = 1, t_tot = 4. Expected values worked out by hand.
#[test]
fn four_task_hand_trace() {
    let nodes = vec![node(1, 4.0, 4.0), node(2, 2.0, 2.0), node(3, 1.0, 1.0)];
    let s = Scenario::from_sizes(&[1.0, 1.0, 2.0, 3.5], nodes, 4.0, unit_channel(), 0).unwrap();
    let run = run_online(&s, &AlgoConfig::new(1.0, 1.0).unwrap()).unwrap();

    assert_eq!(run.selected_nodes(), vec![1, 1, 1, 2]);
    let decisions: Vec<Decision> = run.steps.iter().map(|st| st.decision).collect();
    assert_eq!(
        decisions,
        vec![
            Decision::Accepted { node: 1 },
            Decision::Accepted { node: 1 },
            Decision::Accepted { node: 1 },
            Decision::Rejected
        ]
    );

    let z_after = [0.125, 0.265625, 0.58203125];
    let x_expect = [2.0, 1.75, 0.734375];
    let spent = [0.25, 0.5, 1.0];
    for k in 0..3 {
        let snap = &run.steps[k].snapshot;
        assert!(close(snap.z[0], z_after[k]), "step {k}: z = {}", snap.z[0]);
        assert!(close(snap.x[k], x_expect[k]));
        assert!(close(snap.spent_tx_s, spent[k]));
        assert_eq!(run.steps[k].delta_u, 0.0);
    }
    // first rejection with J <= I: idle nodes jump to 1, residual of node 1 goes to u
    let last = &run.steps[3];
    assert_eq!(last.snapshot.z[1..], [1.0, 1.0]);
    assert!(close(last.delta_u, 1.0 - 0.58203125));
    assert!(last.snapshot.u.iter().all(|&u| close(u, 0.41796875)));
    assert_eq!(run.state.dual_value, 3);
    assert!(close(primal_value(&run.state, 4.0), 20.9375));
    assert!(close(last.primal_value_after, 20.9375));

    // a node serving several tasks is possible with alpha = 1
    assert_eq!(run.state.per_node_counts(&s.nodes), vec![3, 0, 0]);
}

fn arb_config() -> impl Strategy<Value = (ScenarioConfig, u64, f64, f64)> {
    (1usize..=10, 1usize..=10, 0.0f64..8.0, any::<u64>(), prop_oneof![Just(1.0), Just(100.0), 1.0f64..20.0], 0.05f64..=1.0)
        .prop_map(|(i, j, t, seed, alpha, delta)| {
            let cfg = ScenarioConfig {
                task_count: i,
                node_count: j,
                t_tot_s: t,
                ..ScenarioConfig::default()
            };
            (cfg, seed, alpha, delta)
        })
}

/// Nodes within a few percent of each other in distance and compute speed.
fn near_identical_fleet() -> impl Strategy<Value = (Scenario, f64)> {
    (1usize..=8, 0usize..=4, 10.0f64..100.0, 1e8f64..5e8, 0.0f64..0.08, 0.3f64..6.0, 0.05f64..=1.0, any::<u64>()).prop_map(
        |(i, extra, d0, f0, spread, t, delta, seed)| {
            let ch = ChannelParams::reference();
            let j = i + extra;
            let nodes = (1..=j)
                .map(|id| {
                    let w = ((seed >> (id % 32)) & 0xff) as f64 / 255.0;
                    EdgeNode::at_distance(id, d0 * (1.0 + spread * w), f0 * (1.0 - spread * w), &ch).unwrap()
                })
                .collect();
            let sizes: Vec<f64> = (0..i).map(|k| 5e7 + 5e7 * (((seed >> (k * 5)) & 0x1f) as f64 / 31.0)).collect();
            (Scenario::from_sizes(&sizes, nodes, t, ch, seed).unwrap(), delta)
        },
    )
}

/// The inequality evaluated at the nodes the run actually picked holds
/// trivially when every task lands on the same node.
#[test]
fn selected_node_condition_can_hold_with_reuse() {
    let ch = ChannelParams::reference();
    let nodes = vec![
        EdgeNode::at_distance(1, 10.0, 5e8, &ch).unwrap(),
        EdgeNode::at_distance(2, 100.0, 1e8, &ch).unwrap(),
    ];
    let s = Scenario::from_sizes(&[5e7, 5e7], nodes, 6.0, ch, 0).unwrap();
    let algo = AlgoConfig::new(1.0, 1.0).unwrap();
    let run = run_online(&s, &algo).unwrap();
    assert_eq!(run.selected_nodes(), vec![1, 1]);
    assert!(lemma3_condition(&s, &algo, &run.selected_nodes()));
    assert!(!lemma3_uniform_condition(&s, &algo));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rate_decreases_with_distance(d1 in 1.0f64..500.0, gap in 0.01f64..500.0, exp in 2.0f64..4.0) {
        let ch = ChannelParams { pathloss_exponent: exp, ..ChannelParams::reference() };
        let r1 = compute_rate(channel_gain(d1, &ch).unwrap(), &ch);
        let r2 = compute_rate(channel_gain(d1 + gap, &ch).unwrap(), &ch);
        prop_assert!(r1 > r2);
        prop_assert!(r2.is_finite() && r2 > 0.0);
    }

    #[test]
    fn decisions_ignore_future_tasks((cfg, seed, alpha, delta) in arb_config(), cut in 0usize..10, scale in 0.1f64..10.0) {
        let s = generate_scenario(&cfg, seed).unwrap();
        let algo = AlgoConfig::new(alpha, delta).unwrap();
        let cut = cut.min(s.task_count() - 1);
        let mut mutated = s.clone();
        for t in &mut mutated.tasks[cut + 1..] {
            t.size_bits *= scale;
        }
        let a = run_online(&s, &algo).unwrap();
        let b = run_online(&mutated, &algo).unwrap();
        for k in 0..=cut {
            prop_assert_eq!(&a.steps[k], &b.steps[k]);
        }
    }

    #[test]
    fn weak_duality_and_bookkeeping((cfg, seed, alpha, delta) in arb_config()) {
        let s = generate_scenario(&cfg, seed).unwrap();
        let algo = AlgoConfig::new(alpha, delta).unwrap();
        let run = run_online(&s, &algo).unwrap();
        let mut halted = false;
        let mut prev_z = vec![0.0; s.node_count()];
        for (k, st) in run.steps.iter().enumerate() {
            prop_assert!(st.dual_value_after as f64 <= st.primal_value_after + 1e-9);
            prop_assert!(st.delta_u >= 0.0);
            for (z, p) in st.snapshot.z.iter().zip(&prev_z) {
                prop_assert!(z >= p);
            }
            prev_z = st.snapshot.z.clone();
            prop_assert!(st.snapshot.x.iter().chain(&st.snapshot.u).all(|&v| v >= 0.0));
            if k > 0 {
                // x_i is written once: earlier entries never change
                prop_assert_eq!(&st.snapshot.x[..k], &run.steps[k - 1].snapshot.x[..k]);
            }
            match st.decision {
                Decision::Accepted { .. } => prop_assert!(!halted),
                Decision::Rejected => halted = true,
            }
        }
        let accepted = run.steps.iter().filter(|st| st.accepted_node().is_some()).count();
        prop_assert_eq!(accepted, run.state.dual_value);
        prop_assert_eq!(run.state.per_node_counts(&s.nodes).iter().sum::<usize>(), accepted);
        prop_assert!(run.state.assignment[..accepted].iter().all(Option::is_some));
        prop_assert!(run.state.assignment[accepted..].iter().all(Option::is_none));
    }

    #[test]
    fn lemma4_per_step_increase((cfg, seed, _a, _d) in arb_config()) {
        let s = generate_scenario(&cfg, seed).unwrap();
        let algo = AlgoConfig::new(1.0, 1.0).unwrap();
        let run = run_online(&s, &algo).unwrap();
        let mut prev = 0.0;
        for (st, task) in run.steps.iter().zip(&s.tasks) {
            if let Some(id) = st.accepted_node() {
                let n = s.nodes.iter().find(|n| n.id == id).unwrap();
                let b = beta(task, n, s.t_tot_s);
                if b <= 1.0 {
                    let bound = (1.0 / b) * (1.0 + 1.0 / (algo.c() - 1.0)) + st.delta_u;
                    prop_assert!(st.primal_value_after - prev <= bound + 1e-9);
                }
            }
            prev = st.primal_value_after;
        }
    }

    #[test]
    fn injective_online_is_dominated((cfg, seed, alpha, delta) in arb_config()) {
        let s = generate_scenario(&cfg, seed).unwrap();
        let run = run_online(&s, &AlgoConfig::new(alpha, delta).unwrap()).unwrap();
        let opt = offline_optimal(&s).unwrap();
        if run.state.per_node_counts(&s.nodes).iter().all(|&c| c <= 1) {
            prop_assert!(run.state.dual_value <= opt.k_opt);
        }
    }

    #[test]
    fn oracle_monotone_in_budget_and_nodes((cfg, seed, _a, _d) in arb_config(), extra in 0.0f64..3.0) {
        let s = generate_scenario(&cfg, seed).unwrap();
        let k = offline_optimal(&s).unwrap().k_opt;
        let longer = s.with_t_tot(s.t_tot_s + extra).unwrap();
        prop_assert!(offline_optimal(&longer).unwrap().k_opt >= k);
        let mut bigger = s.clone();
        let mut n = s.nodes[0];
        n.id = s.nodes.iter().map(|n| n.id).max().unwrap() + 1;
        bigger.nodes.push(n);
        prop_assert!(offline_optimal(&bigger).unwrap().k_opt >= k);
    }

    #[test]
    fn uniform_lemma3_condition_gives_distinct_nodes(
        (s, delta) in near_identical_fleet(),
    ) {
        let algo = AlgoConfig::new(1.0, delta).unwrap();
        prop_assume!(lemma3_uniform_condition(&s, &algo));
        let run = run_online(&s, &algo).unwrap();
        prop_assert!(lemma3_condition(&s, &algo, &run.selected_nodes()));
        prop_assert!(run.state.per_node_counts(&s.nodes).iter().all(|&c| c <= 1));
    }

    #[test]
    fn scenario_json_round_trip((cfg, seed, _a, _d) in arb_config()) {
        let s = generate_scenario(&cfg, seed).unwrap();
        prop_assert_eq!(Scenario::from_json(&s.to_json().unwrap()).unwrap(), s);
    }
}

#[test]
fn allocator_only_sees_offered_tasks() {
    let cfg = ScenarioConfig {
        task_size_bits: UniformRange::new(6e7, 6e7),
        ..ScenarioConfig::default()
    };
    let s = generate_scenario(&cfg, 3).unwrap();
    let mut engine = OnlineAllocator::new(&s.nodes, s.t_tot_s, s.task_count(), AlgoConfig::default()).unwrap();
    engine.offer(&s.tasks[0]).unwrap();
    assert_eq!(engine.state().revealed_bits, vec![6e7]);
    assert!(engine.offer(&s.tasks[2]).is_err());
}
