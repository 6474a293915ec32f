//! Randomized cross-module invariants.
//!
//! These complement the unit tests with seeded random topologies: flow
//! conservation of the ECMP splits, agreement between the routing kernel
//! and brute-force enumeration, monotonicity of route costs in the link
//! lengths, the online audit inequality, and feasibility of scaled
//! approximation output.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsr_core::gen::{gen_requests, random_ring_net, GenSpec, PairMode, SrChoice};
use qsr_core::intra::{build_intra_table, compute_ecmp_split, PairEntry};
use qsr_core::offline::FptasParams;
use qsr_core::online::{competitive_audit, run_trace, OnlineParams};
use qsr_core::oracle::{enumerate_sr_lists, DEFAULT_ENUM_CAP};
use qsr_core::srpath::{apfsc, mincost_sr_path, AuxGraph, DualLengths};
use qsr_core::{run_fptas, Network, Request};

fn seeded_net(seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=8);
    let chords = rng.gen_range(2..=2 * n - 4);
    random_ring_net(n, chords, 50.0, 150.0, seed.wrapping_mul(31).wrapping_add(7))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// One unit leaving `src` arrives intact at `dst`, conserving flow at
    /// every intermediate node and never using a link more than fully.
    #[test]
    fn ecmp_split_conserves_flow(seed in 0u64..5_000) {
        let net = seeded_net(seed);
        for src in net.node_ids() {
            for dst in net.node_ids() {
                if src == dst {
                    continue;
                }
                let split = compute_ecmp_split(&net, src, dst).unwrap();
                let mut balance = vec![0.0f64; net.node_count()];
                for &(lid, f) in split.entries() {
                    prop_assert!(f > 0.0 && f <= 1.0 + 1e-12);
                    let l = net.link(lid);
                    balance[l.src.0] -= f;
                    balance[l.dst.0] += f;
                }
                for node in net.node_ids() {
                    let expect = if node == src {
                        -1.0
                    } else if node == dst {
                        1.0
                    } else {
                        0.0
                    };
                    prop_assert!((balance[node.0] - expect).abs() < 1e-12,
                        "imbalance {} at {}", balance[node.0], net.name(node));
                }
            }
        }
    }

    /// The layered-graph kernel finds exactly the cheapest enumerated list.
    #[test]
    fn kernel_agrees_with_enumeration(seed in 0u64..5_000) {
        let net = seeded_net(seed);
        let spec = GenSpec {
            count: 3,
            demand_lo: 10.0,
            demand_hi: 40.0,
            mode: PairMode::RandomPairs,
            sr: SrChoice::Subset(4),
            q_max: 3,
            seed: seed ^ 0xABCD,
        };
        let reqs = gen_requests(&net, &spec).unwrap();
        let table = build_intra_table(&net, &reqs);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(99));
        let lengths = DualLengths::from_vec(
            (0..net.link_count()).map(|_| rng.gen_range(0.0..2.0)).collect(),
        );
        for r in &reqs {
            let aux = AuxGraph::for_request(r);
            let costs = apfsc(&table, &lengths, &aux.pairs()).unwrap();
            let route = mincost_sr_path(&aux, &costs, &table).unwrap();
            let cols = enumerate_sr_lists(&table, r, DEFAULT_ENUM_CAP).unwrap();
            let brute = cols
                .columns
                .iter()
                .map(|c| c.cost(&lengths))
                .fold(f64::INFINITY, f64::min);
            prop_assert!((route.cost - brute).abs() <= 1e-12,
                "kernel {} vs brute {}", route.cost, brute);
        }
    }

    /// Raising any single link length never makes the best route cheaper.
    #[test]
    fn kernel_cost_monotone_in_lengths(seed in 0u64..5_000, bump in 0.01f64..3.0) {
        let net = seeded_net(seed);
        let spec = GenSpec {
            count: 1,
            demand_lo: 10.0,
            demand_hi: 10.0,
            mode: PairMode::RandomPairs,
            sr: SrChoice::Subset(3),
            q_max: 3,
            seed: seed ^ 0x55,
        };
        let reqs = gen_requests(&net, &spec).unwrap();
        let table = build_intra_table(&net, &reqs);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(5));
        let base: Vec<f64> =
            (0..net.link_count()).map(|_| rng.gen_range(0.0..1.0)).collect();
        let target = rng.gen_range(0..net.link_count());
        let mut bumped = base.clone();
        bumped[target] += bump;

        let aux = AuxGraph::for_request(&reqs[0]);
        let pairs = aux.pairs();
        let before = {
            let costs = apfsc(&table, &DualLengths::from_vec(base), &pairs).unwrap();
            mincost_sr_path(&aux, &costs, &table).unwrap().cost
        };
        let after = {
            let costs = apfsc(&table, &DualLengths::from_vec(bumped), &pairs).unwrap();
            mincost_sr_path(&aux, &costs, &table).unwrap().cost
        };
        prop_assert!(after >= before - 1e-12, "cost fell from {before} to {after}");
    }

    /// Every accepted arrival grows the dual objective by at most (1 + φ)
    /// times its demand, and link lengths never decrease.
    #[test]
    fn online_audit_holds_on_random_traces(seed in 0u64..5_000, phi in 0.2f64..20.0) {
        let net = seeded_net(seed);
        let spec = GenSpec {
            count: 60,
            demand_lo: 1.0,
            demand_hi: 2.5, // max g is 2 at q=2, so steps stay fine-grained
            mode: PairMode::RandomPairs,
            sr: SrChoice::Subset(3),
            q_max: 2,
            seed: seed ^ 0xF00D,
        };
        let reqs = gen_requests(&net, &spec).unwrap();
        let table = build_intra_table(&net, &reqs);
        let params = OnlineParams::for_trace(phi, &reqs).unwrap();
        let result = run_trace(&net, &reqs, &table, params).unwrap();
        let audit = competitive_audit(&net, &result.decisions, phi);
        prop_assert!(audit.ok, "max ratio {} > bound {}", audit.max_ratio, audit.bound);
        for d in result.decisions.iter().filter(|d| d.accepted) {
            prop_assert!(d.delta_l.iter().all(|&(_, dl)| dl >= 0.0));
        }
    }

    /// Scaled approximation output is always capacity-feasible and its
    /// per-link growth count stays under the scaling denominator.
    #[test]
    fn fptas_output_feasible(seed in 0u64..5_000) {
        let net = seeded_net(seed);
        let spec = GenSpec {
            count: 2,
            demand_lo: 75.0,
            demand_hi: 150.0,
            mode: PairMode::RandomPairs,
            sr: SrChoice::Subset(3),
            q_max: 2,
            seed: seed ^ 0xBEEF,
        };
        let reqs = gen_requests(&net, &spec).unwrap();
        let table = build_intra_table(&net, &reqs);
        let params = FptasParams::from_epsilon(0.25, net.link_count())
            .unwrap()
            .with_max_phases(50_000);
        let res = run_fptas(&net, &reqs, &table, &params).unwrap();
        let bound = res.scale_factor();
        for (lid, link) in net.links().iter().enumerate() {
            prop_assert!(res.flows[lid] <= link.capacity + 1e-9,
                "flow {} exceeds capacity {}", res.flows[lid], link.capacity);
            prop_assert!(res.kappa[lid] < bound,
                "kappa {} not below {}", res.kappa[lid], bound);
        }
        prop_assert!(res.lambda >= 0.0);
        for (i, r) in reqs.iter().enumerate() {
            prop_assert!((res.per_request_routed[i] - res.lambda * r.demand).abs() <= 1e-6
                * res.per_request_routed[i].abs().max(1.0));
        }
    }
}

/// Table construction marks unreachable pairs instead of failing, and the
/// kernel prices them as infinitely expensive.
#[test]
fn unreachable_pairs_price_as_infinite() {
    // s -> x only; t isolated from s.
    let net = Network::new(
        &["s", "x", "t"],
        &[("s", "x", 10.0, 1), ("t", "x", 10.0, 1)],
    )
    .unwrap();
    let s = net.node("s").unwrap();
    let t = net.node("t").unwrap();
    let x = net.node("x").unwrap();
    let r = Request::new(&net, 0, s, t, 1.0, vec![x], 2).unwrap();
    let table = build_intra_table(&net, &[r.clone()]);
    assert!(matches!(table.entry(s, t), Ok(PairEntry::Unreachable)));
    let aux = AuxGraph::for_request(&r);
    let costs = apfsc(&table, &DualLengths::zeros(net.link_count()), &aux.pairs()).unwrap();
    let res = mincost_sr_path(&aux, &costs, &table).unwrap();
    assert!(res.cost.is_infinite());
}

/// A deterministic spot check that the split table is identical across
/// construction orders of the same request set.
#[test]
fn table_construction_is_order_independent() {
    let net = Network::abilene();
    let spec = GenSpec::uniform(6, 10.0, 3, 21);
    let mut reqs = gen_requests(&net, &spec).unwrap();
    let table_a = build_intra_table(&net, &reqs);
    reqs.reverse();
    let table_b = build_intra_table(&net, &reqs);
    let a: Vec<_> = table_a.pairs().collect();
    let b: Vec<_> = table_b.pairs().collect();
    assert_eq!(a.len(), b.len());
    for ((pa, ea), (pb, eb)) in a.iter().zip(&b) {
        assert_eq!(pa, pb);
        match (ea, eb) {
            (PairEntry::Split(x), PairEntry::Split(y)) => {
                assert_eq!(x.entries().len(), y.entries().len());
                for (&(la, fa), &(lb, fb)) in x.entries().iter().zip(y.entries()) {
                    assert_eq!(la, lb);
                    assert_eq!(fa.to_bits(), fb.to_bits());
                }
            }
            (PairEntry::Unreachable, PairEntry::Unreachable) => {}
            _ => panic!("entry kind mismatch at {pa:?}"),
        }
    }
}
