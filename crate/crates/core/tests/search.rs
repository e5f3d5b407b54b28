mod common;

use fapk_core::availability::Strategy;
use fapk_core::bench::{generate_instance, Group, ScenarioParams};
use fapk_core::search::{branch_and_bound, brute_force_solve, solve, Mode, SearchConfig, StopReason};

use common::{small_generated, small_restricted, valid};

fn config(mode: Mode, strategy: Strategy, nodes: u64) -> SearchConfig {
    SearchConfig {
        cart8: false,
        ..SearchConfig::new(mode, strategy).with_node_limit(nodes)
    }
}

#[test]
fn selection_matches_brute_force_on_generated_instances() {
    for seed in 0..12 {
        let inst = small_generated(seed, 2 + seed as usize % 5);
        let best = brute_force_solve(&inst).unwrap().links;
        for strategy in Strategy::ALL {
            let r = branch_and_bound(&inst, &config(Mode::Selection, strategy, 1_000_000)).unwrap();
            assert_ne!(r.stop, StopReason::NodeLimit);
            assert_eq!(r.links, best, "seed {seed} {strategy:?}");
        }
    }
}

#[test]
fn filtering_keeps_the_solved_outcome() {
    for seed in 0..20 {
        let inst = small_restricted(seed, 2 + seed as usize % 4, 4);
        for strategy in Strategy::ALL {
            let plain = branch_and_bound(&inst, &config(Mode::Selection, strategy, 1_000_000)).unwrap();
            let filt = branch_and_bound(&inst, &config(Mode::Filtering, strategy, 200_000)).unwrap();
            assert_ne!(plain.stop, StopReason::NodeLimit);
            if filt.stop == StopReason::NodeLimit {
                // without a complete solution the tree is the same size or smaller
                assert!(filt.solved);
            }
            assert_eq!(plain.solved, filt.solved, "seed {seed} {strategy:?}");
            assert!(valid(&inst, &filt.assignment));
        }
    }
}

#[test]
fn incumbent_only_grows_and_is_consistent() {
    let inst = generate_instance(&ScenarioParams::group(Group::G10, 2)).unwrap();
    for mode in Mode::ALL {
        for strategy in Strategy::ALL {
            let r = solve(&inst, &SearchConfig::new(mode, strategy).with_node_limit(3000)).unwrap();
            for w in r.stats.improvements.windows(2) {
                assert!(w[0].links < w[1].links && w[0].node <= w[1].node);
                assert!(w[0].elapsed_secs <= w[1].elapsed_secs);
            }
            if let Some(last) = r.stats.improvements.last() {
                assert_eq!(last.links, r.links);
            }
            assert!(valid(&inst, &r.assignment));
            let full = inst
                .links()
                .iter()
                .filter(|l| l.paths().iter().all(|&p| r.assignment[p].is_some()))
                .count();
            assert_eq!(full, r.links);
            assert_eq!(r.solved, r.links == inst.link_count());
            if mode != Mode::Filtering {
                assert_eq!(r.stats.filtered, 0);
            }
        }
    }
}

#[test]
fn node_budgets_are_reproducible() {
    let inst = generate_instance(&ScenarioParams::group(Group::G20, 4)).unwrap();
    for seed in [None, Some(11)] {
        let mut c = SearchConfig::new(Mode::Filtering, Strategy::Async).with_node_limit(1500);
        c.seed = seed;
        let mut a = solve(&inst, &c).unwrap();
        let mut b = solve(&inst, &c).unwrap();
        for r in [&mut a, &mut b] {
            r.stats.elapsed_secs = 0.0;
            r.stats.improvements.iter_mut().for_each(|i| i.elapsed_secs = 0.0);
        }
        assert_eq!(a, b);
    }
}

#[test]
fn over_constrained_clique() {
    // three links around a triangle, every path squeezed into two values
    use fapk_core::model::{Frequency, InstanceBuilder};
    let two = vec![Frequency(40000), Frequency(44000)];
    let mut b = InstanceBuilder::new(3).link(0, 1).link(1, 2).link(0, 2);
    for p in 0..6 {
        b = b.domain(p, two.clone());
    }
    let inst = b.build().unwrap();
    let best = brute_force_solve(&inst).unwrap();
    assert!(best.links < 3);
    assert!(valid(&inst, &best.witness));
    for mode in Mode::ALL {
        let r = branch_and_bound(&inst, &config(mode, Strategy::Async, 100_000)).unwrap();
        assert_eq!(r.stop, StopReason::Exhausted);
        assert_eq!(r.links, best.links, "{mode}");
        assert!(r.blockages > 0);
    }
}
