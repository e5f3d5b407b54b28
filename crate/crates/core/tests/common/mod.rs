#![allow(dead_code)]

use fapk_core::bench::{generate_instance, Group, ScenarioParams};
use fapk_core::model::{Frequency, Instance, InstanceBuilder};
use fapk_core::FreqSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Whether `partial` extends to a full assignment, found by plain
/// backtracking with pairwise checks.
pub fn extends(instance: &Instance, partial: &[Option<Frequency>]) -> bool {
    fn go(inst: &Instance, a: &mut Vec<Option<Frequency>>, p: usize) -> bool {
        if p == a.len() {
            return true;
        }
        if a[p].is_some() {
            return go(inst, a, p + 1);
        }
        for f in inst.spectrum().to_vec(inst.domain(p)) {
            let ok = inst.neighbors(p).iter().all(|n| a[n.path].is_none_or(|g| g.distance(f) >= n.gap));
            if ok {
                a[p] = Some(f);
                if go(inst, a, p + 1) {
                    a[p] = None;
                    return true;
                }
                a[p] = None;
            }
        }
        false
    }
    // the fixed part must be consistent on its own
    for (p, f) in partial.iter().enumerate() {
        let Some(f) = f else { continue };
        if !instance.domain(p).contains(instance.spectrum().index_of(*f).unwrap()) {
            return false;
        }
        if instance.neighbors(p).iter().any(|n| partial[n.path].is_some_and(|g| g.distance(*f) < n.gap)) {
            return false;
        }
    }
    go(instance, &mut partial.to_vec(), 0)
}

pub fn valid(instance: &Instance, a: &[Option<Frequency>]) -> bool {
    instance.constraints().iter().all(|c| match (a[c.i], a[c.j]) {
        (Some(x), Some(y)) => x.distance(y) >= c.gap,
        _ => true,
    }) && a.iter().enumerate().all(|(p, f)| {
        f.is_none_or(|f| {
            instance
                .spectrum()
                .index_of(f)
                .is_some_and(|i| instance.domain(p).contains(i))
        })
    })
}

/// Small generated instance with every path on the full spectrum.
pub fn small_generated(seed: u64, links: usize) -> Instance {
    let mut sites = (links + 1 - (seed % 3) as usize).max(3);
    while sites * (sites - 1) / 2 < links {
        sites += 1;
    }
    let p = ScenarioParams {
        links,
        sites,
        cart8: 0,
        far_field_probability: 0.4,
        ..ScenarioParams::group(Group::G10, seed)
    };
    generate_instance(&p).unwrap()
}

/// The same with every path restricted to a few random values.
pub fn small_restricted(seed: u64, links: usize, values: usize) -> Instance {
    let inst = small_generated(seed, links);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = inst.spectrum().len();
    let doms = (0..inst.path_count())
        .map(|_| {
            let mut s = FreqSet::EMPTY;
            while s.len() < values {
                s.insert(rng.random_range(0..n));
            }
            s
        })
        .collect();
    inst.with_domains(doms)
}

/// Hand-made instances with at most four links.
pub fn micro_suite() -> Vec<Instance> {
    let mut out = vec![
        InstanceBuilder::new(2).link(0, 1).build().unwrap(),
        InstanceBuilder::new(3).link(0, 1).link(1, 2).build().unwrap(),
        InstanceBuilder::new(3).link(0, 1).link(1, 2).link(0, 2).rx_rx_gap(80).build().unwrap(),
        InstanceBuilder::new(5).links((1..5).map(|k| (0, k))).build().unwrap(),
        InstanceBuilder::new(4)
            .link(0, 1)
            .link(2, 3)
            .far_field(0, 2, 50)
            .far_field(1, 3, 40)
            .build()
            .unwrap(),
    ];
    for seed in 0..6 {
        out.push(small_restricted(seed, 2 + (seed as usize % 3), 5));
    }
    out.push(
        InstanceBuilder::new(5)
            .links((1..5).map(|k| (0, k)))
            .domain(0, vec![Frequency(45000), Frequency(40000)])
            .domain(2, vec![Frequency(45070), Frequency(41000)])
            .domain(4, vec![Frequency(45140)])
            .build()
            .unwrap(),
    );
    out.push(
        InstanceBuilder::new(5)
            .links((1..5).map(|k| (0, k)))
            .rx_rx_gap(70)
            .build()
            .unwrap(),
    );
    out
}
