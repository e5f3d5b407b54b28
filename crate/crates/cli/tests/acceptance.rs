//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Lines go straight to stdout so they show up without `--nocapture`.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use fapk_core::availability::oracle::{oracle_disp, OracleValue};
use fapk_core::availability::{Availability, SiteDomains, SiteGaps, SiteState, Strategy};
use fapk_core::bench::{generate_instance, GapSampler, Group, ScenarioParams};
use fapk_core::model::{rita_inter_planes, Frequency, Instance, InstanceBuilder, Spectrum};
use fapk_core::preprocess::{cart8_reduce, cart8_rx_domain, cart8_tx_domain, check_ipe_properties};
use fapk_core::propagation::{DomainStore, Target};
use fapk_core::search::{branch_and_bound, brute_force_solve, solve, Mode, SearchConfig, StopReason};
use fapk_core::FreqSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let line = format!("[{tag}] criterion {id}: {name}: {detail}\n");
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

fn random_set(rng: &mut ChaCha8Rng, n: usize, max: usize) -> FreqSet {
    (0..rng.random_range(0..=max)).map(|_| rng.random_range(0..n)).collect()
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let s = Spectrum::rita();
    let avail = Availability::new(&s);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = Vec::new();
    let states = 240;
    for k in 0..states {
        let rr = [60, 70, 80][k % 3];
        let st = SiteState {
            tx: random_set(&mut rng, 20, 3),
            rx: random_set(&mut rng, 20, 3),
            ..SiteState::empty(0, SiteGaps::with_rx_rx(rr))
        };
        let doms = if k % 2 == 0 {
            SiteDomains::uniform(s.full())
        } else {
            SiteDomains {
                tx: FreqSet(rng.random::<u64>()).intersection(s.full()),
                rx: FreqSet(rng.random::<u64>()).intersection(s.full()),
            }
        };
        let (t, r) = avail.disp_async(&st, doms);
        let c = avail.disp_sync(&st, doms);
        let a_ok = oracle_disp(&s, &st, doms, Strategy::Async) == Ok(OracleValue::Async { tx: t, rx: r });
        let s_ok = oracle_disp(&s, &st, doms, Strategy::Sync) == Ok(OracleValue::Sync { pairs: c });
        if !(a_ok && s_ok) {
            mismatches.push(k);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = mismatches.is_empty() && secs < 30.0;
    report(
        1,
        "availability oracle equivalence",
        pass,
        &format!("{states} states, {} mismatches, {secs:.2}s (limit 30s)", mismatches.len()),
    );
    assert!(pass, "mismatching states: {mismatches:?}");
}

#[test]
fn criterion_2_fixed_points() {
    let s = Spectrum::rita();
    let avail = Availability::new(&s);
    let full = SiteDomains::uniform(s.full());
    let at = |rr| SiteState::empty(0, SiteGaps::with_rx_rx(rr));
    let oracle = |rr, strategy| oracle_disp(&s, &at(rr), full, strategy).unwrap();
    let (t80, r80) = avail.disp_async(&at(80), full);
    let (_, r60) = avail.disp_async(&at(60), full);
    let c60 = avail.disp_sync(&at(60), full);
    let c80 = avail.disp_sync(&at(80), full);
    let confirmed = oracle(80, Strategy::Async) == OracleValue::Async { tx: t80, rx: r80 }
        && matches!(oracle(60, Strategy::Async), OracleValue::Async { rx, .. } if rx == r60)
        && oracle(60, Strategy::Sync) == OracleValue::Sync { pairs: c60 }
        && oracle(80, Strategy::Sync) == OracleValue::Sync { pairs: c80 };
    let pinned = t80 + r80 == 24 && r60 == 20 && c60 == 8 && c80 == 6;
    report(
        2,
        "derived fixed points",
        confirmed && pinned,
        &format!(
            "disp*(rr=80)={}, dispR*(rr=60)={r60}, dispC*(rr=60)={c60}, dispC*(rr=80)={c80}, oracle agrees: {confirmed}",
            t80 + r80
        ),
    );
    assert!(confirmed && pinned);
}

/// Whether `partial` extends to a complete assignment.
fn extends(inst: &Instance, partial: &[Option<Frequency>]) -> bool {
    fn go(inst: &Instance, a: &mut [Option<Frequency>], p: usize) -> bool {
        if p == a.len() {
            return true;
        }
        if a[p].is_some() {
            return go(inst, a, p + 1);
        }
        for f in inst.spectrum().to_vec(inst.domain(p)) {
            if inst.neighbors(p).iter().all(|n| a[n.path].is_none_or(|g| g.distance(f) >= n.gap)) {
                a[p] = Some(f);
                let found = go(inst, a, p + 1);
                a[p] = None;
                if found {
                    return true;
                }
            }
        }
        false
    }
    let consistent = partial.iter().enumerate().all(|(p, f)| {
        f.is_none_or(|f| {
            inst.domain(p).contains(inst.spectrum().index_of(f).unwrap())
                && inst.neighbors(p).iter().all(|n| partial[n.path].is_none_or(|g| g.distance(f) >= n.gap))
        })
    });
    consistent && go(inst, &mut partial.to_vec(), 0)
}

fn restrict(inst: Instance, seed: u64, values: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
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

fn small_instance(seed: u64, links: usize) -> Instance {
    let mut sites = (links + 1 - (seed % 3) as usize).max(2);
    while sites * (sites - 1) / 2 < links {
        sites += 1;
    }
    generate_instance(&ScenarioParams {
        links,
        sites,
        cart8: 0,
        far_field_probability: 0.4,
        ..ScenarioParams::group(Group::G10, seed)
    })
    .unwrap()
}

#[test]
fn criterion_3_propagation_round_trip_and_soundness() {
    let g10 = generate_instance(&ScenarioParams::group(Group::G10, 1)).unwrap();
    let initial = DomainStore::new(&g10);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut identical = 0;
    let walks = 1000;
    for _ in 0..walks {
        let mut store = initial.clone();
        let mut stack = Vec::new();
        for _ in 0..rng.random_range(1..80) {
            if stack.is_empty() || rng.random_bool(0.6) {
                let p = rng.random_range(0..g10.path_count());
                let dom = store.domain_values(p);
                if store.is_assigned(p) || dom.is_empty() {
                    continue;
                }
                let f = dom[rng.random_range(0..dom.len())];
                store.propagate_assign(p, f).unwrap();
                stack.push(p);
            } else {
                store.propagate_unassign(stack.pop().unwrap()).unwrap();
            }
        }
        while let Some(p) = stack.pop() {
            store.propagate_unassign(p).unwrap();
        }
        if store == initial {
            identical += 1;
        }
    }

    // soundness on a fixed suite of instances with at most four links
    let mut suite = vec![
        InstanceBuilder::new(2).link(0, 1).build().unwrap(),
        InstanceBuilder::new(3).link(0, 1).link(1, 2).link(0, 2).rx_rx_gap(80).build().unwrap(),
        InstanceBuilder::new(5).links((1..5).map(|k| (0, k))).build().unwrap(),
        InstanceBuilder::new(4).link(0, 1).link(2, 3).far_field(0, 2, 50).build().unwrap(),
    ];
    for seed in 0..8 {
        suite.push(restrict(small_instance(seed, 1 + seed as usize % 4), seed, 5));
    }
    let mut checked = 0;
    let mut unsound = 0;
    for inst in &suite {
        let n = inst.path_count();
        for p in 0..n {
            for f in inst.spectrum().to_vec(inst.domain(p)) {
                let mut a = vec![None; n];
                a[p] = Some(f);
                let mut store = DomainStore::new(inst);
                store.propagate_assign(p, f).unwrap();
                for e in store.trail() {
                    let Target::Path(q) = e.target else { continue };
                    if q == p {
                        continue;
                    }
                    for g in inst.spectrum().to_vec(e.removed) {
                        let mut b = a.clone();
                        b[q] = Some(g);
                        checked += 1;
                        if extends(inst, &b) {
                            unsound += 1;
                        }
                    }
                }
            }
        }
    }
    let pass = identical == walks && unsound == 0;
    report(
        3,
        "propagation round trip and soundness",
        pass,
        &format!(
            "{identical}/{walks} walks restored the initial store; {checked} removals on {} instances, {unsound} unsound",
            suite.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_small_instance_optimality() {
    let start = Instant::now();
    let node_cap = 20_000;
    let mut mismatches = Vec::new();
    let mut capped = 0;
    for seed in 0..30u64 {
        let links = 1 + seed as usize % 6;
        let inst = small_instance(seed, links);
        let best = brute_force_solve(&inst).unwrap().links;
        for mode in Mode::ALL {
            for strategy in Strategy::ALL {
                let c = SearchConfig {
                    cart8: false,
                    ..SearchConfig::new(mode, strategy).with_node_limit(node_cap)
                };
                let r = branch_and_bound(&inst, &c).unwrap();
                // once every link is assigned the count cannot improve further
                let settled = r.stop != StopReason::NodeLimit || r.links == inst.link_count();
                if r.stop == StopReason::NodeLimit {
                    capped += 1;
                }
                if !settled || r.links != best {
                    mismatches.push((seed, mode, strategy, r.links, best));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = mismatches.is_empty() && secs < 300.0;
    report(
        4,
        "small-instance optimality",
        pass,
        &format!(
            "30 instances x 6 configurations, {} mismatches, {capped} runs stopped early with every link assigned, {secs:.1}s (limit 300s)",
            mismatches.len()
        ),
    );

    // outside the criterion: shrunken domains make some instances unsatisfiable
    let mut below = Vec::new();
    let mut unsat = 0;
    for seed in 0..30u64 {
        let inst = restrict(small_instance(seed, 1 + seed as usize % 6), seed ^ 0xd0, 3);
        let best = brute_force_solve(&inst).unwrap().links;
        if best < inst.link_count() {
            unsat += 1;
        }
        let c = SearchConfig {
            cart8: false,
            ..SearchConfig::new(Mode::Selection, Strategy::Async).with_node_limit(node_cap)
        };
        let r = branch_and_bound(&inst, &c).unwrap();
        if r.links < best {
            below.push((seed, r.links, best));
        }
    }
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "[INFO] criterion 4: shrunken domains: {unsat}/30 unsatisfiable, search below the best link subset on {} (seed, search, best): {below:?}",
        below.len()
    );
    drop(out);
    assert!(pass, "{mismatches:?}");
}

#[test]
fn criterion_5_cart8_pipeline() {
    let p = ScenarioParams {
        links: 8,
        sites: 9,
        cart8: 1,
        ..ScenarioParams::group(Group::G10, 5)
    }
    .with_rx_rx(GapSampler::Fixed(60));
    let star = generate_instance(&p).unwrap();
    let mut solved = Vec::new();
    for strategy in Strategy::ALL {
        let c = SearchConfig::new(Mode::Selection, strategy).with_time_budget(Duration::from_secs(60));
        let r = solve(&star, &c).unwrap();
        solved.push(r.solved && r.blockages == 0 && r.stats.elapsed_secs < 60.0);
    }
    let props = check_ipe_properties(&rita_inter_planes(), &SiteGaps::with_rx_rx(60));
    let props_ok = props.single_direction && props.two_transmitters && props.full_receivers;
    let f = |v: &[u32]| v.iter().map(|&x| Frequency(x)).collect::<Vec<_>>();
    let lists_ok = cart8_tx_domain() == f(&[40000, 40140, 41000, 41140, 42000, 42140, 43000, 43140])
        && cart8_rx_domain() == f(&[44000, 44070, 44140, 44210, 45000, 45070, 45140, 45210]);
    let reduction = cart8_reduce(&star);
    let center = star.cart8_sites()[0];
    let applied = star.paths().iter().all(|q| {
        let got = star.spectrum().to_vec(reduction.domains[q.id]);
        if q.tx == center {
            got == cart8_tx_domain()
        } else {
            got == cart8_rx_domain()
        }
    });
    let pass = solved.iter().all(|&x| x) && props_ok && lists_ok && applied && reduction.warnings.is_empty();
    report(
        5,
        "Cart8 pipeline",
        pass,
        &format!(
            "star solved with 0 blockages (async, sync): {solved:?}; inter-plane properties hold: {props_ok}; reduced lists exact: {}",
            lists_ok && applied
        ),
    );
    assert!(pass);
}

fn run_bench(format: &str, out: &std::path::Path) -> String {
    let status = Command::new(env!("CARGO_BIN_EXE_fapk"))
        .args([
            "bench",
            "--groups",
            "g01,g10,g20,g30",
            "--budgets",
            "400,2000",
            "--budget-unit",
            "nodes",
            "--instances",
            "2",
            "--seed",
            "1",
            "--format",
            format,
            "--out",
        ])
        .arg(out)
        .status()
        .expect("run fapk bench");
    assert!(status.success());
    std::fs::read_to_string(out).unwrap()
}

fn without_elapsed(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect()
}

#[test]
fn criterion_6_and_7_protocol() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_bench("csv", &dir.path().join("a.csv"));
    let b = run_bench("csv", &dir.path().join("b.csv"));
    let text = run_bench("text", &dir.path().join("t.txt"));

    let deterministic = without_elapsed(&a) == without_elapsed(&b);
    let lines: Vec<&str> = a.lines().collect();
    let header_ok = lines[0] == "group,n,mode,strategy,budget,mean_links,solved,blockages,filtered,elapsed";
    let rows: Vec<Vec<&str>> = lines[1..].iter().map(|l| l.split(',').collect()).collect();
    let count_ok = rows.len() == 4 * 3 * 2 * 2;
    let filtered_ok = rows.iter().filter(|r| r[2] != "av-filt").all(|r| r[8].parse::<f64>().unwrap() == 0.0);
    let mut structure_ok = true;
    for budget in ["400n", "2000n"] {
        structure_ok &= text.contains(&format!("Assigned links, budget {budget}"));
        structure_ok &= text.contains(&format!("Filtered values, budget {budget}"));
    }
    structure_ok &= text.contains("Global means");
    structure_ok &= text.lines().filter(|l| l.starts_with("Total")).count() == 2;
    for (g, n) in [("g01", 150), ("g10", 50), ("g20", 100), ("g30", 300)] {
        structure_ok &= text
            .lines()
            .filter(|l| l.starts_with(g) && l[3..].trim_start().starts_with(&n.to_string()))
            .count()
            == 4;
    }
    let mut monotone = true;
    for r in rows.iter().filter(|r| r[4] == "2000n") {
        let short = rows
            .iter()
            .find(|s| s[4] == "400n" && s[0] == r[0] && s[2] == r[2] && s[3] == r[3])
            .unwrap();
        monotone &= r[5].parse::<f64>().unwrap() >= short[5].parse::<f64>().unwrap();
    }
    let pass = deterministic && header_ok && count_ok && filtered_ok && structure_ok && monotone;
    report(
        6,
        "protocol reproduction",
        pass,
        &format!(
            "{} rows; deterministic: {deterministic}; header: {header_ok}; tables: {structure_ok}; filtered only under av-filt: {filtered_ok}; longer budget never worse: {monotone}",
            rows.len()
        ),
    );

    // soft: asynchronous rows against synchronous filtering at the short budget
    let mut deviations = Vec::new();
    for g in ["g01", "g10", "g20", "g30"] {
        let mean = |mode: &str, strategy: &str| -> f64 {
            rows.iter()
                .find(|r| r[0] == g && r[2] == mode && r[3] == strategy && r[4] == "400n")
                .unwrap()[5]
                .parse()
                .unwrap()
        };
        let sync_filt = mean("av-filt", "sync");
        for mode in ["av-sel", "av-obj", "av-filt"] {
            let asy = mean(mode, "async");
            if asy < sync_filt {
                deviations.push(format!("{g} {mode} async {asy:.2} < sync av-filt {sync_filt:.2} (seeds 1-2)"));
            }
        }
    }
    report(
        7,
        "asynchronous rows dominate synchronous filtering (soft)",
        deviations.is_empty(),
        &if deviations.is_empty() {
            "holds for every group and mode".to_string()
        } else {
            format!("{} deviations: {}", deviations.len(), deviations.join("; "))
        },
    );
    assert!(pass);
}
