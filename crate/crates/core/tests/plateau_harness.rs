//! Runs climb and the plateau schedule from many random (a,b)-partitions of
//! random C4-free graphs with random demands. Every run must end in a
//! feasible pair, improvements must raise the weight, and every blocked
//! state must still be an (a,b)-partition with both deficiency sets
//! non-empty.

use std::collections::BTreeMap;

use c4part::constructions::{random_c4_free, SplitMix64};
use c4part::degeneracy::{f_core, is_degenerate, DemandFn};
use c4part::graph::{Graph, VertexSet};
use c4part::solver::{
    climb, normalize, plateau_schedule, verify_hypotheses, Climb, DemandPair, Partition,
    ScheduleExit, Side, SolveStats, Trace,
};

fn random_instance(seed: u64, rng: &mut SplitMix64) -> Option<(Graph, DemandPair)> {
    let n = 12 + (seed % 40) as usize;
    let rg = random_c4_free(n, n * n, seed);
    let core = f_core(&rg.graph, &VertexSet::full(n), &DemandFn::constant(n, 3));
    if core.len() < 6 {
        return None;
    }
    let g = rg.graph.induced(&core).graph;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for x in 0..g.n() {
        let d = g.degree(x) as u64;
        let ax = 2 + rng.below(d - 2);
        a.push(ax as u32);
        b.push((2 + rng.below(d - ax)) as u32);
    }
    let d = DemandPair::new(DemandFn::new(a), DemandFn::new(b));
    assert!(verify_hypotheses(&g, &d).unwrap().is_none());
    Some((g, d))
}

/// Random side assignment, repaired by pushing core vertices across until
/// neither side holds a good subset.
fn random_start(g: &Graph, d: &DemandPair, rng: &mut SplitMix64) -> Option<Partition> {
    let n = g.n();
    let mut in_a: Vec<bool> = (0..n).map(|_| rng.below(2) == 1).collect();
    for _ in 0..4 * n {
        let sa = VertexSet::from_mask(in_a.clone());
        if let Some(x) = f_core(g, &sa, &d.a).iter().next() {
            in_a[x] = false;
            continue;
        }
        if let Some(x) = f_core(g, &sa.complement(), &d.b).iter().next() {
            in_a[x] = true;
            continue;
        }
        if sa.is_empty() || sa.len() == n {
            return None;
        }
        return Partition::new(g, d, &sa).ok();
    }
    None
}

#[test]
fn random_starts_always_reach_a_pair() {
    let mut rng = SplitMix64::new(99);
    let mut outcomes = BTreeMap::<&str, u64>::new();
    let mut probes = BTreeMap::<String, u64>::new();
    let mut failures = Vec::new();
    for seed in 0..1500u64 {
        let Some((g, d)) = random_instance(seed, &mut rng) else {
            continue;
        };
        let d = normalize(&g, &d);
        for trial in 0..12 {
            let Some(mut p) = random_start(&g, &d, &mut rng) else {
                continue;
            };
            let mut stats = SolveStats::default();
            let mut trace = Trace::default();
            let outcome = loop {
                match climb(&g, &d, p, &mut stats, &mut trace) {
                    Climb::Pair(pair) => {
                        assert!(pair.is_valid(&g, &d));
                        break "climb_pair";
                    }
                    Climb::Breach(e) => {
                        failures.push(format!("seed {seed} trial {trial}: climb {e}"));
                        break "breach";
                    }
                    Climb::Blocked(bp) => {
                        assert!(is_degenerate(&g, &bp.set(Side::A), &d.a));
                        assert!(is_degenerate(&g, &bp.set(Side::B), &d.b));
                        assert!(!bp.deficient(&d, Side::A).is_empty());
                        assert!(!bp.deficient(&d, Side::B).is_empty());
                        match plateau_schedule(&g, &d, &bp, &mut stats, &mut trace) {
                            ScheduleExit::Improve(q) => {
                                assert!(q.weight() > bp.weight());
                                p = q;
                            }
                            ScheduleExit::Pair(pair) => {
                                assert!(pair.is_valid(&g, &d));
                                break "plateau_pair";
                            }
                            ScheduleExit::C4(c) => {
                                failures.push(format!("seed {seed} trial {trial}: 4-cycle {c:?}"));
                                break "c4";
                            }
                            ScheduleExit::Breach(e) => {
                                failures.push(format!("seed {seed} trial {trial}: {e}"));
                                break "breach";
                            }
                        }
                    }
                }
            };
            *outcomes.entry(outcome).or_default() += 1;
            for (k, v) in stats.probes {
                *probes.entry(k).or_default() += v;
            }
        }
    }
    eprintln!("{outcomes:?}\n{probes:?}");
    assert!(failures.is_empty(), "{failures:#?}");
    assert!(outcomes["plateau_pair"] > 0);
    // the corpus is fixed, so these branches are reached on every run
    for branch in [
        "star",
        "special_path",
        "case1",
        "case2",
        "case3_A1",
        "case3_B2",
        "case3_B5",
        "chain_fallback",
        "opposite_path",
        "exchange",
    ] {
        assert!(
            probes.get(branch).copied().unwrap_or(0) > 0,
            "branch {branch} not reached"
        );
    }
}
