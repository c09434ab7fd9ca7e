//! Brute-force ground truth: exhaustive feasibility search, tightness
//! checks and solver cross-validation.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{enumerate_small, random_c4_free, EnumFilter, SplitMix64};
use crate::degeneracy::{f_core, DemandFn};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::solver::{solve, verify_feasible, Bipartition, Certificate};

/// Largest order accepted by [`exists_feasible`].
pub const EXISTS_MAX: usize = 24;
/// Largest order accepted by [`search_tight_functions`].
pub const SEARCH_MAX: usize = 16;

const UNSET: u8 = 2;

struct Search<'a> {
    adj: &'a [Vec<usize>],
    need: [&'a [u32]; 2],
    side: Vec<u8>,
    same: Vec<[u32; 2]>,
    free: Vec<u32>,
    count: [usize; 2],
}

impl Search<'_> {
    fn room(&self, x: usize, s: usize) -> bool {
        self.same[x][s] + self.free[x] >= self.need[s][x]
    }

    // Places `v` on side `s` (0 = B, 1 = A); false when some placed vertex
    // can no longer reach its demand. The caller undoes either way.
    fn place(&mut self, v: usize, s: usize) -> bool {
        self.side[v] = s as u8;
        self.count[s] += 1;
        let mut ok = self.room(v, s);
        for &x in &self.adj[v] {
            self.free[x] -= 1;
            self.same[x][s] += 1;
            let t = self.side[x];
            if t != UNSET && t as usize != s && !self.room(x, t as usize) {
                ok = false;
            }
        }
        ok
    }

    fn unplace(&mut self, v: usize, s: usize) {
        for &x in &self.adj[v] {
            self.free[x] += 1;
            self.same[x][s] -= 1;
        }
        self.count[s] -= 1;
        self.side[v] = UNSET;
    }

    // Vertices are decided from the highest index down, B before A, so the
    // first leaf reached has the smallest A mask.
    fn run(&mut self, v: usize) -> bool {
        if v == 0 {
            return self.count[0] > 0 && self.count[1] > 0;
        }
        let v = v - 1;
        for s in [0, 1] {
            let ok = self.place(v, s);
            if ok && self.run(v) {
                return true;
            }
            self.unplace(v, s);
        }
        false
    }
}

/// First feasible partition in order of A's membership mask read as an
/// integer (bit `v` set when `v ∈ A`), or `None`. Both sides must be
/// non-empty. Branches are cut as soon as a placed vertex can no longer
/// reach its demand.
pub fn exists_feasible(g: &Graph, a: &DemandFn, b: &DemandFn) -> Result<Option<Bipartition>> {
    let n = g.n();
    if n > EXISTS_MAX {
        return Err(Error::TooLarge {
            what: "exhaustive feasibility search",
            n,
            max: EXISTS_MAX,
        });
    }
    a.check_len(n)?;
    b.check_len(n)?;
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut search = Search {
        adj: &adj,
        need: [b.values(), a.values()],
        side: vec![UNSET; n],
        same: vec![[0, 0]; n],
        free: (0..n).map(|v| g.degree(v) as u32).collect(),
        count: [0, 0],
    };
    if !search.run(n) {
        return Ok(None);
    }
    let mask: Vec<bool> = search.side.iter().map(|&s| s == 1).collect();
    Ok(Some(Bipartition::from_mask(&mask)))
}

/// Demands one short of the degree bound: `d_G(x) = a(x) + b(x) - 2` everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessInstance {
    pub graph: Graph,
    pub a: DemandFn,
    pub b: DemandFn,
}

impl TightnessInstance {
    /// Validates the instance, naming the first vertex that breaks it.
    pub fn new(graph: Graph, a: DemandFn, b: DemandFn) -> Result<Self> {
        let inst = TightnessInstance { graph, a, b };
        inst.validate()?;
        Ok(inst)
    }

    /// `d_G(x) - a(x) - b(x) + 2` per vertex; all zero for a valid instance.
    pub fn slack_check(&self) -> Vec<i64> {
        (0..self.graph.n())
            .map(|x| self.graph.degree(x) as i64 - self.a[x] as i64 - self.b[x] as i64 + 2)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.graph.n();
        self.a.check_len(n)?;
        self.b.check_len(n)?;
        for x in 0..n {
            if self.a[x] < 2 || self.b[x] < 2 {
                return Err(Error::NotTight {
                    vertex: x,
                    reason: format!(
                        "a = {}, b = {}; both must be at least 2",
                        self.a[x], self.b[x]
                    ),
                });
            }
        }
        if let Some((x, s)) = self
            .slack_check()
            .into_iter()
            .enumerate()
            .find(|&(_, s)| s != 0)
        {
            return Err(Error::NotTight {
                vertex: x,
                reason: format!(
                    "degree {} but a + b - 2 = {} (off by {s})",
                    self.graph.degree(x),
                    self.a[x] + self.b[x] - 2
                ),
            });
        }
        Ok(())
    }
}

/// True iff the instance admits no feasible partition.
pub fn verify_tightness(inst: &TightnessInstance) -> Result<bool> {
    inst.validate()?;
    Ok(exists_feasible(&inst.graph, &inst.a, &inst.b)?.is_none())
}

/// Every split `a(x) + b(x) = d_G(x) + 2` with `a, b ≥ 2` that leaves the
/// graph without a feasible partition, ordered by the `a` values read
/// lexicographically. Empty when some vertex has degree below 2.
pub fn search_tight_functions(g: &Graph) -> Result<Vec<TightnessInstance>> {
    let n = g.n();
    if n > SEARCH_MAX {
        return Err(Error::TooLarge {
            what: "tight function search",
            n,
            max: SEARCH_MAX,
        });
    }
    if (0..n).any(|x| g.degree(x) < 2) {
        return Ok(Vec::new());
    }
    // a(x) ranges over 2..=d(x); mixed-radix counter over those choices
    let radix: Vec<u64> = (0..n).map(|x| g.degree(x) as u64 - 1).collect();
    let total: u64 = radix.iter().product();
    let decode = |mut k: u64| -> Vec<u32> {
        let mut a = vec![0u32; n];
        for x in (0..n).rev() {
            a[x] = 2 + (k % radix[x]) as u32;
            k /= radix[x];
        }
        a
    };
    let found: Vec<Option<TightnessInstance>> = (0..total)
        .into_par_iter()
        .map(|k| {
            let a = decode(k);
            let b: Vec<u32> = (0..n).map(|x| g.degree(x) as u32 + 2 - a[x]).collect();
            let (a, b) = (DemandFn::new(a), DemandFn::new(b));
            match exists_feasible(g, &a, &b) {
                Ok(None) => Some(TightnessInstance {
                    graph: g.clone(),
                    a,
                    b,
                }),
                _ => None,
            }
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

/// One solver/oracle disagreement, with enough to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub reason: String,
}

/// Counts and disagreements from a cross-validation run. Merging is
/// associative, so shards can be combined in any grouping.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    /// Graphs that passed the filters.
    pub graphs: u64,
    /// Solved (graph, demand) instances.
    pub instances: u64,
    /// Instances per demand label such as `a=2,b=3` or `random`.
    pub per_demand: BTreeMap<String, u64>,
    pub discrepancies: Vec<Discrepancy>,
}

impl CrosscheckReport {
    pub fn merge(mut self, other: CrosscheckReport) -> CrosscheckReport {
        self.graphs += other.graphs;
        self.instances += other.instances;
        for (k, v) in other.per_demand {
            *self.per_demand.entry(k).or_default() += v;
        }
        self.discrepancies.extend(other.discrepancies);
        self
    }

    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }

    fn record(&mut self, g: &Graph, a: &DemandFn, b: &DemandFn, label: String) {
        self.instances += 1;
        *self.per_demand.entry(label).or_default() += 1;
        if let Some(reason) = disagreement(g, a, b) {
            self.discrepancies.push(Discrepancy {
                n: g.n(),
                edges: g.edges().collect(),
                a: a.values().to_vec(),
                b: b.values().to_vec(),
                reason,
            });
        }
    }
}

/// Checks one instance that meets the hypotheses: the solver must return a
/// verified feasible partition and the oracle must agree one exists.
fn disagreement(g: &Graph, a: &DemandFn, b: &DemandFn) -> Option<String> {
    let cert = match solve(g, a, b) {
        Ok(c) => c,
        Err(e) => return Some(format!("solver error: {e}")),
    };
    let Certificate::FeasiblePartition(part) = cert else {
        return Some(format!("solver returned {}", cert.status()));
    };
    match verify_feasible(g, a, b, &part) {
        Ok(true) => {}
        Ok(false) => return Some("solver partition fails verification".into()),
        Err(e) => return Some(format!("solver partition malformed: {e}")),
    }
    if g.n() <= EXISTS_MAX {
        match exists_feasible(g, a, b) {
            Ok(Some(_)) => {}
            Ok(None) => return Some("oracle finds no feasible partition".into()),
            Err(e) => return Some(format!("oracle error: {e}")),
        }
    }
    None
}

const SHARD: u64 = 1 << 14;

/// Sweeps every labeled C4-free graph on `1..=n_max` vertices against each
/// constant demand pair in `grid`, keeping the graphs with minimum degree at
/// least `a + b - 1`. `n_max` is capped at 7, or 8 with `allow_eight`.
pub fn crosscheck(
    n_max: usize,
    grid: &[(u32, u32)],
    allow_eight: bool,
) -> Result<CrosscheckReport> {
    for (i, &(a, b)) in grid.iter().enumerate() {
        for (which, v) in [("a", a), ("b", b)] {
            if v < 2 {
                return Err(Error::DemandTooSmall {
                    which,
                    vertex: i,
                    value: v,
                });
            }
        }
    }
    // validates n_max before any work
    enumerate_small(n_max, EnumFilter::default(), allow_eight)?;
    let Some(min_deg) = grid.iter().map(|&(a, b)| (a + b - 1) as usize).min() else {
        return Ok(CrosscheckReport::default());
    };
    let mut report = CrosscheckReport::default();
    for n in 1..=n_max {
        let filter = EnumFilter {
            c4_free: true,
            min_degree: Some(min_deg),
        };
        let masks = enumerate_small(n, filter, allow_eight)?.mask_count();
        let part = (0..masks.div_ceil(SHARD))
            .into_par_iter()
            .map(|k| {
                let mut r = CrosscheckReport::default();
                let graphs = enumerate_small(n, filter, allow_eight)
                    .expect("size checked above")
                    .with_range(k * SHARD, (k + 1) * SHARD);
                for g in graphs {
                    r.graphs += 1;
                    let delta = g.min_degree().unwrap_or(0);
                    for &(a, b) in grid {
                        if delta + 1 >= (a + b) as usize {
                            let (fa, fb) = (DemandFn::constant(n, a), DemandFn::constant(n, b));
                            r.record(&g, &fa, &fb, format!("a={a},b={b}"));
                        }
                    }
                }
                r
            })
            .reduce(CrosscheckReport::default, CrosscheckReport::merge);
        report = report.merge(part);
    }
    Ok(report)
}

/// Random counterpart of [`crosscheck`] for orders the exhaustive sweep
/// cannot reach. Instance `i` draws a maximal random C4-free graph on
/// `n_lo..=n_hi` vertices from seed `seed + i`, keeps its 3-core, and solves
/// it with `a = b = 2` and with random per-vertex demands satisfying
/// `a(x) + b(x) - 1 ≤ d(x)`. The oracle runs when the core has at most 24
/// vertices.
pub fn crosscheck_random(
    count: u64,
    n_lo: usize,
    n_hi: usize,
    seed: u64,
) -> Result<CrosscheckReport> {
    if n_lo > n_hi || n_lo < 4 {
        return Err(Error::Precondition(format!(
            "need 4 <= n_lo <= n_hi, got {n_lo}..={n_hi}"
        )));
    }
    let report = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut r = CrosscheckReport::default();
            let mut rng = SplitMix64::new(seed.wrapping_add(i));
            let n = n_lo + rng.below((n_hi - n_lo + 1) as u64) as usize;
            let g = random_c4_free(n, n * n, rng.next_u64()).graph;
            let core = f_core(&g, &VertexSet::full(n), &DemandFn::constant(n, 3));
            if core.len() < 4 {
                return r;
            }
            let g = g.induced(&core).graph;
            let m = g.n();
            r.graphs += 1;
            r.record(
                &g,
                &DemandFn::constant(m, 2),
                &DemandFn::constant(m, 2),
                "a=2,b=2".into(),
            );
            let mut a = Vec::with_capacity(m);
            let mut b = Vec::with_capacity(m);
            for x in 0..m {
                // d ≥ 3, so a in 2..=d-1 leaves b in 2..=d+1-a
                let d = g.degree(x) as u64;
                let ax = 2 + rng.below(d - 2);
                a.push(ax as u32);
                b.push((2 + rng.below(d - ax)) as u32);
            }
            r.record(&g, &DemandFn::new(a), &DemandFn::new(b), "random".into());
            r
        })
        .reduce(CrosscheckReport::default, CrosscheckReport::merge);
    Ok(report)
}
