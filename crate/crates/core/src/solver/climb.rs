//! Initial (a,b)-partition, hill-climbing on the weight, and pair extension.

use std::collections::BTreeSet;

use crate::degeneracy::{f_core, f_core_through_with, is_degenerate, is_good, minimal_good};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

use super::partition::{delta_swap, Bipartition, DemandPair, Partition, Side};
use super::probes::{claim4_probe, ProbeError, ProbeOutcome};
use super::{FeasiblePair, SolveStats, Trace};

/// Either a starting (a,b)-partition or an early feasible pair.
#[derive(Clone, Debug)]
pub enum Start {
    Pair(FeasiblePair),
    Partition(Partition),
}

/// The first applicable improving step at a partition.
#[derive(Clone, Debug)]
pub enum Step {
    Move(usize),
    Swap(usize, usize),
    Pair(FeasiblePair),
    Blocked,
}

#[derive(Clone, Debug)]
pub enum Climb {
    Pair(FeasiblePair),
    Blocked(Partition),
    Breach(String),
}

/// Builds the starting state from a minimal a-good set `M`: a feasible pair
/// if `V \ M` has a non-empty b-core, otherwise `(M \ {x}, V \ M ∪ {x})` for
/// the smallest `x ∈ M` with `d_M(x) = a(x)`. Demands must be normalized.
pub fn initial_partition(g: &Graph, d: &DemandPair) -> Result<Start> {
    let n = g.n();
    let m = minimal_good(g, &VertexSet::full(n), &d.a)
        .ok_or_else(|| Error::Precondition("vertex set is not a-good".into()))?;
    let rest = m.complement();
    let core = f_core(g, &rest, &d.b);
    if !core.is_empty() {
        return Ok(Start::Pair(FeasiblePair { a: m, b: core }));
    }
    let x = m
        .iter()
        .find(|&x| g.degree_in(x, &m) == d.a[x] as usize)
        .ok_or_else(|| Error::Precondition("minimal a-good set has no exact vertex".into()))?;
    let mut a_side = m;
    a_side.remove(x);
    Ok(Start::Partition(Partition::new(g, d, &a_side)?))
}

fn with_vertex(set: VertexSet, v: usize) -> VertexSet {
    let mut s = set;
    s.insert(v);
    s
}

fn without_vertex(set: VertexSet, v: usize) -> VertexSet {
    let mut s = set;
    s.remove(v);
    s
}

/// Scans the move menu in order: single moves out of `A*`, then out of `B*`,
/// then the first non-adjacent deficient pair (which yields a feasible pair),
/// then strictly improving swaps keeping both sides degenerate.
pub fn find_step(
    g: &Graph,
    d: &DemandPair,
    p: &Partition,
) -> std::result::Result<Step, ProbeError> {
    Stepper::new(p.n()).next(g, d, p)
}

/// Move scanner that remembers failed single-move checks. A failed check
/// for `u` into side `T` comes with the non-empty core of `T ∪ {u}`; that
/// core survives until one of its vertices leaves `T`.
struct Stepper {
    witness: [Vec<Option<VertexSet>>; 2],
}

impl Stepper {
    fn new(n: usize) -> Self {
        Stepper {
            witness: [vec![None; n], vec![None; n]],
        }
    }

    /// Records that `v` left side `s`.
    fn left(&mut self, s: Side, v: usize) {
        for w in self.witness[s as usize].iter_mut() {
            if w.as_ref().is_some_and(|core| core.contains(v)) {
                *w = None;
            }
        }
    }

    fn next(
        &mut self,
        g: &Graph,
        d: &DemandPair,
        p: &Partition,
    ) -> std::result::Result<Step, ProbeError> {
        let stars = [p.deficient(d, Side::A), p.deficient(d, Side::B)];
        for s in [Side::A, Side::B] {
            if p.size(s) < 2 {
                continue;
            }
            let t = s.other();
            let ti = t as usize;
            let t_set = p.set(t);
            for &(u, _) in &stars[s as usize] {
                if self.witness[ti][u].is_some() {
                    continue;
                }
                let mut deg: Vec<usize> = (0..p.n()).map(|x| p.deg(x, t) as usize).collect();
                for &w in g.neighbors(u) {
                    deg[w] += 1;
                }
                let grown = with_vertex(t_set.clone(), u);
                match f_core_through_with(g, &grown, d.of(t), u, deg) {
                    None => return Ok(Step::Move(u)),
                    core => self.witness[ti][u] = core,
                }
            }
        }
        for &(u, _) in &stars[0] {
            for &(v, _) in &stars[1] {
                if !g.adjacent(u, v) {
                    return match claim4_probe(g, d, p, u, v)? {
                        ProbeOutcome::Pair(pair) => Ok(Step::Pair(pair)),
                        ProbeOutcome::Improve(_) => Ok(Step::Move(u)),
                        other => Err(ProbeError::Contradiction(format!(
                            "non-adjacent deficient pair gave {other:?}"
                        ))),
                    };
                }
            }
        }
        let (set_a, set_b) = (p.set(Side::A), p.set(Side::B));
        for &(u, alpha) in &stars[0] {
            for &(v, beta) in &stars[1] {
                if alpha + beta <= 2 || delta_swap(g, d, p, u, v) <= 0 {
                    continue;
                }
                let a2 = with_vertex(without_vertex(set_a.clone(), u), v);
                let b2 = with_vertex(without_vertex(set_b.clone(), v), u);
                if is_degenerate(g, &a2, &d.a) && is_degenerate(g, &b2, &d.b) {
                    return Ok(Step::Swap(u, v));
                }
            }
        }
        Ok(Step::Blocked)
    }
}

/// Applies improving steps until none is left or a feasible pair appears.
pub fn climb(
    g: &Graph,
    d: &DemandPair,
    mut p: Partition,
    stats: &mut SolveStats,
    trace: &mut Trace,
) -> Climb {
    let mut stepper = Stepper::new(p.n());
    loop {
        match stepper.next(g, d, &p) {
            Ok(Step::Move(u)) => {
                stepper.left(p.side(u), u);
                p.move_vertex(g, d, u);
                stats.improving_moves += 1;
                stats.hit("move");
                trace.push("move", p.weight(), &[u]);
            }
            Ok(Step::Swap(u, v)) => {
                stepper.left(p.side(u), u);
                stepper.left(p.side(v), v);
                p.swap(g, d, u, v);
                stats.improving_moves += 1;
                stats.hit("swap");
                trace.push("swap", p.weight(), &[u, v]);
            }
            Ok(Step::Pair(pair)) => {
                stats.hit("claim4");
                trace.push("claim4_pair", p.weight(), &[]);
                return Climb::Pair(pair);
            }
            Ok(Step::Blocked) => return Climb::Blocked(p),
            Err(e) => return Climb::Breach(e.to_string()),
        }
    }
}

/// Grows a feasible pair into a feasible partition: vertices outside the pair
/// that already meet `a` toward `A` join `A` (smallest first, repeatedly);
/// everything left joins `B`.
pub fn extend_pair(g: &Graph, d: &DemandPair, pair: &FeasiblePair) -> Result<Bipartition> {
    if !pair.is_valid(g, d) {
        return Err(Error::Precondition("input is not a feasible pair".into()));
    }
    let n = g.n();
    let mut a = pair.a.clone();
    let mut free: Vec<bool> = (0..n)
        .map(|x| !a.contains(x) && !pair.b.contains(x))
        .collect();
    let mut to_a: Vec<u32> = (0..n).map(|x| g.degree_in(x, &a) as u32).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&x| free[x] && to_a[x] >= d.a[x]).collect();
    while let Some(x) = ready.pop_first() {
        free[x] = false;
        a.insert(x);
        for &w in g.neighbors(x) {
            to_a[w] += 1;
            if free[w] && to_a[w] >= d.a[w] {
                ready.insert(w);
            }
        }
    }
    let b = a.complement();
    if !is_good(g, &a, &d.a) || !is_good(g, &b, &d.b) {
        return Err(Error::Precondition(
            "extended partition is not feasible; degree hypothesis fails".into(),
        ));
    }
    Ok(Bipartition {
        a: a.to_vec(),
        b: b.to_vec(),
    })
}
