//! Plateau schedule: what to do at a blocked (a,b)-partition.
//!
//! The schedule confirms the deficient sets form a star, pins down one
//! configuration per side, orients the special path `u1 ~ u ~ v ~ v1`, and
//! then runs the exchange sequence for the configuration pair. Every
//! exchanged partition is validated (equal weight, both sides degenerate)
//! before it is probed, so a failed validation surfaces as an improvement or
//! a feasible pair instead of being assumed away.

use std::collections::HashSet;

use crate::degeneracy::f_core;
use crate::graph::{FourCycle, Graph, VertexSet};

use super::climb::{find_step, Step};
use super::partition::{DemandPair, Partition, Side};
use super::probes::{
    all_deficient_pair, anchor, claim4_probe, claim6_swap, detect_configuration, diamond,
    star_structure, ConfigKind, Configuration, Detection, ProbeOutcome, Refinement,
};
use super::{FeasiblePair, SolveStats, Trace};

/// Nested re-analysis bound; the deepest chain needs one level.
const MAX_DEPTH: usize = 4;

/// Exit of one plateau episode.
#[derive(Clone, Debug)]
pub enum ScheduleExit {
    /// A heavier (a,b)-partition; climbing resumes from it.
    Improve(Partition),
    Pair(FeasiblePair),
    C4(FourCycle),
    /// The schedule ran out of cases; carries the reason.
    Breach(String),
}

type Flow = Result<ProbeOutcome, String>;

enum Exchanged {
    Plateau(Partition),
    Exit(ProbeOutcome),
}

struct Ctx<'a> {
    g: &'a Graph,
    d: &'a DemandPair,
    base: i64,
    visited: HashSet<u64>,
    stats: &'a mut SolveStats,
    trace: &'a mut Trace,
}

/// Runs the schedule from the blocked partition `p`.
pub fn plateau_schedule(
    g: &Graph,
    d: &DemandPair,
    p: &Partition,
    stats: &mut SolveStats,
    trace: &mut Trace,
) -> ScheduleExit {
    let mut ctx = Ctx {
        g,
        d,
        base: p.weight(),
        visited: HashSet::new(),
        stats,
        trace,
    };
    match ctx.analyze(p, 0) {
        Ok(ProbeOutcome::Improve(q)) => ScheduleExit::Improve(q),
        Ok(ProbeOutcome::Pair(pair)) => ScheduleExit::Pair(pair),
        Ok(ProbeOutcome::C4(c)) => ScheduleExit::C4(c),
        Ok(ProbeOutcome::Refine(r)) => ScheduleExit::Breach(format!("schedule ended on {r:?}")),
        Err(reason) => ScheduleExit::Breach(reason),
    }
}

impl Ctx<'_> {
    fn adj(&self, x: usize, y: usize) -> bool {
        self.g.adjacent(x, y)
    }

    fn hit(&mut self, name: &str, p: &Partition, vertices: &[usize]) {
        self.stats.hit(name);
        self.trace.push(name, p.weight(), vertices);
    }

    fn cycle(&self, c: [usize; 4]) -> Flow {
        let c = FourCycle(c);
        if c.is_valid_in(self.g) {
            Ok(ProbeOutcome::C4(c))
        } else {
            Err(format!("expected 4-cycle {:?} is not in the graph", c.0))
        }
    }

    fn claim4(&mut self, p: &Partition, x: usize, y: usize) -> Flow {
        self.hit("claim4", p, &[x, y]);
        claim4_probe(self.g, self.d, p, x, y).map_err(|e| e.to_string())
    }

    /// Probe on the special path `x1 ~ x ~ y ~ y1` with `x1 ≁ y`
    /// and `y1 ≁ x`: exchanging `x`, `y` leaves `x1`, `y1` deficient, so they
    /// are adjacent (a 4-cycle) or give a pair.
    fn special_path(&mut self, p: &Partition, x1: usize, x: usize, y: usize, y1: usize) -> Flow {
        self.hit("special_path", p, &[x1, x, y, y1]);
        match claim6_swap(self.g, self.d, p, x, y).map_err(|e| e.to_string())? {
            ProbeOutcome::Refine(Refinement::Plateau(q)) => {
                if self.adj(x1, y1) {
                    self.cycle([x1, x, y, y1])
                } else {
                    self.claim4(&q, x1, y1)
                }
            }
            other => Ok(other),
        }
    }

    /// Applies exchanges in order and validates the result. Equal weight with
    /// both sides degenerate is a plateau partition; anything else is turned
    /// into an exit.
    fn exchange(&mut self, p: &Partition, swaps: &[(usize, usize)]) -> Result<Exchanged, String> {
        let mut q = p.clone();
        for &(x, y) in swaps {
            if q.side(x) == q.side(y) {
                return Err(format!("exchange of {x} and {y} on the same side"));
            }
            q.swap(self.g, self.d, x, y);
        }
        let flat: Vec<usize> = swaps.iter().flat_map(|&(x, y)| [x, y]).collect();
        self.hit("exchange", &q, &flat);
        if q.weight() < self.base {
            return Err(format!("exchange {swaps:?} lost weight"));
        }
        let core_a = f_core(self.g, &q.set(Side::A), &self.d.a);
        let core_b = f_core(self.g, &q.set(Side::B), &self.d.b);
        if core_a.is_empty() && core_b.is_empty() {
            return Ok(if q.weight() > self.base {
                Exchanged::Exit(ProbeOutcome::Improve(q))
            } else {
                Exchanged::Plateau(q)
            });
        }
        if let Some(pair) = self.pair_from(&core_a, &core_b) {
            return Ok(Exchanged::Exit(ProbeOutcome::Pair(pair)));
        }
        Err(format!("exchange {swaps:?} left a non-degenerate side"))
    }

    fn pair_from(&self, core_a: &VertexSet, core_b: &VertexSet) -> Option<FeasiblePair> {
        if !core_a.is_empty() {
            let b = f_core(self.g, &core_a.complement(), &self.d.b);
            if !b.is_empty() {
                return Some(FeasiblePair {
                    a: core_a.clone(),
                    b,
                });
            }
        }
        if !core_b.is_empty() {
            let a = f_core(self.g, &core_b.complement(), &self.d.a);
            if !a.is_empty() {
                return Some(FeasiblePair {
                    a,
                    b: core_b.clone(),
                });
            }
        }
        None
    }

    /// Checks shared by every blocked partition: no improving step, star
    /// structure, unit slacks, and the whole-side-deficient exit.
    fn prelude(&mut self, p: &Partition) -> Result<Option<ProbeOutcome>, String> {
        let (g, d) = (self.g, self.d);
        match find_step(g, d, p).map_err(|e| e.to_string())? {
            Step::Blocked => {}
            Step::Move(u) => {
                self.hit("plateau_move", p, &[u]);
                let mut q = p.clone();
                q.move_vertex(g, d, u);
                return Ok(Some(ProbeOutcome::Improve(q)));
            }
            Step::Swap(u, v) => {
                self.hit("plateau_swap", p, &[u, v]);
                let mut q = p.clone();
                q.swap(g, d, u, v);
                return Ok(Some(ProbeOutcome::Improve(q)));
            }
            Step::Pair(pair) => {
                self.hit("claim4", p, &[]);
                return Ok(Some(ProbeOutcome::Pair(pair)));
            }
        }
        self.hit("star", p, &[]);
        match star_structure(g, d, p).map_err(|e| e.to_string())? {
            ProbeOutcome::Refine(_) => {}
            other => return Ok(Some(other)),
        }
        let a_star = p.deficient(d, Side::A);
        let b_star = p.deficient(d, Side::B);
        for &(u, alpha) in &a_star {
            for &(v, beta) in &b_star {
                if alpha >= 2 || beta >= 2 {
                    self.hit("claim6", p, &[u, v]);
                    return match claim6_swap(g, d, p, u, v).map_err(|e| e.to_string())? {
                        ProbeOutcome::Refine(r) => Err(format!("unit-slack exchange gave {r:?}")),
                        other => Ok(Some(other)),
                    };
                }
            }
        }
        for s in [Side::A, Side::B] {
            if let Some(pair) = all_deficient_pair(g, d, p, s).map_err(|e| e.to_string())? {
                self.hit("claim7", p, &[]);
                return Ok(Some(ProbeOutcome::Pair(pair)));
            }
        }
        Ok(None)
    }

    fn detect(
        &mut self,
        p: &Partition,
        s: Side,
    ) -> Result<Result<Configuration, ProbeOutcome>, String> {
        match detect_configuration(self.g, self.d, p, s).map_err(|e| e.to_string())? {
            Detection::Found(c) => {
                self.hit(&format!("config_{c}"), p, &[c.u, c.u1, c.u2]);
                Ok(Ok(c))
            }
            Detection::Resolved(out) => Ok(Err(out)),
        }
    }

    fn analyze(&mut self, p: &Partition, depth: usize) -> Flow {
        if depth > MAX_DEPTH {
            return Err(format!("plateau analysis deeper than {MAX_DEPTH}"));
        }
        if !self.visited.insert(p.fingerprint()) {
            return Err("plateau partition revisited".into());
        }
        if let Some(out) = self.prelude(p)? {
            return Ok(out);
        }
        let ca = match self.detect(p, Side::A)? {
            Ok(c) => c,
            Err(out) => return Ok(out),
        };
        let cb = match self.detect(p, Side::B)? {
            Ok(c) => c,
            Err(out) => return Ok(out),
        };
        let (u1, u, v, v1) = (ca.u1, ca.u, cb.u, cb.u1);
        if !self.adj(u, v) {
            return self.claim4(p, u, v);
        }
        match (self.adj(u1, v), self.adj(v1, u)) {
            (true, true) => self.cycle([u1, u, v1, v]),
            (false, false) => self.special_path(p, u1, u, v, v1),
            (true, false) => self.cases(p, ca, cb, depth),
            (false, true) => self.cases(p, cb, ca, depth),
        }
    }

    /// Dispatch with the special path oriented so that `u1 ~ v`, `v1 ≁ u`,
    /// where `cs` sits on the side of `u` and `ct` on the side of `v`.
    fn cases(&mut self, p: &Partition, cs: Configuration, ct: Configuration, depth: usize) -> Flow {
        let (u, u1, u2) = (cs.u, cs.u1, cs.u2);
        match cs.kind {
            ConfigKind::Triangle => {
                self.hit("triangle_cycle", p, &[u, u1, u2]);
                return self.cycle([u2, u, ct.u, u1]);
            }
            ConfigKind::Chain => {
                self.hit("chain_cycle", p, &[u, u1, u2]);
                let up = cs.u_prime.ok_or("chain without second anchor")?;
                return self.cycle([u1, u2, up, ct.u]);
            }
            ConfigKind::SharedAnchor => return self.case1(p, u, u1, u2, ct.u, ct.u1),
            ConfigKind::SplitAnchors | ConfigKind::Path => {}
        }
        if ct.kind == ConfigKind::Path {
            return self.opposite_path(p, u, u1, ct);
        }
        match cs.kind {
            ConfigKind::SplitAnchors => self.case2(p, cs, ct, depth),
            _ => self.case3(p, cs, ct, depth),
        }
    }

    /// Two exact vertices on the anchor `u`: the second special path
    /// `u2 ~ u ~ v ~ v1` closes a 4-cycle or gives a pair.
    fn case1(
        &mut self,
        p: &Partition,
        u: usize,
        u1: usize,
        u2: usize,
        v: usize,
        v1: usize,
    ) -> Flow {
        self.hit("case1", p, &[u, u1, u2, v, v1]);
        if self.adj(u2, v) {
            return self.cycle([u1, u, u2, v]);
        }
        if self.adj(u, v1) {
            return self.cycle([u, v1, v, u1]);
        }
        self.special_path(p, u2, u, v, v1)
    }

    /// A path configuration on the side of `v` (exact `v1 ~ v2`, `v2 ≁ v`):
    /// exchanging `u` and `v1` leaves `u1` and `v2` deficient.
    fn opposite_path(&mut self, p: &Partition, u: usize, u1: usize, ct: Configuration) -> Flow {
        let (v, v1, v2) = (ct.u, ct.u1, ct.u2);
        self.hit("opposite_path", p, &[u, u1, v, v1, v2]);
        let q = match self.exchange(p, &[(u, v1)])? {
            Exchanged::Plateau(q) => q,
            Exchanged::Exit(out) => return Ok(out),
        };
        if self.adj(u1, v2) {
            return self.cycle([u1, v2, v1, v]);
        }
        self.claim4(&q, u1, v2)
    }

    /// Distinct anchors on the side of `u`, so the other deficient set is
    /// `{v}`. Every diamond vertex is forced next to `v`, after which a path
    /// configuration appears one layer further in.
    fn case2(&mut self, p: &Partition, cs: Configuration, ct: Configuration, depth: usize) -> Flow {
        let (g, d) = (self.g, self.d);
        let s = cs.side;
        let (u, u1) = (cs.u, cs.u1);
        let (v, v1, v2) = (ct.u, ct.u1, ct.u2);
        self.hit("case2", p, &[u, u1, v, v1]);
        if p.deficient(d, s.other()).len() != 1 {
            return Err("two anchors on one side but two deficient vertices opposite".into());
        }
        if !matches!(ct.kind, ConfigKind::SharedAnchor | ConfigKind::Triangle) {
            return Err(format!("configuration {ct} needs two deficient vertices"));
        }
        let dia = diamond(g, d, p, s);
        for &w in &dia {
            if w == u1 || self.adj(w, v) {
                continue;
            }
            let wp =
                anchor(g, d, p, w).ok_or_else(|| format!("diamond vertex {w} has no anchor"))?;
            if wp == u {
                return self.case1(p, u, u1, w, v, v1);
            }
            if !self.adj(wp, v1) {
                return self.special_path(p, w, wp, v, v1);
            }
            if ct.kind == ConfigKind::Triangle {
                return self.cycle([wp, v, v2, v1]);
            }
            if self.adj(wp, v2) {
                return self.cycle([wp, v1, v, v2]);
            }
            return self.special_path(p, w, wp, v, v2);
        }
        // every diamond vertex now sees v
        let mut core_ring = VertexSet::from_vertices(g.n(), dia.iter().copied());
        for (x, _) in p.deficient(d, s) {
            core_ring.insert(x);
        }
        let mut rest = p.set(s);
        for x in core_ring.iter() {
            rest.remove(x);
        }
        if rest.is_empty() {
            let w = dia[0];
            let nb: Vec<usize> = g
                .neighbors(w)
                .iter()
                .copied()
                .filter(|&y| p.is_on(y, s))
                .collect();
            if nb.len() < 2 {
                return Err(format!(
                    "diamond vertex {w} has fewer than two neighbors on its side"
                ));
            }
            return self.cycle([nb[0], w, nb[1], v]);
        }
        let f = d.of(s);
        let x = rest
            .iter()
            .find(|&x| (g.degree_in(x, &rest) as u32) < f[x])
            .ok_or("inner layer has no low-degree vertex")?;
        let ring: Vec<usize> = g
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&y| core_ring.contains(y))
            .collect();
        let xp = match ring[..] {
            [y] => y,
            [y, z, ..] => return self.cycle([y, x, z, v]),
            [] => return Err(format!("{x} has no neighbor in the outer layers")),
        };
        if !dia.contains(&xp) {
            return Err(format!("{x} hangs off a deficient vertex"));
        }
        let xpp = anchor(g, d, p, xp).ok_or_else(|| format!("{xp} has no anchor"))?;
        if self.adj(xpp, v1) {
            return self.cycle([xpp, v1, v, xp]);
        }
        let path = Configuration {
            side: s,
            kind: ConfigKind::Path,
            u: xpp,
            u_prime: None,
            u1: xp,
            u2: x,
        };
        self.hit("case2_to_path", p, &[xpp, xp, x]);
        self.case3(p, path, ct, depth)
    }

    /// Path configuration `u ~ u1 ~ u2` against each configuration on the
    /// side of `v`.
    fn case3(&mut self, p: &Partition, cs: Configuration, ct: Configuration, depth: usize) -> Flow {
        let (u, u1, u2) = (cs.u, cs.u1, cs.u2);
        let (v, v1, v2) = (ct.u, ct.u1, ct.u2);
        self.hit(&format!("case3_{ct}"), p, &[u, u1, u2, v, v1, v2]);
        match ct.kind {
            ConfigKind::SharedAnchor => {
                let q = match self.exchange(p, &[(u, v1)])? {
                    Exchanged::Plateau(q) => q,
                    Exchanged::Exit(out) => return Ok(out),
                };
                if q.slack(self.d, v2) > 0 {
                    if self.adj(u1, v2) {
                        return self.cycle([u1, v2, v1, v]);
                    }
                    return self.claim4(&q, u1, v2);
                }
                if self.adj(u2, v) {
                    return self.cycle([u2, u1, u, v]);
                }
                if self.adj(u1, v2) {
                    return self.cycle([u1, v2, v, u]);
                }
                self.special_path(&q, u2, u1, v, v2)
            }
            ConfigKind::SplitAnchors => {
                let vp = ct.u_prime.ok_or("split anchors without second anchor")?;
                let q = match self.exchange(p, &[(u1, vp)])? {
                    Exchanged::Plateau(q) => q,
                    Exchanged::Exit(out) => return Ok(out),
                };
                for x in [u, u2] {
                    if !self.adj(x, v2) {
                        return self.claim4(&q, x, v2);
                    }
                }
                self.cycle([u, u1, u2, v2])
            }
            ConfigKind::Path => self.opposite_path(p, u, u1, ct),
            ConfigKind::Triangle => {
                let q = match self.exchange(p, &[(u, v), (u1, v1)])? {
                    Exchanged::Plateau(q) => q,
                    Exchanged::Exit(out) => return Ok(out),
                };
                if !self.adj(u2, v2) {
                    return self.claim4(&q, u2, v2);
                }
                self.cycle([v, u1, u2, v2])
            }
            ConfigKind::Chain => self.chain_exchange(p, cs, ct, depth),
        }
    }

    /// Path against chain: a double exchange forces a chain through `v`, `v1`
    /// on the other side; a third exchange with its far anchor then leaves
    /// `v` and `v'` deficient on opposite sides.
    fn chain_exchange(
        &mut self,
        p: &Partition,
        cs: Configuration,
        ct: Configuration,
        depth: usize,
    ) -> Flow {
        let (u, u1) = (cs.u, cs.u1);
        let (v, v1, v2) = (ct.u, ct.u1, ct.u2);
        let vp = ct.u_prime.ok_or("chain without second anchor")?;
        let q = match self.exchange(p, &[(u, v), (u1, v1)])? {
            Exchanged::Plateau(q) => q,
            Exchanged::Exit(out) => return Ok(out),
        };
        if !self.visited.insert(q.fingerprint()) {
            return Err("plateau partition revisited".into());
        }
        if let Some(out) = self.prelude(&q)? {
            return Ok(out);
        }
        let found = match self.detect(&q, cs.side)? {
            Ok(c) => c,
            Err(out) => return Ok(out),
        };
        if found.kind == ConfigKind::Chain && found.u == v && found.u1 == v1 {
            let vpp = found.u_prime.ok_or("chain without second anchor")?;
            let r = match self.exchange(&q, &[(vpp, v2)])? {
                Exchanged::Plateau(r) => r,
                Exchanged::Exit(out) => return Ok(out),
            };
            if !self.adj(v, vp) {
                return self.claim4(&r, v, vp);
            }
            return self.cycle([vp, v, u1, u]);
        }
        self.hit("chain_fallback", &q, &[]);
        self.visited.remove(&q.fingerprint());
        self.analyze(&q, depth + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::named_graph;
    use crate::degeneracy::is_degenerate;
    use crate::solver::climb::{climb, Climb};

    #[test]
    fn schedule_from_every_petersen_start() {
        // every (a,b)-partition of Petersen with a = b = 2 climbs to a pair or
        // a blocked state the schedule resolves
        let g = named_graph("petersen").unwrap();
        let d = DemandPair::constant(10, 2, 2);
        let mut starts = 0;
        for mask in 1u32..(1 << 10) - 1 {
            let a = VertexSet::from_vertices(10, (0..10).filter(|&x| mask >> x & 1 == 1));
            if !is_degenerate(&g, &a, &d.a) || !is_degenerate(&g, &a.complement(), &d.b) {
                continue;
            }
            starts += 1;
            let mut p = Partition::new(&g, &d, &a).unwrap();
            let mut stats = SolveStats::default();
            let mut trace = Trace::default();
            loop {
                match climb(&g, &d, p, &mut stats, &mut trace) {
                    Climb::Pair(pair) => {
                        assert!(pair.is_valid(&g, &d));
                        break;
                    }
                    Climb::Blocked(b) => match plateau_schedule(&g, &d, &b, &mut stats, &mut trace)
                    {
                        ScheduleExit::Improve(q) => {
                            assert!(q.weight() > b.weight());
                            p = q;
                        }
                        ScheduleExit::Pair(pair) => {
                            assert!(pair.is_valid(&g, &d));
                            break;
                        }
                        other => panic!("start {mask:#x}: {other:?}"),
                    },
                    Climb::Breach(e) => panic!("{e}"),
                }
            }
        }
        assert!(starts > 0);
    }
}
