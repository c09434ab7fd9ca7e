//! Probes run at a blocked (a,b)-partition. Each inspects a small part of
//! the structure and either finds an improving partition, a disjoint feasible
//! pair, a 4-cycle, or returns the structural fact it established.

use std::fmt;

use thiserror::Error;

use crate::degeneracy::{f_core, is_good};
use crate::graph::{FourCycle, Graph, VertexSet};

use super::partition::{DemandPair, Partition, Side};
use super::FeasiblePair;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refinement {
    /// `A*` and `B*` are complete to each other, one of them is the given
    /// singleton side, and no outside vertex sees two deficient vertices of
    /// the same side.
    StarStructure { singleton: Side },
    /// An equal-weight (a,b)-partition reached by an exchange.
    Plateau(Partition),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    Improve(Partition),
    Pair(FeasiblePair),
    C4(FourCycle),
    Refine(Refinement),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ProbeError {
    #[error("probe precondition failed: {0}")]
    Precondition(String),
    #[error("probe reached an impossible state: {0}")]
    Contradiction(String),
}

type ProbeResult<T> = std::result::Result<T, ProbeError>;

fn pre(msg: impl Into<String>) -> ProbeError {
    ProbeError::Precondition(msg.into())
}

fn contra(msg: impl Into<String>) -> ProbeError {
    ProbeError::Contradiction(msg.into())
}

fn pair_for(s: Side, on_s: VertexSet, on_t: VertexSet) -> FeasiblePair {
    match s {
        Side::A => FeasiblePair { a: on_s, b: on_t },
        Side::B => FeasiblePair { a: on_t, b: on_s },
    }
}

fn plus(mut set: VertexSet, v: usize) -> VertexSet {
    set.insert(v);
    set
}

fn minus(mut set: VertexSet, v: usize) -> VertexSet {
    set.remove(v);
    set
}

/// Probe on deficient `x`, `y` from opposite sides with `x ≁ y`. If moving
/// either across keeps the receiving side degenerate, that move improves the
/// weight. Otherwise the two enlarged sides have cores avoiding `x` and `y`
/// respectively, which form a feasible pair.
pub fn claim4_probe(
    g: &Graph,
    d: &DemandPair,
    p: &Partition,
    x: usize,
    y: usize,
) -> ProbeResult<ProbeOutcome> {
    let s = p.side(x);
    let t = s.other();
    if p.side(y) != t {
        return Err(pre(format!("{x} and {y} are on the same side")));
    }
    if g.adjacent(x, y) {
        return Err(pre(format!("{x} and {y} are adjacent")));
    }
    if p.slack(d, x) <= 0 || p.slack(d, y) <= 0 {
        return Err(pre(format!("{x} or {y} is not deficient")));
    }
    let t_core = f_core(g, &plus(p.set(t), x), d.of(t));
    if t_core.is_empty() {
        if p.size(s) < 2 {
            return Err(contra(format!("moving {x} would empty its side")));
        }
        let mut q = p.clone();
        q.move_vertex(g, d, x);
        return Ok(ProbeOutcome::Improve(q));
    }
    let s_core = f_core(g, &plus(p.set(s), y), d.of(s));
    if s_core.is_empty() {
        if p.size(t) < 2 {
            return Err(contra(format!("moving {y} would empty its side")));
        }
        let mut q = p.clone();
        q.move_vertex(g, d, y);
        return Ok(ProbeOutcome::Improve(q));
    }
    if !s_core.is_disjoint(&t_core) {
        return Err(contra("cores of the enlarged sides overlap"));
    }
    Ok(ProbeOutcome::Pair(pair_for(s, s_core, t_core)))
}

/// Structure of the deficient sets once they are complete to each other:
/// two deficient vertices on each side, or an outside vertex seeing two
/// deficient vertices of one side, close a 4-cycle.
pub fn star_structure(g: &Graph, d: &DemandPair, p: &Partition) -> ProbeResult<ProbeOutcome> {
    let a_star: Vec<usize> = p
        .deficient(d, Side::A)
        .into_iter()
        .map(|(x, _)| x)
        .collect();
    let b_star: Vec<usize> = p
        .deficient(d, Side::B)
        .into_iter()
        .map(|(x, _)| x)
        .collect();
    if a_star.is_empty() || b_star.is_empty() {
        return Err(pre("a deficiency set is empty"));
    }
    let checked = |c: [usize; 4]| -> ProbeResult<ProbeOutcome> {
        let c = FourCycle(c);
        if c.is_valid_in(g) {
            Ok(ProbeOutcome::C4(c))
        } else {
            Err(pre("deficient sets are not complete to each other"))
        }
    };
    if a_star.len() >= 2 && b_star.len() >= 2 {
        return checked([a_star[0], b_star[0], a_star[1], b_star[1]]);
    }
    let n = g.n();
    for (star, other, side) in [(&a_star, &b_star, Side::A), (&b_star, &a_star, Side::B)] {
        let mut in_star = vec![false; n];
        for &x in star.iter() {
            in_star[x] = true;
        }
        for w in 0..n {
            if p.slack(d, w) > 0 && p.side(w) == side.other() {
                continue;
            }
            let mut hits = g.neighbors(w).iter().filter(|&&x| in_star[x]);
            if let (Some(&x), Some(&y)) = (hits.next(), hits.next()) {
                if let Some(&z) = other.iter().find(|&&z| z != w) {
                    return checked([w, x, z, y]);
                }
            }
        }
    }
    let singleton = if a_star.len() == 1 { Side::A } else { Side::B };
    Ok(ProbeOutcome::Refine(Refinement::StarStructure {
        singleton,
    }))
}

/// Exchange of adjacent deficient `u`, `v`. Both sides degenerate afterwards
/// gives an improvement or an equal-weight plateau partition; otherwise the
/// non-degenerate side is turned into an improving single move or a
/// feasible pair.
pub fn claim6_swap(
    g: &Graph,
    d: &DemandPair,
    p: &Partition,
    u: usize,
    v: usize,
) -> ProbeResult<ProbeOutcome> {
    let s = p.side(u);
    let t = s.other();
    if p.side(v) != t {
        return Err(pre(format!("{u} and {v} are on the same side")));
    }
    if !g.adjacent(u, v) {
        return Err(pre(format!("{u} and {v} are not adjacent")));
    }
    if p.slack(d, u) <= 0 || p.slack(d, v) <= 0 {
        return Err(pre(format!("{u} or {v} is not deficient")));
    }
    let mut q = p.clone();
    q.swap(g, d, u, v);
    let t_core = f_core(g, &q.set(t), d.of(t));
    let s_core = f_core(g, &q.set(s), d.of(s));
    if t_core.is_empty() && s_core.is_empty() {
        let gain = q.weight() - p.weight();
        return match gain.signum() {
            1 => Ok(ProbeOutcome::Improve(q)),
            0 => Ok(ProbeOutcome::Refine(Refinement::Plateau(q))),
            _ => Err(contra("adjacent deficient exchange lost weight")),
        };
    }
    // the non-degenerate side must contain the vertex that just arrived
    let (side, arrived, left, core) = if !t_core.is_empty() {
        (s, u, v, t_core)
    } else {
        (t, v, u, s_core)
    };
    // `core` lives on side(arrived)'s new side, i.e. opposite `side`
    let own = minus(p.set(side.other()), left);
    let grown = f_core(g, &plus(p.set(side), left), d.of(side));
    if grown.is_empty() {
        if p.size(side.other()) < 2 {
            return Err(contra(format!("moving {left} would empty its side")));
        }
        let mut r = p.clone();
        r.move_vertex(g, d, left);
        return Ok(ProbeOutcome::Improve(r));
    }
    if grown.contains(arrived) {
        return Err(contra(format!(
            "{arrived} belongs to cores on both sides of the exchange"
        )));
    }
    debug_assert!(core.is_subset(&plus(own, arrived)));
    if !grown.is_disjoint(&core) {
        return Err(contra("exchange cores overlap"));
    }
    Ok(ProbeOutcome::Pair(pair_for(side, grown, core)))
}

/// Shapes of the exact-demand structure next to a deficient vertex. The
/// labels follow the usual numbering, prefixed by the side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConfigKind {
    /// Two exact vertices with the same deficient neighbor `u`.
    SharedAnchor,
    /// Two exact vertices with distinct deficient neighbors `u`, `u'`.
    SplitAnchors,
    /// `u ~ u1 ~ u2`, `u2` exact with no deficient neighbor.
    Path,
    /// `u, u1, u2` form a triangle, `u2` one above its demand.
    Triangle,
    /// `u ~ u1 ~ u2 ~ u'`, `u2` one above its demand.
    Chain,
}

impl ConfigKind {
    pub fn index(self) -> u8 {
        match self {
            ConfigKind::SharedAnchor => 1,
            ConfigKind::SplitAnchors => 2,
            ConfigKind::Path => 3,
            ConfigKind::Triangle => 4,
            ConfigKind::Chain => 5,
        }
    }
}

/// A configuration found on one side, with its witness vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub side: Side,
    pub kind: ConfigKind,
    /// Deficient neighbor of `u1`.
    pub u: usize,
    /// Second deficient vertex, for `SplitAnchors` and `Chain`.
    pub u_prime: Option<usize>,
    pub u1: usize,
    pub u2: usize,
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::A => 'A',
            Side::B => 'B',
        };
        write!(f, "{side}{}", self.kind.index())
    }
}

/// Path `u1 ~ u ~ v ~ v1` with `u`, `v` deficient on sides A and B and `u1`,
/// `v1` exact on the same sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecialPath {
    pub u1: usize,
    pub u: usize,
    pub v: usize,
    pub v1: usize,
}

impl SpecialPath {
    pub fn is_valid(&self, g: &Graph, d: &DemandPair, p: &Partition) -> bool {
        let &SpecialPath { u1, u, v, v1 } = self;
        p.side(u) != p.side(v)
            && p.side(u1) == p.side(u)
            && p.side(v1) == p.side(v)
            && p.slack(d, u) > 0
            && p.slack(d, v) > 0
            && p.is_exact(d, u1)
            && p.is_exact(d, v1)
            && g.adjacent(u1, u)
            && g.adjacent(u, v)
            && g.adjacent(v, v1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detection {
    Found(Configuration),
    /// The side violated a structural fact and the violation itself settled
    /// the state (a 4-cycle).
    Resolved(ProbeOutcome),
}

/// Non-deficient vertices of side `s` with fewer than their demand neighbors
/// among the non-deficient vertices of `s`, ascending.
pub fn diamond(g: &Graph, d: &DemandPair, p: &Partition, s: Side) -> Vec<usize> {
    let rest = rest_of(d, p, s);
    rest.iter()
        .filter(|&x| (g.degree_in(x, &rest) as u32) < d.demand(s, x))
        .collect()
}

fn rest_of(d: &DemandPair, p: &Partition, s: Side) -> VertexSet {
    let mut rest = p.set(s);
    for (x, _) in p.deficient(d, s) {
        rest.remove(x);
    }
    rest
}

fn star_neighbors(g: &Graph, d: &DemandPair, p: &Partition, s: Side, x: usize) -> Vec<usize> {
    g.neighbors(x)
        .iter()
        .copied()
        .filter(|&y| p.is_on(y, s) && p.slack(d, y) > 0)
        .collect()
}

/// The deficient neighbor of a diamond vertex, when unique.
pub fn anchor(g: &Graph, d: &DemandPair, p: &Partition, x: usize) -> Option<usize> {
    match star_neighbors(g, d, p, p.side(x), x)[..] {
        [y] => Some(y),
        _ => None,
    }
}

/// Classifies side `s` of a blocked partition whose deficient sets already
/// satisfy [`star_structure`]. Diamond vertices must be exact with a single
/// deficient neighbor; a vertex with two deficient neighbors on its side
/// closes a 4-cycle through the opposite deficient vertex.
pub fn detect_configuration(
    g: &Graph,
    d: &DemandPair,
    p: &Partition,
    s: Side,
) -> ProbeResult<Detection> {
    let f = d.of(s);
    let rest = rest_of(d, p, s);
    if rest.len() < 2 {
        return Err(contra(format!(
            "side {s:?} has fewer than two non-deficient vertices"
        )));
    }
    let dia: Vec<usize> = rest
        .iter()
        .filter(|&x| (g.degree_in(x, &rest) as u32) < f[x])
        .collect();
    if dia.is_empty() {
        return Err(contra(format!("side {s:?} has an empty diamond set")));
    }
    let opposite = p.deficient(d, s.other());
    let two_anchor_cycle = |x: usize, hits: &[usize]| -> Option<Detection> {
        let &(z, _) = opposite.first()?;
        let c = FourCycle([x, hits[0], z, hits[1]]);
        c.is_valid_in(g)
            .then_some(Detection::Resolved(ProbeOutcome::C4(c)))
    };
    let mut anchors = Vec::with_capacity(dia.len());
    for &x in &dia {
        let hits = star_neighbors(g, d, p, s, x);
        match hits.len() {
            1 => anchors.push(hits[0]),
            0 => {
                return Err(contra(format!(
                    "diamond vertex {x} has no deficient neighbor"
                )))
            }
            _ => {
                return two_anchor_cycle(x, &hits).ok_or_else(|| {
                    contra(format!("diamond vertex {x} sees two deficient vertices"))
                })
            }
        }
        if !p.is_exact(d, x) {
            return Err(contra(format!("diamond vertex {x} is not exact")));
        }
    }
    if dia.len() >= 2 {
        let (u1, u2) = (dia[0], dia[1]);
        let (u, w) = (anchors[0], anchors[1]);
        let (kind, u_prime) = if u == w {
            (ConfigKind::SharedAnchor, None)
        } else {
            (ConfigKind::SplitAnchors, Some(w))
        };
        return Ok(Detection::Found(Configuration {
            side: s,
            kind,
            u,
            u_prime,
            u1,
            u2,
        }));
    }
    let (u1, u) = (dia[0], anchors[0]);
    let inner = minus(rest.clone(), u1);
    let u2 = inner
        .iter()
        .find(|&x| (g.degree_in(x, &inner) as u32) < f[x])
        .ok_or_else(|| contra(format!("no second exact vertex next to {u1}")))?;
    if !g.adjacent(u1, u2) || g.degree_in(u2, &rest) as u32 != f[u2] {
        return Err(contra(format!("{u2} is not an exact neighbor of {u1}")));
    }
    let hits = star_neighbors(g, d, p, s, u2);
    let (kind, u_prime) = match hits[..] {
        [] => (ConfigKind::Path, None),
        [w] if w == u => (ConfigKind::Triangle, None),
        [w] => (ConfigKind::Chain, Some(w)),
        _ => {
            return two_anchor_cycle(u2, &hits)
                .ok_or_else(|| contra(format!("{u2} sees two deficient vertices")))
        }
    };
    Ok(Detection::Found(Configuration {
        side: s,
        kind,
        u,
        u_prime,
        u1,
        u2,
    }))
}

/// When a whole side is deficient, the other deficient set is a single
/// vertex `v`, and moving `v` over yields a feasible partition.
pub fn all_deficient_pair(
    g: &Graph,
    d: &DemandPair,
    p: &Partition,
    s: Side,
) -> ProbeResult<Option<FeasiblePair>> {
    if p.deficient(d, s).len() != p.size(s) {
        return Ok(None);
    }
    let t = s.other();
    let t_star = p.deficient(d, t);
    let [(v, _)] = t_star[..] else {
        return Err(contra(
            "whole side deficient but opposite deficient set is not a singleton",
        ));
    };
    let grown = plus(p.set(s), v);
    let shrunk = minus(p.set(t), v);
    if shrunk.is_empty() || !is_good(g, &grown, d.of(s)) || !is_good(g, &shrunk, d.of(t)) {
        return Err(contra(format!(
            "moving {v} does not give a feasible partition"
        )));
    }
    Ok(Some(pair_for(s, grown, shrunk)))
}
