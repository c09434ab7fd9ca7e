use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::degeneracy::DemandFn;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// One of the two parts of a bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Demand functions `a` (for side A) and `b` (for side B).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemandPair {
    pub a: DemandFn,
    pub b: DemandFn,
}

impl DemandPair {
    pub fn new(a: DemandFn, b: DemandFn) -> Self {
        DemandPair { a, b }
    }

    pub fn constant(n: usize, a: u32, b: u32) -> Self {
        DemandPair {
            a: DemandFn::constant(n, a),
            b: DemandFn::constant(n, b),
        }
    }

    #[inline]
    pub fn of(&self, s: Side) -> &DemandFn {
        match s {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    #[inline]
    pub fn demand(&self, s: Side, v: usize) -> u32 {
        self.of(s)[v]
    }

    /// `d_G(x) - a(x) - b(x) + 1` per vertex; non-negative everywhere iff
    /// the degree hypothesis holds.
    pub fn slack(&self, g: &Graph) -> Vec<i64> {
        (0..g.n())
            .map(|x| g.degree(x) as i64 - self.a[x] as i64 - self.b[x] as i64 + 1)
            .collect()
    }
}

/// A two-part split of the vertex set as sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Bipartition {
    pub fn from_mask(in_a: &[bool]) -> Self {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (v, &x) in in_a.iter().enumerate() {
            if x {
                a.push(v);
            } else {
                b.push(v);
            }
        }
        Bipartition { a, b }
    }

    /// Membership mask for side A, checking that the parts cover `0..n`
    /// exactly once and are both non-empty.
    pub fn mask(&self, n: usize) -> Result<Vec<bool>> {
        if self.a.is_empty() || self.b.is_empty() {
            return Err(Error::BadPartition("a side is empty".into()));
        }
        let mut seen = vec![None; n];
        for (list, in_a) in [(&self.a, true), (&self.b, false)] {
            for &v in list.iter() {
                if v >= n {
                    return Err(Error::BadPartition(format!("vertex {v} outside 0..{n}")));
                }
                if seen[v].is_some() {
                    return Err(Error::BadPartition(format!("vertex {v} listed twice")));
                }
                seen[v] = Some(in_a);
            }
        }
        seen.into_iter()
            .enumerate()
            .map(|(v, s)| s.ok_or_else(|| Error::BadPartition(format!("vertex {v} unassigned"))))
            .collect()
    }
}

/// A bipartition with cached per-side degrees and the potential
/// `w(A,B) = e(A) + e(B) + Σ_{x∈A} b(x) + Σ_{x∈B} a(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    in_a: Vec<bool>,
    d_a: Vec<u32>,
    d_b: Vec<u32>,
    size_a: usize,
    weight: i64,
}

impl Partition {
    /// Partition with side A equal to `a_side`; both sides must be non-empty.
    pub fn new(g: &Graph, d: &DemandPair, a_side: &VertexSet) -> Result<Partition> {
        let n = g.n();
        if a_side.is_empty() || a_side.len() == n {
            return Err(Error::BadPartition("a side is empty".into()));
        }
        let in_a = a_side.as_mask().to_vec();
        let mut d_a = vec![0u32; n];
        let mut d_b = vec![0u32; n];
        for v in 0..n {
            for &w in g.neighbors(v) {
                if in_a[w] {
                    d_a[v] += 1;
                } else {
                    d_b[v] += 1;
                }
            }
        }
        let mut p = Partition {
            in_a,
            d_a,
            d_b,
            size_a: a_side.len(),
            weight: 0,
        };
        p.weight = weight(g, d, &p);
        Ok(p)
    }

    pub fn from_bipartition(g: &Graph, d: &DemandPair, bp: &Bipartition) -> Result<Partition> {
        let mask = bp.mask(g.n())?;
        Partition::new(g, d, &VertexSet::from_mask(mask))
    }

    pub fn n(&self) -> usize {
        self.in_a.len()
    }

    #[inline]
    pub fn side(&self, v: usize) -> Side {
        if self.in_a[v] {
            Side::A
        } else {
            Side::B
        }
    }

    #[inline]
    pub fn is_on(&self, v: usize, s: Side) -> bool {
        self.in_a[v] == (s == Side::A)
    }

    /// Number of neighbors of `v` on side `s`.
    #[inline]
    pub fn deg(&self, v: usize, s: Side) -> u32 {
        match s {
            Side::A => self.d_a[v],
            Side::B => self.d_b[v],
        }
    }

    /// Neighbors of `v` on its own side.
    #[inline]
    pub fn own_deg(&self, v: usize) -> u32 {
        self.deg(v, self.side(v))
    }

    pub fn size(&self, s: Side) -> usize {
        match s {
            Side::A => self.size_a,
            Side::B => self.n() - self.size_a,
        }
    }

    pub fn set(&self, s: Side) -> VertexSet {
        VertexSet::from_mask(self.in_a.iter().map(|&x| x == (s == Side::A)).collect())
    }

    pub fn members(&self, s: Side) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.is_on(v, s)).collect()
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// `f(v) - d_own(v)` for the demand of `v`'s own side; positive exactly on
    /// the deficiency sets.
    pub fn slack(&self, d: &DemandPair, v: usize) -> i64 {
        let s = self.side(v);
        d.demand(s, v) as i64 - self.deg(v, s) as i64
    }

    /// Deficiency set of side `s` with slacks, ascending.
    pub fn deficient(&self, d: &DemandPair, s: Side) -> Vec<(usize, u32)> {
        (0..self.n())
            .filter(|&v| self.is_on(v, s))
            .filter_map(|v| {
                let f = d.demand(s, v);
                let dv = self.deg(v, s);
                (dv < f).then(|| (v, f - dv))
            })
            .collect()
    }

    /// True when `v` sits on its side with exactly its demand.
    pub fn is_exact(&self, d: &DemandPair, v: usize) -> bool {
        self.slack(d, v) == 0
    }

    /// Moves `v` to the other side, keeping degrees and weight current.
    pub fn move_vertex(&mut self, g: &Graph, d: &DemandPair, v: usize) {
        debug_assert!(self.size(self.side(v)) >= 2, "move would empty a side");
        self.shift(g, d, v);
        self.check_weight(g, d);
    }

    /// Exchanges two vertices on opposite sides.
    pub fn swap(&mut self, g: &Graph, d: &DemandPair, u: usize, v: usize) {
        debug_assert_ne!(self.side(u), self.side(v));
        self.shift(g, d, u);
        self.shift(g, d, v);
        self.check_weight(g, d);
    }

    fn shift(&mut self, g: &Graph, d: &DemandPair, v: usize) {
        let from = self.side(v);
        let to = from.other();
        let gain = self.deg(v, to) as i64 - self.deg(v, from) as i64 + d.demand(from, v) as i64
            - d.demand(to, v) as i64;
        self.in_a[v] = to == Side::A;
        if to == Side::A {
            self.size_a += 1;
        } else {
            self.size_a -= 1;
        }
        let (gain_side, lose_side) = match to {
            Side::A => (&mut self.d_a, &mut self.d_b),
            Side::B => (&mut self.d_b, &mut self.d_a),
        };
        for &w in g.neighbors(v) {
            gain_side[w] += 1;
            lose_side[w] -= 1;
        }
        self.weight += gain;
    }

    fn check_weight(&self, g: &Graph, d: &DemandPair) {
        if cfg!(debug_assertions) && g.n() <= 4096 {
            assert_eq!(self.weight, weight(g, d, self), "cached weight drifted");
        }
    }

    pub fn to_bipartition(&self) -> Bipartition {
        Bipartition::from_mask(&self.in_a)
    }

    pub fn mask(&self) -> &[bool] {
        &self.in_a
    }

    /// Hash of the side assignment, used to detect revisits.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.in_a.hash(&mut h);
        h.finish()
    }
}

/// `w(A,B)` recomputed from scratch.
pub fn weight(g: &Graph, d: &DemandPair, p: &Partition) -> i64 {
    let mut twice_inner = 0i64;
    let mut demand = 0i64;
    for v in 0..g.n() {
        let s = p.side(v);
        twice_inner += p.deg(v, s) as i64;
        demand += d.demand(s.other(), v) as i64;
    }
    twice_inner / 2 + demand
}

/// Gain `2α - 1` of moving `u` across, where `α = f(u) - d_own(u)`. Valid
/// under the normalized identity `d_G = a + b - 1`.
pub fn delta_move(d: &DemandPair, p: &Partition, u: usize) -> i64 {
    2 * p.slack(d, u) - 1
}

/// Gain `2(α + β - 1 - δ)` of exchanging `u` and `v` (opposite sides), with
/// `δ = 1` when they are adjacent. Valid under `d_G = a + b - 1`.
pub fn delta_swap(g: &Graph, d: &DemandPair, p: &Partition, u: usize, v: usize) -> i64 {
    let delta = i64::from(g.adjacent(u, v));
    2 * (p.slack(d, u) + p.slack(d, v) - 1 - delta)
}
