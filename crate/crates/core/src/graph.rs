//! Immutable simple undirected graphs on the dense vertex range `0..n`.
//!
//! Adjacency lists are kept sorted, so membership queries are binary searches
//! and common-neighbor counting is a merge.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset of `0..n` backed by a membership mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    mask: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            mask: vec![false; n],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            mask: vec![true; n],
            len: n,
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vertices: I) -> Self {
        let mut set = VertexSet::empty(n);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let len = mask.iter().filter(|&&b| b).count();
        VertexSet { mask, len }
    }

    /// Size of the ground set `0..n`.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    /// Returns true if `v` was newly inserted.
    pub fn insert(&mut self, v: usize) -> bool {
        if self.mask[v] {
            return false;
        }
        self.mask[v] = true;
        self.len += 1;
        true
    }

    /// Returns true if `v` was present.
    pub fn remove(&mut self, v: usize) -> bool {
        if !self.mask[v] {
            return false;
        }
        self.mask[v] = false;
        self.len -= 1;
        true
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| if b { Some(v) } else { None })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet {
            mask: self.mask.iter().map(|b| !b).collect(),
            len: self.mask.len() - self.len,
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_mask(
            self.mask
                .iter()
                .zip(&other.mask)
                .map(|(a, b)| *a || *b)
                .collect(),
        )
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| !(*a && *b))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| !*a || *b)
    }

    pub fn as_mask(&self) -> &[bool] {
        &self.mask
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A 4-cycle `w ~ x ~ y ~ z ~ w` on distinct vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FourCycle(pub [usize; 4]);

impl FourCycle {
    pub fn vertices(&self) -> [usize; 4] {
        self.0
    }

    /// True if the four vertices are distinct and all four cycle edges exist in `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let [w, x, y, z] = self.0;
        let distinct = w != x && w != y && w != z && x != y && x != z && y != z;
        distinct
            && [w, x, y, z].iter().all(|&v| v < g.n())
            && g.adjacent(w, x)
            && g.adjacent(x, y)
            && g.adjacent(y, z)
            && g.adjacent(z, w)
    }
}

/// Simple undirected graph. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

/// An induced subgraph together with its vertex relabeling.
#[derive(Clone, Debug)]
pub struct Induced {
    pub graph: Graph,
    /// `old_of_new[i]` is the original id of new vertex `i`.
    pub old_of_new: Vec<usize>,
    /// `new_of_old[v]` is the new id of original vertex `v`, if kept.
    pub new_of_old: Vec<Option<usize>>,
}

impl Graph {
    /// Builds a graph on `0..n`. Duplicate pairs collapse; self-loops and
    /// out-of-range endpoints are rejected.
    pub fn build<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::OutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut twice_m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice_m += list.len();
        }
        Ok(Graph {
            adj,
            m: twice_m / 2,
        })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Sorted common neighbors of two distinct vertices.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SameVertex(u));
        }
        let (a, b) = (&self.adj[u], &self.adj[v]);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(out)
    }

    /// Finds the lexicographically first pair `u < v` with two common
    /// neighbors `c1 < c2` and returns the 4-cycle `(u, c1, v, c2)`.
    pub fn find_four_cycle(&self) -> Option<FourCycle> {
        let n = self.n();
        let mut count = vec![0u32; n];
        let mut touched = Vec::new();
        for u in 0..n {
            for &w in &self.adj[u] {
                for &v in &self.adj[w] {
                    if v > u {
                        if count[v] == 0 {
                            touched.push(v);
                        }
                        count[v] += 1;
                    }
                }
            }
            let best = touched.iter().copied().filter(|&v| count[v] >= 2).min();
            for &v in &touched {
                count[v] = 0;
            }
            touched.clear();
            if let Some(v) = best {
                let common = self
                    .common_neighbors(u, v)
                    .expect("u < v are distinct valid vertices");
                return Some(FourCycle([u, common[0], v, common[1]]));
            }
        }
        None
    }

    pub fn is_c4_free(&self) -> bool {
        self.find_four_cycle().is_none()
    }

    /// Subgraph induced on `s`, relabeled to `0..|s|` in ascending order.
    pub fn induced(&self, s: &VertexSet) -> Induced {
        let old_of_new = s.to_vec();
        let mut new_of_old = vec![None; self.n()];
        for (i, &v) in old_of_new.iter().enumerate() {
            new_of_old[v] = Some(i);
        }
        let mut adj = Vec::with_capacity(old_of_new.len());
        let mut twice_m = 0;
        for &v in &old_of_new {
            let list: Vec<usize> = self.adj[v].iter().filter_map(|&w| new_of_old[w]).collect();
            twice_m += list.len();
            adj.push(list);
        }
        Induced {
            graph: Graph {
                adj,
                m: twice_m / 2,
            },
            old_of_new,
            new_of_old,
        }
    }

    /// `|N(v) ∩ s|`.
    pub fn degree_in(&self, v: usize, s: &VertexSet) -> usize {
        self.adj[v].iter().filter(|&&w| s.contains(w)).count()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::BadVertex { v, n: self.n() })
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::build(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn c4() -> Graph {
        Graph::build(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn k4() -> Graph {
        Graph::build(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((5 + i, 5 + (i + 2) % 5));
            e.push((i, i + 5));
        }
        Graph::build(10, e).unwrap()
    }

    #[test]
    fn build_triangle_and_dedup() {
        let g = triangle();
        assert_eq!(
            (0..3).map(|v| g.degree(v)).collect::<Vec<_>>(),
            vec![2, 2, 2]
        );
        assert_eq!(g.m(), 3);
        let k2 = Graph::build(2, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(k2.m(), 1);
        assert_eq!(k2.degree(0), 1);
    }

    #[test]
    fn build_rejects_bad_pairs() {
        assert_eq!(Graph::build(1, [(0, 0)]).unwrap_err(), Error::SelfLoop(0));
        assert!(matches!(
            Graph::build(2, [(0, 2)]),
            Err(Error::OutOfRange { u: 0, v: 2, n: 2 })
        ));
    }

    #[test]
    fn common_neighbor_examples() {
        assert_eq!(triangle().common_neighbors(0, 1).unwrap(), vec![2]);
        let k2 = Graph::build(2, [(0, 1)]).unwrap();
        assert!(k2.common_neighbors(0, 1).unwrap().is_empty());
        assert_eq!(c4().common_neighbors(0, 2).unwrap(), vec![1, 3]);
        assert_eq!(triangle().common_neighbors(1, 1), Err(Error::SameVertex(1)));
    }

    #[test]
    fn four_cycle_examples() {
        assert_eq!(c4().find_four_cycle(), Some(FourCycle([0, 1, 2, 3])));
        let w = k4().find_four_cycle().unwrap();
        assert!(w.is_valid_in(&k4()));
        assert_eq!(w, FourCycle([0, 2, 1, 3]));
        assert_eq!(petersen().find_four_cycle(), None);
        assert_eq!(triangle().find_four_cycle(), None);
    }

    #[test]
    fn induced_examples() {
        let p = petersen();
        let outer = VertexSet::from_vertices(10, 0..5);
        let ind = p.induced(&outer);
        assert_eq!(ind.graph.n(), 5);
        assert_eq!(ind.graph.m(), 5);
        assert!((0..5).all(|v| ind.graph.degree(v) == 2));
        let all = p.induced(&VertexSet::full(10));
        assert_eq!(all.graph, p);
        let none = p.induced(&VertexSet::empty(10));
        assert_eq!(none.graph.n(), 0);
    }

    #[test]
    fn degree_in_examples() {
        let t = triangle();
        assert_eq!(t.degree_in(0, &VertexSet::from_vertices(3, [1, 2])), 2);
        assert_eq!(t.degree_in(0, &VertexSet::from_vertices(3, [0])), 0);
        let p = petersen();
        assert!((0..10).all(|v| p.degree_in(v, &VertexSet::full(10)) == 3));
    }

    #[test]
    fn vertex_set_ops() {
        let mut s = VertexSet::empty(5);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(1);
        assert_eq!(s.to_vec(), vec![1, 3]);
        assert_eq!(s.complement().to_vec(), vec![0, 2, 4]);
        assert!(s.remove(1));
        assert_eq!(s.len(), 1);
        assert!(s.is_disjoint(&VertexSet::from_vertices(5, [0, 4])));
    }
}
