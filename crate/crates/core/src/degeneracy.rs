//! Demand functions, f-good sets and f-cores.
//!
//! A set `S` is f-good when every `u ∈ S` has at least `f(u)` neighbors in
//! `S`. The f-core of `S` is its unique maximal f-good subset, obtained by
//! peeling deficient vertices. `S` contains no f-good subset exactly when
//! its f-core is empty; the solver calls such sets degenerate.

use std::collections::VecDeque;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Per-vertex non-negative demand.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DemandFn(Vec<u32>);

impl DemandFn {
    pub fn new(values: Vec<u32>) -> Self {
        DemandFn(values)
    }

    pub fn constant(n: usize, k: u32) -> Self {
        DemandFn(vec![k; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    /// The constant value, if all entries agree.
    pub fn as_constant(&self) -> Option<u32> {
        let first = *self.0.first()?;
        self.0.iter().all(|&x| x == first).then_some(first)
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() == n {
            Ok(())
        } else {
            Err(Error::DemandLength {
                got: self.0.len(),
                n,
            })
        }
    }

    pub(crate) fn set(&mut self, v: usize, value: u32) {
        self.0[v] = value;
    }
}

impl Index<usize> for DemandFn {
    type Output = u32;

    fn index(&self, v: usize) -> &u32 {
        &self.0[v]
    }
}

/// Maximal f-good subset of `s` (possibly empty).
pub fn f_core(g: &Graph, s: &VertexSet, f: &DemandFn) -> VertexSet {
    peel(g, s.clone(), f, None).unwrap_or_else(|| VertexSet::empty(g.n()))
}

/// f-core of `s` under the promise that `s \ {pivot}` is already
/// degenerate, so the core is either empty or contains `pivot`. Peeling stops
/// as soon as `pivot` goes; returns `None` for an empty core.
pub fn f_core_through(g: &Graph, s: &VertexSet, f: &DemandFn, pivot: usize) -> Option<VertexSet> {
    peel(g, s.clone(), f, Some(pivot))
}

/// [`f_core_through`] with `deg[v] = d_s(v)` supplied for every `v ∈ s`,
/// skipping the degree pass.
pub(crate) fn f_core_through_with(
    g: &Graph,
    s: &VertexSet,
    f: &DemandFn,
    pivot: usize,
    deg: Vec<usize>,
) -> Option<VertexSet> {
    peel_from(g, s.clone(), f, Some(pivot), deg)
}

fn peel(g: &Graph, set: VertexSet, f: &DemandFn, pivot: Option<usize>) -> Option<VertexSet> {
    let mut deg = vec![0usize; g.n()];
    for v in set.iter() {
        deg[v] = g.degree_in(v, &set);
    }
    peel_from(g, set, f, pivot, deg)
}

fn peel_from(
    g: &Graph,
    mut set: VertexSet,
    f: &DemandFn,
    pivot: Option<usize>,
    mut deg: Vec<usize>,
) -> Option<VertexSet> {
    let n = g.n();
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    for v in set.iter() {
        if deg[v] < f[v] as usize {
            queued[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if Some(v) == pivot {
            return None;
        }
        set.remove(v);
        for &w in g.neighbors(v) {
            if set.contains(w) && !queued[w] {
                deg[w] -= 1;
                if deg[w] < f[w] as usize {
                    queued[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    if set.is_empty() {
        None
    } else {
        Some(set)
    }
}

/// True iff `s` contains no f-good subset.
pub fn is_degenerate(g: &Graph, s: &VertexSet, f: &DemandFn) -> bool {
    peel(g, s.clone(), f, None).is_none()
}

/// True iff every vertex of `s` has at least `f` neighbors inside `s`.
pub fn is_good(g: &Graph, s: &VertexSet, f: &DemandFn) -> bool {
    s.iter().all(|v| g.degree_in(v, s) >= f[v] as usize)
}

/// An inclusion-minimal f-good subset of `s`, or `None` when the f-core of
/// `s` is empty.
///
/// Descends from the f-core, trying to delete candidates in ascending order.
/// A candidate whose deletion empties the core can never be deleted later
/// (cores are monotone), so a single ascending pass reaches a fixpoint.
pub fn minimal_good(g: &Graph, s: &VertexSet, f: &DemandFn) -> Option<VertexSet> {
    let mut m = f_core(g, s, f);
    if m.is_empty() {
        return None;
    }
    let n = g.n();
    let mut deg = vec![0usize; n];
    for v in m.iter() {
        deg[v] = g.degree_in(v, &m);
    }
    let mut removed: Vec<usize> = Vec::new();
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    for x in 0..n {
        if !m.contains(x) {
            continue;
        }
        removed.clear();
        queued[x] = true;
        queue.push_back(x);
        while let Some(v) = queue.pop_front() {
            m.remove(v);
            removed.push(v);
            for &w in g.neighbors(v) {
                if m.contains(w) {
                    deg[w] -= 1;
                    if !queued[w] && deg[w] < f[w] as usize {
                        queued[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        for &v in &removed {
            queued[v] = false;
        }
        if m.is_empty() {
            // roll back: the cascade emptied the set, keep x
            for &v in &removed {
                m.insert(v);
            }
            for &v in &removed {
                for &w in g.neighbors(v) {
                    if m.contains(w) {
                        deg[w] += 1;
                    }
                }
            }
            for &v in &removed {
                deg[v] = g.degree_in(v, &m);
            }
        }
    }
    Some(m)
}

/// Vertices of `s` below their demand inside `s`, with slack `f(x) - d_s(x)`.
pub fn deficiency_set(g: &Graph, s: &VertexSet, f: &DemandFn) -> Vec<(usize, u32)> {
    s.iter()
        .filter_map(|x| {
            let d = g.degree_in(x, s) as u32;
            (d < f[x]).then(|| (x, f[x] - d))
        })
        .collect()
}
