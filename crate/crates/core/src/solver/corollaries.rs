//! Multi-part partitions and disjoint cycles via repeated bipartitioning.

use crate::degeneracy::DemandFn;
use crate::error::{Error, Result};
use crate::graph::{FourCycle, Graph, VertexSet};

use super::{solve, Certificate};

/// A packing, or the certificate that blocked it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Packing<T> {
    Found(T),
    Blocked(Certificate),
}

fn lift(cert: Certificate, old_of_new: &[usize]) -> Certificate {
    match cert {
        Certificate::C4Witness(FourCycle(c)) => {
            Certificate::C4Witness(FourCycle(c.map(|x| old_of_new[x])))
        }
        Certificate::DegreeViolation {
            vertex,
            degree,
            required,
        } => Certificate::DegreeViolation {
            vertex: old_of_new[vertex],
            degree,
            required,
        },
        other => other,
    }
}

/// Splits `V` into `k = s.len()` parts, part `i` inducing minimum degree at
/// least `s[i]`. Needs a C4-free graph with `δ ≥ s_1 + ... + s_k - (k - 1)`;
/// otherwise returns the certificate found on the way.
pub fn k_way(g: &Graph, s: &[u32]) -> Result<Packing<Vec<Vec<usize>>>> {
    if s.is_empty() {
        return Err(Error::Precondition("at least one part is required".into()));
    }
    if let Some((i, &x)) = s.iter().enumerate().find(|(_, &x)| x < 2) {
        return Err(Error::DemandTooSmall {
            which: "s",
            vertex: i,
            value: x,
        });
    }
    if g.n() == 0 {
        return Err(Error::Precondition("graph has no vertices".into()));
    }
    if s.len() == 1 {
        return Ok(match (0..g.n()).find(|&x| g.degree(x) < s[0] as usize) {
            Some(x) => Packing::Blocked(Certificate::DegreeViolation {
                vertex: x,
                degree: g.degree(x),
                required: s[0] as i64,
            }),
            None => Packing::Found(vec![(0..g.n()).collect()]),
        });
    }
    let rest: u32 = s[1..].iter().sum::<u32>() - (s.len() as u32 - 2);
    let n = g.n();
    let bp = match solve(
        g,
        &DemandFn::constant(n, s[0]),
        &DemandFn::constant(n, rest),
    )? {
        Certificate::FeasiblePartition(bp) => bp,
        other => return Ok(Packing::Blocked(other)),
    };
    let sub = g.induced(&VertexSet::from_vertices(n, bp.b.iter().copied()));
    match k_way(&sub.graph, &s[1..])? {
        Packing::Found(parts) => {
            let mut out = vec![bp.a];
            out.extend(
                parts
                    .into_iter()
                    .map(|part| part.into_iter().map(|x| sub.old_of_new[x]).collect()),
            );
            Ok(Packing::Found(out))
        }
        Packing::Blocked(cert) => Ok(Packing::Blocked(lift(cert, &sub.old_of_new))),
    }
}

/// `k` vertex-disjoint cycles in a C4-free graph with `δ ≥ k + 1`, each
/// given as its vertex sequence.
pub fn disjoint_cycles(g: &Graph, k: usize) -> Result<Packing<Vec<Vec<usize>>>> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if let Some(x) = (0..g.n()).find(|&x| g.degree(x) < k + 1) {
        return Ok(Packing::Blocked(Certificate::DegreeViolation {
            vertex: x,
            degree: g.degree(x),
            required: k as i64 + 1,
        }));
    }
    if let Some(c) = g.find_four_cycle() {
        return Ok(Packing::Blocked(Certificate::C4Witness(c)));
    }
    let parts = match k_way(g, &vec![2; k])? {
        Packing::Found(parts) => parts,
        Packing::Blocked(cert) => return Ok(Packing::Blocked(cert)),
    };
    let n = g.n();
    let mut cycles = Vec::with_capacity(k);
    for part in parts {
        let set = VertexSet::from_vertices(n, part.iter().copied());
        let cycle =
            walk_cycle(g, &set).ok_or_else(|| Error::Precondition("part has no cycle".into()))?;
        cycles.push(cycle);
    }
    Ok(Packing::Found(cycles))
}

/// Walks from the smallest vertex of `set`, never stepping straight back,
/// until a vertex repeats. Works whenever `set` induces minimum degree 2.
fn walk_cycle(g: &Graph, set: &VertexSet) -> Option<Vec<usize>> {
    let start = set.iter().next()?;
    let mut pos = vec![usize::MAX; g.n()];
    let mut path = vec![start];
    pos[start] = 0;
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = *g
            .neighbors(cur)
            .iter()
            .find(|&&y| set.contains(y) && y != prev)?;
        if pos[next] != usize::MAX {
            return Some(path[pos[next]..].to_vec());
        }
        pos[next] = path.len();
        path.push(next);
        prev = cur;
        cur = next;
    }
}

/// True when `cycle` lists at least three distinct vertices forming a cycle
/// of `g` in order.
pub fn is_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let k = cycle.len();
    if k < 3 {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    cycle.iter().all(|&x| x < g.n() && seen.insert(x))
        && (0..k).all(|i| g.adjacent(cycle[i], cycle[(i + 1) % k]))
}
