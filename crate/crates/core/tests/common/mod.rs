//! Test-side reference implementations, written independently of the
//! library's algorithms (plain bitmask scans, no peeling).

#![allow(dead_code)]

use c4part::graph::Graph;

/// Adjacency bitmasks, `n <= 32`.
pub fn adj_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().map(|&w| 1u32 << w).sum())
        .collect()
}

/// 4-cycle by brute force over ordered 4-tuples of distinct vertices.
pub fn naive_has_c4(g: &Graph) -> bool {
    let adj = adj_masks(g);
    let n = g.n();
    let e = |u: usize, v: usize| adj[u] >> v & 1 == 1;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
                    if distinct && e(a, b) && e(b, c) && e(c, d) && e(d, a) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Whether every vertex of `s` has at least `f[v]` neighbors in `s`.
pub fn mask_good(adj: &[u32], s: u32, f: &[u32]) -> bool {
    (0..adj.len())
        .filter(|&v| s >> v & 1 == 1)
        .all(|v| (adj[v] & s).count_ones() >= f[v])
}

/// `good[s]` for every subset mask of `0..n`, including the empty set.
pub fn good_table(adj: &[u32], f: &[u32]) -> Vec<bool> {
    (0..1u32 << adj.len())
        .map(|s| mask_good(adj, s, f))
        .collect()
}

/// `w(A,B) = e(A) + e(B) + Σ_{x∈A} b(x) + Σ_{x∈B} a(x)` straight from the
/// definition, `A` given as a mask.
pub fn naive_weight(adj: &[u32], a: &[u32], b: &[u32], in_a: u32) -> i64 {
    let n = adj.len();
    let mut w = 0i64;
    for v in 0..n {
        for u in 0..v {
            if adj[v] >> u & 1 == 1 && ((in_a >> v & 1) == (in_a >> u & 1)) {
                w += 1;
            }
        }
        w += if in_a >> v & 1 == 1 { b[v] } else { a[v] } as i64;
    }
    w
}

/// First feasible A mask in ascending integer order, both sides non-empty.
pub fn naive_first_feasible(adj: &[u32], a: &[u32], b: &[u32]) -> Option<u32> {
    let n = adj.len();
    let full = (1u32 << n) - 1;
    (1..full).find(|&s| mask_good(adj, s, a) && mask_good(adj, full & !s, b))
}

pub fn mask_to_vec(s: u32) -> Vec<usize> {
    (0..32).filter(|&v| s >> v & 1 == 1).collect()
}

pub fn graph_from_mask(n: usize, edge_mask: u64) -> Graph {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    let edges = pairs
        .enumerate()
        .filter(|(k, _)| *k < 64 && edge_mask >> k & 1 == 1)
        .map(|(_, p)| p);
    Graph::build(n, edges).unwrap()
}
