//! Instance generators: Erdős–Rényi polarity graphs over prime fields,
//! named fixtures, seeded random C4-free graphs and exhaustive enumeration of
//! small labeled graphs.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use rand_core::{RngCore, SeedableRng};

/// Polarity graph `ER_q`: projective points of `PG(2, q)`, adjacent when
/// orthogonal under the standard dot product.
#[derive(Clone, Debug)]
pub struct PolarityGraph {
    pub q: u64,
    pub graph: Graph,
    /// Self-orthogonal points (`v·v = 0`); exactly these have degree `q`.
    pub absolute_points: VertexSet,
    /// Canonical representative per vertex: first nonzero coordinate is 1.
    pub point_coords: Vec<[u64; 3]>,
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds `ER_q` for a prime `q`. Vertices are the canonical projective
/// points in lexicographic order of their coordinates; absolute points get
/// no self-loop.
pub fn er_polarity(q: u64) -> Result<PolarityGraph> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let mut points = Vec::with_capacity((q * q + q + 1) as usize);
    for x in 0..2u64 {
        for y in 0..q {
            for z in 0..q {
                let p = [x, y, z];
                let lead = p.iter().copied().find(|&c| c != 0);
                if lead == Some(1) {
                    points.push(p);
                }
            }
        }
    }
    debug_assert_eq!(points.len() as u64, q * q + q + 1);
    let dot = |a: &[u64; 3], b: &[u64; 3]| (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) % q;
    let mut edges = Vec::new();
    let mut absolute = VertexSet::empty(points.len());
    for (i, p) in points.iter().enumerate() {
        if dot(p, p) == 0 {
            absolute.insert(i);
        }
        for (j, r) in points.iter().enumerate().skip(i + 1) {
            if dot(p, r) == 0 {
                edges.push((i, j));
            }
        }
    }
    let graph = Graph::build(points.len(), edges)?;
    Ok(PolarityGraph {
        q,
        graph,
        absolute_points: absolute,
        point_coords: points,
    })
}

const SUPPORTED_NAMES: &str =
    "triangle, petersen, heawood, path(n), cycle(n), complete(n), star(n)";

/// Named fixture graphs.
///
/// `path(n)`, `cycle(n)` and `complete(n)` have `n` vertices; `star(n)` is
/// `K_{1,n}` with center 0. The size may be written `cycle(4)`, `cycle:4` or
/// `cycle4`. Petersen is the outer cycle `0..5`, the inner pentagram `5..10`
/// and spokes `i ~ i+5`. Heawood is the 14-cycle with chords `i ~ i+5` for
/// even `i`.
pub fn named_graph(name: &str) -> Result<Graph> {
    let unknown = || Error::UnknownName {
        name: name.to_string(),
        supported: SUPPORTED_NAMES,
    };
    let lower = name.trim().to_ascii_lowercase();
    match lower.as_str() {
        "triangle" => return Graph::build(3, [(0, 1), (1, 2), (2, 0)]),
        "petersen" => {
            let mut e = Vec::new();
            for i in 0..5 {
                e.push((i, (i + 1) % 5));
                e.push((5 + i, 5 + (i + 2) % 5));
                e.push((i, i + 5));
            }
            return Graph::build(10, e);
        }
        "heawood" => {
            let mut e: Vec<(usize, usize)> = (0..14).map(|i| (i, (i + 1) % 14)).collect();
            e.extend((0..14).step_by(2).map(|i| (i, (i + 5) % 14)));
            return Graph::build(14, e);
        }
        _ => {}
    }
    let split = lower
        .find(|c: char| c.is_ascii_digit() || c == '(' || c == ':')
        .ok_or_else(unknown)?;
    let (family, rest) = lower.split_at(split);
    let digits: String = rest
        .chars()
        .filter(|c| !matches!(c, '(' | ')' | ':'))
        .collect();
    let k: usize = digits.parse().map_err(|_| unknown())?;
    match family {
        "path" => Graph::build(k, (1..k).map(|i| (i - 1, i))),
        "cycle" if k >= 3 => Graph::build(k, (0..k).map(|i| (i, (i + 1) % k))),
        "complete" => Graph::build(k, (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j)))),
        "star" => Graph::build(k + 1, (1..=k).map(|i| (0, i))),
        _ => Err(unknown()),
    }
}

/// Seeded generator: the SplitMix64 stream from `rand_xoshiro`, with
/// bounded draws by rejection sampling on the largest multiple of the bound
/// and Fisher–Yates shuffles from the last index down. Both rules are fixed
/// here rather than taken from `rand`, whose range sampling may change
/// between releases, so other implementations can reproduce generated
/// graphs bit for bit.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    inner: rand_xoshiro::SplitMix64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 {
            inner: rand_xoshiro::SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `0..bound`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let limit = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < limit {
                return x % bound;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Output of [`random_c4_free`].
#[derive(Clone, Debug)]
pub struct RandomGraph {
    pub graph: Graph,
    /// True when fewer than the requested edges could be placed.
    pub saturated: bool,
}

/// Random C4-free graph by seeded incremental insertion.
///
/// All non-edges are shuffled once; scanning them in that order and keeping
/// each one whose insertion closes no 4-cycle is the same as repeatedly
/// drawing a uniform admissible non-edge, because an inadmissible pair never
/// becomes admissible again. Adding `uv` closes a 4-cycle iff some path
/// `u ~ w ~ x ~ v` exists.
pub fn random_c4_free(n: usize, target_m: usize, seed: u64) -> RandomGraph {
    let mut rng = SplitMix64::new(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    rng.shuffle(&mut pairs);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if edges.len() >= target_m {
            break;
        }
        let closes = adj[u].iter().any(|&w| {
            adj[v]
                .iter()
                .any(|&x| w != x && adj[w].binary_search(&x).is_ok())
        });
        if closes {
            continue;
        }
        for (a, b) in [(u, v), (v, u)] {
            let pos = adj[a].binary_search(&b).unwrap_err();
            adj[a].insert(pos, b);
        }
        edges.push((u, v));
    }
    let saturated = edges.len() < target_m;
    RandomGraph {
        graph: Graph::build(n, edges).expect("generated pairs are valid"),
        saturated,
    }
}

/// Filters for [`enumerate_small`].
#[derive(Clone, Copy, Debug, Default)]
pub struct EnumFilter {
    pub c4_free: bool,
    pub min_degree: Option<usize>,
}

/// Largest order enumerated without the override.
pub const ENUM_MAX: usize = 7;
/// Largest order with the override: 2^28 edge subsets, minutes of work.
pub const ENUM_MAX_OVERRIDE: usize = 8;

/// Every labeled graph on `n` vertices passing `filter`, in ascending order of
/// the edge mask (bit `k` is the `k`-th pair `(i, j)`, `i < j`, in
/// lexicographic order).
pub fn enumerate_small(n: usize, filter: EnumFilter, allow_eight: bool) -> Result<SmallGraphs> {
    let max = if allow_eight {
        ENUM_MAX_OVERRIDE
    } else {
        ENUM_MAX
    };
    if n > max {
        return Err(Error::TooLarge {
            what: "small-graph enumeration",
            n,
            max,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let end = 1u64 << pairs.len();
    Ok(SmallGraphs {
        n,
        pairs,
        filter,
        next: 0,
        end,
    })
}

/// Streaming iterator over small labeled graphs.
#[derive(Clone, Debug)]
pub struct SmallGraphs {
    n: usize,
    pairs: Vec<(usize, usize)>,
    filter: EnumFilter,
    next: u64,
    end: u64,
}

impl SmallGraphs {
    /// Number of edge masks in the full stream.
    pub fn mask_count(&self) -> u64 {
        self.end
    }

    /// Restricts the stream to masks in `start..end`, for sharding.
    pub fn with_range(mut self, start: u64, end: u64) -> Self {
        self.next = start.min(self.end);
        self.end = end.min(self.end);
        self
    }

    fn passes_degree(&self, mask: u64) -> bool {
        let Some(k) = self.filter.min_degree else {
            return true;
        };
        let mut deg = [0usize; ENUM_MAX_OVERRIDE];
        for (bit, &(u, v)) in self.pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        deg[..self.n].iter().all(|&d| d >= k)
    }
}

impl Iterator for SmallGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.next < self.end {
            let mask = self.next;
            self.next += 1;
            if !self.passes_degree(mask) {
                continue;
            }
            let edges = self
                .pairs
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &p)| p);
            let g = Graph::build(self.n, edges).expect("pairs are in range");
            if self.filter.c4_free && !g.is_c4_free() {
                continue;
            }
            return Some(g);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er3_census() {
        let er = er_polarity(3).unwrap();
        let g = &er.graph;
        assert_eq!(g.n(), 13);
        let s: Vec<usize> = (0..13).filter(|&v| g.degree(v) == 3).collect();
        assert_eq!(s.len(), 4);
        assert_eq!(s, er.absolute_points.to_vec());
        for &x in &s {
            for &y in &s {
                assert!(x == y || !g.adjacent(x, y));
            }
        }
        assert!((0..13).filter(|v| !s.contains(v)).all(|v| g.degree(v) == 4));
        assert!(g.is_c4_free());
    }

    #[test]
    fn er2_census() {
        let er = er_polarity(2).unwrap();
        let g = &er.graph;
        assert_eq!(g.n(), 7);
        assert_eq!(g.m(), 9);
        assert_eq!((0..7).filter(|&v| g.degree(v) == 2).count(), 3);
        assert_eq!((0..7).filter(|&v| g.degree(v) == 3).count(), 4);
        assert!(g.is_c4_free());
    }

    #[test]
    fn er_rejects_non_primes() {
        for q in [0, 1, 4, 9, 12] {
            assert_eq!(er_polarity(q).unwrap_err(), Error::NotPrime(q));
        }
    }

    #[test]
    fn canonical_point_order() {
        let er = er_polarity(2).unwrap();
        assert_eq!(er.point_coords[0], [0, 0, 1]);
        assert_eq!(er.point_coords[1], [0, 1, 0]);
        assert_eq!(er.point_coords[6], [1, 1, 1]);
    }

    #[test]
    fn named_examples() {
        let t = named_graph("triangle").unwrap();
        assert_eq!((t.n(), t.m()), (3, 3));
        let p = named_graph("petersen").unwrap();
        assert_eq!((p.n(), p.m()), (10, 15));
        assert!((0..10).all(|v| p.degree(v) == 3));
        let h = named_graph("heawood").unwrap();
        assert_eq!((h.n(), h.m()), (14, 21));
        assert!((0..14).all(|v| h.degree(v) == 3));
        assert!(h.is_c4_free());
        for spelling in ["cycle4", "cycle(4)", "cycle:4"] {
            let c = named_graph(spelling).unwrap();
            assert_eq!(c.find_four_cycle().unwrap().vertices(), [0, 1, 2, 3]);
        }
        assert_eq!(named_graph("star(3)").unwrap().degree(0), 3);
        assert_eq!(named_graph("complete(5)").unwrap().m(), 10);
        assert_eq!(named_graph("path(4)").unwrap().m(), 3);
        assert!(matches!(
            named_graph("dodecahedron"),
            Err(Error::UnknownName { .. })
        ));
    }

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 0, matching the published reference code
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn random_graphs_are_c4_free_and_reproducible() {
        let a = random_c4_free(10, 15, 7);
        let b = random_c4_free(10, 15, 7);
        assert_eq!(
            a.graph.edges().collect::<Vec<_>>(),
            b.graph.edges().collect::<Vec<_>>()
        );
        assert!(a.graph.is_c4_free());
        let big = random_c4_free(50, 100, 1);
        assert!(big.graph.m() <= 100);
        assert!(big.graph.is_c4_free());
        let tiny = random_c4_free(4, 6, 3);
        assert!(tiny.graph.is_c4_free());
        assert!(tiny.saturated);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(
            enumerate_small(3, EnumFilter::default(), false)
                .unwrap()
                .count(),
            8
        );
        let none = enumerate_small(
            5,
            EnumFilter {
                c4_free: true,
                min_degree: Some(3),
            },
            false,
        )
        .unwrap()
        .count();
        assert_eq!(none, 0);
        assert!(enumerate_small(8, EnumFilter::default(), false).is_err());
        assert!(enumerate_small(9, EnumFilter::default(), true).is_err());
    }
}
