//! File formats: graph6, edge lists, demand documents and solve reports.

use serde::{Deserialize, Serialize};

use crate::degeneracy::DemandFn;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::{Bipartition, Certificate, SolveStats};

const HEADER: &str = ">>graph6<<";

fn g6_err(offset: usize, reason: impl Into<String>) -> Error {
    Error::Graph6 {
        offset,
        reason: reason.into(),
    }
}

/// Decodes one graph6 line. A leading `>>graph6<<` header and surrounding
/// whitespace are ignored; padding bits are not checked.
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let trimmed = line.trim();
    let body = trimmed.strip_prefix(HEADER).unwrap_or(trimmed);
    let base = trimmed.len() - body.len();
    let bytes = body.as_bytes();
    let mut vals = Vec::with_capacity(bytes.len());
    for (i, &c) in bytes.iter().enumerate() {
        if !(63..=126).contains(&c) {
            return Err(g6_err(base + i, format!("byte {c:#04x} outside '?'..='~'")));
        }
        vals.push((c - 63) as u64);
    }
    let (n, used) = match vals.as_slice() {
        [] => return Err(g6_err(base, "empty input")),
        [63, 63, rest @ ..] => {
            if rest.len() < 6 {
                return Err(g6_err(base + bytes.len(), "truncated 8-byte size"));
            }
            (rest[..6].iter().fold(0, |acc, &v| acc << 6 | v), 8)
        }
        [63, rest @ ..] => {
            if rest.len() < 3 {
                return Err(g6_err(base + bytes.len(), "truncated 4-byte size"));
            }
            (rest[..3].iter().fold(0, |acc, &v| acc << 6 | v), 4)
        }
        [v, ..] => (*v, 1),
    };
    let n = usize::try_from(n).map_err(|_| g6_err(base, "order does not fit in memory"))?;
    let bits = n.saturating_mul(n.saturating_sub(1)) / 2;
    let want = bits.div_ceil(6);
    let have = vals.len() - used;
    if have != want {
        return Err(g6_err(
            base + used + have.min(want),
            format!("expected {want} data bytes for n = {n}, found {have}"),
        ));
    }
    let data = &vals[used..];
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if data[k / 6] >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::build(n, edges)
}

fn size_prefix(n: usize) -> Vec<u8> {
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    }
    out
}

/// Canonical graph6 line, without header or newline.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = size_prefix(n);
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.adjacent(i, j) as u8;
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

fn el_err(line: usize, reason: impl Into<String>) -> Error {
    Error::EdgeList {
        line,
        reason: reason.into(),
    }
}

/// Parses `n m` followed by `m` lines `u v` (0-based). `#` starts a comment;
/// blank lines are skipped. Self-loops, out-of-range endpoints, repeated
/// edges and a wrong edge count are rejected with the 1-based line number.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines
        .next()
        .ok_or_else(|| el_err(1, "missing \"n m\" header"))?;
    let pair = |no: usize, l: &str| -> Result<(usize, usize)> {
        let fields: Vec<&str> = l.split_whitespace().collect();
        let [x, y] = fields[..] else {
            return Err(el_err(no, format!("expected two integers, got {l:?}")));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| el_err(no, format!("not an integer: {s:?}")))
        };
        Ok((parse(x)?, parse(y)?))
    };
    let (n, m) = pair(hl, header)?;
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(m);
    let mut last = hl;
    for (no, l) in lines {
        last = no;
        let (u, v) = pair(no, l)?;
        if edges.len() == m {
            return Err(el_err(no, format!("more than the declared {m} edges")));
        }
        if u >= n || v >= n {
            return Err(el_err(no, format!("edge ({u}, {v}) outside 0..{n}")));
        }
        if u == v {
            return Err(el_err(no, format!("self-loop on vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(el_err(no, format!("duplicate edge ({u}, {v})")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(el_err(
            last,
            format!("declared {m} edges, found {}", edges.len()),
        ));
    }
    Graph::build(n, edges)
}

pub fn encode_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Reads either format: edge lists start with a digit, graph6 never does.
pub fn parse_graph_auto(text: &str) -> Result<Graph> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.starts_with(|c: char| c.is_ascii_digit()) {
        parse_edge_list(text)
    } else {
        parse_graph6(first)
    }
}

/// Demand document: per side either a constant or an explicit array.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_const: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_const: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<u32>>,
}

impl DemandDoc {
    pub fn parse(text: &str) -> Result<DemandDoc> {
        serde_json::from_str(text).map_err(|e| Error::Demands(e.to_string()))
    }

    /// Fields set in `other` replace the matching side of `self`.
    pub fn overlay(mut self, other: DemandDoc) -> DemandDoc {
        if other.a_const.is_some() || other.a.is_some() {
            self.a_const = other.a_const;
            self.a = other.a;
        }
        if other.b_const.is_some() || other.b.is_some() {
            self.b_const = other.b_const;
            self.b = other.b;
        }
        self
    }

    /// Both functions for an `n`-vertex graph, every value at least 2.
    pub fn resolve(&self, n: usize) -> Result<(DemandFn, DemandFn)> {
        let side = |name: &str, k: Option<u32>, arr: &Option<Vec<u32>>| -> Result<DemandFn> {
            let values = match (k, arr) {
                (Some(_), Some(_)) => {
                    return Err(Error::Demands(format!(
                        "both {name}_const and {name} given"
                    )))
                }
                (None, None) => return Err(Error::Demands(format!("no demand given for {name}"))),
                (Some(k), None) => vec![k; n],
                (None, Some(v)) if v.len() != n => {
                    return Err(Error::Demands(format!(
                        "{name} has {} entries, graph has {n} vertices",
                        v.len()
                    )))
                }
                (None, Some(v)) => v.clone(),
            };
            if let Some((i, &x)) = values.iter().enumerate().find(|(_, &x)| x < 2) {
                return Err(Error::Demands(format!("{name}[{i}] = {x} is below 2")));
            }
            Ok(DemandFn::new(values))
        };
        Ok((
            side("a", self.a_const, &self.a)?,
            side("b", self.b_const, &self.b)?,
        ))
    }
}

/// Parses and resolves a complete demand document.
pub fn parse_demands(text: &str, n: usize) -> Result<(DemandFn, DemandFn)> {
    DemandDoc::parse(text)?.resolve(n)
}

/// Range of one demand function, for echoing the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemandSummary {
    pub min: u32,
    pub max: u32,
    pub sum: u64,
}

impl DemandSummary {
    pub fn of(f: &DemandFn) -> DemandSummary {
        let v = f.values();
        DemandSummary {
            min: v.iter().copied().min().unwrap_or(0),
            max: v.iter().copied().max().unwrap_or(0),
            sum: v.iter().map(|&x| x as u64).sum(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub n: usize,
    pub m: usize,
    pub a: DemandSummary,
    pub b: DemandSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStats {
    pub iterations: u64,
    pub improving_moves: u64,
    pub plateau_episodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: usize,
    pub degree: usize,
    pub required: i64,
}

/// Wall-clock data, kept apart so the rest of the report is reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_time_ms: u64,
}

/// Structured outcome of one solve. A feasible report carries both sides as
/// sorted arrays, so it can be checked against the input without the solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Bipartition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    /// Set when the partition came from the exhaustive search after the
    /// solver failed.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub oracle_fallback: bool,
    pub stats: ReportStats,
    pub input: InputEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl SolveReport {
    pub fn new(
        g: &Graph,
        a: &DemandFn,
        b: &DemandFn,
        cert: &Certificate,
        stats: &SolveStats,
    ) -> SolveReport {
        let mut r = SolveReport {
            status: cert.status().to_string(),
            partition: None,
            witness: None,
            violation: None,
            diagnostic: None,
            oracle_fallback: false,
            stats: ReportStats {
                iterations: stats.iterations,
                improving_moves: stats.improving_moves,
                plateau_episodes: stats.plateau_episodes,
            },
            input: InputEcho {
                n: g.n(),
                m: g.m(),
                a: DemandSummary::of(a),
                b: DemandSummary::of(b),
            },
            timing: None,
        };
        match cert {
            Certificate::FeasiblePartition(bp) => r.partition = Some(bp.clone()),
            Certificate::C4Witness(c) => r.witness = Some(c.vertices()),
            Certificate::DegreeViolation {
                vertex,
                degree,
                required,
            } => {
                r.violation = Some(Violation {
                    vertex: *vertex,
                    degree: *degree,
                    required: *required,
                })
            }
            Certificate::Diagnostic(trace) => r.diagnostic = Some(trace.reason.clone()),
        }
        r
    }

    /// The report without its timing section.
    pub fn deterministic(&self) -> SolveReport {
        SolveReport {
            timing: None,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::named_graph;

    #[test]
    fn graph6_small_examples() {
        let k2 = parse_graph6("A_").unwrap();
        assert_eq!((k2.n(), k2.m()), (2, 1));
        let e2 = parse_graph6("A?").unwrap();
        assert_eq!((e2.n(), e2.m()), (2, 0));
        assert_eq!(
            parse_graph6("Bw").unwrap(),
            named_graph("triangle").unwrap()
        );
        assert_eq!(encode_graph6(&named_graph("triangle").unwrap()), "Bw");
        assert_eq!(parse_graph6(">>graph6<<A_\n").unwrap(), k2);
    }

    #[test]
    fn graph6_reference_strings() {
        // strings produced by networkx's graph6 writer
        assert_eq!(
            parse_graph6("Dhc").unwrap(),
            named_graph("cycle(5)").unwrap()
        );
        let petersen = named_graph("petersen").unwrap();
        assert_eq!(encode_graph6(&petersen), "IheA@GUAo");
        assert_eq!(parse_graph6("IheA@GUAo").unwrap(), petersen);
        assert!(encode_graph6(&named_graph("cycle(63)").unwrap()).starts_with("~??~hC"));
        assert_eq!(encode_graph6(&Graph::empty(0)), "?");
        assert_eq!(parse_graph6("?").unwrap().n(), 0);
    }

    #[test]
    fn graph6_long_sizes() {
        for n in [62, 63, 100, 10_303] {
            let g = named_graph(&format!("cycle({n})")).unwrap();
            let s = encode_graph6(&g);
            assert_eq!(s.as_bytes()[0] == b'~', n > 62);
            assert_eq!(parse_graph6(&s).unwrap(), g);
        }
        assert_eq!(size_prefix(258_047), b"~}~~");
        assert_eq!(size_prefix(258_048), b"~~???~??");
        // a bare size header is enough to see the decoded order
        let err = parse_graph6("~~???~??").unwrap_err().to_string();
        assert!(err.contains("n = 258048"), "{err}");
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        assert!(matches!(
            parse_graph6(""),
            Err(Error::Graph6 { offset: 0, .. })
        ));
        assert!(matches!(
            parse_graph6("B w"),
            Err(Error::Graph6 { offset: 1, .. })
        ));
        assert!(matches!(
            parse_graph6("B"),
            Err(Error::Graph6 { offset: 1, .. })
        ));
        assert!(matches!(parse_graph6("Bww"), Err(Error::Graph6 { .. })));
        assert!(matches!(parse_graph6("~?"), Err(Error::Graph6 { .. })));
    }

    #[test]
    fn edge_list_examples() {
        let g = parse_edge_list("3 3\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(g, named_graph("triangle").unwrap());
        assert!(matches!(
            parse_edge_list("2 1\n0 0\n"),
            Err(Error::EdgeList { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n0 1\n"),
            Err(Error::EdgeList { line: 3, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n1 0\n"),
            Err(Error::EdgeList { line: 3, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n"),
            Err(Error::EdgeList { .. })
        ));
        assert!(matches!(
            parse_edge_list("3 1\n0 1\n1 2\n"),
            Err(Error::EdgeList { line: 3, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 1\n0 3\n"),
            Err(Error::EdgeList { line: 2, .. })
        ));
        let commented = "# triangle\n3 3 # header\n\n0 1\n1 2 # middle\n2 0\n";
        assert_eq!(
            parse_edge_list(commented).unwrap(),
            named_graph("triangle").unwrap()
        );
    }

    #[test]
    fn auto_detects_format() {
        let g = named_graph("petersen").unwrap();
        assert_eq!(parse_graph_auto(&encode_graph6(&g)).unwrap(), g);
        assert_eq!(parse_graph_auto(&encode_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn demand_documents() {
        let (a, b) = parse_demands(r#"{"a_const":2,"b_const":2}"#, 10).unwrap();
        assert_eq!(a, DemandFn::constant(10, 2));
        assert_eq!(b, DemandFn::constant(10, 2));
        let (a, b) = parse_demands(r#"{"a":[2,3,4],"b_const":3}"#, 3).unwrap();
        assert_eq!(a.values(), &[2, 3, 4]);
        assert_eq!(b, DemandFn::constant(3, 3));
        let err = parse_demands(r#"{"a":[2,1,2],"b_const":2}"#, 3).unwrap_err();
        assert!(err.to_string().contains("a[1] = 1"), "{err}");
        assert!(parse_demands(r#"{"a":[2,2],"b_const":2}"#, 3).is_err());
        assert!(parse_demands(r#"{"a_const":2}"#, 3).is_err());
        assert!(parse_demands(r#"{"a_const":2,"a":[2,2,2],"b_const":2}"#, 3).is_err());
        assert!(parse_demands(r#"{"a_const":2,"b_const":2,"c":1}"#, 3).is_err());
    }

    #[test]
    fn overlay_replaces_one_side() {
        let base = DemandDoc::parse(r#"{"b":[2,3,2]}"#).unwrap();
        let doc = base.overlay(DemandDoc {
            a_const: Some(3),
            ..Default::default()
        });
        let (a, b) = doc.resolve(3).unwrap();
        assert_eq!(a, DemandFn::constant(3, 3));
        assert_eq!(b.values(), &[2, 3, 2]);
    }
}
