mod common;

use c4part::cli::run_cli;
use c4part::constructions::{er_polarity, named_graph, random_c4_free};
use c4part::degeneracy::DemandFn;
use c4part::io::{encode_edge_list, encode_graph6, parse_edge_list, parse_graph6, SolveReport};
use c4part::solver::{solve, Certificate};
use common::graph_from_mask;
use proptest::prelude::*;
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str], stdin: &str) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut input = stdin.as_bytes();
    let argv = std::iter::once("c4part").chain(args.iter().copied());
    let code = run_cli(argv, &mut input, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn gen(args: &[&str]) -> String {
    let mut argv = vec!["gen"];
    argv.extend_from_slice(args);
    let r = cli(&argv, "");
    assert_eq!(r.code, 0, "{}", r.err);
    r.out
}

#[test]
fn er3_tight_instance_is_a_degree_violation() {
    let dir = tempfile::tempdir().unwrap();
    let er = er_polarity(3).unwrap();
    let b: Vec<u32> = (0..13)
        .map(|v| if er.absolute_points.contains(v) { 2 } else { 3 })
        .collect();
    let path = dir.path().join("er3_b.json");
    std::fs::write(&path, serde_json::json!({ "b": b }).to_string()).unwrap();
    let g = gen(&["polarity", "--q", "3"]);
    let r = cli(
        &[
            "solve",
            "--a-const",
            "3",
            "--b-file",
            path.to_str().unwrap(),
        ],
        &g,
    );
    assert_eq!(r.code, 3, "{}", r.err);
    let report: SolveReport = serde_json::from_str(&r.out).unwrap();
    assert_eq!(report.status, "degree_violation");
    let t = cli(
        &[
            "tightness",
            "--a-const",
            "3",
            "--b-file",
            path.to_str().unwrap(),
        ],
        &g,
    );
    assert_eq!(t.code, 0);
    assert_eq!(
        serde_json::from_str::<Value>(&t.out).unwrap()["tight"],
        true
    );
}

#[test]
fn feasible_report_verifies_from_the_input_alone() {
    let g6 = gen(&["named", "petersen"]);
    let r = cli(&["solve", "--a-const", "2", "--b-const", "2"], &g6);
    assert_eq!(r.code, 0);
    assert!(r.err.contains("feasible"));
    // check using only the graph text and the report
    let g = parse_graph6(g6.trim()).unwrap();
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["status"], "feasible");
    let side = |k: &str| -> Vec<usize> {
        v["partition"][k]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap() as usize)
            .collect()
    };
    let (a, b) = (side("a"), side("b"));
    assert_eq!(a.len() + b.len(), 10);
    for (part, other) in [(&a, &b), (&b, &a)] {
        assert!(part.windows(2).all(|w| w[0] < w[1]));
        for &x in part.iter() {
            assert!(!other.contains(&x));
            let inside = g.neighbors(x).iter().filter(|w| part.contains(w)).count();
            assert!(inside >= 2);
        }
    }
    assert!(v["timing"]["wall_time_ms"].is_u64());
}

#[test]
fn check_c4_reports_the_cycle() {
    let r = cli(&["check-c4"], &gen(&["named", "cycle4"]));
    assert_eq!(r.code, 2);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["c4_free"], false);
    assert_eq!(v["witness"].as_array().unwrap().len(), 4);
    let ok = cli(&["check-c4"], &gen(&["named", "petersen"]));
    assert_eq!(ok.code, 0);
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        vec!["frobnicate"],
        vec!["solve", "--a-const"],
        vec!["crosscheck", "--n-max", "9"],
        vec!["bench", "--q", "2"],
        vec!["bench", "--q", "4"],
        vec!["gen", "polarity", "--q", "6"],
    ] {
        let r = cli(&args, "");
        assert_eq!(r.code, 64, "{args:?}: {}", r.err);
        assert!(!r.err.is_empty());
    }
    // bad input data goes the same way, with the position in the message
    let r = cli(&["solve", "--a-const", "2", "--b-const", "2"], "2 1\n0 0\n");
    assert_eq!(r.code, 64);
    assert!(r.err.contains("line 2"), "{}", r.err);
    let r = cli(&["solve", "--a-const", "1", "--b-const", "2"], "Bw");
    assert_eq!(r.code, 64);
    assert!(cli(&["--help"], "").code == 0);
}

#[test]
fn exit_codes_follow_certificates() {
    let cases = [
        ("petersen", 2, 2, 0),
        ("triangle", 2, 2, 3),
        ("cycle4", 2, 2, 3),
        ("heawood", 2, 2, 0),
    ];
    for (name, a, b, code) in cases {
        let r = cli(
            &[
                "solve",
                "--a-const",
                &a.to_string(),
                "--b-const",
                &b.to_string(),
            ],
            &gen(&["named", name]),
        );
        assert_eq!(r.code, code, "{name}");
    }
    // K_{3,3}: degree 3 meets a + b - 1, but it is full of 4-cycles
    let k33 = "6 9\n0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n";
    assert_eq!(
        cli(&["solve", "--a-const", "2", "--b-const", "2"], k33).code,
        2
    );
    // and for a batch of random graphs, the code matches the library's answer
    for seed in 0..40u64 {
        let g = random_c4_free(9 + (seed % 6) as usize, 30, seed).graph;
        let g = if seed % 3 == 0 {
            graph_from_mask(6, seed * 2654435761 % (1 << 15))
        } else {
            g
        };
        let f = DemandFn::constant(g.n(), 2);
        let want = match solve(&g, &f, &f).unwrap() {
            Certificate::FeasiblePartition(_) => 0,
            Certificate::C4Witness(_) => 2,
            Certificate::DegreeViolation { .. } => 3,
            Certificate::Diagnostic(_) => 4,
        };
        let r = cli(
            &["solve", "--a-const", "2", "--b-const", "2"],
            &encode_edge_list(&g),
        );
        assert_eq!(r.code, want, "seed {seed}");
    }
}

#[test]
fn corollary_commands() {
    let er7 = gen(&["polarity", "--q", "7"]);
    let r = cli(&["kway", "--s", "3,3,3"], &er7);
    assert_eq!(r.code, 0, "{}", r.err);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["parts"].as_array().unwrap().len(), 3);
    let r = cli(&["cycles", "-k", "4"], &gen(&["polarity", "--q", "5"]));
    assert_eq!(r.code, 0);
    let r = cli(&["cycles", "-k", "3"], &gen(&["named", "petersen"]));
    assert_eq!(r.code, 3, "Petersen has degree 3 < k + 1");
}

#[test]
fn oracle_and_search_commands() {
    let r = cli(&["oracle", "--a-const", "2", "--b-const", "2"], "Bw");
    assert_eq!(r.code, 0);
    assert_eq!(
        serde_json::from_str::<Value>(&r.out).unwrap()["feasible"],
        false
    );
    let r = cli(&["tightness", "--search"], &gen(&["polarity", "--q", "2"]));
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["found"].as_array().unwrap().len(), 16);
    let r = cli(&["crosscheck", "--n-max", "5", "--grid", "2x2,2x3"], "");
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["discrepancies"].as_array().unwrap().len(), 0);
}

#[test]
fn bench_reports_rows() {
    let r = cli(&["bench", "--q", "5,7", "--seed", "3"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["n"], 31);
    assert_eq!(rows[0]["a"], 3);
    assert_eq!(rows[1]["verified"], true);
}

#[test]
fn gen_formats_and_seeds() {
    let edges = cli(&["gen", "--format", "edges", "named", "petersen"], "").out;
    assert_eq!(
        parse_edge_list(&edges).unwrap(),
        named_graph("petersen").unwrap()
    );
    let a = gen(&["random", "--n", "30", "--m", "60", "--seed", "9"]);
    let b = gen(&["random", "--n", "30", "--m", "60", "--seed", "9"]);
    let c = gen(&["random", "--n", "30", "--m", "60", "--seed", "10"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(parse_graph6(a.trim()).unwrap().is_c4_free());
}

proptest! {
    #[test]
    fn formats_round_trip(n in 1usize..=90, m in 0usize..300, seed in any::<u64>()) {
        let g = random_c4_free(n, m, seed).graph;
        let g6 = encode_graph6(&g);
        prop_assert_eq!(&parse_graph6(&g6).unwrap(), &g);
        prop_assert_eq!(encode_graph6(&parse_graph6(&g6).unwrap()), g6);
        prop_assert_eq!(parse_edge_list(&encode_edge_list(&g)).unwrap(), g);
    }
}
