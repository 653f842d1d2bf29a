use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use percolate_core::{gen, Graph};
use serde_json::Value;
use tempfile::TempDir;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Sandbox {
        Sandbox {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn graph(&self, name: &str, g: &Graph) -> PathBuf {
        self.file(name, &g.to_text())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn percolate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_percolate"))
        .args(args)
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const FORMULA: &str = "c two clauses\np cnf 2 2\n1 2 2 0\n-1 2 2 0\n";

#[test]
fn simulate_on_c4() {
    let sb = Sandbox::new();
    let g = sb.graph("c4.txt", &gen::cycle(4));
    let o = percolate(&["simulate", "--graph", p(&g), "--seed", "1,3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "times 0,1,0,1\nt=1\n");

    let o = percolate(&["--json", "simulate", "--graph", p(&g), "--seed", "1"]);
    assert_eq!(
        stdout(&o),
        "{\"schema\":\"percolate/1\",\"n\":4,\"seed\":[1],\"times\":[0,null,null,null],\"percolates\":false,\"t\":null}\n"
    );
}

#[test]
fn seed_from_file() {
    let sb = Sandbox::new();
    let g = sb.graph("c4.txt", &gen::cycle(4));
    let seed = sb.file("seed.txt", "# opposite corners\n2\n\n4\n");
    let o = percolate(&["simulate", "--graph", p(&g), "--seed", p(&seed)]);
    assert_eq!(stdout(&o), "times 1,0,1,0\nt=1\n");
}

#[test]
fn bad_inputs_exit_2() {
    let sb = Sandbox::new();
    let g = sb.graph("c4.txt", &gen::cycle(4));
    let broken = sb.file("broken.txt", "p edge 3 1\ne 1 7\n");
    assert_eq!(
        code(&percolate(&[
            "simulate",
            "--graph",
            p(&broken),
            "--seed",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&percolate(&["simulate", "--graph", p(&g), "--seed", "5"])),
        2
    );
    assert_eq!(
        code(&percolate(&[
            "simulate",
            "--graph",
            "no/such/file",
            "--seed",
            "1"
        ])),
        2
    );

    let o = percolate(&[
        "decide",
        "--k",
        "3",
        "--mode",
        "general",
        "--graph",
        p(&g),
        "--frobnicate",
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(
        code(&percolate(&[
            "decide",
            "--k",
            "5",
            "--mode",
            "general",
            "--graph",
            p(&g)
        ])),
        2
    );
    assert_eq!(code(&percolate(&[])), 2);
}

#[test]
fn decide_exit_codes() {
    let sb = Sandbox::new();
    let t8 = sb.graph("t8.txt", &gen::delay_tree(3));
    let c6 = sb.graph("c6.txt", &gen::cycle(6));
    let k5 = sb.graph("k5.txt", &gen::complete(5));
    let split = sb.graph(
        "split.txt",
        &Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap(),
    );

    let o = percolate(&["decide", "--k", "3", "--mode", "general", "--graph", p(&t8)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("YES\nGEN3 u="));

    let o = percolate(&[
        "--json",
        "decide",
        "--k",
        "3",
        "--mode",
        "bipartite",
        "--graph",
        p(&t8),
    ]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["answer"], "YES");
    assert_eq!(doc["witness"]["kind"], "BIP3");

    let o = percolate(&[
        "decide",
        "--k",
        "4",
        "--mode",
        "bipartite",
        "--graph",
        p(&c6),
    ]);
    assert_eq!((code(&o), stdout(&o)), (1, "NO\n".to_string()));

    assert_eq!(
        code(&percolate(&[
            "decide",
            "--k",
            "3",
            "--mode",
            "bipartite",
            "--graph",
            p(&k5)
        ])),
        2
    );
    assert_eq!(
        code(&percolate(&[
            "decide",
            "--k",
            "4",
            "--mode",
            "general",
            "--graph",
            p(&c6)
        ])),
        2
    );
    assert_eq!(
        code(&percolate(&[
            "decide",
            "--k",
            "3",
            "--mode",
            "general",
            "--graph",
            p(&split)
        ])),
        2
    );
}

#[test]
fn witness_round_trips_through_construct() {
    let sb = Sandbox::new();
    let t10 = sb.graph("t10.txt", &gen::delay_tree(4));
    for (k, mode) in [("3", "general"), ("3", "bipartite"), ("4", "bipartite")] {
        let o = percolate(&[
            "--json",
            "decide",
            "--k",
            k,
            "--mode",
            mode,
            "--graph",
            p(&t10),
        ]);
        assert_eq!(code(&o), 0);
        let w = sb.file("w.json", &stdout(&o));
        let o = percolate(&[
            "--json",
            "construct",
            "--graph",
            p(&t10),
            "--witness",
            p(&w),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(doc["t"].as_u64().unwrap() >= k.parse::<u64>().unwrap());
    }

    let other = sb.graph("c6.txt", &gen::cycle(6));
    let o = percolate(&[
        "--json",
        "decide",
        "--k",
        "3",
        "--mode",
        "general",
        "--graph",
        p(&t10),
    ]);
    let w = sb.file("w.json", &stdout(&o));
    assert_eq!(
        code(&percolate(&[
            "construct",
            "--graph",
            p(&other),
            "--witness",
            p(&w)
        ])),
        2
    );
    let junk = sb.file("junk.json", "{\"kind\":");
    assert_eq!(
        code(&percolate(&[
            "construct",
            "--graph",
            p(&t10),
            "--witness",
            p(&junk)
        ])),
        2
    );
}

#[test]
fn oracle_and_certificate() {
    let sb = Sandbox::new();
    let t8 = sb.graph("t8.txt", &gen::delay_tree(3));
    let o = percolate(&["oracle", "--graph", p(&t8)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("t=3\n"));
    assert_eq!(
        code(&percolate(&["oracle", "--graph", p(&t8), "--limit", "5"])),
        2
    );

    // The root of the depth-3 delay tree is its last time-3 vertex.
    let o = percolate(&[
        "--json",
        "certificate",
        "--graph",
        p(&t8),
        "--vertex",
        "1",
        "--k",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["k"], 3);
    assert!(doc["f"].as_array().unwrap().len() <= 4);

    let k2 = sb.graph("k2.txt", &gen::path(2));
    let o = percolate(&[
        "certificate",
        "--graph",
        p(&k2),
        "--vertex",
        "1",
        "--k",
        "3",
    ]);
    assert_eq!((code(&o), stdout(&o)), (1, "NONE\n".to_string()));
}

#[test]
fn families_document() {
    let sb = Sandbox::new();
    let g = sb.graph("c6.txt", &gen::cycle(6));
    let o = percolate(&["--json", "families", "--graph", p(&g), "--vertex", "1"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["schema"], "percolate/1");
    assert_eq!(doc["gamma"][0]["kind"], "T0'");
    let k5 = sb.graph("k5.txt", &gen::complete(5));
    let o = percolate(&["--json", "families", "--graph", p(&k5), "--vertex", "2"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc.get("gamma").is_none());
}

#[test]
fn reduce_then_verify() {
    let sb = Sandbox::new();
    let cnf = sb.file("f.cnf", FORMULA);
    let (out, map) = (sb.path("g.txt"), sb.path("m.json"));
    let o = percolate(&[
        "reduce",
        "--cnf",
        p(&cnf),
        "--k",
        "5",
        "--out",
        p(&out),
        "--map",
        p(&map),
    ]);
    assert_eq!(code(&o), 0);
    let graph = std::fs::read_to_string(&out).unwrap();
    let g = percolate_core::parse_graph(&graph).unwrap();
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&map).unwrap()).unwrap();
    let id = |key: &str| doc[key].as_u64().unwrap() as usize - 1;
    assert!(g.has_edge(id("z"), id("z_prime")));
    assert_eq!(g.degree(id("z_prime")), 1);
    assert_eq!(stdout(&o), format!("n={} m={} conflicts=1\n", g.n(), g.m()));

    let piped = percolate(&["reduce", "--cnf", p(&cnf)]);
    assert_eq!(stdout(&piped), graph);

    let good = sb.file("good.txt", "2\n-1\n");
    let o = percolate(&[
        "verify-reduction",
        "--cnf",
        p(&cnf),
        "--assignment",
        p(&good),
        "--k",
        "6",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("passed: "));

    let bad = sb.file("bad.txt", "-2\n1\n");
    let o = percolate(&[
        "verify-reduction",
        "--cnf",
        p(&cnf),
        "--assignment",
        p(&bad),
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(
        code(&percolate(&["reduce", "--cnf", p(&cnf), "--k", "4"])),
        2
    );
}

#[test]
fn reduce_warns_without_conflicts() {
    let sb = Sandbox::new();
    let cnf = sb.file("mono.cnf", "p cnf 3 1\n1 2 3 0\n");
    let o = percolate(&["reduce", "--cnf", p(&cnf)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let a = sb.file("a.txt", "1\n");
    assert_eq!(
        code(&percolate(&[
            "verify-reduction",
            "--cnf",
            p(&cnf),
            "--assignment",
            p(&a)
        ])),
        2
    );
}

#[test]
fn output_bytes_ignore_thread_count_and_pruning() {
    let sb = Sandbox::new();
    let mut graphs = vec![gen::delay_tree(3), gen::delay_tree(4), gen::cycle(8)];
    graphs.extend((0..6).map(|s| gen::random_connected_bipartite(9, 0.15, s)));
    graphs.extend((0..4).map(|s| gen::random_connected_graph(8, 0.2, s)));
    for (i, g) in graphs.iter().enumerate() {
        let path = sb.graph(&format!("g{i}.txt"), g);
        let bip = percolate_core::is_bipartite(g).is_some();
        let mut runs: Vec<Vec<&str>> = vec![
            vec!["--json", "decide", "--k", "3", "--mode", "general"],
            vec!["oracle"],
        ];
        if bip {
            runs.push(vec!["--json", "decide", "--k", "4", "--mode", "bipartite"]);
        }
        for args in runs {
            let mut base = args.clone();
            base.extend(["--graph", p(&path)]);
            let one = percolate(&[base.as_slice(), &["--threads", "1"]].concat());
            let four = percolate(&[base.as_slice(), &["--threads", "4"]].concat());
            assert_eq!(one.stdout, four.stdout, "{args:?} on graph {i}");
            assert_eq!(code(&one), code(&four));
            if args.contains(&"decide") {
                let literal = percolate(&[base.as_slice(), &["--no-prune"]].concat());
                assert_eq!(
                    one.stdout, literal.stdout,
                    "{args:?} --no-prune on graph {i}"
                );
            }
        }
    }
}
