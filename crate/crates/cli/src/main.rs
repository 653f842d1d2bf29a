//! `percolate`: simulate, decide, brute-force and reduce for 2-neighbour
//! bootstrap percolation.
//!
//! Exit codes: 0 success or YES, 1 NO or nothing found, 2 usage or
//! precondition error, 3 internal assertion.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use percolate_core::json;
use percolate_core::{
    brute_force, build_reduction_with, degree_one_set, extend_bip3, extend_bip4, extend_gen3,
    find_small_certificate, gamma_family, is_bipartite, parse_assignment, parse_dimacs,
    parse_graph, percolate, representative_t0u, set_percolation_time, verify_reduction_with,
    ConstructError, Decider, Graph, ReductionOptions, VertexSet, Witness, WitnessKind,
};

#[derive(Parser)]
#[command(
    name = "percolate",
    version,
    about = "2-neighbour bootstrap percolation toolkit"
)]
struct Cli {
    /// Print JSON documents instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the deciders and the oracle.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    General,
    Bipartite,
}

#[derive(Subcommand)]
enum Command {
    /// Run the infection process from a seed set.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated 1-based ids, or a file with one id per line.
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
    },
    /// Decide whether t(G) reaches k.
    Decide {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=4))]
        k: u32,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Enumerate F over every vertex instead of the ball around u.
        #[arg(long)]
        no_prune: bool,
    },
    /// Exhaustive maximum percolation time with the least maximising seed.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = percolate_core::oracle::DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Dump the forced seed families around a vertex.
    Families {
        #[arg(long)]
        graph: PathBuf,
        /// 1-based vertex id.
        #[arg(long)]
        vertex: usize,
    },
    /// Extend a decider witness to a hull set.
    Construct {
        #[arg(long)]
        graph: PathBuf,
        /// Witness or decision JSON as printed by `decide --json`.
        #[arg(long)]
        witness: PathBuf,
    },
    /// Smallest seed infecting a vertex at exactly time k.
    Certificate {
        #[arg(long)]
        graph: PathBuf,
        /// 1-based vertex id.
        #[arg(long)]
        vertex: usize,
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=4))]
        k: u32,
    },
    /// Build the 3-SAT gadget graph.
    Reduce {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Graph output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Role map JSON output file.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Skip conflict vertices between literals of the same clause.
        #[arg(long)]
        no_intra_clause: bool,
    },
    /// Check the infection schedule of a satisfying assignment.
    VerifyReduction {
        #[arg(long)]
        cnf: PathBuf,
        /// One signed literal per line.
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long)]
        no_intra_clause: bool,
    },
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        error: error.into(),
    }
}

type Run = Result<u8, Failure>;

const YES: u8 = 0;
const NO: u8 = 1;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut out = String::new();
    let result = run(&cli, &mut out);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli, out: &mut String) -> Run {
    let threads = usize::from(cli.threads);
    let mut say = |line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    match &cli.command {
        Command::Simulate { graph, seed } => {
            let g = load_graph(graph)?;
            let seed = load_seed(seed, g.n())?;
            let trace = percolate(&g, &seed);
            if cli.json {
                say(json::trace_json(&trace));
            } else {
                let times: Vec<String> = trace.times().iter().map(|t| t.to_string()).collect();
                say(format!("times {}", times.join(",")));
                say(format!("t={}", trace.percolation_time()));
            }
            Ok(YES)
        }
        Command::Decide {
            graph,
            k,
            mode,
            no_prune,
        } => {
            let g = load_graph(graph)?;
            let decider = Decider::new(threads).with_prune(!no_prune);
            let found = match (mode, k) {
                (Mode::General, 3) => decider.decide_gen3(&g),
                (Mode::Bipartite, 3) => decider.decide_bip3(&g),
                (Mode::Bipartite, _) => decider.decide_bip4(&g),
                (Mode::General, _) => {
                    return Err(usage(anyhow!(
                        "k = 4 is only decided with --mode bipartite"
                    )))
                }
            }
            .map_err(usage)?;
            if cli.json {
                say(json::decision_json(found.as_ref()));
            } else {
                match &found {
                    Some(w) => {
                        say("YES".into());
                        say(describe(w));
                    }
                    None => say("NO".into()),
                }
            }
            Ok(if found.is_some() { YES } else { NO })
        }
        Command::Oracle { graph, limit } => {
            let g = load_graph(graph)?;
            let workers = percolate_core::Workers::new(threads);
            let r = brute_force(&g, *limit, &workers).map_err(usage)?;
            if cli.json {
                say(json::oracle_json(g.n(), r.t, &r.seed));
            } else {
                say(format!("t={}", r.t));
                say(format!("seed {}", ids(&r.seed)));
            }
            Ok(YES)
        }
        Command::Families { graph, vertex } => {
            let g = load_graph(graph)?;
            let u = vertex_arg(*vertex, &g)?;
            let ones = degree_one_set(&g);
            let t0 = representative_t0u(&g, u).map_err(usage)?;
            let gamma = match is_bipartite(&g) {
                Some(_) => Some(gamma_family(&g, u).map_err(usage)?),
                None => None,
            };
            if cli.json {
                say(json::families_json(u, &ones, &t0, gamma.as_deref()));
            } else {
                say(format!("degree-one {}", ids(&ones)));
                say(format!("t0 {}", ids(&t0)));
                for m in gamma.iter().flatten() {
                    say(format!("gamma {} {}", m.kind, ids(&m.members)));
                }
            }
            Ok(YES)
        }
        Command::Construct { graph, witness } => {
            let g = load_graph(graph)?;
            let text = read(witness)?;
            let w = json::parse_witness(&text, g.n()).map_err(usage)?;
            let seed = match w.kind() {
                WitnessKind::Bip3 => extend_bip3(&g, &w),
                WitnessKind::Gen3 => extend_gen3(&g, &w),
                WitnessKind::Bip4 => extend_bip4(&g, &w),
            }
            .map_err(|e| match e {
                ConstructError::InternalAssertionFailed(_) => Failure {
                    code: 3,
                    error: e.into(),
                },
                other => usage(other),
            })?;
            let t = set_percolation_time(&g, &seed);
            if cli.json {
                say(json::seed_json(Some(w.kind()), &seed, t));
            } else {
                say(format!("seed {}", ids(&seed)));
                say(format!("t={t}"));
            }
            Ok(YES)
        }
        Command::Certificate { graph, vertex, k } => {
            let g = load_graph(graph)?;
            let u = vertex_arg(*vertex, &g)?;
            let cap = if *k == 3 { 4 } else { 8 };
            let f = find_small_certificate(&g, u, *k, cap);
            if cli.json {
                say(json::certificate_json(u, *k, f.as_ref()));
            } else {
                say(f
                    .as_ref()
                    .map_or("NONE".into(), |f| format!("F {}", ids(f))));
            }
            Ok(if f.is_some() { YES } else { NO })
        }
        Command::Reduce {
            cnf,
            k,
            out: target,
            map,
            no_intra_clause,
        } => {
            let formula = parse_dimacs(&read(cnf)?).map_err(usage)?;
            let opts = ReductionOptions {
                intra_clause: !no_intra_clause,
            };
            let (g, gm) = build_reduction_with(&formula, *k, opts).map_err(usage)?;
            if gm.y.is_empty() {
                eprintln!(
                    "warning: no complementary literal pair; z and z' form a separate component"
                );
            }
            if let Some(path) = map {
                write(path, &(json::gadget_json(&gm) + "\n"))?;
            }
            match target {
                Some(path) => {
                    write(path, &g.to_text())?;
                    if cli.json {
                        say(json::gadget_json(&gm));
                    } else {
                        say(format!("n={} m={} conflicts={}", g.n(), g.m(), gm.y.len()));
                    }
                }
                None => out_graph(&mut say, &g),
            }
            Ok(YES)
        }
        Command::VerifyReduction {
            cnf,
            assignment,
            k,
            no_intra_clause,
        } => {
            let formula = parse_dimacs(&read(cnf)?).map_err(usage)?;
            let a = parse_assignment(&read(assignment)?, formula.num_vars).map_err(usage)?;
            let opts = ReductionOptions {
                intra_clause: !no_intra_clause,
            };
            let report = verify_reduction_with(&formula, &a, *k, opts).map_err(usage)?;
            if cli.json {
                say(json::report_json(&report));
            } else {
                for c in report.failures() {
                    say(format!(
                        "mismatch {} (vertex {}): expected {}, observed {}",
                        c.role,
                        c.vertex + 1,
                        c.expected,
                        c.observed
                    ));
                }
                let verdict = if report.passed() { "passed" } else { "FAILED" };
                say(format!(
                    "{verdict}: n={} bipartite={} percolates={} t={} k={} checks={}",
                    report.n,
                    report.bipartite,
                    report.percolates,
                    report.t,
                    report.k,
                    report.checks.len()
                ));
            }
            Ok(if report.passed() { YES } else { NO })
        }
    }
}

fn out_graph(say: &mut impl FnMut(String), g: &Graph) {
    let text = g.to_text();
    say(text.trim_end().to_string());
}

fn describe(w: &Witness) -> String {
    let one = |v: usize| v + 1;
    match w {
        Witness::Bip3 { u, v, s } => format!("BIP3 u={} v={} s={}", one(*u), one(*v), one(*s)),
        Witness::Gen3 { u, t0, f } => {
            format!("GEN3 u={} t0={{{}}} f={{{}}}", one(*u), ids(t0), ids(f))
        }
        Witness::Bip4 { u, gamma, t0, f, x } => format!(
            "BIP4 u={} gamma={gamma} t0={{{}}} f={{{}}} x={}",
            one(*u),
            ids(t0),
            ids(f),
            one(*x)
        ),
    }
}

fn ids(set: &VertexSet) -> String {
    set.to_one_based()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(usage)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(usage)
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read(path)?;
    parse_graph(&text)
        .with_context(|| format!("{}", path.display()))
        .map_err(usage)
}

fn vertex_arg(v: usize, g: &Graph) -> Result<usize, Failure> {
    if (1..=g.n()).contains(&v) {
        Ok(v - 1)
    } else {
        Err(usage(anyhow!("vertex {v} is outside 1..={}", g.n())))
    }
}

/// `1,3,7` inline, otherwise a file with one id per line.
fn load_seed(arg: &str, n: usize) -> Result<VertexSet, Failure> {
    let inline = arg
        .chars()
        .all(|c| c.is_ascii_digit() || c == ',' || c.is_whitespace());
    let (text, ids): (String, Vec<&str>);
    if inline {
        text = arg.to_string();
        ids = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
    } else {
        text = read(Path::new(arg))?;
        ids = text
            .lines()
            .map(str::trim)
            .filter(|s| !s.is_empty() && !s.starts_with('#'))
            .collect();
    }
    let mut seed = VertexSet::new(n);
    for id in ids {
        let v: usize = id
            .parse()
            .map_err(|_| usage(anyhow!("bad seed id {id:?}")))?;
        if !(1..=n).contains(&v) {
            return Err(usage(anyhow!("seed id {v} is outside 1..={n}")));
        }
        seed.insert(v - 1);
    }
    Ok(seed)
}
