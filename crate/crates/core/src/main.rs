use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use semistream_matching::cover::{LaminarFamily, OddSetCover};
use semistream_matching::generate::{generate, GeneratorSpec};
use semistream_matching::graph::{is_vertex_cover, validate_matching, Edge, Graph, Matching, VertexCover};
use semistream_matching::stream::{load_graph, write_graph, EdgeStream, OrderMode};
use semistream_matching::{run_mbm, run_mwm, Error, MbmConfig, MwmConfig, Result, RoundCover, RunOutcome};

#[derive(Parser)]
#[command(name = "ssmatch", version, about = "Multi-pass semi-streaming approximate matching")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance in edge-list format.
    Gen(GenArgs),
    /// Run a streaming algorithm and print metrics as JSON.
    Run(RunArgs),
    /// Check a matching, and optionally a cover, against a graph.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("kind").required(true).args(["planted_bipartite", "random_bipartite", "general"])))]
struct GenArgs {
    /// Planted perfect matching on N + N vertices.
    #[arg(long, value_name = "N")]
    planted_bipartite: Option<usize>,
    /// Random bipartite graph on N + N vertices.
    #[arg(long, value_name = "N")]
    random_bipartite: Option<usize>,
    /// Random weighted general graph on N vertices.
    #[arg(long, value_name = "N")]
    general: Option<usize>,
    #[arg(long, default_value_t = 0)]
    noise_deg: usize,
    #[arg(long, default_value_t = 4.0)]
    avg_deg: f64,
    #[arg(long, default_value_t = 100)]
    wmax: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Mbm,
    Mwm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    AsGiven,
    Shuffled,
    Adversarial,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    alg: Alg,
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    /// Oversampling factor; must be an integer >= 1.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, default_value_t = 0, conflicts_with = "seeds")]
    seed: u64,
    /// Inclusive seed range `a..b`, run in parallel; prints a JSON array.
    #[arg(long, value_name = "A..B")]
    seeds: Option<String>,
    #[arg(long)]
    rounds: Option<usize>,
    /// Edge visit order within passes, seeded by the run seed.
    #[arg(long, value_enum, default_value = "as-given")]
    order: Order,
    /// Skip weight preprocessing (mwm).
    #[arg(long)]
    no_preprocess: bool,
    /// Metrics output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write the best matching as `u v` lines.
    #[arg(long)]
    matching_out: Option<PathBuf>,
    /// Write the cover computed on the best round's sample.
    #[arg(long)]
    cover_out: Option<PathBuf>,
    input: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    #[arg(long)]
    matching: PathBuf,
    #[arg(long)]
    cover: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Run(a) => cmd_run(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Certificate(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<ExitCode> {
    let spec = if let Some(n_side) = a.planted_bipartite {
        GeneratorSpec::PlantedPerfectBipartite {
            n_side,
            noise_deg: a.noise_deg,
        }
    } else if let Some(n_side) = a.random_bipartite {
        GeneratorSpec::RandomBipartite {
            n_side,
            avg_deg: a.avg_deg,
        }
    } else {
        GeneratorSpec::RandomGeneralWeighted {
            n: a.general.expect("group is required"),
            avg_deg: a.avg_deg,
            w_max: a.wmax,
        }
    };
    let g = generate(&spec, a.seed)?;
    let mut buf = Vec::new();
    write_graph(&g, &mut buf)?;
    write_out(a.output.as_deref(), std::str::from_utf8(&buf).expect("ascii"))?;
    if let Some(mu) = spec.planted_matching() {
        eprintln!("planted maximum matching: {mu}");
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::Config(format!("seed range must look like a..b, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b): (u64, u64) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn run_one(a: &RunArgs, eta: u64, seed: u64) -> Result<RunOutcome> {
    let order = match a.order {
        Order::AsGiven => OrderMode::AsGiven,
        Order::Shuffled => OrderMode::Shuffled { seed },
        Order::Adversarial => OrderMode::AdversarialFixed { seed },
    };
    let mut s = EdgeStream::<u64>::open(&a.input)?.with_order(order);
    match a.alg {
        Alg::Mbm => {
            let cfg = MbmConfig {
                rounds_override: a.rounds,
                eta,
                ..MbmConfig::new(a.eps, seed)
            };
            run_mbm(&mut s, &cfg)
        }
        Alg::Mwm => {
            let cfg = MwmConfig {
                rounds_override: a.rounds,
                eta,
                preprocess: !a.no_preprocess,
                ..MwmConfig::new(a.eps, seed)
            };
            run_mwm(&mut s, &cfg)
        }
    }
}

fn cmd_run(a: RunArgs) -> Result<ExitCode> {
    if !(a.eta >= 1.0 && a.eta.fract() == 0.0 && a.eta <= u64::MAX as f64) {
        return Err(Error::Config(format!("eta must be an integer >= 1, got {}", a.eta)));
    }
    let eta = a.eta as u64;
    let json = match &a.seeds {
        Some(range) => {
            if a.matching_out.is_some() || a.cover_out.is_some() {
                return Err(Error::Config(
                    "--matching-out and --cover-out need a single --seed".into(),
                ));
            }
            let seeds = parse_seeds(range)?;
            let runs: Vec<_> = seeds
                .par_iter()
                .map(|&seed| run_one(&a, eta, seed))
                .collect::<Result<_>>()?;
            let metrics: Vec<_> = runs.into_iter().map(|o| o.metrics).collect();
            serde_json::to_string_pretty(&metrics).expect("metrics serialize")
        }
        None => {
            let out = run_one(&a, eta, a.seed)?;
            if let Some(p) = &a.matching_out {
                fs::write(p, format_matching(&out.matching))?;
            }
            if let Some(p) = &a.cover_out {
                let n = out.metrics.n;
                let text = match (&out.best_cover, a.alg) {
                    (Some(c), _) => format_cover(c, n),
                    (None, Alg::Mbm) => format!("vertex-cover {n}\n"),
                    (None, Alg::Mwm) => format!("odd-set-cover {n} 2\n"),
                };
                fs::write(p, text)?;
            }
            serde_json::to_string_pretty(&out.metrics).expect("metrics serialize")
        }
    };
    write_out(a.output.as_deref(), &(json + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn format_matching(m: &Matching<u64>) -> String {
    m.edges().iter().map(|e| format!("{} {}\n", e.u, e.v)).collect()
}

/// Vertex covers are written as `vertex-cover {n}` followed by one vertex per
/// line; odd-set covers as `odd-set-cover {n} <scale>` followed by `y v val`
/// and `z val v1 v2 ...` lines.
fn format_cover<W: semistream_matching::Weight>(c: &RoundCover<W>, n: usize) -> String {
    let mut s = String::new();
    match c {
        RoundCover::Vertex(vc) => {
            s.push_str(&format!("vertex-cover {n}\n"));
            for v in vc.members() {
                s.push_str(&format!("{v}\n"));
            }
        }
        RoundCover::OddSet(oc) => {
            s.push_str(&format!("odd-set-cover {n} {}\n", oc.scale()));
            for (v, y) in oc.y().iter().enumerate() {
                if !y.is_zero() {
                    s.push_str(&format!("y {v} {y}\n"));
                }
            }
            for (set, z) in oc.laminar().sets().iter().zip(oc.z()) {
                let members: Vec<String> = set.iter().map(|v| v.to_string()).collect();
                s.push_str(&format!("z {z} {}\n", members.join(" ")));
            }
        }
    }
    s
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty() && !t[0].starts_with('#'))
}

fn num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad number {tok:?}"),
    })
}

/// Pairs `u v` resolved to the heaviest graph edge between them.
fn read_matching(g: &Graph<u64>, path: &Path) -> Result<Matching<u64>> {
    let mut heaviest: HashMap<(usize, usize), u64> = HashMap::new();
    for e in g.edges() {
        let w = heaviest.entry(e.key()).or_insert(0);
        *w = (*w).max(e.weight);
    }
    let text = fs::read_to_string(path)?;
    let mut edges = Vec::new();
    for (line, t) in content_lines(&text) {
        if t.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: "expected `u v`".into(),
            });
        }
        let (u, v): (usize, usize) = (num(t[0], line)?, num(t[1], line)?);
        let key = (u.min(v), u.max(v));
        let w = *heaviest
            .get(&key)
            .ok_or_else(|| Error::Certificate(format!("matched pair ({u}, {v}) on line {line} is not a graph edge")))?;
        edges.push(Edge::new(u, v, w));
    }
    Ok(Matching::new(edges))
}

fn read_cover(path: &Path) -> Result<RoundCover<u64>> {
    let text = fs::read_to_string(path)?;
    let mut lines = content_lines(&text);
    let (line, head) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty cover file".into(),
    })?;
    match head.as_slice() {
        ["vertex-cover", n] => {
            let n: usize = num(n, line)?;
            let mut members = Vec::new();
            for (line, t) in lines {
                let v: usize = num(t[0], line)?;
                if t.len() != 1 || v >= n {
                    return Err(Error::Parse {
                        line,
                        msg: "expected one vertex id below n".into(),
                    });
                }
                members.push(v);
            }
            Ok(RoundCover::Vertex(VertexCover::new(members)))
        }
        ["odd-set-cover", n, scale] => {
            let (n, scale): (usize, u32) = (num(n, line)?, num(scale, line)?);
            let mut y = vec![0u64; n];
            let (mut sets, mut z) = (Vec::new(), Vec::new());
            for (line, t) in lines {
                match t[0] {
                    "y" if t.len() == 3 => {
                        let v: usize = num(t[1], line)?;
                        if v >= n {
                            return Err(Error::Parse {
                                line,
                                msg: format!("vertex {v} out of range"),
                            });
                        }
                        y[v] = num(t[2], line)?;
                    }
                    "z" if t.len() >= 3 => {
                        z.push(num(t[1], line)?);
                        sets.push(t[2..].iter().map(|x| num(x, line)).collect::<Result<Vec<usize>>>()?);
                    }
                    _ => {
                        return Err(Error::Parse {
                            line,
                            msg: "expected `y v val` or `z val v1 v2 ...`".into(),
                        })
                    }
                }
            }
            let laminar = LaminarFamily::new(n, sets)?;
            Ok(RoundCover::OddSet(OddSetCover::new(y, laminar, z, scale)?))
        }
        _ => Err(Error::Parse {
            line,
            msg: "expected `vertex-cover <n>` or `odd-set-cover <n> <scale>`".into(),
        }),
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let g: Graph<u64> = load_graph(&a.input)?;
    let m = read_matching(&g, &a.matching)?;
    if !validate_matching(&g, &m) {
        println!("matching: INVALID (shares a vertex or uses a missing edge)");
        return Ok(ExitCode::from(3));
    }
    println!("matching: valid, {} edges, weight {}", m.len(), m.weight());
    let Some(cover_path) = a.cover else {
        return Ok(ExitCode::SUCCESS);
    };
    let cover = read_cover(&cover_path)?;
    let (uncovered, value, primal) = match &cover {
        RoundCover::Vertex(vc) => {
            if vc.members().iter().any(|&v| v >= g.n()) {
                return Err(Error::Config("cover names a vertex outside the graph".into()));
            }
            let missed = g
                .edges()
                .iter()
                .filter(|e| !vc.contains(e.u) && !vc.contains(e.v))
                .count();
            debug_assert_eq!(missed == 0, is_vertex_cover(&g, vc));
            (missed, vc.len() as u128, m.len() as u128)
        }
        RoundCover::OddSet(oc) => {
            if oc.n() != g.n() {
                return Err(Error::Config(format!(
                    "cover is over {} vertices, graph has {}",
                    oc.n(),
                    g.n()
                )));
            }
            (oc.violations(&g), oc.value(), oc.scale() as u128 * m.weight())
        }
    };
    if uncovered > 0 {
        println!("cover: INFEASIBLE, {uncovered} of {} edges uncovered", g.m());
        return Ok(ExitCode::from(3));
    }
    let gap = value.saturating_sub(primal);
    println!("cover: feasible, value {value}, primal {primal}, gap {gap}");
    if gap == 0 {
        println!("certified optimal");
    }
    Ok(ExitCode::SUCCESS)
}
