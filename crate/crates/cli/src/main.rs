use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use iss_core::graph::degeneracy_ordering;
use iss_core::instances::{
    adaptive_adversary, compose_chordal, compose_degenerate, from_rainbow, gen_gpq, gen_hpq, gen_random,
    parse_instance, random_graph, random_rainbow, serialize_instance, GraphModel, HpqVariant, MatroidModel,
    RainbowInstance, RandomSpec,
};
use iss_core::kernels::{kernel_bounded_degree, kernel_degeneracy};
use iss_core::solvers::{solve, solve_branching, solve_brute, Algo, Answer, DpConfig, SolveResult, BRUTE_LIMIT};
use iss_core::{verify_solution, Instance};

#[derive(Parser)]
#[command(name = "iss", version, about = "Stable sets that are independent in a matroid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance and print a certificate.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgoArg::Auto)]
        algo: AlgoArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        repeats: u32,
        #[arg(long)]
        stats: bool,
    },
    /// Shrink an instance with a kernelization.
    Kernelize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: KernelMode,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: bool,
    },
    /// Write a generated instance.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value_t = 3)]
        q: usize,
        /// Hidden indices j_1..j_p in 1..=q; random when omitted.
        #[arg(long)]
        hidden: Option<String>,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Number of composed instances.
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, value_enum, default_value_t = GraphArg::Gnp)]
        graph: GraphArg,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        #[arg(long, default_value_t = 2)]
        degeneracy: usize,
        #[arg(long, value_enum, default_value_t = MatroidArg::Partition)]
        matroid: MatroidArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate; exit 0 iff it is a solution.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// 1-based vertices, space separated.
        #[arg(long, allow_hyphen_values = true)]
        certificate: String,
    },
    /// Run a measurement suite and write CSV.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Block count for adversary-queries.
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Comma-separated block sizes for adversary-queries.
        #[arg(long, default_value = "3,4,5")]
        q: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Auto,
    Brute,
    Branch,
    ChordalDp,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelMode {
    Degree,
    Degeneracy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Gpq,
    HpqBipartite,
    HpqChordal,
    ComposeDegenerate,
    ComposeChordal,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphArg {
    Gnp,
    Degenerate,
    Interval,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatroidArg {
    Uniform,
    Partition,
    Linear,
    Transversal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    BranchScaling,
    DpScaling,
    AdversaryQueries,
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn cmd_solve(input: &Path, algo: AlgoArg, seed: u64, repeats: u32, stats: bool) -> Result<()> {
    let inst = read_instance(input)?;
    let algo = match algo {
        AlgoArg::Auto => Algo::Auto,
        AlgoArg::Brute => Algo::Brute,
        AlgoArg::Branch => Algo::Branch,
        AlgoArg::ChordalDp => Algo::ChordalDp,
    };
    let r = solve(&inst, algo, DpConfig { seed, repeats })?;
    let mut out = String::new();
    match &r.answer {
        Answer::Yes(cert) => {
            out.push_str("YES\n");
            out.push_str(&cert.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" "));
            out.push('\n');
        }
        Answer::No => out.push_str("NO\n"),
    }
    if stats {
        let s = &r.stats;
        out.push_str(&format!(
            "# queries={}\n# nodes={}\n# max_table={}\n# dropped={}\n# runs={}\n# millis={}\n",
            s.queries, s.nodes, s.max_table, s.dropped, s.runs, s.millis
        ));
    }
    write_out(None, &out)
}

fn cmd_kernelize(input: &Path, mode: KernelMode, out: Option<&Path>, report: bool) -> Result<()> {
    let inst = read_instance(input)?;
    let (kernel, rep) = match mode {
        KernelMode::Degree => kernel_bounded_degree(&inst),
        KernelMode::Degeneracy => kernel_degeneracy(&inst, None)?,
    };
    write_out(out, &serialize_instance(&kernel)?)?;
    if report {
        let mut lines = format!(
            "input={}\noutput={}\nbound={}\nrules={}\n",
            rep.input_size,
            rep.output_size,
            rep.bound_claimed,
            rep.rule_applications.len()
        );
        if let (Some(d), Some(b)) = (rep.degree_after_rules, rep.degree_bound) {
            lines.push_str(&format!("degree_after_rules={d}\ndegree_bound={b}\n"));
        }
        if let Some(t) = rep.trivial {
            lines.push_str(&format!("trivial={t:?}\n"));
        }
        // keep stdout parseable when the kernel itself went there
        if out.is_some() {
            print!("{lines}");
        } else {
            eprint!("{lines}");
        }
    }
    Ok(())
}

fn matroid_model(m: MatroidArg) -> MatroidModel {
    match m {
        MatroidArg::Uniform => MatroidModel::Uniform,
        MatroidArg::Partition => MatroidModel::Partition,
        MatroidArg::Linear => MatroidModel::Linear,
        MatroidArg::Transversal => MatroidModel::Transversal,
    }
}

fn graph_model(g: GraphArg, edge_prob: f64, degeneracy: usize) -> GraphModel {
    match g {
        GraphArg::Gnp => GraphModel::Gnp(edge_prob),
        GraphArg::Degenerate => GraphModel::Degenerate(degeneracy),
        GraphArg::Interval => GraphModel::Interval,
    }
}

fn hidden_indices(hidden: Option<&str>, p: usize, q: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let js: Vec<usize> = match hidden {
        Some(s) => s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().with_context(|| format!("bad hidden index `{t}`")))
            .collect::<Result<_>>()?,
        None => (0..p).map(|_| rng.gen_range(1..=q)).collect(),
    };
    if js.len() != p || js.iter().any(|&j| j == 0 || j > q) {
        bail!("need {p} hidden indices in 1..={q}");
    }
    Ok(js)
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    family: Family,
    p: usize,
    q: usize,
    hidden: Option<&str>,
    n: usize,
    k: usize,
    t: usize,
    graph: GraphModel,
    matroid: MatroidModel,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if matches!(family, Family::Gpq | Family::HpqBipartite | Family::HpqChordal) && (p == 0 || q == 0) {
        bail!("p and q must be positive");
    }
    let inst = match family {
        Family::Gpq => {
            let js = hidden_indices(hidden, p, q, &mut rng)?;
            let (f, k) = gen_gpq(p, q, &js);
            Instance::new(f, k)
        }
        Family::HpqBipartite | Family::HpqChordal => {
            let js = hidden_indices(hidden, p, q, &mut rng)?;
            let variant = if matches!(family, Family::HpqChordal) { HpqVariant::Chordal } else { HpqVariant::Bipartite };
            let (f, k) = gen_hpq(p, q, variant, &js);
            Instance::new(f, k)
        }
        Family::ComposeDegenerate | Family::ComposeChordal => {
            if t == 0 || k == 0 {
                bail!("composition needs t >= 1 and k >= 1");
            }
            let chordal = matches!(family, Family::ComposeChordal);
            let model = if chordal { GraphModel::Interval } else { graph };
            let parts: Vec<RainbowInstance> =
                (0..t).map(|_| random_rainbow(random_graph(n, model, &mut rng), k, &mut rng)).collect();
            let composed = if chordal { compose_chordal(&parts)? } else { compose_degenerate(&parts)? };
            from_rainbow(&composed)?
        }
        Family::Random => gen_random(RandomSpec { n, graph, matroid, k, seed }),
    };
    write_out(out, &serialize_instance(&inst)?)
}

fn parse_certificate(text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => bail!("bad certificate vertex `{t}`"),
        })
        .collect()
}

fn cmd_verify(input: &Path, certificate: &str) -> Result<bool> {
    let inst = read_instance(input)?;
    let cert = parse_certificate(certificate)?;
    // a vertex outside the graph is a failed certificate, not a usage error
    Ok(verify_solution(&inst.framework, &cert, inst.k).unwrap_or_default())
}

struct Row {
    instance: String,
    inst: Instance,
    algo: &'static str,
    result: SolveResult,
}

fn bench_rows(suite: Suite, seed: u64, p: usize, qs: &[usize]) -> Result<(Vec<Row>, Option<f64>)> {
    let mut rows = Vec::new();
    let mut max_ratio: Option<f64> = None;
    let kinds = [MatroidModel::Uniform, MatroidModel::Partition, MatroidModel::Linear, MatroidModel::Transversal];
    match suite {
        Suite::BranchScaling => {
            let mut idx = 0u64;
            for d in 1..=3 {
                for k in 1..=4 {
                    for n in [20, 40, 80] {
                        let matroid = kinds[idx as usize % kinds.len()];
                        let inst = gen_random(RandomSpec { n, graph: GraphModel::Degenerate(d), matroid, k, seed: seed.wrapping_add(idx) });
                        idx += 1;
                        let r = solve_branching(&inst);
                        let dd = degeneracy_ordering(inst.graph()).degeneracy;
                        let ratio = r.stats.queries as f64 / ((dd as f64 + 1.0).powi(k as i32) * n as f64);
                        max_ratio = Some(max_ratio.map_or(ratio, |m: f64| m.max(ratio)));
                        rows.push(Row { instance: format!("degenerate-d{d}-k{k}-n{n}"), inst, algo: "branch", result: r });
                    }
                }
            }
        }
        Suite::DpScaling => {
            let mut idx = 0u64;
            for k in 2..=4 {
                for n in [10, 20, 40, 80] {
                    let inst = gen_random(RandomSpec { n, graph: GraphModel::Interval, matroid: MatroidModel::Linear, k, seed: seed.wrapping_add(idx) });
                    idx += 1;
                    let r = solve(&inst, Algo::ChordalDp, DpConfig { seed, repeats: 3 })?;
                    rows.push(Row { instance: format!("interval-k{k}-n{n}"), inst, algo: "chordal-dp", result: r });
                }
            }
        }
        Suite::AdversaryQueries => {
            for &q in qs {
                let (inst, _) = adaptive_adversary(p, q);
                let r = solve_brute(&inst, BRUTE_LIMIT.max(inst.graph().order()))?;
                rows.push(Row { instance: format!("adversary-p{p}-q{q}"), inst, algo: "brute", result: r });
                let (inst, _) = adaptive_adversary(p, q);
                let r = solve_branching(&inst);
                rows.push(Row { instance: format!("adversary-p{p}-q{q}"), inst, algo: "branch", result: r });
            }
        }
    }
    Ok((rows, max_ratio))
}

fn cmd_bench(suite: Suite, csv_path: Option<&Path>, seed: u64, p: usize, q: &str) -> Result<()> {
    let qs: Vec<usize> = q.split(',').map(|t| t.trim().parse().with_context(|| format!("bad q `{t}`"))).collect::<Result<_>>()?;
    if p == 0 || qs.contains(&0) {
        bail!("p and q must be positive");
    }
    let (rows, max_ratio) = bench_rows(suite, seed, p, &qs)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["instance", "n", "m", "k", "d", "algo", "answer", "queries", "nodes", "millis"])?;
    for row in &rows {
        let g = row.inst.graph();
        w.write_record([
            row.instance.clone(),
            g.order().to_string(),
            g.edge_count().to_string(),
            row.inst.k.to_string(),
            degeneracy_ordering(g).degeneracy.to_string(),
            row.algo.to_string(),
            if row.result.answer.is_yes() { "YES" } else { "NO" }.to_string(),
            row.result.stats.queries.to_string(),
            row.result.stats.nodes.to_string(),
            row.result.stats.millis.to_string(),
        ])?;
    }
    let mut text = String::from_utf8(w.into_inner().context("flushing csv")?)?;
    if let Some(r) = max_ratio {
        text.push_str(&format!("# max_ratio={r:.6}\n"));
    }
    write_out(csv_path, &text)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { input, algo, seed, repeats, stats } => cmd_solve(&input, algo, seed, repeats, stats)?,
        Command::Kernelize { input, mode, out, report } => cmd_kernelize(&input, mode, out.as_deref(), report)?,
        Command::Generate { family, p, q, hidden, n, k, t, graph, edge_prob, degeneracy, matroid, seed, out } => cmd_generate(
            family,
            p,
            q,
            hidden.as_deref(),
            n,
            k,
            t,
            graph_model(graph, edge_prob, degeneracy),
            matroid_model(matroid),
            seed,
            out.as_deref(),
        )?,
        Command::Verify { input, certificate } => {
            if !cmd_verify(&input, &certificate)? {
                eprintln!("certificate rejected");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Bench { suite, csv, seed, p, q } => cmd_bench(suite, csv.as_deref(), seed, p, &q)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
