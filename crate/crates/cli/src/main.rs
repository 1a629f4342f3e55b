use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use growtree::bench::{run_ladder, BenchRow};
use growtree::graph::{build_path, build_star, parse_edge_list, validate_tree, Graph, Tree};
use growtree::growth::{format_pipeline, grow, parse_pipeline, Family};
use growtree::random_models::{expectation_report, RandomKind};
use growtree::report::{analyze, AnalyzeOptions};
use growtree::verify::{self, Suite, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "growtree",
    version,
    about = "Recursive growth trees: build, measure, and check closed forms"
)]
struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Grow a seed tree and write the result.
    Generate(GenerateArgs),
    /// Report Wiener index, hitting times and related metrics for a graph.
    Analyze(AnalyzeArgs),
    /// Compare closed forms with brute-force oracles.
    Verify(VerifyArgs),
    /// Time closed-form, explicit and spectral mean hitting times.
    Bench(BenchArgs),
    /// Expected Wiener index of random growth trees.
    Random(RandomArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
    Edgelist,
}

#[derive(Args)]
struct Input {
    /// `edge`, `path:N`, `star:N`, or `@FILE` (`@-` for stdin).
    #[arg(long, conflicts_with = "seed_file")]
    seed: Option<String>,
    /// Edge-list file with one `u v` pair per line.
    #[arg(long)]
    seed_file: Option<PathBuf>,
    /// Comma-separated operations such as `tfractal:1,type2:3`.
    #[arg(long, default_value = "")]
    ops: String,
    /// Number of times the pipeline is applied.
    #[arg(long, default_value_t = 0)]
    gens: u32,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "edgelist")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: Input,
    /// Add the Laplacian-spectrum mean hitting time.
    #[arg(long)]
    spectral: bool,
    /// Add a random-walk estimate: TRIALS [SEED].
    #[arg(long, num_args = 1..=2, value_names = ["TRIALS", "SEED"])]
    simulate: Option<Vec<u64>>,
    /// Add the line-graph Wiener index.
    #[arg(long)]
    line_graph: bool,
    #[arg(long, default_value_t = 0)]
    rng: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Random seed trees per sweep.
    #[arg(long, default_value_t = 100)]
    trees: usize,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    #[arg(long)]
    max_m: Option<u32>,
    #[arg(long)]
    max_t: Option<u32>,
    #[arg(long, default_value_t = 0)]
    rng: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "edge")]
    seed: String,
    #[arg(long, default_value = "subdiv")]
    family: String,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 20)]
    max_t: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RandomArgs {
    /// `ba` or `uniform`.
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 0)]
    t: u32,
    /// Monte Carlo trials; fewer than 2 skips sampling.
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    rng: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Input errors map to exit code 2, failed verification to 1.
enum Failure {
    Usage(anyhow::Error),
    Verification,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.cmd {
        Cmd::Generate(a) => cmd_generate(a),
        Cmd::Analyze(a) => cmd_analyze(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Random(a) => cmd_random(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_source(spec: &str) -> Result<String> {
    if spec == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(spec).with_context(|| format!("reading {spec}"))
}

fn builtin(spec: &str) -> Result<Tree> {
    let sized = |prefix: &str| -> Result<Option<usize>> {
        match spec.strip_prefix(prefix) {
            Some(n) => Ok(Some(
                n.parse()
                    .with_context(|| format!("bad size in seed `{spec}`"))?,
            )),
            None => Ok(None),
        }
    };
    if spec == "edge" {
        return Ok(build_path(2)?);
    }
    if let Some(n) = sized("path:")? {
        return Ok(build_path(n)?);
    }
    if let Some(n) = sized("star:")? {
        return Ok(build_star(n)?);
    }
    bail!("unknown seed `{spec}` (expected edge, path:N, star:N or @FILE)")
}

fn load_graph(input: &Input) -> Result<Graph> {
    let text = match (&input.seed, &input.seed_file) {
        (_, Some(path)) => read_source(&path.to_string_lossy())?,
        (Some(s), None) => match s.strip_prefix('@') {
            Some(path) => read_source(path)?,
            None => return Ok(builtin(s)?.into_graph()),
        },
        (None, None) => bail!("one of --seed or --seed-file is required"),
    };
    Ok(parse_edge_list(&text)?)
}

/// The input graph, grown by the pipeline when one is given.
fn load_grown(input: &Input) -> Result<Graph> {
    let g = load_graph(input)?;
    let ops = parse_pipeline(&input.ops)?;
    if ops.is_empty() || input.gens == 0 {
        return Ok(g);
    }
    let seed = validate_tree(&g).context("growth operations need a tree seed")?;
    Ok(grow(&seed, &ops, input.gens)?.into_graph())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing stdout"),
    }
}

fn json(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_generate(a: GenerateArgs) -> Result<(), Failure> {
    let g = load_grown(&a.input)?;
    let ops = parse_pipeline(&a.input.ops).map_err(anyhow::Error::from)?;
    let text = match a.format {
        Format::Edgelist => g.to_edge_list(),
        Format::Dot => g.to_dot(),
        Format::Json => json(&serde_json::json!({
            "ops": format_pipeline(&ops),
            "gens": a.input.gens,
            "n": g.n(),
            "edges": g.edge_count(),
            "edge_list": g.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>(),
        }))?,
        Format::Text => format!(
            "n = {}, |E| = {}\n{}",
            g.n(),
            g.edge_count(),
            g.to_edge_list()
        ),
    };
    emit(&a.out, &text)?;
    eprintln!("n = {}, edges = {}", g.n(), g.edge_count());
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let g = load_grown(&a.input)?;
    let label = match (&a.input.seed, &a.input.seed_file) {
        (_, Some(p)) => p.display().to_string(),
        (Some(s), None) => s.clone(),
        (None, None) => String::new(),
    };
    let label = if a.input.ops.is_empty() {
        label
    } else {
        format!("{label} | {} x{}", a.input.ops, a.input.gens)
    };
    let simulate = match a.simulate.as_deref() {
        None => None,
        Some([trials]) => Some((*trials, a.rng)),
        Some([trials, seed]) => Some((*trials, *seed)),
        Some(_) => unreachable!("clap limits --simulate to 1..=2 values"),
    };
    let opts = AnalyzeOptions {
        label,
        spectral: a.spectral,
        simulate,
        line_graph: a.line_graph,
    };
    let report = analyze(&g, &opts).map_err(anyhow::Error::from)?;
    let text = match a.format {
        Format::Text => report.to_text(),
        Format::Json => json(&report)?,
        _ => return Err(anyhow::anyhow!("analyze supports --format json or text").into()),
    };
    emit(&a.out, &text)?;
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = a.suite.parse().map_err(anyhow::Error::from)?;
    let cfg = VerifyConfig {
        trees: a.trees,
        max_n: a.max_n,
        max_m: a.max_m,
        max_t: a.max_t,
        rng_seed: a.rng,
        ..Default::default()
    };
    let report = verify::run(suite, &cfg).map_err(anyhow::Error::from)?;
    let text = match a.format {
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let status = if c.passed { "ok  " } else { "FAIL" };
                let _ = writeln!(
                    s,
                    "{status} [{}] {} ({} cases, {} skipped)",
                    c.suite, c.name, c.cases, c.skipped
                );
                if let Some(x) = &c.counterexample {
                    let _ = writeln!(
                        s,
                        "     reproduce: {} {:?} m={:?} t={:?}: {}",
                        x.seed_tree, x.family, x.m, x.t, x.detail
                    );
                }
            }
            if let Some(rows) = &report.constant_terms {
                s += "constant terms:\n";
                for r in rows {
                    let _ = writeln!(s, "  {:<8} m={:<3} c_1 = {}", r.family.name(), r.m, r.c_1);
                }
            }
            let _ = writeln!(
                s,
                "{}",
                if report.passed {
                    "all checks passed"
                } else {
                    "verification FAILED"
                }
            );
            s
        }
        Format::Json => json(&report)?,
        _ => return Err(anyhow::anyhow!("verify supports --format json or text").into()),
    };
    emit(&a.out, &text)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let seed = match a.seed.strip_prefix('@') {
        Some(path) => {
            validate_tree(&parse_edge_list(&read_source(path)?).map_err(anyhow::Error::from)?)
                .map_err(anyhow::Error::from)?
        }
        None => builtin(&a.seed)?,
    };
    let family: Family = a.family.parse().map_err(anyhow::Error::from)?;
    let rows: Vec<BenchRow> =
        run_ladder(&seed, family, a.m, a.max_t).map_err(anyhow::Error::from)?;
    let text = match a.format {
        Format::Text => {
            let mut s = format!("{:<22} {:>3} {:>24} {:>12}\n", "method", "t", "n", "millis");
            for r in &rows {
                let ms = r
                    .millis
                    .map_or_else(|| "skipped".to_string(), |m| format!("{m:.3}"));
                let method = format!("{:?}", r.method);
                let _ = writeln!(
                    s,
                    "{method:<22} {:>3} {:>24} {ms:>12}",
                    r.t,
                    r.n.to_string()
                );
            }
            s
        }
        Format::Json => json(&rows)?,
        _ => return Err(anyhow::anyhow!("bench supports --format json or text").into()),
    };
    emit(&a.out, &text)?;
    Ok(())
}

fn cmd_random(a: RandomArgs) -> Result<(), Failure> {
    let kind: RandomKind = a.kind.parse().map_err(anyhow::Error::from)?;
    let report = expectation_report(kind, a.t, a.trials, a.rng).map_err(anyhow::Error::from)?;
    let text = match a.format {
        Format::Text => {
            let mut s = format!("{kind} tree, t = {}, n = {}\n", a.t, report.n);
            let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
            let _ = writeln!(
                s,
                "  enumeration E[W]   {}",
                opt(report.enumeration.as_ref().map(|r| r.to_string()))
            );
            if let Some(mc) = &report.monte_carlo {
                let _ = writeln!(
                    s,
                    "  monte carlo E[W]   {:.6} +- {:.6} ({} trials)",
                    mc.mean, mc.std_error, mc.samples
                );
            }
            let _ = writeln!(
                s,
                "  published recurrence  {}",
                opt(report.recurrence.as_ref().map(|r| r.to_string()))
            );
            let _ = writeln!(
                s,
                "  published mean path   {}",
                opt(report.closed_form.map(|v| format!("{v:.6}")))
            );
            let _ = writeln!(s, "  attachment: {}", report.attachment);
            s
        }
        Format::Json => json(&report)?,
        _ => return Err(anyhow::anyhow!("random supports --format json or text").into()),
    };
    emit(&a.out, &text)?;
    Ok(())
}
