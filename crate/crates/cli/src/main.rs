//! `signed-consensus`: analysis, null vectors, classification, simulation
//! and random instances for signed digraphs.
//!
//! Exit codes: 0 success, 1 usage, 2 parse, 3 verification failure,
//! 4 numerical failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use signed_consensus::balance::BalanceReport;
use signed_consensus::behavior::predict;
use signed_consensus::graph::laplacian_matrix;
use signed_consensus::scalar::{max_abs, Scalar};
use signed_consensus::spectral::{
    certify_with, coefficients_for_leader_signs, combine_modes, leader_modes_with,
};
use signed_consensus::{
    analyze_connectivity, classify, classify_root_condition, graph_hash, parse_graph, random_graph,
    random_state, simulate, to_edge_list, to_json, verify_report, BehaviorError, GeneratorError,
    GraphError, RandomGraphOptions, Rational, SignedDigraph, SimError, SimOptions, SpectralError,
};

#[derive(Debug, Parser)]
#[command(
    name = "signed-consensus",
    version,
    about = "Behavior analysis of signed digraphs under ẋ = -Lx"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Connectivity decomposition and structural balance report.
    Analyze(Io),
    /// Zero-eigenvalue right and left vectors of the Laplacian.
    Eigvec(EigvecArgs),
    /// Behavior classification, with the terminal state when --x0 is given.
    Classify(ClassifyArgs),
    /// Integrate the protocol and verify the classified behavior.
    Simulate(SimulateArgs),
    /// Generate a seeded random signed digraph.
    Random(RandomArgs),
}

#[derive(Debug, Args)]
struct Io {
    /// Graph file: edge list (`src dst weight`, 1-based) or JSON.
    #[arg(long)]
    input: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EigvecArgs {
    #[command(flatten)]
    io: Io,
    /// Rational arithmetic; entries are printed as exact fractions.
    #[arg(long)]
    exact: bool,
    /// Signs for leader nodes when the graph has several leader groups,
    /// e.g. `1:-1,4:1,10:1`.
    #[arg(long, value_name = "NODE:SIGN,...")]
    leader_signs: Option<String>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long)]
    exact: bool,
    /// Initial state: comma-separated values, `zeros`, `random:<seed>` or `@file`.
    #[arg(long)]
    x0: Option<String>,
    /// Human-readable per-node table instead of JSON.
    #[arg(long)]
    table: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Trajectory CSV.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Behavior report and verification verdict as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Initial state: comma-separated values, `zeros`, `random:<seed>` or `@file`.
    #[arg(long)]
    x0: String,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 50.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-9)]
    conv_tol: f64,
    /// Tolerance of the verification checks.
    #[arg(long, default_value_t = 1e-6)]
    verify_tol: f64,
    /// Keep every k-th step in the CSV.
    #[arg(long, default_value_t = 10)]
    decimation: usize,
}

#[derive(Debug, Args)]
struct RandomArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long)]
    neg_fraction: Option<f64>,
    #[arg(long)]
    spanning_tree: bool,
    #[arg(long)]
    balanced: bool,
    #[arg(long)]
    seed: u64,
    /// Write JSON instead of an edge list.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(String),
    Verification(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Parse(m)
            | CliError::Verification(m)
            | CliError::Numerical(m) => m,
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Graph(g) => CliError::Usage(g.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Diverged { .. } | SimError::NotConverged { .. } => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<BehaviorError> for CliError {
    fn from(e: BehaviorError) -> Self {
        match e {
            BehaviorError::Spectral(s) => s.into(),
            BehaviorError::Sim(s) => s.into(),
            BehaviorError::LengthMismatch { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SIGNED_CONSENSUS_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze(io) => analyze(&io),
        Command::Eigvec(args) => eigvec(&args),
        Command::Classify(args) => classify_cmd(&args),
        Command::Simulate(args) => simulate_cmd(&args),
        Command::Random(args) => random_cmd(&args),
    }
}

fn read_graph(path: &Path) -> Result<SignedDigraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let g = parse_graph(&text)
        .map_err(|e: GraphError| CliError::Parse(format!("{}: {e}", path.display())))?;
    log::info!(
        "read {} nodes, {} edges from {}",
        g.node_count(),
        g.edge_count(),
        path.display()
    );
    Ok(g)
}

/// Writes through a temporary file in the target directory, so a failed
/// run never leaves a partial file behind.
fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        print!("{contents}");
        return Ok(());
    };
    let io_err =
        |e: std::io::Error| CliError::Usage(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn parse_x0(raw: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let values = if raw == "zeros" {
        vec![0.0; n]
    } else if let Some(seed) = raw.strip_prefix("random:") {
        let seed = seed
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid seed in --x0 {raw:?}")))?;
        random_state(n, seed)
    } else {
        let text = match raw.strip_prefix('@') {
            Some(path) => fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?,
            None => raw.to_string(),
        };
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::Usage(format!("invalid --x0 entry {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.len() != n {
        return Err(CliError::Usage(format!(
            "--x0 has {} entries, graph has {n} nodes",
            values.len()
        )));
    }
    Ok(values)
}

fn x0_seed(raw: &str) -> Option<u64> {
    raw.strip_prefix("random:").and_then(|s| s.parse().ok())
}

fn parse_leader_signs(raw: &str, n: usize) -> Result<Vec<(usize, i8)>, CliError> {
    raw.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|item| {
            let bad = || CliError::Usage(format!("invalid --leader-signs entry {item:?}"));
            let (node, sign) = item.trim().split_once(':').ok_or_else(bad)?;
            let node: usize = node.parse().map_err(|_| bad())?;
            let sign = match sign {
                "1" | "+1" | "+" => 1,
                "-1" | "-" => -1,
                _ => return Err(bad()),
            };
            if node == 0 || node > n {
                return Err(bad());
            }
            Ok((node - 1, sign))
        })
        .collect()
}

fn analyze(io: &Io) -> Result<(), CliError> {
    let g = read_graph(&io.input)?;
    let report = analyze_connectivity(&g);
    let condition = if report.is_quasi_strongly_connected {
        Some(classify_root_condition(&g, &report)?.as_str())
    } else {
        None
    };
    let doc = json!({
        "graph_hash": graph_hash(&g),
        "n": g.node_count(),
        "connectivity": report.to_json(),
        "balance": BalanceReport::new(&g).to_json(),
        "root_condition": condition,
    });
    write_output(io.output.as_deref(), &pretty(&doc))
}

fn eigvec(args: &EigvecArgs) -> Result<(), CliError> {
    let g = read_graph(&args.io.input)?;
    let doc = if args.exact {
        eigvec_json::<Rational>(&g, args.leader_signs.as_deref())?
    } else {
        eigvec_json::<f64>(&g, args.leader_signs.as_deref())?
    };
    write_output(args.io.output.as_deref(), &pretty(&doc))
}

fn eigvec_json<T: Scalar>(
    g: &SignedDigraph,
    leader_signs: Option<&str>,
) -> Result<Value, CliError> {
    let report = analyze_connectivity(g);
    if report.is_quasi_strongly_connected {
        if leader_signs.is_some() {
            log::warn!("--leader-signs ignored: the graph has a single root set");
        }
        let cert = certify_with::<T>(g, &report)?;
        let mut doc = cert.to_json();
        doc["quasi_strongly_connected"] = json!(true);
        return Ok(doc);
    }
    let modes = leader_modes_with::<T>(g, &report)?;
    if modes.is_empty() {
        return Err(SpectralError::NoZeroEigenvalue.into());
    }
    let signs = match leader_signs {
        Some(raw) => parse_leader_signs(raw, g.node_count())?,
        None => Vec::new(),
    };
    let xi = combine_modes(&modes, &coefficients_for_leader_signs(&modes, &signs));
    let residual = max_abs(&laplacian_matrix::<T>(g).mul_vec(&xi));
    Ok(json!({
        "quasi_strongly_connected": false,
        "xi": xi.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        "residuals": { "right": residual.to_json() },
        "modes": modes.iter().map(|m| m.to_json()).collect::<Vec<_>>(),
    }))
}

fn classify_cmd(args: &ClassifyArgs) -> Result<(), CliError> {
    let g = read_graph(&args.io.input)?;
    let x0 = args
        .x0
        .as_deref()
        .map(|s| parse_x0(s, g.node_count()))
        .transpose()?;
    let out = if args.exact {
        let x0: Option<Vec<Rational>> = x0.map(|v| v.iter().map(|&x| Rational::lift(x)).collect());
        render_report::<Rational>(&g, x0.as_deref(), args.table)?
    } else {
        render_report::<f64>(&g, x0.as_deref(), args.table)?
    };
    write_output(args.io.output.as_deref(), &out)
}

fn render_report<T: Scalar>(
    g: &SignedDigraph,
    x0: Option<&[T]>,
    table: bool,
) -> Result<String, CliError> {
    let report = match x0 {
        Some(x0) => predict::<T>(g, x0)?,
        None => classify::<T>(g)?,
    };
    Ok(if table {
        report.to_table(g.labels())
    } else {
        pretty(&report.to_json())
    })
}

fn simulate_cmd(args: &SimulateArgs) -> Result<(), CliError> {
    let g = read_graph(&args.input)?;
    let x0 = parse_x0(&args.x0, g.node_count())?;
    if args.verify_tol.is_nan() || args.verify_tol <= 0.0 {
        return Err(CliError::Usage("--verify-tol must be positive".into()));
    }
    let opts = SimOptions {
        dt: args.dt,
        t_end: args.t_end,
        conv_tol: args.conv_tol,
        decimation: args.decimation,
        ..SimOptions::default()
    };
    let report = predict::<f64>(&g, &x0)?;
    let traj = simulate(&g, &x0, &opts)?;
    log::info!(
        "integration stopped at t = {} (converged: {})",
        traj.final_time,
        traj.converged
    );
    let verdict = verify_report(&report, &traj.final_state, args.verify_tol);

    if let Some(path) = &args.output {
        write_output(Some(path), &traj.to_csv())?;
    }
    if let Some(path) = &args.report {
        let hash = graph_hash(&g);
        let mut meta = traj.to_json(&hash, args.dt, x0_seed(&args.x0));
        if let Some(obj) = meta.as_object_mut() {
            obj.remove("times");
            obj.remove("states");
        }
        let doc = json!({
            "behavior_report": report.to_json(),
            "verification": verdict.to_json(),
            "simulation": meta,
        });
        write_output(Some(path), &pretty(&doc))?;
    }
    let status = if verdict.passed { "PASS" } else { "FAIL" };
    println!("verdict: {} {status}", report.behavior);
    if verdict.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = verdict
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        Err(CliError::Verification(format!(
            "verification failed: {}",
            failed.join(", ")
        )))
    }
}

fn random_cmd(args: &RandomArgs) -> Result<(), CliError> {
    let opts = RandomGraphOptions {
        n: args.n,
        density: args.density,
        neg_fraction: args.neg_fraction,
        spanning_tree: args.spanning_tree,
        balanced: args.balanced,
        seed: args.seed,
    };
    let g = random_graph(&opts)?;
    let text = if args.json {
        let mut s = to_json(&g);
        s.push('\n');
        s
    } else {
        to_edge_list(&g)
    };
    write_output(args.output.as_deref(), &text)
}
