//! Command-line front end: construction, densification, certification,
//! sampling search, and bound reports, with seeded reproducible outputs.
//!
//! Exit codes: 0 all checks pass, 1 bad input or I/O, 2 a certifier found
//! a violation, 3 an exact search ran out of budget.

mod manifest;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use manifest::RunManifest;
use num_rational::Ratio;
use rayon::prelude::*;
use rt_core::bounds::{assemble_above_density, assemble_at_density, window_summary, BoundQuery};
use rt_core::certify::{
    check_codegree_bound, exact_mis, find_k4, find_triangle_in, local_max_cut, odd_girth,
    shearer_bound, MisOutcome,
};
use rt_core::construct::{
    be_theoretical_bounds, build_be_graph, verify_nice, BEParams, NiceGraph, Provenance,
};
use rt_core::densify::{densify, hybrid_edge_floor, DensifyParams};
use rt_core::drc::{
    check_chernoff_prune, check_dispersion_bound, drc_round, find_half_density_pair, DrcKind,
    DrcParams, PairOutcome,
};
use rt_core::geometry::cap_measure;
use rt_core::graph::{from_json, to_json, BitGraph, Bipartition};
use rt_core::rng::derive_seed;
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rt-workbench",
    version,
    about = "Build, densify, and exactly certify K4-free graphs near the n^2/8 threshold"
)]
struct Cli {
    /// Master seed; every stage draws from named substreams of it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for generated files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a sphere-threshold graph and write it with a summary.
    Construct(ConstructArgs),
    /// Splice a complete-bipartite layer into a nice graph.
    Densify(DensifyArgs),
    /// Run selected certifiers against a graph file.
    Certify(CertifyArgs),
    /// Exact maximum independent set.
    Mis(MisArgs),
    /// Locally optimal max-cut.
    Maxcut(GraphOnlyArgs),
    /// Odd girth and the independence floor it implies.
    Oddgirth(GraphOnlyArgs),
    /// Seeded dependent-random-choice rounds, streamed as JSON lines.
    Drc(DrcArgs),
    /// Exact binomial-tail checks of the dispersion and pruning bounds.
    Dispersion(DispersionArgs),
    /// Closed-form bound reports.
    Bounds(BoundsArgs),
    /// Parameter sweep over (n, h, epsilon, d), one CSV row per cell.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    epsilon: f64,
    /// Sample one point per index, shared by both families.
    #[arg(long)]
    paired: bool,
    /// Output stem; defaults to a name derived from the parameters.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct DensifyArgs {
    /// Graph JSON with a `left` side.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 16)]
    trials: usize,
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Search for a K4.
    #[arg(long)]
    k4: bool,
    /// Search both sides of the split for triangles.
    #[arg(long)]
    triangles: bool,
    /// Check that adjacent pairs have at most this many common neighbors.
    #[arg(long)]
    codegree: Option<usize>,
    /// Compute the exact maximum independent set.
    #[arg(long)]
    mis_exact: bool,
    /// Node budget for the exact search.
    #[arg(long, default_value_t = 10_000_000)]
    mis_budget: u64,
    /// Fail if the minimum degree is below this floor.
    #[arg(long)]
    min_degree: Option<usize>,
}

#[derive(Args)]
struct MisArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

#[derive(Args)]
struct GraphOnlyArgs {
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct DrcArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Sample size per round.
    #[arg(long, default_value_t = 64)]
    t: usize,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Target independence fraction of n.
    #[arg(long, default_value_t = 0.002)]
    gamma: f64,
    /// Degree-slack constant C.
    #[arg(long, default_value_t = 1.0)]
    cee: f64,
    /// Number of seeded rounds.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// Where (A, B) comes from: the stored split, or the peel + max-cut
    /// + degree-prune pipeline.
    #[arg(long, value_parser = ["halves", "auto"], default_value = "halves")]
    pair: String,
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct DispersionArgs {
    #[arg(long, default_value_t = 1.0)]
    cee: f64,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    n: u64,
    /// Also check the pruning bound exp(-t*eps/3) at this sample size.
    #[arg(long)]
    prune_t: Option<u64>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    alpha: Option<u64>,
    /// Emit one CSV row per evaluated formula instead of JSON.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    h: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    epsilon: Vec<f64>,
    /// Splice depths; 0 skips densification for that cell.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    d: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, default_value_t = 8)]
    trials: usize,
    #[arg(long, default_value = "sweep")]
    name: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_worker_pool();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// RT_WORKBENCH_THREADS caps the worker count; outputs never depend on it.
fn init_worker_pool() {
    if let Ok(value) = std::env::var("RT_WORKBENCH_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    fs::create_dir_all(&cli.out)
        .with_context(|| format!("creating output directory {}", cli.out.display()))?;
    match cli.command {
        Command::Construct(args) => cmd_construct(&cli.out, cli.seed, args),
        Command::Densify(args) => cmd_densify(&cli.out, cli.seed, args),
        Command::Certify(args) => cmd_certify(args),
        Command::Mis(args) => cmd_mis(args),
        Command::Maxcut(args) => cmd_maxcut(cli.seed, args),
        Command::Oddgirth(args) => cmd_oddgirth(args),
        Command::Drc(args) => cmd_drc(&cli.out, cli.seed, args),
        Command::Dispersion(args) => cmd_dispersion(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Sweep(args) => cmd_sweep(&cli.out, cli.seed, args),
    }
}

fn load_graph(path: &Path) -> Result<(BitGraph, Option<Bipartition>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))?;
    from_json(&text).map_err(|e| anyhow!("malformed graph JSON in {}: {e}", path.display()))
}

fn load_nice_graph(path: &Path) -> Result<NiceGraph> {
    let (graph, split) = load_graph(path)?;
    let split = split.ok_or_else(|| {
        anyhow!("{} carries no `left` side; a bipartition is required", path.display())
    })?;
    NiceGraph::new(graph, split, Provenance::Manual).map_err(|e| anyhow!("{e}"))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn float_label(x: f64) -> String {
    format!("{x}").replace('.', "p")
}

/// Base name with the `.graph.json` / `.json` suffix stripped.
fn input_stem(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".into());
    name.strip_suffix(".graph.json")
        .or_else(|| name.strip_suffix(".json"))
        .unwrap_or(&name)
        .to_string()
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

fn cmd_construct(out: &Path, seed: u64, args: ConstructArgs) -> Result<ExitCode> {
    let params = BEParams::new(args.n, args.h, args.epsilon, seed, args.paired)
        .map_err(|e| anyhow!("{e}"))?;
    let stem = args.name.unwrap_or_else(|| {
        format!(
            "be-n{}-h{}-e{}-s{}",
            args.n,
            args.h,
            float_label(args.epsilon),
            seed
        )
    });

    let built = build_be_graph(&params).map_err(|e| anyhow!("{e}"))?;
    let nice = &built.nice;
    let g = nice.graph();
    let violation = verify_nice(nice);

    let cross_density = g
        .density_between(nice.x_side(), nice.y_side())
        .map(|r| *r.numer() as f64 / *r.denom() as f64)
        .unwrap_or(f64::NAN);
    let predicted = cap_measure(params.h, std::f64::consts::SQRT_2 - params.mu)
        .map_err(|e| anyhow!("{e}"))?;

    let summary = json!({
        "params": params,
        "edges": g.edge_count(),
        "min_degree": g.min_degree(),
        "x_side_edges": g.edges_within(nice.x_side()),
        "y_side_edges": g.edges_within(nice.y_side()),
        "cross_density": cross_density,
        "cross_density_prediction": predicted,
        "nice": violation.is_none(),
        "violation": violation,
        "theoretical_bounds": be_theoretical_bounds(&params),
    });

    let graph_path = write_text(
        out,
        &format!("{stem}.graph.json"),
        &to_json(g, Some(nice.x_side())),
    )?;
    let mut summary_text = serde_json::to_string_pretty(&summary)?;
    summary_text.push('\n');
    let summary_path = write_text(out, &format!("{stem}.summary.json"), &summary_text)?;

    let mut man = RunManifest::new("construct", seed);
    man.param("n", args.n);
    man.param("h", args.h);
    man.param("epsilon", args.epsilon);
    man.param("paired", args.paired);
    man.record_output(&graph_path)?;
    man.record_output(&summary_path)?;
    man.write(out, &stem)?;

    println!("{}", serde_json::to_string(&summary)?);
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// densify
// ---------------------------------------------------------------------------

fn cmd_densify(out: &Path, seed: u64, args: DensifyArgs) -> Result<ExitCode> {
    let nice = load_nice_graph(&args.graph)?;
    let params = DensifyParams {
        d: args.d,
        trials: args.trials,
        seed: derive_seed(seed, "densify"),
    };
    let (spliced, record) = densify(&nice, &params).map_err(|e| anyhow!("{e}"))?;

    let stem = args
        .name
        .unwrap_or_else(|| format!("{}-densified-d{}-s{seed}", input_stem(&args.graph), args.d));

    let graph_path = write_text(
        out,
        &format!("{stem}.graph.json"),
        &to_json(spliced.graph(), Some(spliced.x_side())),
    )?;
    let mut record_text = serde_json::to_string_pretty(&record)?;
    record_text.push('\n');
    let record_path = write_text(out, &format!("{stem}.record.json"), &record_text)?;

    let mut man = RunManifest::new("densify", seed);
    man.param("d", args.d);
    man.param("trials", args.trials);
    man.record_input(&args.graph)?;
    man.record_output(&graph_path)?;
    man.record_output(&record_path)?;
    man.write(out, &stem)?;

    println!("{}", serde_json::to_string(&record)?);
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

fn cmd_certify(args: CertifyArgs) -> Result<ExitCode> {
    let (g, split) = load_graph(&args.graph)?;
    let mut results = Vec::new();
    let mut violated = false;
    let mut budget_exceeded = false;

    if args.k4 {
        let cert = find_k4(&g);
        violated |= !cert.is_no_witness();
        results.push(json!({"check": "k4", "certificate": cert}));
    }
    if args.triangles {
        let split = split
            .as_ref()
            .ok_or_else(|| anyhow!("--triangles needs a graph with a `left` side"))?;
        for (label, side) in [("x", split.left()), ("y", split.right())] {
            let cert = find_triangle_in(&g, side);
            violated |= !cert.is_no_witness();
            results.push(json!({"check": "triangles", "side": label, "certificate": cert}));
        }
    }
    if let Some(alpha) = args.codegree {
        let cert = check_codegree_bound(&g, alpha);
        violated |= !cert.is_no_witness();
        results.push(json!({"check": "codegree", "alpha": alpha, "certificate": cert}));
    }
    if let Some(floor) = args.min_degree {
        let min_degree = g.min_degree();
        let ok = min_degree >= floor;
        violated |= !ok;
        results.push(json!({
            "check": "min_degree", "floor": floor, "min_degree": min_degree, "ok": ok,
        }));
    }
    if args.mis_exact {
        let outcome = exact_mis(&g, args.mis_budget);
        if matches!(outcome, MisOutcome::BudgetExceeded { .. }) {
            budget_exceeded = true;
        }
        results.push(json!({"check": "mis", "outcome": outcome}));
    }

    println!("{}", serde_json::to_string(&results)?);
    Ok(if violated {
        ExitCode::from(2)
    } else if budget_exceeded {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

// ---------------------------------------------------------------------------
// mis / maxcut / oddgirth
// ---------------------------------------------------------------------------

fn cmd_mis(args: MisArgs) -> Result<ExitCode> {
    let (g, _) = load_graph(&args.graph)?;
    let outcome = exact_mis(&g, args.budget);
    println!("{}", serde_json::to_string(&outcome)?);
    Ok(match outcome {
        MisOutcome::Exact { .. } => ExitCode::SUCCESS,
        MisOutcome::BudgetExceeded { .. } => ExitCode::from(3),
    })
}

fn cmd_maxcut(seed: u64, args: GraphOnlyArgs) -> Result<ExitCode> {
    let (g, _) = load_graph(&args.graph)?;
    let result = local_max_cut(&g, derive_seed(seed, "maxcut"));
    println!("{}", serde_json::to_string(&result)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_oddgirth(args: GraphOnlyArgs) -> Result<ExitCode> {
    let (g, _) = load_graph(&args.graph)?;
    let girth = odd_girth(&g);
    let floor = match girth {
        Some(og) if og >= 5 => Some(shearer_bound(g.n(), og).map_err(|e| anyhow!("{e}"))?),
        _ => None,
    };
    println!(
        "{}",
        serde_json::to_string(&json!({
            "n": g.n(),
            "odd_girth": girth,
            "independence_floor": floor,
        }))?
    );
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// drc
// ---------------------------------------------------------------------------

fn cmd_drc(out: &Path, seed: u64, args: DrcArgs) -> Result<ExitCode> {
    let (g, split) = load_graph(&args.graph)?;
    let n = g.n();

    let (a, b) = match args.pair.as_str() {
        "halves" => {
            let split = split
                .ok_or_else(|| anyhow!("--pair halves needs a graph with a `left` side"))?;
            (split.left().clone(), split.right().clone())
        }
        _ => {
            let gamma = Ratio::approximate_float(args.gamma)
                .ok_or_else(|| anyhow!("gamma {} is not a usable fraction", args.gamma))?;
            match find_half_density_pair(&g, gamma, derive_seed(seed, "drc-pair"))
                .map_err(|e| anyhow!("{e}"))?
            {
                PairOutcome::Found { a, b } => (a, b),
                PairOutcome::Fail { a_size, b_size } => {
                    bail!(
                        "pair search failed: |A|={a_size}, |B|={b_size} below the n/16, n/10 floors"
                    );
                }
            }
        }
    };

    let stem = args
        .name
        .unwrap_or_else(|| format!("{}-drc-s{seed}", input_stem(&args.graph)));

    let mut lines = String::new();
    let mut successes = 0u64;
    let mut k4s = 0u64;
    for round in 0..args.seeds {
        let params = DrcParams::new(
            args.t,
            args.epsilon,
            args.gamma,
            args.cee,
            derive_seed(seed, &format!("drc-round-{round}")),
        )
        .map_err(|e| anyhow!("{e}"))?;
        let outcome = drc_round(&g, &a, &b, &params).map_err(|e| anyhow!("{e}"))?;
        match outcome.kind {
            DrcKind::Fail => {}
            DrcKind::K4 => {
                successes += 1;
                k4s += 1;
            }
            DrcKind::IndependentSet => successes += 1,
        }
        lines.push_str(&serde_json::to_string(&json!({
            "round": round,
            "kind": outcome.kind,
            "witness": outcome.witness,
            "u0_size": outcome.stats.u0_size,
            "pruned_pairs": outcome.stats.pruned_pairs,
            "u_size": outcome.stats.u_size,
        }))?);
        lines.push('\n');
    }

    // Reference values of the stated parameterization, which targets
    // astronomically large orders; desk runs use the CLI arguments.
    let nf = n as f64;
    let k_ref = 4.0 * 2000.0f64 * 2000.0 + 20.0 * 2000.0 + 16.0;
    let gamma_ref = nf.ln().ln() / (200.0 * k_ref * nf.ln());
    let reference = json!({
        "cee": 2000.0,
        "k_constant": k_ref,
        "gamma": gamma_ref,
        "epsilon": 10.0 * gamma_ref,
        "t": 200.0 * k_ref * nf.ln().powi(2) / nf.ln().ln(),
    });

    let summary = json!({
        "n": n,
        "a_size": a.len(),
        "b_size": b.len(),
        "rounds": args.seeds,
        "successes": successes,
        "k4_outcomes": k4s,
        "desk_parameters": {
            "t": args.t, "epsilon": args.epsilon, "gamma": args.gamma, "cee": args.cee,
        },
        "reference_parameters": reference,
    });

    let stream_path = write_text(out, &format!("{stem}.jsonl"), &lines)?;
    let mut summary_text = serde_json::to_string_pretty(&summary)?;
    summary_text.push('\n');
    let summary_path = write_text(out, &format!("{stem}.summary.json"), &summary_text)?;

    let mut man = RunManifest::new("drc", seed);
    man.param("t", args.t);
    man.param("epsilon", args.epsilon);
    man.param("gamma", args.gamma);
    man.param("cee", args.cee);
    man.param("seeds", args.seeds);
    man.param("pair", &args.pair);
    man.record_input(&args.graph)?;
    man.record_output(&stream_path)?;
    man.record_output(&summary_path)?;
    man.write(out, &stem)?;

    println!("{}", serde_json::to_string(&summary)?);
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// dispersion / bounds
// ---------------------------------------------------------------------------

fn cmd_dispersion(args: DispersionArgs) -> Result<ExitCode> {
    let report = check_dispersion_bound(args.cee, args.epsilon, args.n)
        .map_err(|e| anyhow!("{e}"))?;
    let prune = match args.prune_t {
        Some(t) => Some(check_chernoff_prune(t, args.epsilon).map_err(|e| anyhow!("{e}"))?),
        None => None,
    };
    println!(
        "{}",
        serde_json::to_string(&json!({"dispersion": report, "prune": prune}))?
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(args: BoundsArgs) -> Result<ExitCode> {
    let query = BoundQuery {
        n: args.n,
        m: args.m,
        alpha: args.alpha,
        ..Default::default()
    };
    let window = window_summary(&query);
    let at_density = (args.n >= 16 && args.n % 2 == 0)
        .then(|| assemble_at_density(args.n))
        .transpose()
        .map_err(|e| anyhow!("{e}"))?;
    let above_density = match args.m {
        Some(m) if args.n >= 16 && args.n % 2 == 0 => {
            Some(assemble_above_density(args.n, m).map_err(|e| anyhow!("{e}"))?)
        }
        _ => None,
    };

    if args.csv {
        let mut csv = String::from("report,item,formula,value\n");
        let sections = [
            ("window", Some(&window)),
            ("at_density", at_density.as_ref()),
            ("above_density", above_density.as_ref()),
        ];
        for (label, report) in sections {
            if let Some(report) = report {
                for item in &report.items {
                    csv.push_str(&format!(
                        "{label},{},\"{}\",{}\n",
                        item.name, item.formula, item.value
                    ));
                }
            }
        }
        print!("{csv}");
    } else {
        println!(
            "{}",
            serde_json::to_string(&json!({
                "window": window,
                "at_density": at_density,
                "above_density": above_density,
            }))?
        );
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepCell {
    index: usize,
    n: usize,
    h: usize,
    epsilon: f64,
    d: usize,
    seed: u64,
}

const SWEEP_MIS_LIMIT: usize = 40;

fn cmd_sweep(out: &Path, seed: u64, args: SweepArgs) -> Result<ExitCode> {
    if args.n.is_empty() || args.h.is_empty() || args.epsilon.is_empty() || args.d.is_empty() {
        bail!("sweep ranges must be nonempty");
    }
    let mut cells = Vec::new();
    for &n in &args.n {
        for &h in &args.h {
            for &epsilon in &args.epsilon {
                for &d in &args.d {
                    for _replica in 0..args.seeds {
                        cells.push(SweepCell {
                            index: cells.len(),
                            n,
                            h,
                            epsilon,
                            d,
                            seed: derive_seed(seed, &format!("sweep-cell-{}", cells.len())),
                        });
                    }
                }
            }
        }
    }

    // Cells run concurrently; rows are emitted in cell-index order.
    let rows: Vec<Result<String>> = cells
        .par_iter()
        .map(|cell| sweep_row(cell, args.trials))
        .collect();

    let mut csv = String::from(
        "cell,n,h,epsilon,d,seed,e,min_degree,cross_density,cap_prediction,nice,\
         e_g0,e_after,lemma_rhs,meets_averaging_floor,mis_before,mis_after\n",
    );
    for row in rows {
        csv.push_str(&row?);
        csv.push('\n');
    }

    let csv_path = write_text(out, &format!("{}.csv", args.name), &csv)?;
    let mut man = RunManifest::new("sweep", seed);
    man.param("n", &args.n);
    man.param("h", &args.h);
    man.param("epsilon", &args.epsilon);
    man.param("d", &args.d);
    man.param("seeds", args.seeds);
    man.param("trials", args.trials);
    man.record_output(&csv_path)?;
    man.write(out, &args.name)?;

    println!("{}", csv_path.display());
    Ok(ExitCode::SUCCESS)
}

fn sweep_row(cell: &SweepCell, trials: usize) -> Result<String> {
    let params = BEParams::new(cell.n, cell.h, cell.epsilon, cell.seed, false)
        .map_err(|e| anyhow!("cell {}: {e}", cell.index))?;
    let built = build_be_graph(&params).map_err(|e| anyhow!("{e}"))?;
    let nice = built.nice;
    let g = nice.graph();

    let e = g.edge_count();
    let min_degree = g.min_degree();
    let cross_density = g
        .density_between(nice.x_side(), nice.y_side())
        .map(|r| *r.numer() as f64 / *r.denom() as f64)
        .unwrap_or(f64::NAN);
    let prediction = cap_measure(cell.h, std::f64::consts::SQRT_2 - params.mu)
        .map_err(|e| anyhow!("{e}"))?;
    let is_nice = verify_nice(&nice).is_none();

    let mis_before = sweep_mis(g, cell.n);

    let (e_g0, e_after, lemma_rhs, floor_ok, mis_after) = if cell.d > 0 {
        let dp = DensifyParams {
            d: cell.d,
            trials,
            seed: cell.seed,
        };
        let (spliced, record) = densify(&nice, &dp).map_err(|e| anyhow!("{e}"))?;
        let rhs = hybrid_edge_floor(record.e_before as u64, cell.n as u64, cell.d as u64)
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .map_err(|e| anyhow!("{e}"))?;
        debug_assert_eq!(rhs, record.lemma_rhs);
        (
            record.e_g0.to_string(),
            record.e_after.to_string(),
            rhs.to_string(),
            record.meets_averaging_floor.to_string(),
            sweep_mis(spliced.graph(), cell.n),
        )
    } else {
        (String::new(), String::new(), String::new(), String::new(), String::new())
    };

    Ok(format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        cell.index,
        cell.n,
        cell.h,
        cell.epsilon,
        cell.d,
        cell.seed,
        e,
        min_degree,
        cross_density,
        prediction,
        is_nice,
        e_g0,
        e_after,
        lemma_rhs,
        floor_ok,
        mis_before,
        mis_after,
    ))
}

fn sweep_mis(g: &BitGraph, n: usize) -> String {
    if n > SWEEP_MIS_LIMIT {
        return String::new();
    }
    match exact_mis(g, 20_000_000) {
        MisOutcome::Exact { alpha, .. } => alpha.to_string(),
        MisOutcome::BudgetExceeded { .. } => String::new(),
    }
}
