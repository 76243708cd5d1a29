//! hypersim: generate hypergraph instances, run distributed triangle
//! enumeration under the seven communication models, verify outputs against
//! the brute-force oracle, check combinatorial bounds, and sweep parameter
//! grids to CSV.
//!
//! Exit codes: 0 ok, 1 configuration error, 2 model violation, 3 round
//! budget exhausted, 4 verification or bound failure.

mod config;
mod runner;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use hypersim_core::TriangleClass;
use hypersim_kernel::{ModelKind, SimError};
use hypersim_oracle::check_edge_bounds;

use config::{default_bandwidth, parse_threshold, Algo, SourceArgs};
use runner::{
    execute, instance_columns, log2f, parse_listing, verify_listing, RunParams, VerifyReport,
};

#[derive(Parser)]
#[command(name = "hypersim", version, about = "distributed hypergraph triangle enumeration testbed")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hypergraph instance and write the text format
    Gen {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an algorithm; writes a triangle listing and a metrics CSV row
    Run {
        #[arg(long)]
        algorithm: Algo,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        model: Option<ModelKind>,
        #[arg(long)]
        class: Option<TriangleClass>,
        #[arg(long)]
        bandwidth: Option<u64>,
        #[arg(long)]
        max_rounds: Option<u64>,
        /// Density estimate for the peel algorithm (integer, decimal, or num/den)
        #[arg(long)]
        alpha: Option<String>,
        /// Lightness threshold for the light algorithm (omit for unbounded)
        #[arg(long)]
        delta: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        metrics_out: Option<PathBuf>,
        /// Write the per-message round log here
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run an algorithm (or read a listing) and check it against the oracle
    Verify {
        #[arg(long)]
        algorithm: Algo,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        model: Option<ModelKind>,
        #[arg(long)]
        class: Option<TriangleClass>,
        #[arg(long)]
        bandwidth: Option<u64>,
        #[arg(long)]
        delta: Option<u64>,
        /// Verify this listing file instead of running the algorithm
        #[arg(long)]
        listing: Option<PathBuf>,
    },
    /// Check the combinatorial bound inequalities; one CSV row per instance
    Bounds {
        #[command(flatten)]
        source: SourceArgs,
        /// Check this many consecutive seeds (generator sources only)
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a grid of configurations; one CSV row per run
    Sweep {
        /// Comma-separated algorithm names
        #[arg(long, value_delimiter = ',', required = true)]
        algorithms: Vec<Algo>,
        /// Comma-separated models (default: each algorithm's default)
        #[arg(long, value_delimiter = ',')]
        models: Vec<ModelKind>,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        r_list: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long)]
        class: Option<TriangleClass>,
        #[arg(long)]
        bandwidth: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_CONFIG: i32 = 1;
const EXIT_MODEL: i32 = 2;
const EXIT_BUDGET: i32 = 3;
const EXIT_VERIFY: i32 = 4;

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(()) => 0,
        Err((code, msg)) => {
            eprintln!("hypersim: {msg}");
            code
        }
    };
    std::process::exit(code);
}

type CmdResult = Result<(), (i32, String)>;

fn config_err<E: std::fmt::Display>(e: E) -> (i32, String) {
    (EXIT_CONFIG, e.to_string())
}

fn sim_err(e: SimError) -> (i32, String) {
    let code = match &e {
        SimError::ModelViolation { .. } | SimError::ProgramFailure { .. } => EXIT_MODEL,
        SimError::RoundLimit { .. } => EXIT_BUDGET,
        SimError::Config(_) => EXIT_CONFIG,
    };
    (code, e.to_string())
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), (i32, String)> {
    match path {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| config_err(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{content}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Gen { source, out } => cmd_gen(&source, &out),
        Command::Run {
            algorithm,
            source,
            model,
            class,
            bandwidth,
            max_rounds,
            alpha,
            delta,
            out,
            metrics_out,
            log,
        } => cmd_run(
            algorithm, &source, model, class, bandwidth, max_rounds, alpha, delta, &out,
            &metrics_out, &log,
        ),
        Command::Verify {
            algorithm,
            source,
            model,
            class,
            bandwidth,
            delta,
            listing,
        } => cmd_verify(algorithm, &source, model, class, bandwidth, delta, &listing),
        Command::Bounds { source, seeds, out } => cmd_bounds(&source, seeds, &out),
        Command::Sweep {
            algorithms,
            models,
            n_list,
            r_list,
            p,
            seeds,
            class,
            bandwidth,
            out,
        } => cmd_sweep(
            &algorithms, &models, &n_list, &r_list, p, seeds, class, bandwidth, &out,
        ),
    }
}

fn cmd_gen(source: &SourceArgs, out: &Option<PathBuf>) -> CmdResult {
    if source.input.is_some() {
        return Err(config_err("gen needs a generator spec, not --in"));
    }
    let h = source.load().map_err(config_err)?;
    write_out(out, &hypersim_core::io::to_text(&h))
}

const METRICS_HEADER: &str = "# hypersim metrics v1\nalgo,model,class,n,seed,m,rank,delta,delta2,mu,bandwidth,rounds,messages_sent,total_bits,max_received_bits,triangles";

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    algo: Algo,
    source: &SourceArgs,
    model: Option<ModelKind>,
    class: Option<TriangleClass>,
    bandwidth: Option<u64>,
    max_rounds: Option<u64>,
    alpha: Option<String>,
    delta: Option<u64>,
    out: &Option<PathBuf>,
    metrics_out: &Option<PathBuf>,
    log: &Option<PathBuf>,
) -> CmdResult {
    let h = source.load().map_err(config_err)?;
    let model = model.unwrap_or_else(|| algo.default_model());
    let class = class.unwrap_or_else(|| algo.default_class());
    let alpha = match alpha {
        Some(s) => Some(parse_threshold(&s).map_err(config_err)?),
        None => None,
    };
    let params = RunParams {
        algo,
        model,
        class,
        bandwidth: default_bandwidth(&h, bandwidth),
        max_rounds,
        alpha,
        delta,
        collect_log: log.is_some(),
    };
    let result = execute(&h, &params).map_err(sim_err)?;
    write_out(out, &result.listing)?;
    let seed = match h.meta() {
        Some(hypersim_core::GenMeta::Uniform { seed, .. })
        | Some(hypersim_core::GenMeta::Sparse { seed, .. }) => seed.to_string(),
        None => source.seed.map(|s| s.to_string()).unwrap_or_default(),
    };
    let triangles: usize = result
        .per_vertex
        .as_ref()
        .map_or(0, |pv| pv.iter().map(|s| s.len()).sum());
    let row = format!(
        "{METRICS_HEADER}\n{algo},{model},{class},{n},{seed},{cols},{bw},{rounds},{sent},{bits},{recv},{triangles}\n",
        algo = algo.name(),
        n = h.n(),
        cols = instance_columns(&h),
        bw = params.bandwidth.bits(),
        rounds = result.metrics.rounds,
        sent = result.metrics.messages_sent,
        bits = result.metrics.total_bits,
        recv = result.metrics.max_received_bits,
    );
    if let Some(path) = metrics_out {
        std::fs::write(path, &row).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    } else {
        print!("{row}");
    }
    if let Some(path) = log {
        let mut text = String::new();
        for (i, l) in result.logs.iter().enumerate() {
            text.push_str(&format!("# pass {i}\n"));
            text.push_str(&l.to_text());
        }
        std::fs::write(path, text).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_verify(
    algo: Algo,
    source: &SourceArgs,
    model: Option<ModelKind>,
    class: Option<TriangleClass>,
    bandwidth: Option<u64>,
    delta: Option<u64>,
    listing: &Option<PathBuf>,
) -> CmdResult {
    let h = source.load().map_err(config_err)?;
    if h.n() > runner::ORACLE_CAP {
        return Err(config_err(format!(
            "oracle cap exceeded: n = {} > {}",
            h.n(),
            runner::ORACLE_CAP
        )));
    }
    if algo == Algo::Peel {
        return Err(config_err("verify applies to enumeration algorithms"));
    }
    let class = class.unwrap_or_else(|| algo.default_class());
    let entries = match listing {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
            parse_listing(&text).map_err(config_err)?
        }
        None => {
            let params = RunParams {
                algo,
                model: model.unwrap_or_else(|| algo.default_model()),
                class,
                bandwidth: default_bandwidth(&h, bandwidth),
                max_rounds: None,
                alpha: None,
                delta,
                collect_log: false,
            };
            let result = execute(&h, &params).map_err(sim_err)?;
            parse_listing(&result.listing).map_err(config_err)?
        }
    };
    // a light run with a finite delta only lists light triangles; verify is
    // for full enumerations
    if algo == Algo::Light && delta.is_some() {
        return Err(config_err(
            "verify compares against the full oracle; drop --delta",
        ));
    }
    match verify_listing(&h, class, &entries) {
        VerifyReport::Pass { triangles } => {
            println!("verify: pass ({triangles} triangles, class {class})");
            Ok(())
        }
        VerifyReport::Fail { detail } => Err((EXIT_VERIFY, format!("verify: fail: {detail}"))),
    }
}

fn cmd_bounds(source: &SourceArgs, seeds: u64, out: &Option<PathBuf>) -> CmdResult {
    let mut rows = String::from("# hypersim bounds v1\n");
    rows.push_str(hypersim_oracle::BoundReport::CSV_HEADER);
    rows.push('\n');
    let mut all_pass = true;
    let instances: Vec<hypersim_core::Hypergraph> = if source.input.is_some() {
        vec![source.load().map_err(config_err)?]
    } else {
        let base = source.seed.unwrap_or(0);
        (0..seeds)
            .map(|i| source.generate(base + i).map_err(config_err))
            .collect::<Result<_, _>>()?
    };
    for h in &instances {
        let report = check_edge_bounds(h).map_err(config_err)?;
        all_pass &= report.all_pass();
        rows.push_str(&report.csv_row());
        rows.push('\n');
    }
    write_out(out, &rows)?;
    if all_pass {
        Ok(())
    } else {
        Err((EXIT_VERIFY, "bound inequality failed".into()))
    }
}

const SWEEP_HEADER: &str = "# hypersim sweep v1\nalgo,model,n,r,p,seed,m,rank,delta,delta2,mu,rounds,messages_sent,total_bits,max_received_bits,triangles,verified,rounds_over_density,rounds_over_delta";

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    algorithms: &[Algo],
    models: &[ModelKind],
    n_list: &[usize],
    r_list: &[usize],
    p: f64,
    seeds: u64,
    class: Option<TriangleClass>,
    bandwidth: Option<u64>,
    out: &Option<PathBuf>,
) -> CmdResult {
    let mut grid = Vec::new();
    for &algo in algorithms {
        let model_choices: Vec<ModelKind> = if models.is_empty() {
            vec![algo.default_model()]
        } else {
            models
                .iter()
                .copied()
                .filter(|&m| algo.accepts(m))
                .collect()
        };
        for model in model_choices {
            for &n in n_list {
                for &r in r_list {
                    for seed in 0..seeds {
                        grid.push((algo, model, n, r, seed));
                    }
                }
            }
        }
    }
    if grid.is_empty() {
        return Err(config_err("empty sweep grid (algorithm/model mismatch?)"));
    }
    let pool = build_pool().map_err(config_err)?;
    let rows: Vec<Result<(String, bool), (i32, String)>> = pool.install(|| {
        use rayon::prelude::*;
        grid.par_iter()
            .map(|&(algo, model, n, r, seed)| sweep_row(algo, model, n, r, p, seed, class, bandwidth))
            .collect()
    });
    let mut text = String::from(SWEEP_HEADER);
    text.push('\n');
    let mut all_verified = true;
    for row in rows {
        let (line, verified) = row?;
        all_verified &= verified;
        text.push_str(&line);
        text.push('\n');
    }
    write_out(out, &text)?;
    if all_verified {
        Ok(())
    } else {
        Err((EXIT_VERIFY, "sweep verification failed".into()))
    }
}

fn build_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(workers) = std::env::var("HYPERSIM_WORKERS") {
        let workers: usize = workers
            .parse()
            .map_err(|_| format!("bad HYPERSIM_WORKERS '{workers}'"))?;
        builder = builder.num_threads(workers.max(1));
    }
    builder.build().map_err(|e| e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn sweep_row(
    algo: Algo,
    model: ModelKind,
    n: usize,
    r: usize,
    p: f64,
    seed: u64,
    class: Option<TriangleClass>,
    bandwidth: Option<u64>,
) -> Result<(String, bool), (i32, String)> {
    let h = hypersim_core::sample_uniform_random(n, r, p, seed).map_err(config_err)?;
    let class = class.unwrap_or_else(|| algo.default_class());
    let params = RunParams {
        algo,
        model,
        class,
        bandwidth: default_bandwidth(&h, bandwidth),
        max_rounds: None,
        alpha: None,
        delta: None,
        collect_log: false,
    };
    let result = execute(&h, &params).map_err(sim_err)?;
    let per_vertex = result.per_vertex.as_ref().expect("enumeration algorithms");
    let entries = parse_listing(&result.listing).map_err(config_err)?;
    let verified = matches!(
        verify_listing(&h, class, &entries),
        VerifyReport::Pass { .. }
    );
    let triangles: usize = per_vertex.iter().map(|s| s.len()).sum();
    let cols = instance_columns(&h);
    let mu = cols.rsplit(',').next().unwrap_or("").to_string();
    let rounds = result.metrics.rounds as f64;
    let over_density = mu
        .parse::<f64>()
        .ok()
        .filter(|m| *m > 0.0)
        .map_or(String::new(), |m| {
            format!("{:.6}", rounds / (m * r as f64 + log2f(n)))
        });
    let delta = h.max_degree();
    let over_delta = if delta > 0 {
        format!("{:.6}", rounds / delta as f64)
    } else {
        String::new()
    };
    let line = format!(
        "{},{model},{n},{r},{p},{seed},{cols},{},{},{},{},{triangles},{},{over_density},{over_delta}",
        algo.name(),
        result.metrics.rounds,
        result.metrics.messages_sent,
        result.metrics.total_bits,
        result.metrics.max_received_bits,
        u8::from(verified),
    );
    Ok((line, verified))
}
