use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nakagami_cli::bench::run_bench_parallel;
use nakagami_cli::config::{apply_config, parse_estimators, parse_list};
use nakagami_cli::matrix::format_matrix;
use nakagami_cli::pgm::{encode_pgm, label_levels};
use nakagami_cli::report::{bounds_table, write_bench_csv, write_bounds_csv, write_trace_csv};
use nakagami_cli::samples::{format_samples, parse_samples};
use nakagami_cli::{load_image, CliError};
use nakagami_core::hmrf::{segment, Likelihood, SegmentConfig};
use nakagami_core::montecarlo::BenchConfig;
use nakagami_core::{
    BlockEstimatorState, Centrality, EstimatorKind, Ingest, NakagamiParams, RestartPolicy, SampleBlock,
};

#[derive(Parser)]
#[command(name = "nakagami", version, about = "Nakagami-m sampling, estimation, bounds and segmentation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw samples from Nakagami(m, Ω).
    Sample(SampleArgs),
    /// Estimate (m, σ) from sample files, one block per file.
    Estimate(EstimateArgs),
    /// Monte Carlo comparison of the estimators, as CSV.
    Bench(BenchArgs),
    /// Cramér–Rao bound table, as CSV.
    Bounds(BoundsArgs),
    /// Segment a grayscale image with an HMRF model.
    Segment(SegmentArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SampleArgs {
    #[arg(long, value_parser = positive)]
    m: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    omega: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EstimateArgs {
    #[arg(long = "in", required = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = "exact_ml")]
    method: EstimatorKind,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    restarts: u32,
    #[arg(long, default_value = "mean")]
    centrality: Centrality,
    #[arg(long, default_value_t = RestartPolicy::DEFAULT_JITTER)]
    jitter: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct BenchArgs {
    /// key = value file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated true shapes.
    #[arg(long)]
    m_grid: Option<String>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    block_size: Option<usize>,
    #[arg(long)]
    num_blocks: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated estimator names, or `all`.
    #[arg(long)]
    estimators: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<u32>,
    #[arg(long)]
    centrality: Option<Centrality>,
    #[arg(long)]
    jitter: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct BoundsArgs {
    /// Comma-separated shapes.
    #[arg(long)]
    m_grid: String,
    #[arg(long, default_value_t = 150, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SegmentArgs {
    /// PGM (P5) image, or a text matrix for any other extension.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..=255))]
    k: u64,
    #[arg(long, default_value = "nakagami")]
    likelihood: Likelihood,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 30)]
    max_iterations: usize,
    #[arg(long, default_value_t = 50)]
    max_sweeps: usize,
    /// Estimate Nakagami classes in blocks of this many pixels.
    #[arg(long)]
    nakagami_chunk: Option<usize>,
    /// Weight Gaussian parameter updates by the neighbour prior.
    #[arg(long)]
    soft_update: bool,
    /// Label image (PGM).
    #[arg(long)]
    out_labels: PathBuf,
    /// Label matrix; defaults to the label image path with a .txt extension.
    #[arg(long)]
    out_matrix: Option<PathBuf>,
    /// Energy trace CSV.
    #[arg(long)]
    out_trace: Option<PathBuf>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(_) => Err(format!("must be a finite number > 0, got {s}")),
        Err(e) => Err(e.to_string()),
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => io::stdout().write_all(bytes).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn cmd_sample(a: SampleArgs) -> Result<(), CliError> {
    let params = NakagamiParams::from_omega(a.m, a.omega)?;
    let block = params.sample(a.n as usize, a.seed)?;
    write_output(a.out.as_deref(), format_samples(block.as_slice()).as_bytes())
}

fn read_block(path: &Path) -> Result<SampleBlock, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let values = parse_samples(&text).map_err(|r| CliError::format(path, r))?;
    SampleBlock::new(values).map_err(|e| CliError::format(path, e.to_string()))
}

fn cmd_estimate(a: EstimateArgs) -> Result<(), CliError> {
    let policy = RestartPolicy::new(a.restarts, a.centrality, a.jitter)
        .map_err(|e| CliError::Usage(format!("--jitter: {e}")))?
        .with_seed(a.seed);
    let mut state = BlockEstimatorState::new(a.method);
    for (i, path) in a.inputs.iter().enumerate() {
        let block = read_block(path)?;
        match state.ingest_block(&block, &policy) {
            Ok(Ingest::Folded(est)) => {
                println!("block={} file={} m_hat={} sigma_hat={}", i + 1, path.display(), est.m_hat, est.sigma_hat)
            }
            Ok(Ingest::Skipped { delta }) => {
                println!("block={} file={} skipped delta={delta}", i + 1, path.display())
            }
            Err(e) => return Err(CliError::Domain(format!("{}: {e}", path.display()))),
        }
    }
    let fin = state.finalize()?;
    println!(
        "m_hat={} sigma_hat={} blocks={} skipped={}",
        fin.m_hat,
        fin.sigma_hat,
        state.blocks_seen(),
        state.skipped()
    );
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    let mut cfg = BenchConfig::default();
    if let Some(path) = &a.config {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        apply_config(&mut cfg, &text).map_err(|r| CliError::Usage(format!("{}: {r}", path.display())))?;
    }
    let usage = |flag: &str, r: String| CliError::Usage(format!("--{flag}: {r}"));
    if let Some(s) = &a.m_grid {
        cfg.m_grid = parse_list(s).map_err(|r| usage("m-grid", r))?;
    }
    if let Some(s) = &a.estimators {
        cfg.estimators = parse_estimators(s).map_err(|r| usage("estimators", r))?;
    }
    cfg.omega = a.omega.unwrap_or(cfg.omega);
    cfg.block_size = a.block_size.unwrap_or(cfg.block_size);
    cfg.num_blocks = a.num_blocks.unwrap_or(cfg.num_blocks);
    cfg.trials = a.trials.unwrap_or(cfg.trials);
    cfg.base_seed = a.seed.unwrap_or(cfg.base_seed);
    let p = cfg.restart_policy;
    cfg.restart_policy = RestartPolicy::new(
        a.restarts.unwrap_or(p.restarts()),
        a.centrality.unwrap_or(p.centrality()),
        a.jitter.unwrap_or(p.jitter()),
    )?;
    let result = run_bench_parallel(&cfg)?;
    let mut buf = Vec::new();
    write_bench_csv(&result, &mut buf).expect("writing to memory");
    write_output(a.out.as_deref(), &buf)
}

fn cmd_bounds(a: BoundsArgs) -> Result<(), CliError> {
    let grid: Vec<f64> = parse_list(&a.m_grid).map_err(|r| CliError::Usage(format!("--m-grid: {r}")))?;
    if let Some(bad) = grid.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
        return Err(CliError::Usage(format!("--m-grid: values must be > 0, got {bad}")));
    }
    let rows = bounds_table(&grid, a.n)?;
    let mut buf = Vec::new();
    write_bounds_csv(&rows, &mut buf).expect("writing to memory");
    write_output(a.out.as_deref(), &buf)
}

fn cmd_segment(a: SegmentArgs) -> Result<(), CliError> {
    let image = load_image(&a.input)?;
    let config = SegmentConfig {
        beta: a.beta,
        max_sweeps: a.max_sweeps,
        max_iterations: a.max_iterations,
        seed: a.seed,
        nakagami_chunk: a.nakagami_chunk,
        gaussian_soft_update: a.soft_update,
        ..SegmentConfig::default()
    };
    config.validate()?;
    let k = a.k as usize;
    let seg = segment(&image, k, a.likelihood, &config)
        .map_err(|e| CliError::Domain(format!("{}: {e}", a.input.display())))?;

    let (w, h) = (seg.labels.width(), seg.labels.height());
    let pgm = encode_pgm(w, h, &label_levels(seg.labels.labels(), k));
    fs::write(&a.out_labels, pgm).map_err(|e| CliError::io(&a.out_labels, e))?;
    let matrix_path = a.out_matrix.clone().unwrap_or_else(|| a.out_labels.with_extension("txt"));
    fs::write(&matrix_path, format_matrix(h, w, seg.labels.labels())).map_err(|e| CliError::io(&matrix_path, e))?;
    if let Some(path) = &a.out_trace {
        let mut buf = Vec::new();
        write_trace_csv(&seg.trace, &mut buf).expect("writing to memory");
        fs::write(path, buf).map_err(|e| CliError::io(path, e))?;
    }
    println!("energy={} sweeps={} iterations={}", seg.energy(), seg.sweeps, seg.iterations);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Segment(a) => cmd_segment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
