//! `hullselect` command-line interface.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hullselect::bounds::{phase_table, PhaseRow};
use hullselect::harness::{parse_config, read_reps_csv, run_experiment, write_reps_csv};
use hullselect::noise::{a1_diagnostic, DiagnosticConfig, NoiseModel};
use hullselect::selector::EmptyPreselectorRule;
use hullselect::uq::UqRecord;
use hullselect::{active_set, active_set_path, evaluate_uq, select, Error, ObservationVector, SelectorConfig, SignalVector, UqConfig};

#[derive(Parser)]
#[command(name = "hullselect", version, about = "Risk-hull variable selection and its Monte-Carlo evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the preselector and selector on one observation vector.
    Select(SelectArgs),
    /// Active set I*(A, θ) for one level A.
    Oracle(OracleArgs),
    /// The full active-set path over A ≥ 0.
    Path(PathArgs),
    /// Run a Monte-Carlo experiment from a JSON config.
    Simulate(SimulateArgs),
    /// Tabulate Hamming-risk lower bounds over an (n, s, A) grid as CSV.
    Bound(BoundArgs),
    /// Empirical subset-sum tail diagnostic for a noise model.
    NoiseCheck(NoiseCheckArgs),
    /// Coverage and size rates of the Hamming ball from per-replication CSV.
    Uq(UqArgs),
}

#[derive(Args)]
struct SelectArgs {
    /// Observations: JSON array, or CSV with one value per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    sigma: f64,
    #[arg(long = "K")]
    k: f64,
    /// Use |Ĩ| ∨ 1 in the threshold when the preselector is empty.
    #[arg(long)]
    clamp_empty: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Signal θ: a file (JSON array or CSV column) or an inline comma list.
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    #[arg(long)]
    sigma: f64,
    #[arg(long = "A")]
    a: f64,
}

#[derive(Args)]
struct PathArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    #[arg(long)]
    sigma: f64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    /// Report JSON destination (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-replication CSV destination.
    #[arg(long)]
    reps_out: Option<PathBuf>,
    /// Overrides `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<usize>,
    #[arg(long = "A", value_delimiter = ',', required = true)]
    a: Vec<f64>,
    #[arg(long)]
    sigma: f64,
}

#[derive(Args)]
struct NoiseCheckArgs {
    /// Noise model as JSON, inline or in a file.
    #[arg(long)]
    model: String,
    #[arg(long = "C")]
    c: f64,
    #[arg(long)]
    reps: usize,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,5,10")]
    sizes: Vec<usize>,
    /// Comma list of M values (default 0,1,…,20).
    #[arg(long, value_delimiter = ',')]
    m_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.1)]
    slope_threshold: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct UqArgs {
    #[arg(long)]
    reps_in: PathBuf,
    /// Dimension n of the experiment that produced the CSV.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha4_prime: f64,
    #[arg(long, default_value_t = 4.0)]
    m1_prime: f64,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn parse_vector(text: &str, origin: &str) -> Result<Vec<f64>, Failure> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| Failure::Config(format!("{origin}: {e}")));
    }
    trimmed
        .split(['\n', ','])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| {
            s.parse::<f64>()
                .map_err(|_| Failure::Config(format!("{origin}: entry {}: cannot parse {s:?}", i + 1)))
        })
        .collect()
}

/// A file path if one exists, otherwise the argument itself.
fn file_or_inline(arg: &str) -> Result<(String, String), Failure> {
    let p = Path::new(arg);
    if p.is_file() {
        Ok((read_file(p)?, arg.to_string()))
    } else {
        Ok((arg.to_string(), "inline value".to_string()))
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    let mut out = io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

fn cmd_select(args: SelectArgs) -> CliResult {
    let x = parse_vector(&read_file(&args.input)?, &args.input.display().to_string())?;
    let obs = ObservationVector::new(x, args.sigma)?;
    let mut cfg = SelectorConfig::new(args.k, args.sigma);
    if args.clamp_empty {
        cfg.empty_rule = EmptyPreselectorRule::ClampToOne;
    }
    print_json(&select(&obs, &cfg)?)
}

fn read_theta(arg: &str) -> Result<SignalVector, Failure> {
    let (text, origin) = file_or_inline(arg)?;
    Ok(SignalVector::new(parse_vector(&text, &origin)?)?)
}

fn cmd_oracle(args: OracleArgs) -> CliResult {
    let theta = read_theta(&args.theta)?;
    print_json(&active_set(&theta, args.a, args.sigma)?)
}

fn cmd_path(args: PathArgs) -> CliResult {
    let theta = read_theta(&args.theta)?;
    print_json(&active_set_path(&theta, args.sigma)?)
}

fn cmd_simulate(args: SimulateArgs) -> CliResult {
    let mut cfg = parse_config(&read_file(&args.config)?)?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(p) = &args.reps_out {
        cfg.output.reps_csv = Some(p.display().to_string());
    }
    if let Some(p) = &args.out {
        cfg.output.report = Some(p.display().to_string());
    }
    let outcome = run_experiment(&cfg)?;
    if let Some(path) = &cfg.output.reps_csv {
        let file = fs::File::create(path).map_err(|e| Failure::Runtime(format!("{path}: {e}")))?;
        write_reps_csv(&outcome.records, io::BufWriter::new(file))?;
    }
    match &cfg.output.report {
        Some(path) => {
            let text = serde_json::to_string_pretty(&outcome.report).map_err(|e| Failure::Runtime(e.to_string()))?;
            fs::write(path, text + "\n").map_err(|e| Failure::Runtime(format!("{path}: {e}")))?;
            Ok(())
        }
        None => print_json(&outcome.report),
    }
}

fn cmd_bound(args: BoundArgs) -> CliResult {
    if !(args.sigma.is_finite() && args.sigma > 0.0) {
        return Err(Failure::Config(format!("--sigma must be > 0, got {}", args.sigma)));
    }
    let rows = phase_table(&args.n, &args.s, &args.a, args.sigma)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{}", PhaseRow::CSV_HEADER)?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

fn cmd_noise_check(args: NoiseCheckArgs) -> CliResult {
    let (text, origin) = file_or_inline(&args.model)?;
    let model: NoiseModel =
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{origin}: {e}")))?;
    let mut cfg = DiagnosticConfig::new(args.c, args.reps);
    cfg.subset_sizes = args.sizes;
    cfg.slope_threshold = args.slope_threshold;
    if let Some(grid) = args.m_grid {
        cfg.m_grid = grid;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    print_json(&a1_diagnostic(&model, args.n, &cfg, &mut rng)?)
}

fn cmd_uq(args: UqArgs) -> CliResult {
    let file = fs::File::open(&args.reps_in).map_err(|e| Failure::Runtime(format!("{}: {e}", args.reps_in.display())))?;
    let records = read_reps_csv(io::BufReader::new(file))?;
    let uq: Vec<UqRecord> = records.iter().map(|r| r.uq()).collect();
    let cfg = UqConfig {
        alpha4_prime: args.alpha4_prime,
        m1_prime: args.m1_prime,
    };
    print_json(&evaluate_uq(&uq, args.n, &cfg)?)
}

fn main() -> ExitCode {
    // Usage errors exit with status 2 and print to stderr.
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Select(a) => cmd_select(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Path(a) => cmd_path(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bound(a) => cmd_bound(a),
        Command::NoiseCheck(a) => cmd_noise_check(a),
        Command::Uq(a) => cmd_uq(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("hullselect: config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("hullselect: error: {msg}");
            ExitCode::from(1)
        }
    }
}
