use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use wiretap_core::linalg::HermitianMatrix;
use wiretap_core::model::sample_channels;
use wiretap_sim::config::{parse_schemes, ConfigError, ExperimentConfig, ExperimentKind, SchemeKind, Tolerances};
use wiretap_sim::output::{emit_outputs, OutputPaths};
use wiretap_sim::runner::{from_db, run_experiment, run_scheme, to_db, RunError};
use wiretap_sim::verify;

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const MAX_FAILURE_RATE: f64 = 0.10;

#[derive(Parser)]
#[command(name = "wiretap-sim", version, about = "Robust wiretap beamforming experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo sweep and write CSV, summary CSV and SVG.
    Run(RunArgs),
    /// Solve one scheme on one channel draw and print the design.
    Single(SingleArgs),
    /// Run the oracle verification suites.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    experiment: Option<ExperimentKind>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Comma-separated scheme names.
    #[arg(long)]
    schemes: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    /// Fill the runtime_ms column (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SingleArgs {
    #[arg(long)]
    scheme: SchemeKind,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    n_a: usize,
    #[arg(long, default_value_t = 4)]
    n_h: usize,
    #[arg(long, default_value_t = 10.0)]
    power_db: f64,
    #[arg(long, default_value_t = 0.5)]
    eps_sq: f64,
    #[arg(long, default_value_t = 10.0)]
    gamma_db: f64,
    /// Alice's share of the budget; applies to robust_cj only.
    #[arg(long)]
    fraction: Option<f64>,
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = match (&args.config, args.experiment) {
        (Some(path), _) => ExperimentConfig::from_file(path)?,
        (None, Some(kind)) => ExperimentConfig::preset(kind),
        (None, None) => return Err(ConfigError::Invalid("either --config or --experiment is required".into())),
    };
    if let (Some(_), Some(kind)) = (&args.config, args.experiment) {
        if kind != cfg.experiment {
            let file = cfg;
            cfg = ExperimentConfig { experiment: kind, sweep: ExperimentConfig::preset(kind).sweep, schemes: ExperimentConfig::preset(kind).schemes, ..file };
        }
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(list) = &args.schemes {
        cfg.schemes = parse_schemes(list)?;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    cfg.timing |= args.timing;
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: RunArgs) -> ExitCode {
    let cfg = match build_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    info!("running {} with {} trials on {} workers", cfg.experiment, cfg.trials, cfg.workers);
    let out = match run_experiment(&cfg) {
        Ok(o) => o,
        Err(RunError::Config(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let paths = OutputPaths::in_dir(&args.out_dir, cfg.experiment.as_str());
    if let Err(e) = emit_outputs(&cfg, &out.records, &out.summary, &paths) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    println!("{:>14} {:>18} {:>6} {:>10} {:>9} {:>10} {:>10}", "sweep", "scheme", "used", "rate", "jam frac", "eve dB", "bob dB");
    for r in &out.summary {
        println!(
            "{:>14.4} {:>18} {:>6} {:>10.4} {:>9.4} {:>10.3} {:>10.3}",
            r.sweep_value, r.scheme, r.trials_used, r.mean_rate_bits, r.mean_jamming_fraction, r.mean_eve_sinr_db, r.mean_bob_sinr_db
        );
    }
    println!("wrote {}, {}, {}", paths.records.display(), paths.summary.display(), paths.plot.display());
    if out.failure_rate > MAX_FAILURE_RATE {
        eprintln!("solver failure rate {:.1}% exceeds {:.0}%", 100.0 * out.failure_rate, 100.0 * MAX_FAILURE_RATE);
        return ExitCode::from(EXIT_SOLVER);
    }
    ExitCode::SUCCESS
}

fn print_matrix(name: &str, m: &HermitianMatrix<f64>) {
    println!("{name} (trace {:.6}, eigenvalues {:?}):", m.trace(), m.eigenvalues().iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>());
    let a = m.as_matrix();
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols()).map(|j| format!("{:+.5}{:+.5}i", a[(i, j)].re, a[(i, j)].im)).collect();
        println!("  [{}]", row.join("  "));
    }
}

fn single(args: SingleArgs) -> ExitCode {
    if args.n_a < 1 || args.n_h < 1 || args.eps_sq < 0.0 || args.fraction.is_some_and(|f| !(0.0..=1.0).contains(&f)) {
        eprintln!("error: invalid parameters");
        return ExitCode::from(EXIT_CONFIG);
    }
    let mut params = wiretap_core::model::SystemParams::<f64>::new(args.n_a, args.n_h);
    let p = from_db(args.power_db);
    params.p_s = p;
    params.p_j = p;
    params.p_total = p;
    params.eps_h_sq = args.eps_sq;
    params.eps_g_sq = args.eps_sq;
    params.gamma_t = from_db(args.gamma_db);
    let ch = sample_channels(&params, args.seed);
    let r = run_scheme(args.scheme, &ch, &params, args.fraction, &Tolerances::default());
    println!("scheme {} on seed {}: status {}", args.scheme, args.seed, r.status.as_str());
    if let Some(m) = &r.message {
        println!("message: {m}");
    }
    println!("worst-case secrecy rate {:.6} bits", r.secrecy_rate_bits);
    println!("Eve metric {:.4} dB, Bob metric {:.4} dB", to_db(r.eve_metric), to_db(r.bob_metric));
    println!("powers p1 {:.6}, p2 {:.6}; iterations {}", r.p1(), r.p2(), r.iterations);
    print_matrix("Q_x", &r.q_x);
    print_matrix("Q_z", &r.q_z);
    println!(
        "certificates: |e_h| {:.6} (radius {:.6}), |e_g| {:.6} (radius {:.6}), jamming at Bob {:.3e}, Q_x rank one {}",
        r.worst_mismatch.e_h.norm(),
        params.eps_h(),
        r.worst_mismatch.e_g.norm(),
        params.eps_g(),
        r.q_z.quad_form(&ch.g_b),
        wiretap_core::linalg::is_rank_one(&r.q_x, 1e-6)
    );
    if !r.trace.is_empty() {
        println!("trace: {:?}", r.trace);
    }
    if r.status == wiretap_core::model::Status::SolverFailure {
        return ExitCode::from(EXIT_SOLVER);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run(args),
        Command::Single(args) => single(args),
        Command::Verify { seed } => {
            let reports = verify::run_all(seed);
            for r in &reports {
                println!("{r}");
            }
            if reports.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                warn!("verification failed");
                ExitCode::from(EXIT_SOLVER)
            }
        }
    }
}
