use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use lrpc_core::LrpcCode;
use lrpc_sim::config::{parse_modulus, parse_t_range};
use lrpc_sim::harness::{bounds_only, run_sweep_on};
use lrpc_sim::output::write_csv;
use lrpc_sim::{thread_count, ConfigDraft, ConfigError, SimConfig, SimError, SimRow};

/// Estimate LRPC decoding failure rates by simulation and compare them with
/// the analytic bounds.
#[derive(Parser, Debug)]
#[command(name = "lrpc-sim", version)]
struct Cli {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    lambda: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Error rank range, `a:b` or a single value.
    #[arg(long, value_parser = |s: &str| parse_t_range(s).map_err(|e| e.to_string()))]
    t: Option<std::ops::RangeInclusive<usize>>,
    /// Stop a cell after this many decoding failures [default: 1000].
    #[arg(long)]
    target_failures: Option<u64>,
    /// Stop a cell after this many trials [default: 10000000].
    #[arg(long)]
    max_trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Modulus coefficients, constant term first, comma separated.
    #[arg(long, value_parser = |s: &str| parse_modulus(s).map_err(|e| e.to_string()))]
    modulus: Option<Vec<u64>>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Transmit random codewords instead of the zero codeword.
    #[arg(long)]
    random_codeword: bool,
    /// Evaluate the bounds only.
    #[arg(long)]
    check_bounds_only: bool,
    /// Also write the generated code in its text format.
    #[arg(long)]
    save_code: Option<PathBuf>,
}

impl Cli {
    fn draft(&self) -> ConfigDraft {
        ConfigDraft {
            p: self.p,
            r: self.r,
            m: self.m,
            lambda: self.lambda,
            n: self.n,
            k: self.k,
            t_range: self.t.clone(),
            target_failures: self.target_failures,
            max_trials: self.max_trials,
            seed: self.seed,
            modulus: self.modulus.clone(),
            random_codeword: self.random_codeword.then_some(true),
            out_path: self.out.clone(),
        }
    }

    fn resolve(&self) -> Result<SimConfig, ConfigError> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| ConfigError::InvalidValue {
                    key: "config".into(),
                    value: format!("{}: {e}", path.display()),
                })?;
                ConfigDraft::from_kv(&text)?
            }
            None => ConfigDraft::default(),
        };
        base.overlay(self.draft()).finish()
    }
}

fn log_row(row: &SimRow) {
    if let (Some(c), Some(fer)) = (row.counts, row.fer()) {
        eprintln!(
            "t={} trials={} failures={} fer={:.3e} bound={:.3e} counterexamples={}",
            row.t, c.trials, c.failures, fer.value, row.bounds.overall, c.counterexamples
        );
    }
}

fn run(cli: &Cli, config: &SimConfig) -> Result<Vec<SimRow>, SimError> {
    if cli.check_bounds_only {
        return bounds_only(config);
    }
    let code = LrpcCode::generate(&config.code_params())?;
    if let Some(path) = &cli.save_code {
        std::fs::write(path, code.to_text()).map_err(|e| {
            SimError::Core(lrpc_core::Error::InvalidParams(format!("{}: {e}", path.display())))
        })?;
    }
    if !lrpc_core::bounds::intermediate_ring_ok(config.m as u32, config.lambda as u32) {
        eprintln!(
            "warning: m = {} has an intermediate ring no larger than q^lambda; the intersection bound is outside its hypothesis",
            config.m
        );
    }
    run_sweep_on(&code, config, log_row)
}

fn write_output(config: &SimConfig, rows: &[SimRow]) -> io::Result<()> {
    let result = match &config.out_path {
        Some(path) => write_csv(BufWriter::new(File::create(path)?), rows),
        None => write_csv(io::stdout().lock(), rows),
    };
    result.map_err(io::Error::other)?;
    io::stdout().flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build();
    let rows = match pool {
        Ok(pool) => pool.install(|| run(&cli, &config)),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let rows = match rows {
        Ok(rows) => rows,
        Err(SimError::Config(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    if let Err(e) = write_output(&config, &rows) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
