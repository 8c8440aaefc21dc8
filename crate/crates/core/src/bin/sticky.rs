//! Command-line front end for the sticky-diffusion toolkit.

use clap::{Parser, Subcommand};
use std::io::{BufReader, Write};
use std::path::PathBuf;
use stickydiff::config::RunConfig;
use stickydiff::error::{Error, Result, Violation};
use stickydiff::experiments::{
    check_csv, checks_to_result, convergence_csv, estimate_csv, estimator_from_config,
    mc_summary_csv, reflection_csv, run_convergence_suite, run_kernel_checks, run_mc_estimation,
    run_reflection_test, sim_config_from, stats_csv,
};
use stickydiff::path_model::SamplePath;
use stickydiff::simulate::sample_path;

#[derive(Parser)]
#[command(
    name = "sticky",
    about = "Simulation and inference for sticky diffusions",
    version
)]
struct Cli {
    /// Configuration file with `key = value` lines (`#` starts a comment)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed override (takes precedence over the config file)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Simulate one sample path and write it as CSV
    Simulate,
    /// Read a path CSV and write the crossing/bouncing/occupation table
    Stats {
        /// Path CSV produced by `simulate`
        input: PathBuf,
    },
    /// Read a path CSV and write a one-row stickiness estimate
    Estimate {
        /// Path CSV produced by `simulate`
        input: PathBuf,
    },
    /// Monte Carlo estimation over many replicas
    Mc,
    /// Convergence suite over a list of grid resolutions
    Converge,
    /// Kernel invariant checks (fails with exit code 4 on any violation)
    KernelCheck,
    /// Reflection-principle test (fails with exit code 4 on rejection)
    ReflectTest,
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::new(),
    };
    if let Some(seed) = cli.seed {
        cfg.set("sim.seed", seed.to_string());
        cfg.set("mc.master_seed", seed.to_string());
    }
    Ok(cfg)
}

fn read_path(input: &PathBuf, cfg: &RunConfig) -> Result<SamplePath> {
    let file = std::fs::File::open(input)
        .map_err(|e| Error::Config(format!("cannot open {}: {e}", input.display())))?;
    SamplePath::read_csv(&mut BufReader::new(file), cfg.u64_or("sim.seed", 0)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(Error::Io),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(Error::Io),
    }
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    match &cli.verb {
        Verb::Simulate => {
            let sim = sim_config_from(&cfg, cfg.u64_or("sim.seed", 0)?)?;
            let path = sample_path(&sim)?;
            let mut buf = Vec::new();
            path.write_csv(&mut buf)?;
            emit(&cli.out, std::str::from_utf8(&buf).expect("CSV is ASCII"))
        }
        Verb::Stats { input } => {
            let path = read_path(input, &cfg)?;
            emit(&cli.out, &stats_csv(&path)?)
        }
        Verb::Estimate { input } => {
            let path = read_path(input, &cfg)?;
            let spec = estimator_from_config(&cfg)?;
            emit(&cli.out, &estimate_csv(&path, spec)?)
        }
        Verb::Mc => emit(&cli.out, &mc_summary_csv(&run_mc_estimation(&cfg)?)),
        Verb::Converge => emit(&cli.out, &convergence_csv(&run_convergence_suite(&cfg)?)),
        Verb::KernelCheck => {
            let rows = run_kernel_checks(&cfg)?;
            emit(&cli.out, &check_csv(&rows))?;
            checks_to_result(&rows)
        }
        Verb::ReflectTest => {
            let report = run_reflection_test(&cfg)?;
            emit(&cli.out, &reflection_csv(&report))?;
            let level = cfg.f64_or("reflect.level", 0.01)?;
            if report.p_value < level {
                Err(Error::Validation(vec![Violation {
                    index: 0,
                    message: format!(
                        "reflection test rejected: p-value {} below level {level}",
                        report.p_value
                    ),
                }]))
            } else {
                Ok(())
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
